//! Monotone cubic interpolation on a uniform knot grid.
//!
//! Slopes are estimated with fourth-order centered differences and then
//! passed through the Fritsch-Carlson limiter, so the interpolant tracks
//! smooth data at high order while staying monotone (hence overshoot-free)
//! on monotone segments. Used by field dilation, where overshoot would
//! create spurious negative masses.

use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Build the interpolant on knots `x_j = j·h`, `j = 0..values.len()-1`.
    /// `left_slope`, when given, pins the derivative at the first knot
    /// (used for the symmetry condition v'(0) = 0 on radial fields).
    pub fn new(h: f64, values: Vec<f64>, left_slope: Option<f64>) -> Self {
        assert!(h > 0.0 && values.len() >= 4);
        let n = values.len() - 1;
        let y = &values;
        let secant = |k: usize| (y[k + 1] - y[k]) / h;

        let mut slopes = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let d = if j == 0 {
                match left_slope {
                    Some(s) => s,
                    None => (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h),
                }
            } else if j == n {
                (y[n - 2] - 4.0 * y[n - 1] + 3.0 * y[n]) / (2.0 * h)
            } else if j == 1 || j == n - 1 {
                (y[j + 1] - y[j - 1]) / (2.0 * h)
            } else {
                (-y[j + 2] + 8.0 * y[j + 1] - 8.0 * y[j - 1] + y[j - 2]) / (12.0 * h)
            };
            slopes.push(d);
        }

        // Fritsch-Carlson limiting, segment by segment.
        for k in 0..n {
            let delta = secant(k);
            if delta == 0.0 {
                slopes[k] = 0.0;
                slopes[k + 1] = 0.0;
                continue;
            }
            let alpha = slopes[k] / delta;
            let beta = slopes[k + 1] / delta;
            if alpha < 0.0 {
                slopes[k] = 0.0;
            }
            if beta < 0.0 {
                slopes[k + 1] = 0.0;
            }
            let alpha = slopes[k] / delta;
            let beta = slopes[k + 1] / delta;
            let s = alpha * alpha + beta * beta;
            if s > 9.0 {
                let tau = 3.0 / Float::sqrt(s);
                slopes[k] = tau * alpha * delta;
                slopes[k + 1] = tau * beta * delta;
            }
        }

        Self {
            h,
            values,
            slopes,
        }
    }

    /// Evaluate at `x >= 0`; values beyond the last knot map to 0.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len() - 1;
        let span = self.h * n as f64;
        if x >= span {
            return 0.0;
        }
        let x = Float::max(x, 0.0);
        let mut k = (x / self.h) as usize;
        if k >= n {
            k = n - 1;
        }
        let s = (x - k as f64 * self.h) / self.h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.values[k] * h00
            + self.h * self.slopes[k] * h10
            + self.values[k + 1] * h01
            + self.h * self.slopes[k + 1] * h11
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_linear_data_exactly() {
        let values: Vec<f64> = (0..=16).map(|j| 3.0 - 0.25 * j as f64).collect();
        let c = MonotoneCubic::new(0.5, values, None);
        for k in 0..200 {
            let x = 0.04 * k as f64;
            if x >= 8.0 {
                break;
            }
            let exact = 3.0 - 0.5 * x;
            assert!((c.eval(x) - exact).abs() < 1.0e-12);
        }
    }

    #[test]
    fn fourth_order_slopes_track_smooth_data() {
        // interpolation error should shrink ~16x per grid halving
        let err = |n: usize| {
            let h = 4.0 / n as f64;
            let values: Vec<f64> = (0..=n).map(|j| (-(j as f64 * h).powi(2)).exp()).collect();
            let c = MonotoneCubic::new(h, values, Some(0.0));
            let mut worst = 0.0_f64;
            for k in 0..1000 {
                let x = 3.9 * k as f64 / 999.0;
                worst = worst.max((c.eval(x) - (-x * x).exp()).abs());
            }
            worst
        };
        let e1 = err(64);
        let e2 = err(128);
        assert!(e2 < e1 / 8.0, "e1={e1} e2={e2}");
    }

    proptest! {
        /// On monotone data the interpolant stays inside the data range.
        #[test]
        fn no_overshoot_on_monotone_data(incs in prop::collection::vec(0.0f64..1.0, 8..40)) {
            let mut values = vec![0.0];
            for d in &incs {
                values.push(values.last().unwrap() + d);
            }
            let top = *values.last().unwrap();
            let n = values.len() - 1;
            let c = MonotoneCubic::new(1.0, values, None);
            for k in 0..500 {
                let x = n as f64 * k as f64 / 500.0;
                let y = c.eval(x);
                prop_assert!(y >= -1.0e-12 && y <= top + 1.0e-12);
            }
        }
    }
}
