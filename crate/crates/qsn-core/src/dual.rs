//! The dual change of variables `f`.
//!
//! `f` is defined by the ODE `f'(t) = (1 + 2f²(t))^{-1/2}` on `[0, ∞)` with
//! `f(0) = 0`, extended to the negative axis as an odd function. Its inverse
//! has the closed form
//!
//! ```text
//! f⁻¹(s) = s·sqrt(1 + 2s²)/2 + asinh(sqrt(2)·s)/(2·sqrt(2)),
//! ```
//!
//! which is what this module evaluates directly; `f` itself is recovered by a
//! safeguarded Newton iteration on the closed form. Everything here is pure
//! and deterministic: repeated calls with equal inputs return bit-identical
//! outputs, and concurrent use needs no synchronization.

use crate::error::CoreError;
use num_traits::Float;

pub mod suite;

const SQRT_2: f64 = core::f64::consts::SQRT_2;
/// 2^{1/4}, the coefficient of the sqrt growth of `f` at infinity.
pub const FOURTH_ROOT_OF_TWO: f64 = 1.189_207_115_002_721_1;

/// Odd-symmetric asinh. Evaluating on the magnitude and restoring the sign
/// keeps `f⁻¹` exactly odd in floating point; the underlying `asinh` is
/// log1p-based and stable near zero.
#[inline]
fn asinh_odd(x: f64) -> f64 {
    let a = Float::asinh(Float::abs(x));
    if x < 0.0 {
        -a
    } else {
        a
    }
}

/// The change of variables `f`, its derivative, and its closed-form inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualTransform {
    newton_tol: f64,
    max_newton_iters: u32,
}

impl Default for DualTransform {
    fn default() -> Self {
        // Inversion error must sit far below quadrature error downstream.
        Self {
            newton_tol: 1.0e-12,
            max_newton_iters: 64,
        }
    }
}

impl DualTransform {
    pub fn new(newton_tol: f64, max_newton_iters: u32) -> Result<Self, CoreError> {
        if !(newton_tol > 0.0) || !newton_tol.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "newton_tol",
                constraint: "newton_tol > 0",
            });
        }
        if max_newton_iters < 1 {
            return Err(CoreError::InvalidParameter {
                name: "max_newton_iters",
                constraint: "max_newton_iters >= 1",
            });
        }
        Ok(Self {
            newton_tol,
            max_newton_iters,
        })
    }

    pub fn newton_tol(&self) -> f64 {
        self.newton_tol
    }

    pub fn max_newton_iters(&self) -> u32 {
        self.max_newton_iters
    }

    /// `t = f⁻¹(s)`, the closed-form antiderivative of `sqrt(1 + 2s²)`,
    /// odd-extended. Strictly increasing in `s`.
    pub fn inverse(&self, s: f64) -> Result<f64, CoreError> {
        if !s.is_finite() {
            return Err(CoreError::NonFiniteInput {
                what: "inverse",
                value: s,
            });
        }
        Ok(Self::inverse_raw(s))
    }

    #[inline]
    pub(crate) fn inverse_raw(s: f64) -> f64 {
        let a = Float::abs(s);
        let val = a * Float::sqrt(1.0 + 2.0 * a * a) / 2.0 + asinh_odd(SQRT_2 * a) / (2.0 * SQRT_2);
        if s < 0.0 {
            -val
        } else {
            val
        }
    }

    /// `f(t)`, recovered by Newton on the closed-form inverse. Monotone
    /// increasing and odd; `|f(t)| <= min(|t|, 2^{1/4}|t|^{1/2})`.
    pub fn forward(&self, t: f64) -> Result<f64, CoreError> {
        if !t.is_finite() {
            return Err(CoreError::NonFiniteInput {
                what: "forward",
                value: t,
            });
        }
        self.forward_checked(t)
    }

    fn forward_checked(&self, t: f64) -> Result<f64, CoreError> {
        let a = Float::abs(t);
        if a == 0.0 {
            return Ok(0.0);
        }
        // Bracket from |f(t)| <= |t| and |f(t)| <= 2^{1/4} sqrt(t); the upper
        // end doubles as the Newton seed. F is convex and increasing, so
        // Newton from above descends monotonically onto the root.
        let mut hi = Float::min(a, FOURTH_ROOT_OF_TWO * Float::sqrt(a));
        let mut lo = 0.0_f64;
        let mut s = hi;
        let tol = self.newton_tol * (1.0 + a);
        let mut residual = Self::inverse_raw(s) - a;
        for _ in 0..self.max_newton_iters {
            if Float::abs(residual) <= tol {
                return Ok(if t < 0.0 { -s } else { s });
            }
            if residual > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let deriv = Float::sqrt(1.0 + 2.0 * s * s);
            let mut next = s - residual / deriv;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            s = next;
            residual = Self::inverse_raw(s) - a;
        }
        if Float::abs(residual) <= tol {
            Ok(if t < 0.0 { -s } else { s })
        } else {
            Err(CoreError::NewtonDivergence {
                what: "forward",
                iters: self.max_newton_iters,
                residual,
            })
        }
    }

    /// Internal fast path for vectorized evaluation over validated fields.
    /// Newton on the monotone convex closed form cannot fail for finite
    /// input; a failure here is an internal invariant violation.
    #[inline]
    pub(crate) fn forward_raw(&self, t: f64) -> f64 {
        match self.forward_checked(t) {
            Ok(v) => v,
            Err(_) => unreachable!("safeguarded Newton converges for finite input"),
        }
    }

    /// `f'(t) = (1 + 2f(t)²)^{-1/2}`, even, with values in `(0, 1]`.
    pub fn derivative(&self, t: f64) -> Result<f64, CoreError> {
        if !t.is_finite() {
            return Err(CoreError::NonFiniteInput {
                what: "derivative",
                value: t,
            });
        }
        let f = self.forward_checked(t)?;
        Ok(1.0 / Float::sqrt(1.0 + 2.0 * f * f))
    }

    /// `f(t)·f'(t) = f/sqrt(1 + 2f²)`, odd and bounded by `1/sqrt(2)`;
    /// equals half the derivative of `f(t)²`.
    pub fn f_fprime(&self, t: f64) -> Result<f64, CoreError> {
        if !t.is_finite() {
            return Err(CoreError::NonFiniteInput {
                what: "f_fprime",
                value: t,
            });
        }
        let f = self.forward_checked(t)?;
        Ok(f / Float::sqrt(1.0 + 2.0 * f * f))
    }

    /// Mapping convenience: `f` applied node by node.
    pub fn forward_field(&self, field: &crate::grid::RadialField) -> crate::grid::RadialField {
        field.map(|v| self.forward_raw(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf() -> DualTransform {
        DualTransform::default()
    }

    /// Simpson quadrature of sqrt(1 + 2σ²) on [0, s]: an oracle for the
    /// closed-form antiderivative that never touches it.
    fn inverse_by_quadrature(s: f64, panels: usize) -> f64 {
        let h = s / panels as f64;
        let g = |x: f64| (1.0 + 2.0 * x * x).sqrt();
        let mut acc = g(0.0) + g(s);
        for k in 1..panels {
            let x = k as f64 * h;
            acc += if k % 2 == 1 { 4.0 * g(x) } else { 2.0 * g(x) };
        }
        acc * h / 3.0
    }

    #[test]
    fn inverse_fixes_origin_and_matches_quadrature() {
        let d = tf();
        assert_eq!(d.inverse(0.0).unwrap(), 0.0);
        let quad = inverse_by_quadrature(1.0, 4096);
        let closed = d.inverse(1.0).unwrap();
        assert!((closed - quad).abs() < 1.0e-10, "{closed} vs {quad}");
        assert!((closed - 1.2712739).abs() < 5.0e-6);
    }

    #[test]
    fn inverse_is_odd_and_increasing() {
        let d = tf();
        let mut prev = d.inverse(-5.0).unwrap();
        let mut s = -5.0 + 1.0e-2;
        while s <= 5.0 {
            let v = d.inverse(s).unwrap();
            assert!(v > prev);
            assert_eq!(v, -d.inverse(-s).unwrap());
            prev = v;
            s += 1.0e-2;
        }
    }

    /// RK4 integration of f' = (1 + 2f²)^{-1/2}: independent of both the
    /// closed form and the Newton inversion.
    fn forward_by_ode(t: f64, step: f64) -> f64 {
        let rhs = |f: f64| 1.0 / (1.0 + 2.0 * f * f).sqrt();
        let n = (t / step).round() as usize;
        let h = t / n as f64;
        let mut f = 0.0;
        for _ in 0..n {
            let k1 = rhs(f);
            let k2 = rhs(f + 0.5 * h * k1);
            let k3 = rhs(f + 0.5 * h * k2);
            let k4 = rhs(f + h * k3);
            f += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        }
        f
    }

    #[test]
    fn forward_matches_ode_oracle() {
        let d = tf();
        assert_eq!(d.forward(0.0).unwrap(), 0.0);
        let ode = forward_by_ode(1.0, 1.0e-5);
        let newton = d.forward(1.0).unwrap();
        assert!((newton - ode).abs() < 1.0e-9, "{newton} vs {ode}");
        assert!((newton - 0.8344).abs() < 5.0e-5);
    }

    #[test]
    fn forward_square_root_asymptote() {
        let d = tf();
        let t = 1.0e6;
        let ratio = d.forward(t).unwrap() / t.sqrt();
        assert!((ratio - FOURTH_ROOT_OF_TWO).abs() < 0.01 * FOURTH_ROOT_OF_TWO);
    }

    #[test]
    fn round_trips() {
        let d = tf();
        let mut s = -1000.0;
        while s <= 1000.0 {
            let t = d.inverse(s).unwrap();
            let back = d.forward(t).unwrap();
            assert!((back - s).abs() <= 1.0e-10 * (1.0 + s.abs()), "s={s}");
            s += 13.7;
        }
        for &t in &[-250.0, -3.0, -1.0e-4, 2.0e-3, 0.5, 7.0, 900.0] {
            let f = d.forward(t).unwrap();
            let back = d.inverse(f).unwrap();
            assert!((back - t).abs() <= 1.0e-10 * (1.0 + t.abs()), "t={t}");
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let d = tf();
        assert_eq!(d.derivative(0.0).unwrap(), 1.0);
        let eps = 1.0e-6;
        let mut t = -10.0;
        while t <= 10.0 {
            let fd = (d.forward(t + eps).unwrap() - d.forward(t - eps).unwrap()) / (2.0 * eps);
            let an = d.derivative(t).unwrap();
            assert!((fd - an).abs() < 1.0e-6, "t={t}: {fd} vs {an}");
            assert!(an > 0.0 && an <= 1.0);
            t += 0.37;
        }
    }

    #[test]
    fn f_fprime_is_half_derivative_of_f_squared() {
        let d = tf();
        assert_eq!(d.f_fprime(0.0).unwrap(), 0.0);
        let eps = 1.0e-6;
        let mut t = -8.0;
        while t <= 8.0 {
            let sq = |x: f64| {
                let f = d.forward(x).unwrap();
                f * f
            };
            let fd = (sq(t + eps) - sq(t - eps)) / (2.0 * eps);
            let an = 2.0 * d.f_fprime(t).unwrap();
            assert!((fd - an).abs() < 1.0e-6, "t={t}");
            t += 0.29;
        }
    }

    #[test]
    fn rejects_non_finite_and_bad_tolerances() {
        let d = tf();
        assert!(d.forward(f64::NAN).is_err());
        assert!(d.inverse(f64::INFINITY).is_err());
        assert!(d.derivative(f64::NEG_INFINITY).is_err());
        assert!(d.f_fprime(f64::NAN).is_err());
        assert!(DualTransform::new(0.0, 8).is_err());
        assert!(DualTransform::new(1.0e-12, 0).is_err());
        assert!(DualTransform::new(1.0e-10, 1).is_ok());
    }

    #[test]
    fn repeated_calls_are_bit_identical() {
        let d = tf();
        for &t in &[1.0e-7, 0.3, 2.0, 123.456, 1.0e5] {
            let a = d.forward(t).unwrap();
            let b = d.forward(t).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
