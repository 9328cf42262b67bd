//! Runnable property suite for the change of variables.
//!
//! Ten analytic properties of `f` plus the inverse round trip and an
//! ODE-integration cross-check, evaluated over a deterministic quasi-random
//! sample of the requested size. The suite is the backing of the
//! `verify-dual` experiment and of the first acceptance criterion.

use crate::dual::{DualTransform, FOURTH_ROOT_OF_TWO};
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;

/// Result of one property check: the worst observed violation (negative or
/// zero means pass when compared against `tolerance`).
#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Worst signed violation observed (value - bound); <= tolerance passes.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<PropertyCheck>,
    pub samples: usize,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Golden-ratio Kronecker sequence on [lo, hi]: deterministic, roughly
/// equidistributed, reproducible across platforms.
fn kronecker(k: usize, lo: f64, hi: f64) -> f64 {
    const PHI_CONJ: f64 = 0.618_033_988_749_894_9;
    let frac = Float::fract(0.5 + k as f64 * PHI_CONJ);
    lo + (hi - lo) * frac
}

fn check(name: &'static str, worst: f64, tolerance: f64, detail: String) -> PropertyCheck {
    PropertyCheck {
        name,
        pass: worst <= tolerance,
        worst,
        tolerance,
        detail,
    }
}

/// RK4 integration of `f' = (1 + 2f²)^{-1/2}` from 0 to `t`; independent of
/// both the closed-form antiderivative and the Newton inversion.
pub fn forward_by_ode(t: f64, step: f64) -> f64 {
    let rhs = |f: f64| 1.0 / Float::sqrt(1.0 + 2.0 * f * f);
    let n = Float::round(Float::abs(t) / step) as usize;
    let n = n.max(1);
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

/// Run the full property suite on `samples` quasi-random points of
/// `[-1000, 1000]`, plus fixed special points near 0, 1, and the asymptotic
/// range. `ode_step` controls the RK4 cross-check resolution (1e-5 matches
/// the acceptance contract; larger steps are fine for smoke profiles).
pub fn run(samples: usize, ode_step: f64) -> SuiteReport {
    let d = DualTransform::default();
    let slack = 1.0e-9; // floating slack on mathematically exact inequalities

    let mut pts: Vec<f64> = Vec::with_capacity(samples + 16);
    for k in 0..samples {
        pts.push(kronecker(k, -1000.0, 1000.0));
    }
    pts.extend_from_slice(&[
        0.0, 1.0, -1.0, 1.0e-8, -1.0e-8, 1.0e-2, -1.0e-2, 0.999, 1.001, 999.9, -999.9,
    ]);

    let mut fw: Vec<(f64, f64, f64)> = Vec::with_capacity(pts.len()); // (t, f, f')
    for &t in &pts {
        let f = d.forward_raw(t);
        let fp = 1.0 / Float::sqrt(1.0 + 2.0 * f * f);
        fw.push((t, f, fp));
    }

    let mut checks = Vec::new();

    // (1) uniquely defined / invertible: both round trips.
    let mut worst = f64::MIN;
    for k in 0..samples.max(1) {
        let s = kronecker(k, -1000.0, 1000.0);
        let t = DualTransform::inverse_raw(s);
        let back = d.forward_raw(t);
        worst = Float::max(worst, Float::abs(back - s) / (1.0 + Float::abs(s)));
    }
    for &(t, f, _) in &fw {
        let back = DualTransform::inverse_raw(f);
        worst = Float::max(worst, Float::abs(back - t) / (1.0 + Float::abs(t)));
    }
    checks.push(check(
        "invertible: f∘f⁻¹ and f⁻¹∘f round trips",
        worst,
        1.0e-10,
        String::new(),
    ));

    // (2) |f'(t)| <= 1, f'(0) = 1.
    let mut worst = f64::MIN;
    for &(_, _, fp) in &fw {
        worst = Float::max(worst, Float::abs(fp) - 1.0);
    }
    worst = Float::max(worst, Float::abs(d.derivative(0.0).unwrap_or(f64::NAN) - 1.0));
    checks.push(check("|f'(t)| <= 1 with f'(0) = 1", worst, slack, String::new()));

    // (3) |f(t)| <= |t|.
    let mut worst = f64::MIN;
    for &(t, f, _) in &fw {
        worst = Float::max(worst, Float::abs(f) - Float::abs(t));
    }
    checks.push(check("|f(t)| <= |t|", worst, slack, String::new()));

    // (4) f(t)/t -> 1 as t -> 0: |f/t - 1| <= 1e-3 for |t| <= 1e-2.
    let mut worst = f64::MIN;
    for k in 0..1000 {
        let t = kronecker(k, 1.0e-6, 1.0e-2);
        for &t in &[t, -t] {
            worst = Float::max(worst, Float::abs(d.forward_raw(t) / t - 1.0));
        }
    }
    checks.push(check("f(t)/t -> 1 near 0", worst, 1.0e-3, String::new()));

    // (5) f(t)/sqrt(t) -> 2^{1/4}: within 1e-2 for t >= 1e6.
    let mut worst = f64::MIN;
    for k in 0..200 {
        let t = Float::exp(kronecker(k, Float::ln(1.0e6), Float::ln(1.0e12)));
        let ratio = d.forward_raw(t) / Float::sqrt(t);
        worst = Float::max(worst, Float::abs(ratio - FOURTH_ROOT_OF_TWO));
    }
    checks.push(check(
        "f(t)/sqrt(t) -> 2^{1/4} at large t",
        worst,
        1.0e-2,
        String::new(),
    ));

    // (6) f(t)/2 <= t f'(t) <= f(t) for t > 0.
    let mut worst = f64::MIN;
    for &(t, f, fp) in &fw {
        if t > 0.0 {
            worst = Float::max(worst, f / 2.0 - t * fp);
            worst = Float::max(worst, t * fp - f);
        }
    }
    checks.push(check(
        "f/2 <= t f' <= f on t > 0",
        worst,
        slack * 1000.0,
        String::new(),
    ));

    // (7) f²/2 <= t f f' <= f² for t >= 0.
    let mut worst = f64::MIN;
    for &(t, f, fp) in &fw {
        if t >= 0.0 {
            worst = Float::max(worst, f * f / 2.0 - t * f * fp);
            worst = Float::max(worst, t * f * fp - f * f);
        }
    }
    checks.push(check(
        "f²/2 <= t f f' <= f² on t >= 0",
        worst,
        slack * 1000.0,
        String::new(),
    ));

    // (8) |f(t)| <= 2^{1/4} |t|^{1/2}.
    let mut worst = f64::MIN;
    for &(t, f, _) in &fw {
        worst = Float::max(
            worst,
            Float::abs(f) - FOURTH_ROOT_OF_TWO * Float::sqrt(Float::abs(t)),
        );
    }
    checks.push(check(
        "|f(t)| <= 2^{1/4} |t|^{1/2}",
        worst,
        slack,
        String::new(),
    ));

    // (9) lower bound with C = f(1): f(t)/t is nonincreasing (t f' <= f)
    // so f >= f(1)·t on (0,1], and f(t)/sqrt(t) is nondecreasing
    // (t f' >= f/2) so f >= f(1)·sqrt(t) on [1, ∞). Ratio slack covers the
    // inversion tolerance near the axis.
    let c = d.forward_raw(1.0);
    let mut worst = f64::MIN;
    let mut prev_ratio = f64::INFINITY;
    for k in 0..2000 {
        let t = 1.0e-6 + (1.0 - 1.0e-6) * k as f64 / 1999.0;
        let ratio = d.forward_raw(t) / t;
        worst = Float::max(worst, ratio - prev_ratio);
        worst = Float::max(worst, c * t - d.forward_raw(t));
        prev_ratio = ratio;
    }
    let mut prev_ratio = f64::NEG_INFINITY;
    for k in 0..2000 {
        let t = Float::exp(Float::ln(1000.0) * k as f64 / 1999.0);
        let ratio = d.forward_raw(t) / Float::sqrt(t);
        worst = Float::max(worst, prev_ratio - ratio);
        worst = Float::max(worst, c * Float::sqrt(t) - d.forward_raw(t));
        prev_ratio = ratio;
    }
    checks.push(check(
        "f >= f(1)·t on (0,1], f >= f(1)·sqrt(t) on [1,∞) (monotone ratios)",
        worst,
        1.0e-5,
        String::new(),
    ));

    // (10) |f f'| <= 1/sqrt(2).
    let mut worst = f64::MIN;
    for &(_, f, fp) in &fw {
        worst = Float::max(worst, Float::abs(f * fp) - 0.70711);
    }
    checks.push(check("|f f'| <= 1/sqrt(2)", worst, 0.0, String::new()));

    // Oddness / evenness symmetry.
    let mut worst = f64::MIN;
    for k in 0..2000 {
        let t = kronecker(k, 1.0e-6, 1000.0);
        worst = Float::max(worst, Float::abs(d.forward_raw(-t) + d.forward_raw(t)));
        worst = Float::max(
            worst,
            Float::abs(DualTransform::inverse_raw(-t) + DualTransform::inverse_raw(t)),
        );
        let fp_plus = d.derivative(t).unwrap_or(f64::NAN);
        let fp_minus = d.derivative(-t).unwrap_or(f64::NAN);
        worst = Float::max(worst, Float::abs(fp_plus - fp_minus));
        let g_plus = d.f_fprime(t).unwrap_or(f64::NAN);
        let g_minus = d.f_fprime(-t).unwrap_or(f64::NAN);
        worst = Float::max(worst, Float::abs(g_plus + g_minus));
    }
    checks.push(check(
        "oddness of f, f⁻¹, f f'; evenness of f'",
        worst,
        slack,
        String::new(),
    ));

    // ODE-integration oracle vs Newton inversion on [0, 10].
    let mut worst = f64::MIN;
    let mut at = 0.0;
    for k in 0..=20 {
        let t = 0.5 * k as f64;
        if t == 0.0 {
            continue;
        }
        let ode = forward_by_ode(t, ode_step);
        let diff = Float::abs(d.forward_raw(t) - ode);
        if diff > worst {
            worst = diff;
            at = t;
        }
    }
    checks.push(check(
        "Newton inversion matches RK4 of the defining ODE on [0, 10]",
        worst,
        1.0e-8,
        alloc::format!("worst at t = {at}"),
    ));

    SuiteReport {
        checks,
        samples: pts.len(),
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn full_suite_passes() {
        let report = super::run(100_000, 1.0e-4);
        for c in &report.checks {
            assert!(c.pass, "{}: worst {} > tol {}", c.name, c.worst, c.tolerance);
        }
    }
}
