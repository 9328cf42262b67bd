//! The interpolation lower-bound profile `H_a` and the thresholds it
//! produces.
//!
//! Combining the E-kind interpolation inequality with `|∇f²(v)|² <= 2|∇v|²`
//! yields, for every `v` on the mass sphere,
//!
//! ```text
//! Φ_θ(v) >= ‖∇v‖²·H_a(‖∇v‖²),
//! H_a(t) = 1/2 - A₁ a^{(4N-p(N-2))/(2(N+2))} t^{(Np-4N-4)/(2(N+2))}
//!              - A₂ a^{(4N-q(N-2))/(2(N+2))} t^{(Nq-4N-4)/(2(N+2))},
//! ```
//!
//! with `A₁ = (C_p^p/p)·2^{N(p-2)/(2(N+2))}` and `A₂` alike. For
//! `p < 2 + 4/N < 4 + 4/N < q` the first `t`-exponent is negative and the
//! second positive, so `H_a` has a unique interior maximum at the closed
//! form `t̄_a`; the mass `a*_N` where that maximum touches zero separates the
//! local-minimum geometry from its loss, and `t₀ = t̄_{a*_N}` bounds the
//! region `‖∇v‖² < t₀` that hosts the local minimizer. The coercivity
//! threshold of the critical regime is
//! `ā*_N = ((N+1)/(N·C_crit^{4+4/N}))^{N/2}`.
//!
//! All values here are closed-form in the supplied constants; since the
//! constants are numerical estimates, every threshold is reported relative
//! to them (the constants' provenance travels in the parameter set).

use crate::error::CoreError;
use crate::params::{GnKind, ProblemParams};
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone, Copy)]
struct Coeffs {
    a1: f64,
    a2: f64,
    /// a-exponents of the two terms
    e_ap: f64,
    e_aq: f64,
    /// t-exponents of the two terms (e_tp < 0 < e_tq)
    e_tp: f64,
    e_tq: f64,
}

fn coeffs(params: &ProblemParams) -> Result<Coeffs, CoreError> {
    let n = params.dimension as f64;
    let cp = params.gn_p.ok_or(CoreError::missing_gn(params.p))?;
    let cq = params.gn_q.ok_or(CoreError::missing_gn(params.q))?;
    for c in [&cp, &cq] {
        if c.kind != GnKind::E {
            return Err(CoreError::InvalidParameter {
                name: "gn constant kind",
                constraint: "E-kind constants for the landscape profile",
            });
        }
    }
    let two = 2.0_f64;
    let a1 = Float::powf(cp.value, params.p) / params.p
        * Float::powf(two, n * (params.p - 2.0) / (2.0 * (n + 2.0)));
    let a2 = Float::powf(cq.value, params.q) / params.q
        * Float::powf(two, n * (params.q - 2.0) / (2.0 * (n + 2.0)));
    Ok(Coeffs {
        a1,
        a2,
        e_ap: (4.0 * n - params.p * (n - 2.0)) / (2.0 * (n + 2.0)),
        e_aq: (4.0 * n - params.q * (n - 2.0)) / (2.0 * (n + 2.0)),
        e_tp: (n * params.p - (4.0 * n + 4.0)) / (2.0 * (n + 2.0)),
        e_tq: (n * params.q - (4.0 * n + 4.0)) / (2.0 * (n + 2.0)),
    })
}

fn h_of(c: &Coeffs, a: f64, t: f64) -> f64 {
    0.5 - c.a1 * Float::powf(a, c.e_ap) * Float::powf(t, c.e_tp)
        - c.a2 * Float::powf(a, c.e_aq) * Float::powf(t, c.e_tq)
}

/// `H_a(t)` at the parameters' mass.
pub fn landscape(params: &ProblemParams, t: f64) -> Result<f64, CoreError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CoreError::NonFiniteInput {
            what: "landscape argument t",
            value: t,
        });
    }
    let c = coeffs(params)?;
    Ok(h_of(&c, params.a, t))
}

fn t_bar_of(c: &Coeffs, params: &ProblemParams, a: f64) -> f64 {
    let n = params.dimension as f64;
    let base = c.a1 * (4.0 * n + 4.0 - n * params.p) / (c.a2 * (n * params.q - 4.0 * n - 4.0));
    Float::powf(base, 2.0 * (n + 2.0) / (n * (params.q - params.p)))
        * Float::powf(a, (n - 2.0) / n)
}

/// Closed-form maximizer `t̄_a` of `H_a`.
pub fn t_bar(params: &ProblemParams, a: f64) -> Result<f64, CoreError> {
    params.validate_supercritical()?;
    let c = coeffs(params)?;
    Ok(t_bar_of(&c, params, a))
}

/// Maximum value `H_a(t̄_a)`.
pub fn max_value(params: &ProblemParams, a: f64) -> Result<f64, CoreError> {
    params.validate_supercritical()?;
    let c = coeffs(params)?;
    Ok(h_of(&c, a, t_bar_of(&c, params, a)))
}

/// Coercivity threshold `ā*_N = ((N+1)/(N·C^{4+4/N}))^{N/2}` with `C` the
/// E-kind constant at the quasilinear critical exponent. Taken from
/// `gn_crit`, falling back to `gn_q` when `q` is itself critical.
pub fn a_bar_star(params: &ProblemParams) -> Result<f64, CoreError> {
    let n = params.dimension as f64;
    let s = params.quasilinear_critical();
    let c = match (&params.gn_crit, params.is_critical_q()) {
        (Some(c), _) => *c,
        (None, true) => params.gn_q.ok_or(CoreError::missing_gn(s))?,
        (None, false) => return Err(CoreError::missing_gn(s)),
    };
    if c.kind != GnKind::E || Float::abs(c.exponent - s) > 1.0e-9 {
        return Err(CoreError::InvalidParameter {
            name: "gn_crit",
            constraint: "E-kind constant at exponent 4 + 4/N",
        });
    }
    Ok(Float::powf(
        (n + 1.0) / (n * Float::powf(c.value, s)),
        0.5 * n,
    ))
}

/// The four thresholds of the supercritical regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Maximizer of `H_a` at the parameters' own mass.
    pub t_bar_a: f64,
    /// Mass where `max_t H_a(t)` crosses zero.
    pub a_star: f64,
    /// Coercivity threshold of the critical regime.
    pub a_bar_star: f64,
    /// `t̄` evaluated at `a*`: the gradient-norm cap of the local-minimizer
    /// region.
    pub t0: f64,
}

/// Compute `t̄_a`, `a*_N` (bisection on the closed-form maximum value),
/// `ā*_N`, and `t₀ = t̄_{a*_N}`.
pub fn thresholds(params: &ProblemParams) -> Result<Thresholds, CoreError> {
    params.validate_supercritical()?;
    let c = coeffs(params)?;
    let h_max = |a: f64| h_of(&c, a, t_bar_of(&c, params, a));

    let mut lo = 1.0e-12;
    if h_max(lo) <= 0.0 {
        return Err(CoreError::BracketFailure {
            what: "a_star lower bracket (H maximum nonpositive at tiny mass)",
        });
    }
    let mut hi = 1.0;
    let mut guard = 0;
    while h_max(hi) > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(CoreError::BracketFailure {
                what: "a_star upper bracket (H maximum never crosses zero)",
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h_max(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a_star = 0.5 * (lo + hi);
    Ok(Thresholds {
        t_bar_a: t_bar_of(&c, params, params.a),
        a_star,
        a_bar_star: a_bar_star(params)?,
        t0: t_bar_of(&c, params, a_star),
    })
}

/// One row of the landscape table: `(a, t̄_a, H_a(t̄_a), a*, ā*)`.
#[derive(Debug, Clone, Copy)]
pub struct LandscapeRow {
    pub a: f64,
    pub t_bar: f64,
    pub h_max: f64,
    pub a_star: f64,
    pub a_bar_star: f64,
}

pub fn landscape_table(
    params: &ProblemParams,
    masses: &[f64],
) -> Result<Vec<LandscapeRow>, CoreError> {
    let th = thresholds(params)?;
    let c = coeffs(params)?;
    Ok(masses
        .iter()
        .map(|&a| {
            let t_bar = t_bar_of(&c, params, a);
            LandscapeRow {
                a,
                t_bar,
                h_max: h_of(&c, a, t_bar),
                a_star: th.a_star,
                a_bar_star: th.a_bar_star,
            }
        })
        .collect())
}
