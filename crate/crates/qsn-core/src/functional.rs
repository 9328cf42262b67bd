//! The constrained energy family and its first variations.
//!
//! With `f` the dual change of variables, the family is
//!
//! ```text
//! Φ_θ(v) = ½∫|∇v|² - (θ/p)∫|f(v)|^p - (θ/q)∫|f(v)|^q,   θ ∈ [1/2, 1],
//! ```
//!
//! on the mass sphere `∫ f(v)² dx = a`. The mass-preserving stretching map
//! `v_t(x) = f⁻¹(t^{N/2} f(v(tx)))` expands along its fiber as
//!
//! ```text
//! Φ_θ(v_t) = (t²/2)·Qa + (t^{N+2}/2)·Qb
//!            - (θ/p) t^{N(p-2)/2} ∫|f(v)|^p - (θ/q) t^{N(q-2)/2} ∫|f(v)|^q,
//! ```
//!
//! where `Qa = ∫ |∇v|²/(1+2f²)` and `Qb = ∫ 2f²/(1+2f²)·|∇v|²` (so
//! `Qa + Qb = ∫|∇v|²`). The Pohozaev functional is the fiber derivative at
//! `t = 1`; both are evaluated from the same cached pieces, so the identity
//! `d/dt Φ_θ(v_t)|_{t=1} = P_θ(v)` holds at the discrete level exactly.
//! Direct evaluation through [`stretch`] is kept as an independent second
//! route for cross-checks.

use crate::dual::DualTransform;
use crate::error::CoreError;
use crate::grid::{self, RadialField};
use crate::params::ProblemParams;
use alloc::vec::Vec;
use num_traits::Float;

/// `∫ f(v)² dx`, the constrained mass. Nonnegative; zero only for v = 0.
pub fn mass(v: &RadialField) -> f64 {
    let d = DualTransform::default();
    let mut acc = 0.0;
    for (&x, &w) in v.values().iter().zip(v.grid().weights()) {
        let f = d.forward_raw(x);
        acc += w * f * f;
    }
    acc
}

/// Variation of the mass: `2 f(v) f'(v)` pointwise, bounded by `sqrt(2)`.
pub fn mass_gradient(v: &RadialField) -> RadialField {
    let d = DualTransform::default();
    v.map(|x| {
        let f = d.forward_raw(x);
        2.0 * f / Float::sqrt(1.0 + 2.0 * f * f)
    })
}

/// `∫|f(v)|^p` and `∫|f(v)|^q`.
pub fn nonlinear_integrals(params: &ProblemParams, v: &RadialField) -> Result<(f64, f64), CoreError> {
    let d = DualTransform::default();
    let (mut ip, mut iq) = (0.0, 0.0);
    for (i, (&x, &w)) in v.values().iter().zip(v.grid().weights()).enumerate() {
        let f = Float::abs(d.forward_raw(x));
        let tp = Float::powf(f, params.p);
        let tq = Float::powf(f, params.q);
        if !tp.is_finite() || !tq.is_finite() {
            return Err(CoreError::NonFiniteAtNode {
                what: "nonlinear density |f(v)|^q",
                node: i,
            });
        }
        ip += w * tp;
        iq += w * tq;
    }
    Ok((ip, iq))
}

/// `Φ_θ(v)`.
pub fn energy(params: &ProblemParams, v: &RadialField) -> Result<f64, CoreError> {
    let (ip, iq) = nonlinear_integrals(params, v)?;
    let val = 0.5 * grid::grad_norm_sq(v) - params.theta * (ip / params.p + iq / params.q);
    if val.is_finite() {
        Ok(val)
    } else {
        Err(CoreError::Overflow { what: "energy" })
    }
}

/// First variation of `Φ_θ` as a field `g` with `⟨g, φ⟩_w = dΦ_θ(v+εφ)/dε`:
/// `g = -Δ_h v - θ(|f|^{p-2} + |f|^{q-2}) f f'` — exact for the discrete
/// functional because `-Δ_h` is the exact adjoint of the Dirichlet form.
pub fn energy_gradient(params: &ProblemParams, v: &RadialField) -> Result<RadialField, CoreError> {
    let d = DualTransform::default();
    let mut out = grid::apply_laplacian(v);
    let theta = params.theta;
    let (p, q) = (params.p, params.q);
    let mut nl = Vec::with_capacity(v.len());
    for (i, &x) in v.values().iter().enumerate() {
        let f = d.forward_raw(x);
        let fp = 1.0 / Float::sqrt(1.0 + 2.0 * f * f);
        let af = Float::abs(f);
        let val = theta * (Float::powf(af, p - 2.0) + Float::powf(af, q - 2.0)) * f * fp;
        if !val.is_finite() {
            return Err(CoreError::NonFiniteAtNode {
                what: "energy gradient density",
                node: i,
            });
        }
        nl.push(val);
    }
    let nl = RadialField::from_raw(v.grid().clone(), nl);
    out.axpy(-1.0, &nl);
    Ok(out)
}

/// The stretching map `v_t(x) = f⁻¹(t^{N/2} f(v(tx)))`: keeps the mass
/// constraint unchanged (up to interpolation error) and sweeps the fiber.
pub fn stretch(v: &RadialField, t: f64) -> Result<RadialField, CoreError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CoreError::NonFiniteInput {
            what: "stretch scale t",
            value: t,
        });
    }
    if t == 1.0 {
        return Ok(v.clone());
    }
    let d = DualTransform::default();
    let n = v.grid().dimension() as f64;
    let scale = Float::powf(t, 0.5 * n);
    let dilated = grid::dilate(v, t);
    Ok(dilated.map(|x| DualTransform::inverse_raw(scale * d.forward_raw(x))))
}

/// Cached fiber pieces of a field: the split Dirichlet forms and nonlinear
/// integrals that the fiber expansion and the Pohozaev functional share.
#[derive(Debug, Clone, Copy)]
pub struct FiberPieces {
    /// `∫ |∇v|² / (1 + 2f²)`
    pub q_a: f64,
    /// `∫ 2f²/(1 + 2f²) · |∇v|²`
    pub q_b: f64,
    /// `∫ |f(v)|^p`
    pub i_p: f64,
    /// `∫ |f(v)|^q`
    pub i_q: f64,
}

pub fn fiber_pieces(params: &ProblemParams, v: &RadialField) -> Result<FiberPieces, CoreError> {
    let d = DualTransform::default();
    let q_a = grid::weighted_grad(v, |x| {
        let f = d.forward_raw(x);
        1.0 / (1.0 + 2.0 * f * f)
    })?;
    let q_b = grid::weighted_grad(v, |x| {
        let f = d.forward_raw(x);
        2.0 * f * f / (1.0 + 2.0 * f * f)
    })?;
    let (i_p, i_q) = nonlinear_integrals(params, v)?;
    Ok(FiberPieces { q_a, q_b, i_p, i_q })
}

/// Closed-form `Φ_θ(v_t)` from cached pieces; the `t`-powers of the
/// nonlinear terms run through the log domain so blow-up scans cannot
/// silently overflow.
pub fn fiber_energy_from_pieces(
    params: &ProblemParams,
    pieces: &FiberPieces,
    t: f64,
) -> Result<f64, CoreError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CoreError::NonFiniteInput {
            what: "fiber scale t",
            value: t,
        });
    }
    let n = params.dimension as f64;
    let ln_t = Float::ln(t);
    let grad = 0.5 * t * t * pieces.q_a + 0.5 * Float::exp((n + 2.0) * ln_t) * pieces.q_b;
    let term = |i: f64, s: f64, denom: f64| -> f64 {
        if i <= 0.0 {
            0.0
        } else {
            params.theta / denom * Float::exp(0.5 * n * (s - 2.0) * ln_t + Float::ln(i))
        }
    };
    let tp = term(pieces.i_p, params.p, params.p);
    let tq = term(pieces.i_q, params.q, params.q);
    let val = grad - tp - tq;
    if val.is_finite() {
        Ok(val)
    } else {
        Err(CoreError::Overflow {
            what: "fiber energy",
        })
    }
}

/// `Φ_θ(v_t)` without constructing `v_t`.
pub fn fiber_energy(params: &ProblemParams, v: &RadialField, t: f64) -> Result<f64, CoreError> {
    let pieces = fiber_pieces(params, v)?;
    fiber_energy_from_pieces(params, &pieces, t)
}

/// Analytic `d/dt Φ_θ(v_t)` from cached pieces.
pub fn fiber_energy_derivative_from_pieces(
    params: &ProblemParams,
    pieces: &FiberPieces,
    t: f64,
) -> Result<f64, CoreError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CoreError::NonFiniteInput {
            what: "fiber scale t",
            value: t,
        });
    }
    let n = params.dimension as f64;
    let ln_t = Float::ln(t);
    let grad = t * pieces.q_a + 0.5 * (n + 2.0) * Float::exp((n + 1.0) * ln_t) * pieces.q_b;
    let term = |i: f64, s: f64, denom: f64| -> f64 {
        if i <= 0.0 {
            0.0
        } else {
            let c = 0.5 * n * (s - 2.0);
            params.theta * c / denom * Float::exp((c - 1.0) * ln_t + Float::ln(i))
        }
    };
    let val = grad - term(pieces.i_p, params.p, params.p) - term(pieces.i_q, params.q, params.q);
    if val.is_finite() {
        Ok(val)
    } else {
        Err(CoreError::Overflow {
            what: "fiber energy derivative",
        })
    }
}

/// The Pohozaev functional
/// `P_θ(v) = ∫|∇v|² + (N/2)∫ 2f²/(1+2f²)|∇v|²
///          - (N(p-2)θ/2p)∫|f|^p - (N(q-2)θ/2q)∫|f|^q`,
/// identically the fiber derivative at `t = 1`; vanishes at constrained
/// critical points up to discretization error.
pub fn pohozaev(params: &ProblemParams, v: &RadialField) -> Result<f64, CoreError> {
    let pieces = fiber_pieces(params, v)?;
    fiber_energy_derivative_from_pieces(params, &pieces, 1.0)
}

/// Tangent of the fiber at `t = 1`:
/// `∂_t v_t |_{t=1} = (N/2) f(v)/f'(v) + r·v'` — the unstable direction the
/// mountain-pass refinement climbs along.
pub fn fiber_tangent(v: &RadialField) -> RadialField {
    let d = DualTransform::default();
    let n = v.grid().dimension() as f64;
    let deriv = grid::radial_derivative(v);
    let mut out = Vec::with_capacity(v.len());
    for (k, (&x, &dv)) in v.values().iter().zip(deriv.values()).enumerate() {
        let f = d.forward_raw(x);
        let f_over_fp = f * Float::sqrt(1.0 + 2.0 * f * f);
        out.push(0.5 * n * f_over_fp + v.grid().radius_at(k) * dv);
    }
    RadialField::from_raw(v.grid().clone(), out)
}
