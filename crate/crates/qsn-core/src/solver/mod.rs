//! Constrained solvers on the mass sphere.
//!
//! The common engine is projected gradient descent in the quadrature inner
//! product with a Sobolev `(αI - Δ_h)⁻¹` preconditioner, Armijo
//! backtracking, and re-projection onto the mass sphere after every step.
//! The projected gradient `g - λ̂·(mass gradient)` doubles as the residual
//! certificate and as a running estimate of the Lagrange multiplier.

use crate::dual::DualTransform;
use crate::error::CoreError;
use crate::functional::{self, FiberPieces};
use crate::grid::{self, RadialField};
use crate::params::ProblemParams;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Float;

mod blowup;
mod minimize;
mod mountain;

pub use blowup::{
    blowup_witness, subadditivity_check, BlowupOutcome, SubadditivityOutcome, SubadditivityReport,
};
pub use minimize::{default_global_seed, default_local_seed, global_minimize, local_minimize};
pub use mountain::{
    mountain_pass_solve, ContinuationRow, MountainPassOpts, MountainPassSolve, MountainPath,
    MpDiag,
};

#[derive(Debug, Clone, Copy)]
pub struct SolverOpts {
    /// Projected-gradient tolerance, scaled by `1 + ‖∇v‖₂`.
    pub grad_tol: f64,
    pub max_iters: u32,
    /// Shift of the Sobolev preconditioner `(αI - Δ_h)⁻¹`.
    pub precond_alpha: f64,
    pub initial_step: f64,
    pub armijo_c: f64,
    /// Descent below this energy is reported as a non-coercive
    /// configuration instead of being chased further.
    pub energy_floor: f64,
    /// Relative mass accuracy of the sphere projection.
    pub projection_tol: f64,
}

impl Default for SolverOpts {
    fn default() -> Self {
        Self {
            grad_tol: 1.0e-6,
            max_iters: 50_000,
            precond_alpha: 1.0,
            initial_step: 1.0,
            armijo_c: 1.0e-4,
            energy_floor: -1.0e6,
            projection_tol: 1.0e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    LocalMin,
    MountainPass,
    GlobalMin,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointKind::LocalMin => write!(f, "local_min"),
            PointKind::MountainPass => write!(f, "mountain_pass"),
            PointKind::GlobalMin => write!(f, "global_min"),
        }
    }
}

/// A converged constrained critical point with its certificates.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub field: RadialField,
    /// Lagrange multiplier from the dual-pairing identity.
    pub lambda: f64,
    pub energy: f64,
    /// Pohozaev residual — recorded as a diagnostic, never a stopping rule.
    pub pohozaev_residual: f64,
    /// Norm of the projected gradient at convergence.
    pub grad_residual: f64,
    pub kind: PointKind,
    pub theta: f64,
}

#[derive(Debug, Clone)]
pub struct SolveDiag {
    pub iterations: u32,
    pub accepted_steps: u32,
    /// Energy after every accepted step (strictly decreasing).
    pub energy_trace: Vec<f64>,
    pub final_step: f64,
    pub grad_norm_sq: f64,
    pub mass_rel_err: f64,
}

#[derive(Debug, Clone)]
pub enum SolveError {
    Core(CoreError),
    Config(String),
    /// The iterate left the admissible gradient-norm ball; diagnoses a mass
    /// at or beyond the threshold (or inconsistent constants).
    BoundaryEscape {
        iters: u32,
        grad_norm_sq: f64,
        t0: f64,
        best: Box<RadialField>,
    },
    /// Unbounded descent: signals a non-coercive configuration
    /// (mass beyond the coercivity threshold or a supercritical exponent).
    NonCoercive { iters: u32, energy: f64 },
    /// Iteration budget exhausted; the best iterate ships with the error.
    Budget {
        iters: u32,
        grad_residual: f64,
        best: Box<RadialField>,
    },
    /// Line search could make no progress at the smallest step.
    Stalled {
        iters: u32,
        grad_residual: f64,
        best: Box<RadialField>,
    },
    /// A converged point failed one of its certificates.
    Certificate { which: &'static str, value: f64 },
    /// A converged multiplier came out nonnegative — inconsistent with the
    /// problem's sign structure, surfaced loudly.
    PositiveMultiplier { theta: f64, lambda: f64 },
    /// The relaxed path degenerated onto an endpoint.
    PathCollapse { note: &'static str },
    /// Continuation values stopped being monotone beyond tolerance.
    ContinuationNotMonotone { theta: f64, prev: f64, value: f64 },
    /// Saddle refinement ran out of budget; best point attached.
    SaddleApproximate {
        theta: f64,
        grad_residual: f64,
        best: Box<RadialField>,
    },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
                SolveError::Core(e) => write!(f, "{e}"),
                SolveError::Config(msg) => write!(f, "configuration error: {msg}"),
                SolveError::BoundaryEscape {
                    iters,
                    grad_norm_sq,
                    t0,
                    ..
                } => write!(
                    f,
                    "iterate escaped the gradient ball after {iters} iterations \
                     (|∇v|² = {grad_norm_sq:.6e} >= t0 = {t0:.6e}); the mass likely sits at or \
                     beyond the local-minimizer threshold, or the constants are inconsistent"
                ),
                SolveError::NonCoercive { iters, energy } => write!(
                    f,
                    "unbounded descent detected after {iters} iterations (energy {energy:.3e}); \
                     non-coercive configuration (mass beyond threshold or q above critical)"
                ),
                SolveError::Budget {
                    iters,
                    grad_residual,
                    ..
                } => write!(
                    f,
                    "iteration budget exhausted after {iters} iterations \
                     (projected-gradient residual {grad_residual:.3e}); best iterate attached"
                ),
                SolveError::Stalled {
                    iters,
                    grad_residual,
                    ..
                } => write!(
                    f,
                    "line search stalled after {iters} iterations \
                     (projected-gradient residual {grad_residual:.3e}); best iterate attached"
                ),
                SolveError::Certificate { which, value } => {
                    write!(f, "converged point failed certificate {which} (value {value:.6e})")
                }
                SolveError::PositiveMultiplier { theta, lambda } => write!(
                    f,
                    "nonnegative Lagrange multiplier λ = {lambda:.6e} at θ = {theta} — \
                     inconsistent with the constrained problem's sign structure"
                ),
                SolveError::PathCollapse { note } => write!(f, "path collapse: {note}"),
                SolveError::ContinuationNotMonotone { theta, prev, value } => write!(
                    f,
                    "continuation level increased at θ = {theta}: {prev:.6e} -> {value:.6e}"
                ),
            SolveError::SaddleApproximate {
                theta,
                grad_residual,
                ..
            } => write!(
                f,
                "saddle refinement at θ = {theta} stopped at residual {grad_residual:.3e}; \
                 best path-max point attached (approximate)"
            ),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<CoreError> for SolveError {
    fn from(e: CoreError) -> Self {
        SolveError::Core(e)
    }
}

/// Scale used by every residual test: `1 + ‖∇v‖₂`.
pub fn residual_scale(v: &RadialField) -> f64 {
    1.0 + Float::sqrt(grid::grad_norm_sq(v))
}

/// Rescale onto the mass sphere: `f⁻¹(c·f(v))` with the scalar `c > 0`
/// solved by safeguarded Newton on the monotone map `c ↦ mass(f⁻¹(c f(v)))`.
/// Exact fixed point (c = 1) when the field already has the target mass.
pub fn project_to_mass(v: &RadialField, a: f64) -> Result<RadialField, CoreError> {
    project_to_mass_with(v, a, 1.0e-12, 48)
}

pub fn project_to_mass_with(
    v: &RadialField,
    a: f64,
    rel_tol: f64,
    max_iters: u32,
) -> Result<RadialField, CoreError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(CoreError::NonFiniteInput {
            what: "target mass",
            value: a,
        });
    }
    let d = DualTransform::default();
    let m0 = functional::mass(v);
    if m0 == 0.0 {
        return Err(CoreError::ZeroField {
            what: "mass projection",
        });
    }
    if Float::abs(m0 - a) <= rel_tol * a {
        return Ok(v.clone());
    }
    let fv: Vec<f64> = v.values().iter().map(|&x| d.forward_raw(x)).collect();
    let rescaled = |c: f64| -> RadialField {
        let vals: Vec<f64> = fv.iter().map(|&f| DualTransform::inverse_raw(c * f)).collect();
        RadialField::from_raw(v.grid().clone(), vals)
    };
    let mut c = Float::sqrt(a / m0);
    let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
    let mut last = rescaled(c);
    for _ in 0..max_iters {
        let m = functional::mass(&last);
        let residual = m - a;
        if Float::abs(residual) <= rel_tol * a {
            return Ok(last);
        }
        if residual > 0.0 {
            hi = c;
        } else {
            lo = c;
        }
        // dm/dc = 2c ∫ f(v)² = 2 m / c
        let mut next = c - residual * c / (2.0 * m);
        if !(next > lo && next < hi) {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * c
            };
        }
        c = next;
        last = rescaled(c);
    }
    Err(CoreError::NewtonDivergence {
        what: "mass projection",
        iters: max_iters,
        residual: functional::mass(&last) - a,
    })
}

/// Projected gradient `d = g - λ̂ mg` with
/// `λ̂ = ⟨g, mg⟩_w / ‖mg‖²_w`; returns `(d, λ̂, ‖d‖_w)`.
pub fn projected_gradient(
    params: &ProblemParams,
    v: &RadialField,
) -> Result<(RadialField, f64, f64), SolveError> {
    let g = functional::energy_gradient(params, v)?;
    let mg = functional::mass_gradient(v);
    let denom = grid::inner(&mg, &mg);
    if denom == 0.0 {
        return Err(SolveError::Core(CoreError::ZeroField {
            what: "projected gradient",
        }));
    }
    let lambda_hat = grid::inner(&g, &mg) / denom;
    let mut d = g;
    d.axpy(-lambda_hat, &mg);
    let norm = grid::norm_w(&d);
    Ok((d, lambda_hat, norm))
}

/// Tangent of the mass-rescaling retraction `c ↦ f⁻¹(c·f(v))` at `c = 1`:
/// the field `f(v)/f'(v)`. Satisfies `⟨mass_gradient, ρ⟩_w = 2·mass(v)`
/// exactly (the integrand is `2f²`).
pub(crate) fn rescale_tangent(v: &RadialField) -> RadialField {
    let d = DualTransform::default();
    v.map(|x| {
        let f = d.forward_raw(x);
        f * Float::sqrt(1.0 + 2.0 * f * f)
    })
}

/// Turn a raw (preconditioned) descent candidate into a direction tangent
/// to the mass-projection retraction, together with the exact first-order
/// slope of `σ ↦ Φ(project(v - σ·z))`. Falls back to the plain projected
/// gradient (whose slope `‖d‖²` is always positive) if the preconditioned
/// candidate loses descent under tangentization.
pub(crate) fn tangentize(
    v: &RadialField,
    d: &RadialField,
    raw: RadialField,
) -> (RadialField, f64) {
    let mg = functional::mass_gradient(v);
    let rho = rescale_tangent(v);
    let denom = 2.0 * functional::mass(v);
    let mut z = raw;
    let coeff = grid::inner(&mg, &z) / denom;
    z.axpy(-coeff, &rho);
    let slope = grid::inner(d, &z);
    let floor = 1.0e-12 * grid::norm_w(d) * grid::norm_w(&z);
    if slope > floor {
        (z, slope)
    } else {
        // d is L²-orthogonal to mg already; its retraction slope is ‖d‖²
        let z = d.clone();
        let slope = grid::inner(d, &z);
        (z, slope)
    }
}

/// Both multiplier estimates at a (near-)critical point: the dual-pairing
/// identity and the least-squares fit of the stationarity equation. The two
/// agree at criticality; their gap is a useful health signal.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierEstimates {
    pub pairing: f64,
    pub least_squares: f64,
}

pub fn extract_multiplier(
    params: &ProblemParams,
    v: &RadialField,
) -> Result<MultiplierEstimates, SolveError> {
    let m = functional::mass(v);
    if m == 0.0 {
        return Err(SolveError::Core(CoreError::ZeroField {
            what: "multiplier extraction",
        }));
    }
    let pieces: FiberPieces = functional::fiber_pieces(params, v)?;
    let dirichlet = pieces.q_a + pieces.q_b;
    let pairing =
        (dirichlet + pieces.q_b - params.theta * (pieces.i_p + pieces.i_q)) / m;
    let g = functional::energy_gradient(params, v)?;
    let mg = functional::mass_gradient(v);
    // stationarity reads g = λ f f' = (λ/2)·mg
    let least_squares = 2.0 * grid::inner(&g, &mg) / grid::inner(&mg, &mg);
    Ok(MultiplierEstimates {
        pairing,
        least_squares,
    })
}

impl CriticalPoint {
    /// Assemble and certify a converged point: mass within 1e-6 relative,
    /// kind-dependent sign of the energy, negative multiplier, and (for a
    /// local minimizer) membership in the gradient ball.
    pub fn certify(
        params: &ProblemParams,
        field: RadialField,
        kind: PointKind,
        grad_residual: f64,
        t0: Option<f64>,
    ) -> Result<Self, SolveError> {
        let m = functional::mass(&field);
        let mass_rel = Float::abs(m - params.a) / params.a;
        if mass_rel > 1.0e-6 {
            return Err(SolveError::Certificate {
                which: "mass within 1e-6 relative",
                value: mass_rel,
            });
        }
        let energy = functional::energy(params, &field)?;
        let pohozaev_residual = functional::pohozaev(params, &field)?;
        let multipliers = extract_multiplier(params, &field)?;
        let lambda = multipliers.pairing;
        match kind {
            PointKind::LocalMin | PointKind::GlobalMin => {
                if !(energy < 0.0) {
                    return Err(SolveError::Certificate {
                        which: "minimizer energy < 0",
                        value: energy,
                    });
                }
            }
            PointKind::MountainPass => {
                if !(energy > 0.0) {
                    return Err(SolveError::Certificate {
                        which: "mountain-pass energy > 0",
                        value: energy,
                    });
                }
            }
        }
        if let (PointKind::LocalMin, Some(t0)) = (kind, t0) {
            let gns = grid::grad_norm_sq(&field);
            if !(gns < t0) {
                return Err(SolveError::Certificate {
                    which: "local minimizer inside the gradient ball",
                    value: gns,
                });
            }
        }
        if !(lambda < 0.0) {
            return Err(SolveError::PositiveMultiplier {
                theta: params.theta,
                lambda,
            });
        }
        Ok(Self {
            field,
            lambda,
            energy,
            pohozaev_residual,
            grad_residual,
            kind,
            theta: params.theta,
        })
    }
}

/// Admissible region monitored during descent.
pub(crate) enum Region {
    /// Stay inside `‖∇v‖² < t0`.
    Ball { t0: f64 },
    /// No ball constraint; flag unbounded descent below the energy floor.
    Coercive,
}

/// Preconditioned projected-gradient descent with Armijo backtracking.
/// Accepted steps strictly decrease the energy.
pub(crate) fn descend(
    params: &ProblemParams,
    seed: &RadialField,
    opts: &SolverOpts,
    region: Region,
) -> Result<(RadialField, f64, SolveDiag), SolveError> {
    let mut v = project_to_mass(seed, params.a)?;
    let mut energy = functional::energy(params, &v)?;
    let mut step = opts.initial_step;
    let mut trace = Vec::new();
    trace.push(energy);
    let mut accepted = 0u32;

    for iter in 1..=opts.max_iters {
        let (d, _lambda_hat, residual) = projected_gradient(params, &v)?;
        if residual <= opts.grad_tol * residual_scale(&v) {
            let diag = SolveDiag {
                iterations: iter - 1,
                accepted_steps: accepted,
                energy_trace: trace,
                final_step: step,
                grad_norm_sq: grid::grad_norm_sq(&v),
                mass_rel_err: Float::abs(functional::mass(&v) - params.a) / params.a,
            };
            return Ok((v, residual, diag));
        }
        let raw = grid::solve_shifted_laplacian(&d, opts.precond_alpha);
        let (z, slope) = tangentize(&v, &d, raw);
        if !(slope > 0.0) {
            return Err(SolveError::Stalled {
                iters: iter,
                grad_residual: residual,
                best: Box::new(v),
            });
        }
        let mut local = step;
        let mut moved = false;
        for _ in 0..60 {
            let mut trial = v.clone();
            trial.axpy(-local, &z);
            let trial = match project_to_mass(&trial, params.a) {
                Ok(t) => t,
                Err(_) => {
                    local *= 0.5;
                    continue;
                }
            };
            let e_trial = match functional::energy(params, &trial) {
                Ok(e) => e,
                Err(_) => {
                    local *= 0.5;
                    continue;
                }
            };
            if e_trial <= energy - opts.armijo_c * local * slope {
                v = trial;
                energy = e_trial;
                trace.push(energy);
                accepted += 1;
                step = Float::min(local * 1.6, 1.0e3);
                moved = true;
                break;
            }
            local *= 0.5;
        }
        if !moved {
            return Err(SolveError::Stalled {
                iters: iter,
                grad_residual: residual,
                best: Box::new(v),
            });
        }
        match region {
            Region::Ball { t0 } => {
                let gns = grid::grad_norm_sq(&v);
                if gns >= t0 {
                    return Err(SolveError::BoundaryEscape {
                        iters: iter,
                        grad_norm_sq: gns,
                        t0,
                        best: Box::new(v),
                    });
                }
            }
            Region::Coercive => {
                if energy < opts.energy_floor {
                    return Err(SolveError::NonCoercive {
                        iters: iter,
                        energy,
                    });
                }
            }
        }
    }
    let (_, _, residual) = projected_gradient(params, &v)?;
    Err(SolveError::Budget {
        iters: opts.max_iters,
        grad_residual: residual,
        best: Box::new(v),
    })
}
