//! Local and global constrained minimizers.
//!
//! The local minimizer lives in the gradient ball `‖∇v‖² < t₀` of the
//! supercritical regime; its seed is the projected Gaussian shrunk along
//! the fiber until it sits inside the ball with negative energy (the same
//! construction that proves the ball is nonempty). The global minimizer of
//! the critical regime runs without the ball restriction under a coercivity
//! watchdog.

use crate::functional;
use crate::grid::{self, RadialField, RadialGrid};
use crate::landscape;
use crate::params::ProblemParams;
use crate::solver::{
    descend, project_to_mass, CriticalPoint, PointKind, Region, SolveDiag, SolveError, SolverOpts,
};
use crate::synth;
use alloc::format;
use alloc::sync::Arc;

/// Seed for the local minimizer: the projected Gaussian, shrunk along the
/// mass-preserving fiber by `s₀ <- s₀/2` until it sits inside the gradient
/// ball with negative energy.
pub fn default_local_seed(
    params: &ProblemParams,
    grid_: Arc<RadialGrid>,
) -> Result<RadialField, SolveError> {
    let th = landscape::thresholds(params)?;
    let base = project_to_mass(&synth::unit_gaussian(grid_), params.a)?;
    let mut s0 = 1.0;
    for _ in 0..60 {
        let cand = project_to_mass(&functional::stretch(&base, s0)?, params.a)?;
        if grid::grad_norm_sq(&cand) < th.t0 && functional::energy(params, &cand)? < 0.0 {
            return Ok(cand);
        }
        s0 *= 0.5;
    }
    Err(SolveError::Config(format!(
        "no admissible seed found inside the gradient ball (t0 = {:.6e}); \
         the mass a = {} likely sits at or beyond a* = {:.6e}",
        th.t0, params.a, th.a_star
    )))
}

/// Seed for the global minimizer: the projected Gaussian.
pub fn default_global_seed(
    params: &ProblemParams,
    grid_: Arc<RadialGrid>,
) -> Result<RadialField, SolveError> {
    Ok(project_to_mass(&synth::unit_gaussian(grid_), params.a)?)
}

/// Projected-gradient descent inside the gradient ball `Λ_{t₀}`; returns a
/// certified local minimizer (negative energy, negative multiplier, mass on
/// the sphere, iterate inside the ball).
pub fn local_minimize(
    params: &ProblemParams,
    seed: &RadialField,
    opts: &SolverOpts,
) -> Result<(CriticalPoint, SolveDiag), SolveError> {
    params.validate_supercritical()?;
    let th = landscape::thresholds(params)?;
    let (v, residual, diag) = descend(params, seed, opts, Region::Ball { t0: th.t0 })?;
    let point = CriticalPoint::certify(params, v, PointKind::LocalMin, residual, Some(th.t0))?;
    Ok((point, diag))
}

/// Unrestricted descent for the critical regime `q = 4 + 4/N`; coercivity
/// holds below the threshold mass so descent cannot run away — if it does,
/// the configuration is reported as non-coercive.
pub fn global_minimize(
    params: &ProblemParams,
    seed: &RadialField,
    opts: &SolverOpts,
) -> Result<(CriticalPoint, SolveDiag), SolveError> {
    params.validate_global()?;
    let (v, residual, diag) = descend(params, seed, opts, Region::Coercive)?;
    let point = CriticalPoint::certify(params, v, PointKind::GlobalMin, residual, None)?;
    Ok((point, diag))
}
