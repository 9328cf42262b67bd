//! Mountain-pass search by elastic-string relaxation and θ-continuation.
//!
//! The two endpoints are the local minimizer `v₁` (inside the gradient
//! ball) and a far fiber point `v₂ = stretch(v₁, t*)` with lower energy and
//! gradient norm beyond the ball — both independent of θ. A discrete path
//! joining them is relaxed by projected-gradient sweeps with
//! energy-weighted arclength reparametrization; its maximum is then sharpened
//! by a constrained minimax refinement: re-maximize along the own fiber of
//! the iterate (which restores the Pohozaev crest `P_θ = 0`), then take a
//! preconditioned descent step in the constrained complement. The crest
//! value decreases monotonically, and the fixed point is the saddle.
//!
//! Continuation runs over an ascending θ grid ending at 1, warm-starting
//! each refinement from the previous saddle; levels are monotone
//! nonincreasing in θ and the gradient norms stay bounded along the grid,
//! both of which are enforced.

use crate::functional;
use crate::grid::{self, RadialField};
use crate::landscape;
use crate::params::ProblemParams;
use crate::solver::{
    extract_multiplier, project_to_mass, projected_gradient, residual_scale, CriticalPoint,
    PointKind, SolveError, SolverOpts,
};
use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone)]
pub struct MountainPassOpts {
    /// Total number of path nodes including both endpoints.
    pub path_nodes: usize,
    pub max_sweeps: u32,
    /// Relative stagnation tolerance on the path maximum.
    pub sweep_tol: f64,
    /// Ascending θ grid; must end at 1.
    pub theta_grid: Vec<f64>,
    pub refine_max_iters: u32,
    /// The Sobolev-critical cap on q is enforced unless explicitly lifted
    /// for exploratory runs (no certificates are claimed there).
    pub allow_supercritical: bool,
    pub solver: SolverOpts,
}

impl Default for MountainPassOpts {
    fn default() -> Self {
        Self {
            path_nodes: 33,
            max_sweeps: 200,
            sweep_tol: 1.0e-8,
            theta_grid: alloc::vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            refine_max_iters: 4000,
            allow_supercritical: false,
            solver: SolverOpts::default(),
        }
    }
}

/// A discrete path on the mass sphere with pinned endpoints.
#[derive(Debug, Clone)]
pub struct MountainPath {
    nodes: Vec<RadialField>,
}

impl MountainPath {
    /// Validate the path invariants: every node on the sphere within 1e-6
    /// relative, and the endpoint gradient norms straddling `t0`.
    pub fn new(nodes: Vec<RadialField>, a: f64, t0: f64) -> Result<Self, SolveError> {
        if nodes.len() < 3 {
            return Err(SolveError::Config(
                "a mountain path needs at least three nodes".into(),
            ));
        }
        for (k, node) in nodes.iter().enumerate() {
            let rel = Float::abs(functional::mass(node) - a) / a;
            if rel > 1.0e-6 {
                return Err(SolveError::Config(format!(
                    "path node {k} off the mass sphere (relative error {rel:.3e})"
                )));
            }
        }
        let first = grid::grad_norm_sq(&nodes[0]);
        let last = grid::grad_norm_sq(&nodes[nodes.len() - 1]);
        if !(first < t0 && t0 < last) {
            return Err(SolveError::Config(format!(
                "path endpoints must straddle the gradient ball: |∇γ(0)|² = {first:.6e}, \
                 t0 = {t0:.6e}, |∇γ(1)|² = {last:.6e}"
            )));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[RadialField] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Path maximum of `Φ_θ`; ties break to the highest index.
    pub fn max_energy(&self, params: &ProblemParams) -> Result<(usize, f64), SolveError> {
        let mut best = (0usize, f64::MIN);
        for (k, node) in self.nodes.iter().enumerate() {
            let e = functional::energy(params, node)?;
            if e >= best.1 {
                best = (k, e);
            }
        }
        Ok(best)
    }

    /// Index `k` such that the gradient norms of nodes `k, k+1` straddle
    /// `t0` — the discrete intermediate-value witness that every admissible
    /// path crosses the ball boundary.
    pub fn crossing_witness(&self, t0: f64) -> Option<usize> {
        let gns: Vec<f64> = self.nodes.iter().map(grid::grad_norm_sq).collect();
        (0..gns.len() - 1).find(|&k| (gns[k] - t0) * (gns[k + 1] - t0) <= 0.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuationRow {
    pub theta: f64,
    pub c_theta: f64,
    pub grad_norm_sq: f64,
    pub lambda: f64,
    pub pohozaev_residual: f64,
    pub grad_residual: f64,
    pub refine_iters: u32,
}

#[derive(Debug, Clone)]
pub struct MpDiag {
    pub t_star: f64,
    pub sweeps: u32,
    pub path_doubled: bool,
}

#[derive(Debug, Clone)]
pub struct MountainPassSolve {
    /// The mountain-pass point at θ = 1.
    pub point: CriticalPoint,
    /// One row per continuation step.
    pub rows: Vec<ContinuationRow>,
    /// The relaxed path at the first θ (diagnostic artifact).
    pub path: MountainPath,
    /// The far endpoint used by every path.
    pub v2: RadialField,
    pub diag: MpDiag,
}

/// Maximize the fiber `t ↦ Φ_θ(v_t)` of a single field: coarse log scan,
/// golden-section polish, adaptive widening when the maximum sits on the
/// scan edge.
fn fiber_argmax(
    params: &ProblemParams,
    v: &RadialField,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64), SolveError> {
    let pieces = functional::fiber_pieces(params, v)?;
    let eval = |t: f64| functional::fiber_energy_from_pieces(params, &pieces, t);
    for _ in 0..40 {
        let mut best = (lo, f64::MIN);
        let m = 96;
        for k in 0..=m {
            let t = lo * Float::powf(hi / lo, k as f64 / m as f64);
            let val = eval(t)?;
            if val > best.1 {
                best = (t, val);
            }
        }
        let edge_lo = best.0 <= lo * 1.05;
        let edge_hi = best.0 >= hi * 0.95;
        if edge_lo && lo > 1.0e-6 {
            lo *= 0.25;
            continue;
        }
        if edge_hi && hi < 1.0e6 {
            hi *= 4.0;
            continue;
        }
        // golden-section refinement inside the bracketing neighbors
        let ratio = Float::powf(hi / lo, 1.0 / m as f64);
        let (mut a, mut b) = (best.0 / ratio, best.0 * ratio);
        let phi = 0.618_033_988_749_894_9;
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let (mut f1, mut f2) = (eval(x1)?, eval(x2)?);
        for _ in 0..60 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = eval(x2)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = eval(x1)?;
            }
        }
        let t = 0.5 * (a + b);
        return Ok((t, eval(t)?));
    }
    Err(SolveError::Config(
        "fiber maximum not bracketed inside [1e-6, 1e6]".into(),
    ))
}

/// Move a field to the maximum of its own fiber (the Pohozaev crest).
fn crest(params: &ProblemParams, v: &RadialField) -> Result<(RadialField, f64), SolveError> {
    let (t_hat, _) = fiber_argmax(params, v, 0.4, 2.5)?;
    let moved = project_to_mass(&functional::stretch(v, t_hat)?, params.a)?;
    let value = functional::energy(params, &moved)?;
    Ok((moved, value))
}

/// Constrained minimax refinement: alternate fiber re-maximization with a
/// preconditioned projected-gradient step. The crest value decreases
/// monotonically; the fixed point is the saddle.
fn refine_saddle(
    params: &ProblemParams,
    start: &RadialField,
    opts: &MountainPassOpts,
) -> Result<(RadialField, f64, u32), SolveError> {
    let sopts = &opts.solver;
    let (mut v, mut value) = crest(params, start)?;
    let mut step = 0.5 * sopts.initial_step;
    for iter in 1..=opts.refine_max_iters {
        let (d, _lambda_hat, residual) = projected_gradient(params, &v)?;
        if residual <= sopts.grad_tol * residual_scale(&v) {
            return Ok((v, residual, iter - 1));
        }
        let raw = grid::solve_shifted_laplacian(&d, sopts.precond_alpha);
        let (z, slope) = crate::solver::tangentize(&v, &d, raw);
        if !(slope > 0.0) {
            return Err(SolveError::SaddleApproximate {
                theta: params.theta,
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
            match crest(params, &trial) {
                Ok((crested, cval)) if cval <= value - sopts.armijo_c * local * slope => {
                    v = crested;
                    value = cval;
                    step = Float::min(local * 1.4, 100.0);
                    moved = true;
                    break;
                }
                _ => local *= 0.5,
            }
            if local < 1.0e-14 {
                break;
            }
        }
        if !moved {
            let (_, _, residual) = projected_gradient(params, &v)?;
            return Err(SolveError::SaddleApproximate {
                theta: params.theta,
                grad_residual: residual,
                best: Box::new(v),
            });
        }
    }
    let (_, _, residual) = projected_gradient(params, &v)?;
    Err(SolveError::SaddleApproximate {
        theta: params.theta,
        grad_residual: residual,
        best: Box::new(v),
    })
}

/// Build the far endpoint `v₂ = stretch(v₁, t*)`, doubling `t*` until the
/// gradient norm leaves the ball and the energy drops under `Φ_θ(v₁)` for
/// every θ on the grid.
fn far_endpoint(
    params: &ProblemParams,
    v1: &RadialField,
    t0: f64,
    theta_grid: &[f64],
) -> Result<(RadialField, f64), SolveError> {
    let mut t_star = 2.0;
    for _ in 0..24 {
        let v2 = project_to_mass(&functional::stretch(v1, t_star)?, params.a)?;
        let mut admissible = grid::grad_norm_sq(&v2) > t0;
        if admissible {
            for &theta in theta_grid {
                let pt = params.with_theta(theta)?;
                if functional::energy(&pt, &v2)? >= functional::energy(&pt, v1)? {
                    admissible = false;
                    break;
                }
            }
        }
        if admissible {
            return Ok((v2, t_star));
        }
        t_star *= 2.0;
    }
    Err(SolveError::Config(
        "no fiber scale separates the far endpoint from the minimizer".into(),
    ))
}

fn init_path(
    params: &ProblemParams,
    v1: &RadialField,
    t_star: f64,
    count: usize,
) -> Result<Vec<RadialField>, SolveError> {
    let k = count - 1;
    let mut nodes = Vec::with_capacity(count);
    for j in 0..=k {
        let t = Float::powf(t_star, j as f64 / k as f64);
        nodes.push(project_to_mass(&functional::stretch(v1, t)?, params.a)?);
    }
    Ok(nodes)
}

/// Energy-weighted arclength reparametrization (endpoints fixed).
fn reparametrize(params: &ProblemParams, nodes: &[RadialField]) -> Result<Vec<RadialField>, SolveError> {
    let k = nodes.len() - 1;
    let energies: Vec<f64> = {
        let mut es = Vec::with_capacity(nodes.len());
        for node in nodes {
            es.push(functional::energy(params, node)?);
        }
        es
    };
    let e_min = energies.iter().cloned().fold(f64::MAX, f64::min);
    let e_max = energies.iter().cloned().fold(f64::MIN, f64::max);
    let span = (e_max - e_min).max(1.0e-300);
    let mut cum = Vec::with_capacity(nodes.len());
    cum.push(0.0);
    for j in 0..k {
        let ds = grid::norm_w(&nodes[j + 1].sub(&nodes[j])).max(1.0e-300);
        let weight = 1.0 + 3.0 * (Float::max(energies[j], energies[j + 1]) - e_min) / span;
        cum.push(cum[j] + weight * ds);
    }
    let total = cum[k];
    let mut out = Vec::with_capacity(nodes.len());
    out.push(nodes[0].clone());
    let mut seg = 0usize;
    for j in 1..k {
        let target = total * j as f64 / k as f64;
        while seg + 1 < k && cum[seg + 1] < target {
            seg += 1;
        }
        let denom = (cum[seg + 1] - cum[seg]).max(1.0e-300);
        let w = (target - cum[seg]) / denom;
        let mut blend = nodes[seg].scaled(1.0 - w);
        blend.axpy(w, &nodes[seg + 1]);
        out.push(project_to_mass(&blend, params.a)?);
    }
    out.push(nodes[k].clone());
    Ok(out)
}

/// Elastic-string relaxation: per-node preconditioned descent sweeps plus
/// reparametrization; the path maximum is monotone across accepted sweeps.
fn relax_path(
    params: &ProblemParams,
    nodes: &mut Vec<RadialField>,
    opts: &MountainPassOpts,
) -> Result<(usize, f64, u32), SolveError> {
    let sopts = &opts.solver;
    let k = nodes.len() - 1;
    let path_max = |nodes: &[RadialField]| -> Result<(usize, f64), SolveError> {
        let mut best = (0usize, f64::MIN);
        for (j, node) in nodes.iter().enumerate() {
            let e = functional::energy(params, node)?;
            if e >= best.1 {
                best = (j, e);
            }
        }
        Ok(best)
    };
    let (_, mut current_max) = path_max(nodes)?;
    let mut scale = 0.25_f64;
    let mut stagnant = 0u32;
    let mut sweeps_done = 0u32;
    for sweep in 1..=opts.max_sweeps {
        sweeps_done = sweep;
        let snapshot = nodes.clone();
        for j in 1..k {
            let (d, _, residual) = projected_gradient(params, &nodes[j])?;
            if residual <= sopts.grad_tol * residual_scale(&nodes[j]) {
                continue;
            }
            let raw = grid::solve_shifted_laplacian(&d, sopts.precond_alpha);
            let (z, slope) = crate::solver::tangentize(&nodes[j], &d, raw);
            if !(slope > 0.0) {
                continue;
            }
            let e_here = functional::energy(params, &nodes[j])?;
            let mut local = scale;
            for _ in 0..20 {
                let mut trial = nodes[j].clone();
                trial.axpy(-local, &z);
                if let Ok(trial) = project_to_mass(&trial, params.a) {
                    if let Ok(e_trial) = functional::energy(params, &trial) {
                        if e_trial < e_here {
                            nodes[j] = trial;
                            break;
                        }
                    }
                }
                local *= 0.5;
            }
        }
        *nodes = reparametrize(params, nodes)?;
        let (_, new_max) = path_max(nodes)?;
        if new_max > current_max + 1.0e-12 * (1.0 + Float::abs(current_max)) {
            *nodes = snapshot;
            scale *= 0.5;
            if scale < 1.0e-10 {
                break;
            }
            continue;
        }
        let drop = current_max - new_max;
        current_max = new_max;
        if drop <= opts.sweep_tol * (1.0 + Float::abs(current_max)) {
            stagnant += 1;
            if stagnant >= 3 {
                break;
            }
        } else {
            stagnant = 0;
        }
        scale = Float::min(scale * 1.2, 4.0);
    }
    let (idx, val) = path_max(nodes)?;
    Ok((idx, val, sweeps_done))
}

/// Full mountain-pass run: far endpoint, string relaxation at the first θ,
/// then warm-started minimax refinement along the continuation grid.
pub fn mountain_pass_solve(
    params: &ProblemParams,
    v1: &CriticalPoint,
    opts: &MountainPassOpts,
) -> Result<MountainPassSolve, SolveError> {
    if opts.allow_supercritical {
        params.validate_supercritical()?;
    } else {
        params.validate_mountain_pass()?;
    }
    if v1.kind != PointKind::LocalMin {
        return Err(SolveError::Config(
            "the path origin must be a local minimizer".into(),
        ));
    }
    let grid_thetas = &opts.theta_grid;
    if grid_thetas.len() < 2
        || grid_thetas.windows(2).any(|w| w[1] <= w[0])
        || Float::abs(grid_thetas[grid_thetas.len() - 1] - 1.0) > 1.0e-12
        || grid_thetas[0] < 0.5 - 1.0e-12
    {
        return Err(SolveError::Config(
            "theta grid must be ascending inside [1/2, 1] and end at 1".into(),
        ));
    }
    let th = landscape::thresholds(params)?;
    let mass_err = Float::abs(functional::mass(&v1.field) - params.a) / params.a;
    if mass_err > 1.0e-6 {
        return Err(SolveError::Config(format!(
            "path origin off the mass sphere (relative error {mass_err:.3e})"
        )));
    }

    let (v2, t_star) = far_endpoint(params, &v1.field, th.t0, grid_thetas)?;

    let theta0 = grid_thetas[0];
    let params0 = params.with_theta(theta0)?;
    let mut nodes = init_path(&params0, &v1.field, t_star, opts.path_nodes)?;
    let (mut max_idx, _, mut sweeps) = relax_path(&params0, &mut nodes, opts)?;
    let mut path_doubled = false;
    if max_idx == 0 || max_idx == nodes.len() - 1 {
        // collapse onto an endpoint: reinitialize with a denser path
        path_doubled = true;
        nodes = init_path(&params0, &v1.field, t_star, 2 * opts.path_nodes - 1)?;
        let (idx2, _, sweeps2) = relax_path(&params0, &mut nodes, opts)?;
        sweeps += sweeps2;
        max_idx = idx2;
        if max_idx == 0 || max_idx == nodes.len() - 1 {
            return Err(SolveError::PathCollapse {
                note: "relaxed path maximum sits on an endpoint even after doubling the nodes",
            });
        }
    }
    let path = MountainPath::new(nodes.clone(), params.a, th.t0)?;

    let mut rows: Vec<ContinuationRow> = Vec::with_capacity(grid_thetas.len());
    let mut saddle = nodes[max_idx].clone();
    for &theta in grid_thetas {
        let pt = params.with_theta(theta)?;
        let (refined, residual, iters) = refine_saddle(&pt, &saddle, opts)?;
        let c_theta = functional::energy(&pt, &refined)?;
        let gns = grid::grad_norm_sq(&refined);
        if !gns.is_finite() || gns > 1.0e12 {
            return Err(SolveError::Certificate {
                which: "bounded gradient norms along the continuation",
                value: gns,
            });
        }
        let multipliers = extract_multiplier(&pt, &refined)?;
        if !(multipliers.pairing < 0.0) {
            return Err(SolveError::PositiveMultiplier {
                theta,
                lambda: multipliers.pairing,
            });
        }
        if let Some(prev) = rows.last() {
            let tol = 1.0e-4 * (1.0 + Float::abs(prev.c_theta));
            if c_theta > prev.c_theta + tol {
                return Err(SolveError::ContinuationNotMonotone {
                    theta,
                    prev: prev.c_theta,
                    value: c_theta,
                });
            }
        }
        rows.push(ContinuationRow {
            theta,
            c_theta,
            grad_norm_sq: gns,
            lambda: multipliers.pairing,
            pohozaev_residual: functional::pohozaev(&pt, &refined)?,
            grad_residual: residual,
            refine_iters: iters,
        });
        saddle = refined;
    }

    let last = rows.last().expect("nonempty continuation");
    let params1 = params.with_theta(grid_thetas[grid_thetas.len() - 1])?;
    let point = CriticalPoint::certify(
        &params1,
        saddle,
        PointKind::MountainPass,
        last.grad_residual,
        None,
    )?;
    Ok(MountainPassSolve {
        point,
        rows,
        path,
        v2,
        diag: MpDiag {
            t_star,
            sweeps,
            path_doubled,
        },
    })
}
