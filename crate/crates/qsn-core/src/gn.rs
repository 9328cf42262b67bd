//! Numerical estimation of the interpolation constants.
//!
//! Two scale- and dilation-invariant quotients are maximized over radial
//! trial fields:
//!
//! * `H1` kind: `J(u) = [∫|u|^s / ((∫u²)^{(2s-N(s-2))/4} (∫|∇u|²)^{N(s-2)/4})]^{1/s}`
//! * `E` kind:  `J(u) = [∫|u|^{t/2} / ((∫|u|)^{(4N-t(N-2))/(2(N+2))} (∫|∇u|²)^{N(t-2)/(2(N+2))})]^{1/t}`
//!
//! Every evaluation is a certified lower bound on the sharp constant; the
//! estimator runs preconditioned gradient ascent on `log J` from a Gaussian
//! seed and returns the best value seen, which is therefore monotone
//! nondecreasing across iterations. Where an upper-bound constant is needed
//! downstream (coercivity, thresholds) the caller inflates the estimate by
//! an explicit safety factor.

use crate::error::CoreError;
use crate::grid::{self, RadialField, RadialGrid};
use crate::params::{GnKind, GNConstant, Provenance};
use crate::synth;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone, Copy)]
pub struct QuotientSpec {
    pub kind: GnKind,
    pub dimension: u32,
    pub exponent: f64,
}

impl QuotientSpec {
    pub fn new(kind: GnKind, dimension: u32, exponent: f64) -> Result<Self, CoreError> {
        // reuse the admissibility windows of GNConstant
        GNConstant::new(kind, dimension, exponent, 1.0, Provenance::UserSupplied)?;
        Ok(Self {
            kind,
            dimension,
            exponent,
        })
    }

    /// The two interpolation exponents `(α, β)` of the bound
    /// `‖u‖-term <= C^s · mass-term^α · gradient-term^β`.
    pub fn theta_exponents(&self) -> (f64, f64) {
        let n = self.dimension as f64;
        let s = self.exponent;
        match self.kind {
            GnKind::H1 => ((2.0 * s - n * (s - 2.0)) / 4.0, n * (s - 2.0) / 4.0),
            GnKind::E => (
                (4.0 * n - s * (n - 2.0)) / (2.0 * (n + 2.0)),
                n * (s - 2.0) / (2.0 * (n + 2.0)),
            ),
        }
    }

    fn integrals(&self, u: &RadialField) -> Result<(f64, f64, f64), CoreError> {
        let s = self.exponent;
        let top = match self.kind {
            GnKind::H1 => grid::integrate(u, |x| Float::powf(Float::abs(x), s))?,
            GnKind::E => grid::integrate(u, |x| Float::powf(Float::abs(x), 0.5 * s))?,
        };
        let low = match self.kind {
            GnKind::H1 => grid::integrate(u, |x| x * x)?,
            GnKind::E => grid::integrate(u, |x| Float::abs(x))?,
        };
        let dir = grid::grad_norm_sq(u);
        Ok((top, low, dir))
    }
}

/// The invariant quotient; any value is a lower bound on the sharp constant.
pub fn quotient(spec: &QuotientSpec, u: &RadialField) -> Result<f64, CoreError> {
    let (top, low, dir) = spec.integrals(u)?;
    if top <= 0.0 || low <= 0.0 || dir <= 0.0 {
        return Err(CoreError::ZeroField {
            what: "interpolation quotient",
        });
    }
    let (alpha, beta) = spec.theta_exponents();
    let s = spec.exponent;
    Ok(Float::exp(
        (Float::ln(top) - alpha * Float::ln(low) - beta * Float::ln(dir)) / s,
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateOpts {
    pub max_iters: u32,
    /// Relative improvement below which the ascent is converged.
    pub tol: f64,
    pub initial_step: f64,
}

impl Default for EstimateOpts {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            tol: 1.0e-11,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateDiag {
    pub iterations: u32,
    pub converged: bool,
    pub seed_quotient: f64,
}

/// Gradient of `log J` in the quadrature inner product.
fn log_quotient_gradient(spec: &QuotientSpec, u: &RadialField) -> Result<RadialField, CoreError> {
    let (top, low, dir) = spec.integrals(u)?;
    let (alpha, beta) = spec.theta_exponents();
    let s = spec.exponent;
    let lap = grid::apply_laplacian(u);
    let n = u.len();
    let mut out = Vec::with_capacity(n);
    for (k, &x) in u.values().iter().enumerate() {
        let ax = Float::abs(x);
        let d_top = match spec.kind {
            GnKind::H1 => s * Float::powf(ax, s - 2.0) * x,
            GnKind::E => {
                if ax == 0.0 {
                    0.0
                } else {
                    0.5 * s * Float::powf(ax, 0.5 * s - 1.0) * Float::signum(x)
                }
            }
        };
        let d_low = match spec.kind {
            GnKind::H1 => 2.0 * x,
            GnKind::E => Float::signum(x),
        };
        let d_dir = 2.0 * lap.values()[k];
        out.push((d_top / top - alpha * d_low / low - beta * d_dir / dir) / s);
    }
    Ok(RadialField::from_raw(u.grid().clone(), out))
}

/// Preconditioned ascent from the Gaussian seed. Returns the best constant
/// seen (provenance `Estimated`) plus diagnostics; a budget exhaustion is
/// reported through `converged = false`, never by discarding the best value.
pub fn estimate_constant(
    spec: &QuotientSpec,
    grid_: Arc<RadialGrid>,
    opts: &EstimateOpts,
) -> Result<(GNConstant, EstimateDiag), CoreError> {
    let mut u = synth::unit_gaussian(grid_);
    let seed_quotient = quotient(spec, &u)?;
    let mut best = seed_quotient;
    let mut step = opts.initial_step;
    let mut iters = 0;
    let mut converged = false;
    let mut stall = 0;

    while iters < opts.max_iters {
        iters += 1;
        let g = log_quotient_gradient(spec, &u)?;
        let dir = grid::solve_shifted_laplacian(&g, 1.0);
        let dir_norm = grid::norm_w(&dir);
        if dir_norm == 0.0 {
            converged = true;
            break;
        }
        let mut accepted = false;
        let mut local = step;
        for _ in 0..40 {
            let mut trial = u.clone();
            trial.axpy(local / dir_norm, &dir);
            // ascent lives on the nonnegative cone; clipping (not
            // reflection) keeps the L¹ term one-sided differentiable and
            // lets compactly supported extremizer profiles emerge
            let trial = trial.map(|x| Float::max(x, 0.0));
            match quotient(spec, &trial) {
                Ok(j) if j > best => {
                    let improvement = (j - best) / best;
                    u = trial;
                    best = j;
                    step = local * 1.4;
                    accepted = true;
                    if improvement < opts.tol {
                        stall += 1;
                    } else {
                        stall = 0;
                    }
                    break;
                }
                _ => local *= 0.5,
            }
        }
        if !accepted {
            stall += 1;
            step = Float::max(step * 0.5, 1.0e-14);
        }
        if stall >= 12 {
            converged = true;
            break;
        }
        // renormalize for conditioning; the quotient itself is invariant
        let m = grid::inner(&u, &u);
        if m > 0.0 {
            u = u.scaled(1.0 / Float::sqrt(m));
        }
    }

    let constant = GNConstant::new(
        spec.kind,
        spec.dimension,
        spec.exponent,
        best,
        Provenance::Estimated,
    )?;
    Ok((
        constant,
        EstimateDiag {
            iterations: iters,
            converged,
            seed_quotient,
        },
    ))
}

/// Check an estimated constant against the quotient on supplied fields.
/// Returns the worst offender `(index, quotient)` if any field exceeds the
/// constant — the caller persists it and bumps the estimate.
pub fn verify_constant(
    spec: &QuotientSpec,
    value: f64,
    fields: &[RadialField],
) -> Result<Option<(usize, f64)>, CoreError> {
    let mut worst: Option<(usize, f64)> = None;
    for (i, u) in fields.iter().enumerate() {
        let j = match quotient(spec, u) {
            Ok(j) => j,
            Err(CoreError::ZeroField { .. }) => continue,
            Err(e) => return Err(e),
        };
        if j > value && worst.map(|(_, w)| j > w).unwrap_or(true) {
            worst = Some((i, j));
        }
    }
    Ok(worst)
}
