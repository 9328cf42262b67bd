//! Shared fixtures: grids, estimated constants, reference parameter sets.

use qsn_core::gn::{estimate_constant, EstimateOpts, QuotientSpec};
use qsn_core::grid::RadialGrid;
use qsn_core::params::{GnKind, GNConstant, ProblemParams};
use std::sync::Arc;

/// Safety factor applied wherever an upper-bound constant is needed.
pub const GN_SAFETY: f64 = 1.02;

pub struct Setup {
    pub grid: Arc<RadialGrid>,
    /// Supercritical reference parameters (p = 2.5, q = 5.8) with inflated
    /// estimated constants attached; mass still the placeholder 1.0.
    pub supercritical: ProblemParams,
    /// Critical reference parameters (q = 4 + 4/N = 16/3).
    pub critical: ProblemParams,
    /// Raw (uninflated) estimates, for provenance-sensitive checks.
    pub raw: [GNConstant; 3],
}

pub fn estimate(kind: GnKind, s: f64, grid: &Arc<RadialGrid>) -> GNConstant {
    let spec = QuotientSpec::new(kind, grid.dimension(), s).unwrap();
    let (c, _) = estimate_constant(&spec, grid.clone(), &EstimateOpts::default()).unwrap();
    c
}

pub fn setup(n: usize, radius: f64) -> Setup {
    let grid = RadialGrid::new(3, radius, n).unwrap();
    let crit = 16.0 / 3.0;
    let cp = estimate(GnKind::E, 2.5, &grid);
    let cq = estimate(GnKind::E, 5.8, &grid);
    let cc = estimate(GnKind::E, crit, &grid);
    let supercritical = ProblemParams::new(3, 2.5, 5.8, 1.0, 1.0)
        .unwrap()
        .with_constants(
            cp.inflated(GN_SAFETY),
            cq.inflated(GN_SAFETY),
            Some(cc.inflated(GN_SAFETY)),
        )
        .unwrap();
    let critical = ProblemParams::new(3, 2.5, crit, 1.0, 1.0)
        .unwrap()
        .with_constants(
            cp.inflated(GN_SAFETY),
            cc.inflated(GN_SAFETY),
            Some(cc.inflated(GN_SAFETY)),
        )
        .unwrap();
    Setup {
        grid,
        supercritical,
        critical,
        raw: [cp, cq, cc],
    }
}
