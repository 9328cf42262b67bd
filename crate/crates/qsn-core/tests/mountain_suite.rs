//! Integration tests of the mountain-pass continuation at desk scale.

mod common;

use common::setup;
use qsn_core::functional;
use qsn_core::grid::{self, RadialField};
use qsn_core::landscape;
use qsn_core::solver::{
    default_local_seed, local_minimize, mountain_pass_solve, project_to_mass, MountainPassOpts,
    PointKind, SolverOpts,
};
use qsn_core::synth;

fn h1_distance(u: &RadialField, v: &RadialField) -> f64 {
    let d = u.sub(v);
    grid::h1_norm_sq(&d).sqrt()
}

/// Bisect along the fiber of `w` for a field with `|∇·|² = t0` on the
/// sphere: a sample of the ball boundary.
fn boundary_sample(
    params: &qsn_core::params::ProblemParams,
    w: &RadialField,
    t0: f64,
) -> Option<RadialField> {
    let place = |s: f64| -> RadialField {
        project_to_mass(&functional::stretch(w, s).unwrap(), params.a).unwrap()
    };
    let mut lo = 1.0e-2;
    let mut hi = 1.0;
    while grid::grad_norm_sq(&place(hi)) < t0 {
        hi *= 2.0;
        if hi > 1.0e6 {
            return None;
        }
    }
    if grid::grad_norm_sq(&place(lo)) >= t0 {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if grid::grad_norm_sq(&place(mid)) < t0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(place(0.5 * (lo + hi)))
}

#[test]
fn mountain_pass_run_with_continuation() {
    let s = setup(512, 16.0);
    let th = landscape::thresholds(&s.supercritical).unwrap();
    let a = 0.5 * th.a_star;
    let solver = SolverOpts::default();

    // endpoints are built at θ = 1/2 so they serve the whole family
    let p_half = s
        .supercritical
        .with_mass(a)
        .unwrap()
        .with_theta(0.5)
        .unwrap();
    let seed = default_local_seed(&p_half, s.grid.clone()).unwrap();
    let (v1, _) = local_minimize(&p_half, &seed, &solver).unwrap();

    let opts = MountainPassOpts {
        path_nodes: 17,
        theta_grid: vec![0.5, 0.75, 1.0],
        solver,
        ..MountainPassOpts::default()
    };
    let p = s.supercritical.with_mass(a).unwrap();
    let result = mountain_pass_solve(&p, &v1, &opts).unwrap();

    // ordering, sign, and residual certificates at θ = 1
    let p_one = p.with_theta(1.0).unwrap();
    let seed1 = default_local_seed(&p_one, s.grid.clone()).unwrap();
    let (v_min, _) = local_minimize(&p_one, &seed1, &solver).unwrap();
    let mp = &result.point;
    assert_eq!(mp.kind, PointKind::MountainPass);
    assert!(mp.energy > 0.0 && v_min.energy < 0.0);
    assert!(mp.lambda < 0.0);
    let gns = grid::grad_norm_sq(&mp.field);
    assert!(
        mp.pohozaev_residual.abs() <= 1.0e-2 * (1.0 + gns),
        "P = {}",
        mp.pohozaev_residual
    );
    assert!(
        h1_distance(&mp.field, &v_min.field) >= 1.0e-2,
        "mountain pass point indistinct from the minimizer"
    );

    // continuation levels: nonincreasing in θ, envelope against c_{1/2}
    for w in result.rows.windows(2) {
        assert!(
            w[1].c_theta <= w[0].c_theta + 1.0e-4 * (1.0 + w[0].c_theta.abs()),
            "c_θ increased: {} -> {}",
            w[0].c_theta,
            w[1].c_theta
        );
        assert!(w[1].lambda < 0.0);
    }
    let c_half = result.rows[0].c_theta;
    let c_one = result.rows.last().unwrap().c_theta;
    assert!(c_one <= c_half + 1.0e-9);
    assert!(c_one > 0.0);

    // every path crosses the ball boundary
    let crossing = result
        .path
        .crossing_witness(th.t0)
        .expect("no boundary crossing on the relaxed path");

    // barrier: the relaxed path maximum dominates the boundary infimum
    // estimate (which itself is positive); the path's own crossing field
    // joins the sample set
    let (_, path_max) = result.path.max_energy(&p_half).unwrap();
    let mut boundary_min = functional::energy(&p_half, &result.path.nodes()[crossing])
        .unwrap()
        .min(functional::energy(&p_half, &result.path.nodes()[crossing + 1]).unwrap());
    for seed in 0..12u64 {
        let raw = synth::bump_field(s.grid.clone(), 7 + seed, 1.0);
        if functional::mass(&raw) == 0.0 {
            continue;
        }
        let base = project_to_mass(&raw, a).unwrap();
        if let Some(b) = boundary_sample(&p_half, &base, th.t0) {
            boundary_min = boundary_min.min(functional::energy(&p_half, &b).unwrap());
        }
    }
    assert!(
        boundary_min > 0.0,
        "boundary infimum estimate not positive: {boundary_min}"
    );
    assert!(path_max >= boundary_min - 1.0e-9);

    // far endpoint certificates
    assert!(grid::grad_norm_sq(&result.v2) > th.t0);
    assert!(
        functional::energy(&p_half, &result.v2).unwrap()
            < functional::energy(&p_half, &v1.field).unwrap()
    );

    // gradient norms stayed bounded along the continuation
    for row in &result.rows {
        assert!(row.grad_norm_sq.is_finite() && row.grad_norm_sq < 1.0e9);
    }
}

#[test]
fn mountain_pass_rejects_sobolev_supercritical_q_by_default() {
    let s = setup(256, 14.0);
    let th = landscape::thresholds(&s.supercritical).unwrap();
    let a = 0.5 * th.a_star;
    let p_bad = qsn_core::params::ProblemParams::new(3, 2.5, 6.5, a, 1.0)
        .unwrap()
        .with_constants(
            s.supercritical.gn_p.unwrap(),
            common::estimate(qsn_core::params::GnKind::E, 6.5, &s.grid)
                .inflated(common::GN_SAFETY),
            s.supercritical.gn_crit,
        )
        .unwrap();
    // a placeholder local minimizer is irrelevant: validation trips first
    let p_half = s
        .supercritical
        .with_mass(a)
        .unwrap()
        .with_theta(0.5)
        .unwrap();
    let seed = default_local_seed(&p_half, s.grid.clone()).unwrap();
    let (v1, _) = local_minimize(&p_half, &seed, &SolverOpts::default()).unwrap();
    let err = mountain_pass_solve(&p_bad, &v1, &MountainPassOpts::default()).unwrap_err();
    assert!(err.to_string().contains("2N/(N-2)"), "{err}");
}

#[test]
fn theta_grid_must_be_ascending_and_end_at_one() {
    let s = setup(256, 14.0);
    let th = landscape::thresholds(&s.supercritical).unwrap();
    let a = 0.5 * th.a_star;
    let p_half = s
        .supercritical
        .with_mass(a)
        .unwrap()
        .with_theta(0.5)
        .unwrap();
    let seed = default_local_seed(&p_half, s.grid.clone()).unwrap();
    let (v1, _) = local_minimize(&p_half, &seed, &SolverOpts::default()).unwrap();
    let p = s.supercritical.with_mass(a).unwrap();
    for bad in [vec![0.5, 0.9], vec![0.9, 0.5, 1.0], vec![0.3, 1.0]] {
        let opts = MountainPassOpts {
            theta_grid: bad,
            ..MountainPassOpts::default()
        };
        assert!(mountain_pass_solve(&p, &v1, &opts).is_err());
    }
}
