//! Deterministic synthesis of smooth test fields.
//!
//! Property suites and re-verification runs need reproducible "random"
//! smooth radial fields. Fields are sums of mirrored Gaussian bumps (even
//! extension keeps v'(0) = 0 exactly) under a polynomial cutoff that
//! vanishes at the boundary. The generator is a splitmix64 stream, so the
//! same seed yields the same field on every platform.

use crate::grid::{RadialField, RadialGrid};
use alloc::sync::Arc;
use num_traits::Float;

/// splitmix64 step.
pub fn next_u64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform(state: &mut u64, lo: f64, hi: f64) -> f64 {
    let u = (next_u64(state) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    lo + (hi - lo) * u
}

/// Sum of mirrored Gaussian bumps with a boundary cutoff. Amplitudes are in
/// `[-amplitude, amplitude]`; the result is smooth, vanishes at `R`, and has
/// zero radial derivative at the axis.
pub fn bump_field(grid: Arc<RadialGrid>, seed: u64, amplitude: f64) -> RadialField {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x51ed_270b;
    let r_max = grid.radius();
    let bumps = 4;
    let mut params = alloc::vec::Vec::with_capacity(bumps);
    for _ in 0..bumps {
        let a = uniform(&mut state, -amplitude, amplitude);
        let width = uniform(&mut state, 0.6, 2.5);
        let center = uniform(&mut state, 0.0, r_max / 3.0);
        params.push((a, width, center));
    }
    RadialField::from_fn(grid, move |r| {
        let cutoff = {
            let x = r / r_max;
            let c = 1.0 - x * x;
            c * c
        };
        let mut acc = 0.0;
        for &(a, w, c) in &params {
            let left = r - c;
            let right = r + c;
            acc += a * (Float::exp(-w * left * left) + Float::exp(-w * right * right));
        }
        acc * cutoff
    })
}

/// `e^{-α r²}`.
pub fn gaussian(grid: Arc<RadialGrid>, alpha: f64) -> RadialField {
    RadialField::from_fn(grid, move |r| Float::exp(-alpha * r * r))
}

/// The unit Gaussian seed `e^{-r²}` used throughout the solvers.
pub fn unit_gaussian(grid: Arc<RadialGrid>) -> RadialField {
    gaussian(grid, 1.0)
}
