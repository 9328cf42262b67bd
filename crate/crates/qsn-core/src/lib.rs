//! Variational toolkit for normalized solutions of the quasilinear
//! Schrödinger equation
//!
//! ```text
//! -Δu - Δ(u²)u = |u|^{p-2}u + |u|^{q-2}u + λu,   ∫ u² dx = a,   x ∈ ℝ^N,
//! ```
//!
//! treated through the dual change of variables `u = f(v)` with
//! `f'(t) = (1 + 2f²(t))^{-1/2}`. The substitution turns the quasilinear
//! energy into the C² family
//!
//! ```text
//! Φ_θ(v) = ½∫|∇v|² - (θ/p)∫|f(v)|^p - (θ/q)∫|f(v)|^q,   θ ∈ [1/2, 1],
//! ```
//!
//! constrained to the mass sphere `∫ f(v)² dx = a`. The crate provides:
//!
//! * [`dual`] — the change of variables `f`, its inverse and derivative,
//!   plus a runnable property suite for all of its analytic bounds;
//! * [`grid`] — radial fields on a truncated ball with quadrature,
//!   summation-by-parts gradient forms, a dual radial Laplacian, and
//!   monotone-cubic dilation;
//! * [`functional`] — `Φ_θ`, the mass constraint, first variations, the
//!   mass-preserving stretching map and its closed-form fiber expansion,
//!   and the Pohozaev functional;
//! * [`landscape`] — the Gagliardo-Nirenberg lower-bound profile `H_a`
//!   and the thresholds `t̄_a`, `a*_N`, `ā*_N`, `t₀` derived from it;
//! * [`gn`] — numerical estimation of the interpolation constants that
//!   parameterize every threshold;
//! * [`solver`] — constrained descent for local/global minimizers,
//!   blow-up witnesses, sub-additivity checks, and a θ-continuation
//!   mountain-pass search with multiplier extraction.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` for builds without the Rust standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("qsn-core requires either the `std` or the `libm` feature");

pub mod dual;
pub mod error;
pub mod functional;
pub mod gn;
pub mod grid;
pub mod interp;
pub mod landscape;
pub mod params;
pub mod solver;
pub mod synth;

pub use dual::DualTransform;
pub use error::CoreError;
pub use grid::{RadialField, RadialGrid};
pub use params::{GnKind, GNConstant, ProblemParams, Provenance};
