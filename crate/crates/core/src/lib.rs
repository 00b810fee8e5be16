//! Numerical laboratory for polygonal billiards and translation surfaces.
//!
//! The crate is organised bottom-up:
//! - [`geometry`]: polygons, triangulations, δ-perturbations, rationality of angles;
//! - [`billiard`]: the billiard flow, Liouville sampling, shadowing experiments;
//! - [`unfolding`]: translation surfaces, the unfolding of rational polygons, strata;
//! - [`surface_flow`]: straight-line flow, first-return interval exchanges, saddle connections;
//! - [`renormalization`]: Rauzy–Veech induction, the induction cocycle, Lyapunov exponents,
//!   the eigenvalue-exclusion test;
//! - [`ergodic_stats`]: Birkhoff and twisted averages, equidistribution and weak-mixing statistics.

pub mod billiard;
pub mod ergodic_stats;
pub mod geometry;
pub mod numerics;
pub mod renormalization;
pub mod surface_flow;
pub mod unfolding;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
