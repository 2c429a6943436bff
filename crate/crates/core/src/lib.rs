//! Least cost influence (LCI) on multiplex social networks.
//!
//! A multiplex network is a set of `k` weighted directed layers over one user
//! universe. Users present in several layers carry influence between them.
//! This crate couples the layers into a single network (lossless or lossy),
//! runs hop-limited threshold and cascade diffusion, and selects small seed
//! sets with a lazy greedy algorithm.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and the
//! experiment harness live in the `lci` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coupling;
pub mod diffusion;
pub mod error;
pub mod generator;
pub mod graph;
pub mod rng;
pub mod solver;

pub use crate::coupling::{CoupledNetwork, LossyKind, NodeKind, Scheme, SyncWeights};
pub use crate::diffusion::{
    ActiveSet, Denominator, DiffusionModel, DiffusionOutcome, InfluenceGraph, McOutcome, ModelKind,
};
pub use crate::error::{Error, Result};
pub use crate::graph::{LayerGraph, MultiplexNetwork, UserId, ValidationReport, Violation};
pub use crate::solver::{CoverageMode, GreedyConfig, SeedSet};

/// Absolute slack used by every threshold comparison (`sum >= theta - TOL`).
pub const ACTIVATION_TOLERANCE: f64 = 1e-12;

/// Slack used when comparing a covered amount against `beta * total`.
pub const COVERAGE_TOLERANCE: f64 = 1e-9;

/// `covered >= beta * total`, allowing for rounding in `beta * total`.
pub fn meets_target(covered: f64, total: f64, beta: f64) -> bool {
    covered + COVERAGE_TOLERANCE * total.max(1.0) >= beta * total
}
