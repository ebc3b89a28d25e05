//! Exact simulation and cost analysis for partial quantum database search.
//!
//! The task: a database of `N` items is split into `K` equal blocks and we
//! only want to learn which block holds the single marked item. The
//! algorithm runs a shortened global amplitude amplification, a few
//! block-local amplification rounds, and one final query that moves the
//! target out and zeroes every non-target block.
//!
//! Two backends execute the same operator sequences:
//!
//! * [`statevector::DenseState`] keeps every complex amplitude and is the
//!   trusted reference for small `N`.
//! * [`reduced::ReducedState`] keeps the four real numbers the block
//!   symmetry leaves free, so it scales to `N` around `2^52`.
//!
//! [`analysis`] holds the cost calculus and the `ε` optimizer,
//! [`classical`] the classical baselines, and [`zalka`] numeric checks of
//! the hybrid-argument lemmas behind the matching lower bound.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod classical;
pub mod config;
pub mod error;
pub mod minimize;
pub mod partial_search;
pub mod reduced;
pub mod statevector;
pub mod zalka;

pub use analysis::{BoundsRow, CostBreakdown, Optimum};
pub use config::BlockConfig;
pub use error::{Error, Result};
pub use partial_search::{Backend, PipelineScript, RunReport, Simulator, ThetaMode};

pub use reduced::{Operator, ReducedState};
pub use statevector::DenseState;

/// Largest register the dense backend accepts unless the caller overrides it.
pub const DEFAULT_DENSE_CAP: u64 = 1 << 24;
