//! Alignment of correlated Erdős–Rényi graph pairs.
//!
//! The crate covers the whole pipeline around the exact-recovery problem for
//! an anonymized graph: sampling correlated pairs, the brute-force MAP
//! estimator, the cycle / generating-function machinery that governs the
//! alignment statistic, finite-n evaluators for the achievability and converse
//! bounds, and a reproducible Monte Carlo harness.
//!
//! Module map:
//!
//! - [`model`]: joint edge distribution, graphs, sampling, type matrix and the
//!   `delta` statistic.
//! - [`perm`]: permutations of vertices, lifts to vertex pairs, cycle censuses
//!   and counting bounds.
//! - [`genfunc`]: exact Laurent polynomials and the cyclic-sequence generating
//!   functions, with enumeration oracles.
//! - [`bounds`]: finite-n bound evaluators and the region classifier.
//! - [`estimator`]: exhaustive MAP estimation, Q-set size and automorphisms.
//! - [`experiment`]: trials, sweeps, CSV/SVG output and the identity suite.

pub mod bounds;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod genfunc;
pub mod model;
pub mod perm;
pub mod rational;

pub use error::{Error, Result};
pub use model::{CorrelatedPair, Graph, PVec, SubsamplingParams, TypeMatrix};
pub use perm::{CycleType, PairPermutation, Permutation};
pub use rational::Q;
