//! Estimation of the principal eigenvector of a noisy positive semidefinite
//! matrix under a convex-cone constraint.
//!
//! The central algorithm is the cone projected power iteration: an ordinary
//! power step followed by an exact Euclidean projection onto the constraint
//! cone and renormalization. The crate also ships the supporting machinery
//! needed to study the method end to end:
//!
//! - [`linalg`]: dense symmetric matrices, sample covariance, top-two
//!   eigenpairs via power iteration with deflation, seeded Gaussian streams.
//! - [`cones`]: the monotone cone, non-negative orthant, coordinate
//!   subspaces and the full space, each with an exact projection.
//! - [`estimators`]: single- and double-start cone projected power
//!   iteration, ordinary power iteration, a truncated (sparse) power
//!   iteration baseline, and a brute-force spherical-grid maximizer for
//!   tiny dimensions.
//! - [`spiked`]: the spiked covariance model `I + ν·x̄x̄ᵀ` and the planted
//!   eigenvector constructions used in simulations.
//! - [`analysis`]: evaluators for the error bounds, thresholds and
//!   iteration caps attached to the method, plus Monte Carlo estimators of
//!   cone-restricted operator norms and Gaussian widths.

pub mod analysis;
pub mod cones;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod rng;
pub mod spiked;

pub use error::{Error, Result};
