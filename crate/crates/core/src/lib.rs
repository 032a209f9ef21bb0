//! Core algorithms for the Lightning Model of directed percolation on ℤ².
//!
//! Every vertex of a box `B_r` carries a uniform potential in `[0, 1)`, and the
//! directed nearest-neighbour edge `a → b` is open iff `φ_b < φ_a + ε`. This
//! crate provides
//!
//! - [`lattice`]: potential fields, ε-open edge configurations and the exact
//!   mirror/involution and monotone-coupling maps,
//! - [`analysis`]: reachability, strongly connected clusters, the `C(m, n, r)`
//!   cluster count and Monte Carlo percolation estimators,
//! - [`spectral`]: the transfer operator on piecewise polynomials, its matrix,
//!   Perron root and the resulting non-percolation certificate,
//! - [`psi`]: the layer-rescaling transformation and its property checkers.
//!
//! The crate is `no_std` with `alloc` unless the `std` feature is enabled;
//! the default `parallel` feature runs Monte Carlo trials on rayon.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod estimate;
pub mod lattice;
mod math;
mod parallel;
pub mod psi;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use estimate::McEstimate;
pub use lattice::{BoxRegion, EdgeConfig, Epsilon, PotentialField, Vertex};
pub use rng::RngSeed;
