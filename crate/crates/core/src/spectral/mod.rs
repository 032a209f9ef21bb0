//! The integral operator `L f(x) = ∫_0^{min(x+ε, 1)} f(t) dt` acting on
//! piecewise polynomials. Its Perron root bounds path probabilities and rules
//! out weak percolation for small ε.
//!
//! `F_n(y) = (Lⁿ 1)(y)` is the probability of continuing an open path for `n`
//! steps from a vertex of potential `y`; a fixed path of `n` edges is open
//! with probability `F_{n+1}(1)`.

mod certify;
mod exact;
mod operator;
mod partition;
mod paths;
mod poly;
mod radius;
mod saw;

pub use certify::{certify, max_certified_epsilon, BoundCertificate, ThresholdScan, CONNECTIVE_CONSTANT_BOUND};
pub use exact::apply_operator_exact;
pub use operator::{build_operator_matrix, f_n, f_n_at_one, OperatorMatrix, MAX_BLOCKS};
pub use partition::IntervalPartition;
pub use paths::{eps0_path_log_probability, eps0_path_probability};
pub use poly::PiecewisePoly;
pub use radius::{spectral_radius, spectral_radius_with_cap, SpectralRadius, DEFAULT_ITERATION_CAP, DEFAULT_TOL};
pub use saw::{saw_count, SAW_MAX_LENGTH};
