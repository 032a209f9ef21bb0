use super::{build_operator_matrix, spectral_radius, IntervalPartition, MAX_BLOCKS};
use crate::error::{Error, Result};
use crate::lattice::Epsilon;
use crate::math;

/// Published upper bound on the square-lattice connective constant.
pub const CONNECTIVE_CONSTANT_BOUND: f64 = 2.679192495;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCertificate {
    pub eps: Epsilon,
    pub rho: f64,
    pub lambda_bound: f64,
    /// `upper · λ < 1` for the upper end of the enclosure of `ρ`.
    pub certified: bool,
    /// Distance from `rho` to the upper end of its enclosure.
    pub rho_tolerance: f64,
}

/// Decides whether `λ·ρ(A) < 1` at `eps`, using the upper end of the
/// power-iteration enclosure.
pub fn certify(eps: Epsilon, lambda_bound: f64, tol: f64) -> Result<BoundCertificate> {
    if !lambda_bound.is_finite() || lambda_bound <= 0.0 {
        return Err(Error::InvalidParameter("lambda bound must be positive and finite"));
    }
    let matrix = build_operator_matrix(IntervalPartition::new(eps)?)?;
    let r = spectral_radius(&matrix, tol)?;
    Ok(BoundCertificate {
        eps,
        rho: r.rho,
        lambda_bound,
        certified: r.upper * lambda_bound < 1.0,
        rho_tolerance: r.upper - r.rho,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdScan {
    /// Largest certified grid point, or 0 when none was found.
    pub eps0: f64,
    pub found: bool,
    pub points_checked: usize,
    /// Set when the scan reached a grid point whose operator exceeds
    /// [`MAX_BLOCKS`] before finding a certified point.
    pub truncated_at: Option<f64>,
}

/// Largest `ε = k·grid_step` in `(0, 1]` with a certified bound.
///
/// Every grid point above the result is evaluated, so no monotonicity of `ρ`
/// in `ε` is assumed. The scan runs downwards and stops at the first
/// certified point, which is the maximum.
pub fn max_certified_epsilon(lambda_bound: f64, grid_step: f64, tol: f64) -> Result<ThresholdScan> {
    if !(0.0..=1.0).contains(&grid_step) || grid_step == 0.0 {
        return Err(Error::InvalidParameter("grid step must lie in (0, 1]"));
    }
    let top = math::floor(1.0 / grid_step + 1e-9) as u64;
    let mut checked = 0;
    for k in (1..=top).rev() {
        let e = (k as f64 * grid_step).min(1.0);
        if math::ceil(1.0 / e) as usize > MAX_BLOCKS {
            return Ok(ThresholdScan { eps0: 0.0, found: false, points_checked: checked, truncated_at: Some(e) });
        }
        checked += 1;
        let c = certify(Epsilon::new(e)?, lambda_bound, tol)?;
        if c.certified {
            return Ok(ThresholdScan { eps0: e, found: true, points_checked: checked, truncated_at: None });
        }
    }
    Ok(ThresholdScan { eps0: 0.0, found: false, points_checked: checked, truncated_at: None })
}
