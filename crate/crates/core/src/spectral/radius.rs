use alloc::vec;

use super::OperatorMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_ITERATION_CAP: usize = 1_000_000;

/// Entries below this fraction of the largest are left out of the bracket.
const SUPPORT_FLOOR: f64 = 1e-280;

/// Perron root of the operator matrix with a Collatz–Wielandt bracket.
///
/// `lower <= ρ <= upper` holds for the computed iterate; `rho` is the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    pub rho: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

impl SpectralRadius {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn spectral_radius(matrix: &OperatorMatrix, tol: f64) -> Result<SpectralRadius> {
    spectral_radius_with_cap(matrix, tol, DEFAULT_ITERATION_CAP)
}

/// Power iteration on the balanced matrix, stopping once the bracket is
/// narrower than `tol`.
pub fn spectral_radius_with_cap(matrix: &OperatorMatrix, tol: f64, cap: usize) -> Result<SpectralRadius> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    if cap == 0 {
        return Err(Error::InvalidParameter("iteration cap must be positive"));
    }
    let eps = matrix.partition().eps();
    let n = matrix.dim();
    let mut v = vec![1.0; n];
    let mut w = vec![0.0; n];
    let mut width = f64::INFINITY;
    for iter in 1..=cap {
        matrix.apply_balanced(&v, &mut w);
        let vmax = v.iter().copied().fold(0.0, f64::max);
        let floor = vmax * SUPPORT_FLOOR;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (&a, &b) in v.iter().zip(&w) {
            if a > floor {
                let q = b / a;
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        let (lower, upper) = (eps * lo, eps * hi);
        width = upper - lower;
        if width <= tol {
            return Ok(SpectralRadius { rho: 0.5 * (lower + upper), lower, upper, iterations: iter });
        }
        let wmax = w.iter().copied().fold(0.0, f64::max);
        if !wmax.is_finite() || wmax <= 0.0 {
            return Err(Error::NoConvergence { iterations: iter, width });
        }
        for (a, &b) in v.iter_mut().zip(&w) {
            *a = b / wmax;
        }
    }
    Err(Error::NoConvergence { iterations: cap, width })
}
