use crate::error::{Error, Result};
use crate::lattice::Epsilon;
use crate::math;

/// Partition of `[0, 1]` into `M = ⌈1/ε⌉` intervals
/// `I_j = (s_{j+1}, s_j]` for `j < M - 1` and `I_{M-1} = [0, s_{M-1}]`,
/// with `s_j = 1 - jε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPartition {
    eps: f64,
    blocks: usize,
}

impl IntervalPartition {
    /// Rejects ε = 0, whose path probabilities are `1/(n+1)!` in closed form.
    pub fn new(eps: Epsilon) -> Result<Self> {
        let e = eps.value();
        if e <= 0.0 {
            return Err(Error::InvalidParameter("interval partition needs eps > 0"));
        }
        let blocks = math::ceil(1.0 / e);
        if blocks > usize::MAX as f64 / 4.0 {
            return Err(Error::InvalidParameter("eps too small for an interval partition"));
        }
        Ok(Self { eps: e, blocks: blocks as usize })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `M`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// `M(M+1)/2`, the dimension of the piecewise-polynomial space.
    pub fn dim(&self) -> usize {
        self.blocks * (self.blocks + 1) / 2
    }

    /// Position of the basis function `h_{j,i}` in the order
    /// `h_{0,0}, h_{1,0}, h_{1,1}, h_{2,0}, …`.
    #[inline]
    pub fn index(&self, j: usize, i: usize) -> usize {
        debug_assert!(i <= j && j < self.blocks);
        j * (j + 1) / 2 + i
    }

    /// Inverse of [`index`](Self::index).
    pub fn basis_of(&self, idx: usize) -> (usize, usize) {
        let mut j = 0;
        while (j + 1) * (j + 2) / 2 <= idx {
            j += 1;
        }
        (j, idx - j * (j + 1) / 2)
    }

    /// `s_j = 1 - jε` for `0 <= j <= M`; `s_M = 1 - Mε <= 0` is the origin of
    /// the last block's local coordinate.
    pub fn breakpoint(&self, j: usize) -> f64 {
        1.0 - j as f64 * self.eps
    }

    /// `Mε - 1`, which lies in `[0, ε)`.
    pub fn overshoot(&self) -> f64 {
        self.blocks as f64 * self.eps - 1.0
    }

    /// Closed hull `[lo, hi]` of `I_j`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        let lo = if j + 1 == self.blocks { 0.0 } else { self.breakpoint(j + 1) };
        (lo, self.breakpoint(j))
    }

    /// The `j` with `x ∈ I_j`, for `x ∈ [0, 1]`.
    pub fn locate(&self, x: f64) -> usize {
        let mut j = (math::floor((1.0 - x) / self.eps) as usize).min(self.blocks - 1);
        // Correct rounding near breakpoints against the half-open convention.
        while j > 0 && x > self.breakpoint(j) {
            j -= 1;
        }
        while j + 1 < self.blocks && x <= self.breakpoint(j + 1) {
            j += 1;
        }
        j
    }
}
