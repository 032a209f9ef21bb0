use alloc::vec;
use alloc::vec::Vec;

use super::IntervalPartition;
use crate::error::{Error, Result};

/// Element of the space of functions whose restriction to `I_j` is a
/// polynomial of degree at most `j`, stored as coordinates in the basis
/// `h_{j,i}(x) = (x - s_{j+1})^i · 1_{I_j}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    partition: IntervalPartition,
    coords: Vec<f64>,
}

impl PiecewisePoly {
    pub fn zero(partition: IntervalPartition) -> Self {
        Self { partition, coords: vec![0.0; partition.dim()] }
    }

    /// The constant function 1: coordinate 1 on every `h_{k,0}`.
    pub fn one(partition: IntervalPartition) -> Self {
        let mut p = Self::zero(partition);
        for k in 0..partition.blocks() {
            p.coords[partition.index(k, 0)] = 1.0;
        }
        p
    }

    pub fn from_coords(partition: IntervalPartition, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != partition.dim() {
            return Err(Error::LengthMismatch { expected: partition.dim(), found: coords.len() });
        }
        Ok(Self { partition, coords })
    }

    pub fn partition(&self) -> IntervalPartition {
        self.partition
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn coeff(&self, j: usize, i: usize) -> f64 {
        self.coords[self.partition.index(j, i)]
    }

    pub fn set_coeff(&mut self, j: usize, i: usize, value: f64) {
        let idx = self.partition.index(j, i);
        self.coords[idx] = value;
    }

    /// Coefficients of piece `j` in powers of `x - s_{j+1}`.
    pub fn piece(&self, j: usize) -> &[f64] {
        let start = self.partition.index(j, 0);
        &self.coords[start..start + j + 1]
    }

    /// The polynomial of piece `j` evaluated at any `x`, including points
    /// outside `I_j` (used for one-sided limits at breakpoints).
    pub fn eval_piece(&self, j: usize, x: f64) -> f64 {
        let t = x - self.partition.breakpoint(j + 1);
        self.piece(j).iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Value at `x ∈ [0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_piece(self.partition.locate(x), x)
    }

    /// `a·self + b·other`.
    ///
    /// # Panics
    /// If the partitions differ.
    pub fn combine(&self, a: f64, other: &PiecewisePoly, b: f64) -> PiecewisePoly {
        assert_eq!(self.partition, other.partition, "mismatched partitions");
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| a * x + b * y).collect();
        PiecewisePoly { partition: self.partition, coords }
    }
}
