use alloc::vec;
use alloc::vec::Vec;

use super::{IntervalPartition, PiecewisePoly};
use crate::error::{Error, Result};
use crate::math;

/// Largest `M` for which the operator is materialised.
pub const MAX_BLOCKS: usize = 4096;

/// Matrix of `L` in the basis `h_{j,i}`.
///
/// Column `h_{j,i}` with `j < M - 1` holds `ε^{i+1}/(i+1)` on each `h_{k,0}`,
/// `k <= j`, and `1/(i+1)` on `h_{j+1,i+1}`. Column `h_{M-1,i}` holds
/// `(ε^{i+1} - (Mε-1)^{i+1})/(i+1)` on every `h_{k,0}`. Only these three
/// coefficient families are stored; [`to_dense`](Self::to_dense) expands them.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    partition: IntervalPartition,
    head: Vec<f64>,
    rise: Vec<f64>,
    tail: Vec<f64>,
    /// `tail[i] / ε^{i+1}`: last-block coefficients in the balanced basis.
    tail_balanced: Vec<f64>,
}

pub fn build_operator_matrix(partition: IntervalPartition) -> Result<OperatorMatrix> {
    let m = partition.blocks();
    if m > MAX_BLOCKS {
        return Err(Error::OperatorTooLarge { blocks: m, limit: MAX_BLOCKS });
    }
    let eps = partition.eps();
    let over = partition.overshoot();
    let theta = over / eps;
    let mut head = Vec::with_capacity(m);
    let mut rise = Vec::with_capacity(m);
    let mut tail = Vec::with_capacity(m);
    let mut tail_balanced = Vec::with_capacity(m);
    for i in 0..m as u32 {
        let k = f64::from(i + 1);
        head.push(math::powi(eps, i + 1) / k);
        rise.push(1.0 / k);
        tail.push((math::powi(eps, i + 1) - math::powi(over, i + 1)) / k);
        tail_balanced.push((1.0 - math::powi(theta, i + 1)) / k);
    }
    Ok(OperatorMatrix { partition, head, rise, tail, tail_balanced })
}

impl OperatorMatrix {
    pub fn partition(&self) -> IntervalPartition {
        self.partition
    }

    pub fn dim(&self) -> usize {
        self.partition.dim()
    }

    /// Entry `(row, col)` in basis order.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let p = &self.partition;
        let (rj, ri) = p.basis_of(row);
        let (cj, ci) = p.basis_of(col);
        let last = p.blocks() - 1;
        if cj == last {
            if ri == 0 {
                self.tail[ci]
            } else {
                0.0
            }
        } else if ri == 0 && rj <= cj {
            self.head[ci]
        } else if rj == cj + 1 && ri == ci + 1 {
            self.rise[ci]
        } else {
            0.0
        }
    }

    /// Row-major dense matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|r| (0..n).map(|c| self.entry(r, c)).collect()).collect()
    }

    /// `A·v` in `O(dim)`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_with(v, &mut out, &self.head, &self.rise, &self.tail);
        out
    }

    /// `C·v` for the balanced matrix `C = DAD⁻¹/ε` with `D = diag(ε^i)`.
    ///
    /// In the basis `h_{j,i}/ε^i` every column's entries are `ε/(i+1)` (or
    /// `ε(1 - θ^{i+1})/(i+1)` with `θ = (Mε-1)/ε` in the last block), so `C`
    /// has entries of order one and `ρ(A) = ε·ρ(C)`.
    pub(crate) fn apply_balanced(&self, v: &[f64], out: &mut [f64]) {
        self.apply_with(v, out, &self.rise, &self.rise, &self.tail_balanced);
    }

    fn apply_with(&self, v: &[f64], out: &mut [f64], head: &[f64], rise: &[f64], tail: &[f64]) {
        let p = &self.partition;
        let m = p.blocks();
        out.iter_mut().for_each(|x| *x = 0.0);
        // Every h_{k,0} receives the sum over all columns with j >= k.
        let last: f64 = (0..m).map(|i| tail[i] * v[p.index(m - 1, i)]).sum();
        let mut suffix = last;
        for k in (0..m).rev() {
            if k < m - 1 {
                suffix += (0..=k).map(|i| head[i] * v[p.index(k, i)]).sum::<f64>();
                for i in 0..=k {
                    out[p.index(k + 1, i + 1)] = rise[i] * v[p.index(k, i)];
                }
            }
            out[p.index(k, 0)] = suffix;
        }
    }

    pub fn apply_poly(&self, f: &PiecewisePoly) -> PiecewisePoly {
        assert_eq!(f.partition(), self.partition, "mismatched partitions");
        PiecewisePoly::from_coords(self.partition, self.apply(f.coords())).expect("dimension preserved")
    }
}

/// `F_n = Lⁿ 1` as a piecewise polynomial.
pub fn f_n(partition: IntervalPartition, n: u32) -> Result<PiecewisePoly> {
    let a = build_operator_matrix(partition)?;
    let mut v = PiecewisePoly::one(partition).into_coords();
    for _ in 0..n {
        v = a.apply(&v);
    }
    PiecewisePoly::from_coords(partition, v)
}

/// `F_n(1)`: the `h_{0,0}` coordinate of `Aⁿ·1`.
pub fn f_n_at_one(partition: IntervalPartition, n: u32) -> Result<f64> {
    Ok(f_n(partition, n)?.coords()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Epsilon;

    fn part(e: f64) -> IntervalPartition {
        IntervalPartition::new(Epsilon::new(e).unwrap()).unwrap()
    }

    #[test]
    fn first_column_at_three_tenths() {
        let p = part(0.3);
        let a = build_operator_matrix(p).unwrap().to_dense();
        let col: Vec<f64> = a.iter().map(|row| row[0]).collect();
        let mut want = vec![0.0; p.dim()];
        want[p.index(0, 0)] = 0.3;
        want[p.index(1, 1)] = 1.0;
        for (g, w) in col.iter().zip(&want) {
            assert!((g - w).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_reciprocal_last_block() {
        let p = part(0.5);
        let a = build_operator_matrix(p).unwrap();
        for i in 0..2 {
            let col = p.index(1, i);
            for k in 0..2 {
                let want = 0.5f64.powi(i as i32 + 1) / (i + 1) as f64;
                assert_eq!(a.entry(p.index(k, 0), col), want);
            }
        }
    }

    #[test]
    fn column_sparsity_pattern() {
        for e in [0.1, 0.1481, 0.3, 0.5, 0.77, 1.0] {
            let p = part(e);
            let a = build_operator_matrix(p).unwrap().to_dense();
            let m = p.blocks();
            for col in 0..p.dim() {
                let (j, _) = p.basis_of(col);
                let nonzero = a.iter().filter(|row| row[col] != 0.0).count();
                let expected = if j + 1 == m { m } else { j + 2 };
                assert_eq!(nonzero, expected, "eps {e} column {col}");
                assert!(a.iter().all(|row| row[col] >= 0.0));
            }
        }
    }

    #[test]
    fn structured_apply_matches_dense() {
        for e in [0.1, 0.1481, 0.3, 0.5, 1.0] {
            let p = part(e);
            let a = build_operator_matrix(p).unwrap();
            let dense = a.to_dense();
            let v: Vec<f64> = (0..p.dim()).map(|k| ((k * 37 % 11) as f64 - 5.0) / 3.0).collect();
            let got = a.apply(&v);
            for (r, row) in dense.iter().enumerate() {
                let want: f64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                assert!((got[r] - want).abs() < 1e-14, "eps {e} row {r}");
            }
        }
    }

    #[test]
    fn balanced_apply_is_a_similarity() {
        let p = part(0.23);
        let a = build_operator_matrix(p).unwrap();
        let e = p.eps();
        let scale: Vec<f64> = (0..p.dim()).map(|k| e.powi(p.basis_of(k).1 as i32)).collect();
        let w: Vec<f64> = (0..p.dim()).map(|k| 1.0 + k as f64 * 0.1).collect();
        // C w = D A D⁻¹ w / ε
        let dw: Vec<f64> = w.iter().zip(&scale).map(|(x, s)| x / s).collect();
        let adw = a.apply(&dw);
        let mut cw = vec![0.0; p.dim()];
        a.apply_balanced(&w, &mut cw);
        for k in 0..p.dim() {
            let want = adw[k] * scale[k] / e;
            assert!((cw[k] - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn f_n_small_values() {
        let p = part(0.2);
        assert_eq!(f_n_at_one(p, 0).unwrap(), 1.0);
        assert!((f_n_at_one(p, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((f_n_at_one(p, 2).unwrap() - 0.68).abs() < 1e-14);
    }

    #[test]
    fn too_many_blocks() {
        let p = part(1.0 / 5000.0);
        assert!(matches!(build_operator_matrix(p), Err(Error::OperatorTooLarge { .. })));
    }
}
