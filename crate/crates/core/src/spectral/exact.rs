//! `L f` by direct symbolic integration in the monomial basis.
//!
//! Independent of the matrix recursion. Pieces are expanded in powers of `x`
//! and integrated there; the result is re-expanded around the left
//! breakpoint of each target interval.

use alloc::vec;
use alloc::vec::Vec;

use super::{IntervalPartition, PiecewisePoly};

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn antiderivative(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k + 1] = c / (k + 1) as f64;
    }
    out
}

/// Coefficients of `y ↦ p(y + c)`.
fn shift(p: &[f64], c: f64) -> Vec<f64> {
    let mut q: Vec<f64> = Vec::with_capacity(p.len());
    for &coef in p.iter().rev() {
        // q ← q·(y + c) + coef
        q.push(0.0);
        for k in (1..q.len()).rev() {
            q[k] = q[k - 1] + c * q[k];
        }
        q[0] = c * q[0] + coef;
    }
    q
}

pub fn apply_operator_exact(f: &PiecewisePoly) -> PiecewisePoly {
    let part: IntervalPartition = f.partition();
    let m = part.blocks();
    let eps = part.eps();

    let monomial: Vec<Vec<f64>> = (0..m).map(|j| shift(f.piece(j), -part.breakpoint(j + 1))).collect();
    let anti: Vec<Vec<f64>> = monomial.iter().map(|p| antiderivative(p)).collect();
    let piece_integral = |j: usize| {
        let (lo, hi) = part.interval(j);
        horner(&anti[j], hi) - horner(&anti[j], lo)
    };

    // cumulative[j] = ∫_0^{lo_j} f, i.e. the mass of the pieces below I_j.
    let mut cumulative = vec![0.0; m];
    for j in (0..m.saturating_sub(1)).rev() {
        cumulative[j] = cumulative[j + 1] + piece_integral(j + 1);
    }
    // G_j(u) = ∫_0^u f for u in the closure of I_j, in powers of u.
    let primitive = |j: usize| {
        let (lo, _) = part.interval(j);
        let mut g = anti[j].clone();
        g[0] += cumulative[j] - horner(&anti[j], lo);
        g
    };

    let mut out = PiecewisePoly::zero(part);
    // x ∈ I_0 integrates over all of [0, 1].
    out.set_coeff(0, 0, cumulative[0] + piece_integral(0));
    // x ∈ I_k, k >= 1: x + ε lies in the closure of I_{k-1}.
    for k in 1..m {
        let composed = shift(&primitive(k - 1), eps);
        let local = shift(&composed, part.breakpoint(k + 1));
        debug_assert!(local.len() == k + 1);
        for (i, &c) in local.iter().enumerate().take(k + 1) {
            out.set_coeff(k, i, c);
        }
    }
    out
}
