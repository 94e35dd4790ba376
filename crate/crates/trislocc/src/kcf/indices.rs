//! Minimal indices from the dimensions of polynomial null spaces.
//!
//! A null vector of degree d, x(μ,λ) = Σ μ^(d−j) λ^j x_j, satisfies a block Toeplitz system
//! with R on the diagonal and S on the subdiagonal. If N_d is the dimension of its solution
//! space then N_d − N_(d−1) counts the minimal indices that are ≤ d.

use super::Pencil;
use crate::exact::Matrix;
use crate::pencil::pencil_rank;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    /// Column minimal indices (null vectors on the right, L blocks).
    Right,
    /// Row minimal indices (null vectors on the left, Lᵀ blocks).
    Left,
}

fn toeplitz(p: &Pencil, d: usize) -> Matrix {
    let (m, n) = p.shape();
    let mut t = Matrix::zeros((d + 2) * m, (d + 1) * n);
    for j in 0..=d {
        t.set_block(j * m, j * n, p.r());
        t.set_block((j + 1) * m, j * n, p.s());
    }
    t
}

/// Dimension of the space of degree-d right null vectors (homogeneous, zero included).
pub fn null_space_dimension(p: &Pencil, d: usize) -> usize {
    let t = toeplitz(p, d);
    t.cols() - t.rank()
}

/// Minimal indices on one side in ascending order, zeros included.
pub fn minimal_indices(p: &Pencil, side: Side) -> Vec<usize> {
    let p = match side {
        Side::Right => p.clone(),
        Side::Left => p.transpose(),
    };
    let n = p.n();
    let want = n - pencil_rank(&p);
    let mut out = Vec::with_capacity(want);
    if want == 0 {
        return out;
    }
    if p.m() == 0 || (p.r().is_zero() && p.s().is_zero()) {
        return vec![0; want];
    }
    let mut prev_dim = 0;
    let mut prev_count = 0;
    // Every minimal index is bounded by the rank, so d never exceeds n.
    for d in 0..=n {
        let dim = null_space_dimension(&p, d);
        let count = dim - prev_dim;
        out.extend(std::iter::repeat_n(d, count - prev_count));
        if count == want {
            return out;
        }
        prev_dim = dim;
        prev_count = count;
    }
    unreachable!("minimal index search exceeded the column count");
}
