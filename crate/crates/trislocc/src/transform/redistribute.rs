//! One column step between generic classes: ⊕L_{ε_i} (d blocks) to ⊕L_{ε'_i} (d−1 blocks).
//!
//! Blocks of the source are glued pairwise onto blocks of the target. The identity pieces
//! below are placed at column offsets p, p' and row offsets q, q'.

use num_traits::One;

use super::TransformWitness;
use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Matrix};

fn offsets(sizes: &[usize], extra: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &e in sizes {
        acc += e + extra;
        out.push(acc);
    }
    out
}

fn place(mat: &mut Matrix, r0: usize, c0: usize, k: usize) {
    for t in 0..k {
        mat[(r0 + t, c0 + t)] += &GaussianRational::one();
    }
}

/// Smallest j with ε_i = ε'_i for i < j and ε_{i+1} ≤ ε'_i for j ≤ i ≤ d−2.
pub fn redistribution_start(eps: &[usize], eps2: &[usize]) -> Option<usize> {
    let d = eps.len();
    if d == 0 || eps2.len() + 1 != d || eps.iter().sum::<usize>() != eps2.iter().sum::<usize>() {
        return None;
    }
    (0..d).find(|&j| {
        (0..j).all(|i| eps[i] == eps2[i]) && (j..d - 1).all(|i| eps[i + 1] <= eps2[i])
    })
}

/// (B̃, C) with B̃ invertible and B̃·(⊕L_{ε'}) = (⊕L_ε)·Cᵀ, so that B̃⁻¹ ⊗ C maps
/// the ε-state to the ε'-state.
pub fn generic_step(eps: &[usize], eps2: &[usize]) -> Result<(Matrix, Matrix)> {
    let j = redistribution_start(eps, eps2).ok_or_else(|| {
        Error::ConditionViolated(format!("no admissible start index for {eps:?} -> {eps2:?}"))
    })?;
    let d = eps.len();
    let (p, p2) = (offsets(eps, 1), offsets(eps2, 1));
    let (q, q2) = (offsets(eps, 0), offsets(eps2, 0));
    let (m, n) = (q[d], p[d]);
    let mut ct = Matrix::zeros(n, n - 1);
    let mut bt = Matrix::zeros(m, m);
    for i in 0..j {
        place(&mut ct, p[i], p2[i], eps[i] + 1);
        place(&mut bt, q[i], q2[i], eps[i]);
    }
    for i in j..d - 1 {
        place(&mut ct, p[i], p2[i], eps[i] + 1);
        place(&mut ct, p[i + 1], p2[i] + eps2[i] - eps[i + 1], eps[i + 1] + 1);
        place(&mut bt, q[i], q2[i], eps[i]);
        place(&mut bt, q[i + 1], q2[i] + eps2[i] - eps[i + 1], eps[i + 1]);
    }
    Ok((bt, ct.transpose()))
}

/// The step as a state-level witness: A = 1, B = B̃⁻¹, C.
pub fn generic_step_witness(eps: &[usize], eps2: &[usize]) -> Result<TransformWitness> {
    let (bt, c) = generic_step(eps, eps2)?;
    let b = bt
        .inverse()
        .ok_or_else(|| Error::ConditionViolated(format!("row map for {eps:?} -> {eps2:?} is singular")))?;
    Ok(TransformWitness::from_bc(b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcf::l_block;
    use crate::pencil::{apply_bc, Pencil};

    // Blocks in the given order, not the canonical one.
    fn sum(eps: &[usize]) -> Pencil {
        eps.iter().fold(Pencil::zeros(0, 0), |p, &e| p.direct_sum(&l_block(e)))
    }

    #[test]
    fn worked_example_matrices() {
        let (bt, c) = generic_step(&[2, 2, 3], &[3, 4]).unwrap();
        let ct = c.transpose();
        let ones: Vec<(usize, usize)> = vec![
            (0, 0), (1, 1), (2, 2), (3, 1), (4, 2), (5, 3), (3, 4), (4, 5), (5, 6), (6, 5), (7, 6), (8, 7), (9, 8),
        ];
        for i in 0..10 {
            for k in 0..9 {
                let want = ones.iter().filter(|&&e| e == (i, k)).count() as i64;
                assert_eq!(ct[(i, k)], GaussianRational::from_int(want), "Cᵀ entry ({i},{k})");
            }
        }
        let b = bt.inverse().unwrap();
        let expected_b = Matrix::from_int_rows(&[
            &[1, 0, 0, 0, 0, 0, 0],
            &[0, 1, 0, -1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0, 0],
            &[0, 0, -1, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 0, 1],
        ])
        .transpose();
        assert_eq!(b, expected_b);
    }

    #[test]
    fn steps_are_valid() {
        let cases: &[(&[usize], &[usize])] = &[
            (&[2, 2, 3], &[3, 4]),
            (&[1, 1], &[2]),
            (&[1, 2], &[3]),
            (&[2, 2, 2], &[3, 3]),
            (&[1, 1, 1, 2], &[1, 2, 2]),
            (&[2, 2, 2, 3], &[2, 4, 3]),
        ];
        for (a, b) in cases {
            let (bt, c) = generic_step(a, b).unwrap();
            assert!(bt.is_invertible());
            assert_eq!(bt.mul(&sum(b).r()), sum(a).r().mul(&c.transpose()));
            assert_eq!(bt.mul(&sum(b).s()), sum(a).s().mul(&c.transpose()));
            let w = generic_step_witness(a, b).unwrap();
            assert_eq!(apply_bc(&sum(a), &w.b, &w.c).unwrap(), sum(b));
        }
    }

    #[test]
    fn violated_condition() {
        assert!(matches!(generic_step(&[1, 3], &[2, 2]), Err(Error::ConditionViolated(_))));
        assert_eq!(redistribution_start(&[2, 2, 3], &[3, 4]), Some(0));
    }
}
