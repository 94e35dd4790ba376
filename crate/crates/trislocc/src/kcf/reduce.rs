//! Explicit witnesses of strict equivalence.
//!
//! `B P Cᵀ = Q` is rewritten as the linear system `B R = Q_R Y`, `B S = Q_S Y` in the unknown
//! entries of B and Y, where Cᵀ = Y⁻¹. A solution with both B and Y
//! invertible is drawn as a seeded random combination of a null space basis. By the
//! Schwartz–Zippel lemma such a combination is invertible with high probability whenever
//! an invertible solution exists at all.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{assemble_kcf, kronecker_structure, KroneckerStructure};
use crate::error::Result;
use crate::exact::{GaussianRational, Matrix};
use crate::pencil::{apply_bc, Pencil};

const WITNESS_SEED: u64 = 0x6b63_665f_7769_746e;
const WITNESS_ATTEMPTS: usize = 200;

/// A pencil, its canonical form and the local operators linking them.
#[derive(Clone, Debug)]
pub struct KcfReduction {
    pub structure: KroneckerStructure,
    pub kcf: Pencil,
    /// Acts on rows: `b · P · cᵀ = kcf`.
    pub b: Matrix,
    pub c: Matrix,
}

/// Invertible (B, C) with `B P Cᵀ = Q`, or `None` when the pencils are not strictly equivalent.
pub fn equivalence_witness(p: &Pencil, q: &Pencil) -> Option<(Matrix, Matrix)> {
    let (m, n) = p.shape();
    if q.shape() != (m, n) {
        return None;
    }
    if m == 0 || n == 0 {
        return Some((Matrix::identity(m), Matrix::identity(n)));
    }
    let unknowns = m * m + n * n;
    let bi = |i: usize, k: usize| i * m + k;
    let yi = |l: usize, j: usize| m * m + l * n + j;
    let mut sys = Matrix::zeros(2 * m * n, unknowns);
    for (s, (pm, qm)) in [(p.r(), q.r()), (p.s(), q.s())].into_iter().enumerate() {
        for i in 0..m {
            for j in 0..n {
                let row = s * m * n + i * n + j;
                for k in 0..m {
                    if !pm[(k, j)].is_zero() {
                        sys[(row, bi(i, k))] = pm[(k, j)].clone();
                    }
                }
                for l in 0..n {
                    if !qm[(i, l)].is_zero() {
                        sys[(row, yi(l, j))] = -&qm[(i, l)];
                    }
                }
            }
        }
    }
    let basis = sys.nullspace();
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    for attempt in 0..WITNESS_ATTEMPTS {
        let range = 1 + (attempt / 25) as i64;
        let mut v = vec![GaussianRational::zero(); unknowns];
        for vec in &basis {
            // The first attempt uses the plain sum, which is often enough and keeps entries small.
            let c = if attempt == 0 {
                1
            } else {
                rng.random_range(-range..=range)
            };
            if c == 0 {
                continue;
            }
            let c = GaussianRational::from_int(c);
            for (x, y) in v.iter_mut().zip(vec) {
                if !y.is_zero() {
                    *x += &(y * &c);
                }
            }
        }
        let b = Matrix::with_shape(m, m, v[..m * m].to_vec());
        let y = Matrix::with_shape(n, n, v[m * m..].to_vec());
        if !b.is_invertible() {
            continue;
        }
        let Some(ct) = y.inverse() else { continue };
        let c = ct.transpose();
        debug_assert_eq!(&apply_bc(p, &b, &c).unwrap(), q);
        return Some((b, c));
    }
    None
}

/// Canonical form with explicit operators, `b · p · cᵀ = kcf`.
pub fn kcf_reduce(p: &Pencil) -> Result<KcfReduction> {
    let structure = kronecker_structure(p)?;
    let kcf = assemble_kcf(&structure);
    let (b, c) = equivalence_witness(p, &kcf)
        .expect("a pencil is always strictly equivalent to its assembled canonical form");
    Ok(KcfReduction { structure, kcf, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcf::{l_block, m_block};
    use crate::exact::gr;

    #[test]
    fn witness_between_scrambled_blocks() {
        let p = l_block(2).direct_sum(&m_block(1, &gr(3)));
        let b = Matrix::from_int_rows(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let c = Matrix::from_int_rows(&[&[1, 0, 0, 1], &[2, 1, 0, 0], &[0, 0, 1, 3], &[0, 1, 0, 1]]);
        assert!(c.is_invertible());
        let q = apply_bc(&p, &b, &c).unwrap();
        let (b2, c2) = equivalence_witness(&q, &p).unwrap();
        assert_eq!(apply_bc(&q, &b2, &c2).unwrap(), p);
    }

    #[test]
    fn no_witness_between_different_eigenvalues() {
        let p = m_block(1, &gr(1)).direct_sum(&m_block(1, &gr(2)));
        let q = m_block(1, &gr(1)).direct_sum(&m_block(1, &gr(3)));
        assert!(equivalence_witness(&p, &q).is_none());
    }
}
