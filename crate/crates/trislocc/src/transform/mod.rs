//! Non-invertible local transformations: column and row elimination, explicit witnesses,
//! and constructive families of reachable targets.

mod blocks;
mod redistribute;
mod search;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Matrix, Poly};
use crate::kcf::{equivalence_witness, l_block};
use crate::pencil::{apply_alice, apply_bc, MoebiusMap, Pencil, StateTensor};

pub use blocks::{consume_blocks, plan_consumption, BlockStep, ResourcePools};
pub use redistribute::{generic_step, generic_step_witness, redistribution_start};
pub use search::{search_column_step, search_row_step, SearchConfig, SearchOutcome, COEFFICIENT_POOL};

/// Which party drops a dimension.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Claire: columns of the pencil.
    Column,
    /// Bob: rows of the pencil.
    Row,
}

/// Add `coeffs[k] ·` line `index` to every other line k, then drop line `index`.
///
/// `coeffs` lists the coefficients for the remaining lines in their original order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EliminationSpec {
    pub axis: Axis,
    pub index: usize,
    pub coeffs: Vec<GaussianRational>,
}

impl EliminationSpec {
    pub fn new(axis: Axis, index: usize, coeffs: Vec<GaussianRational>) -> Self {
        EliminationSpec { axis, index, coeffs }
    }

    /// Delete a line without mixing it into the others.
    pub fn delete(axis: Axis, index: usize, dim: usize) -> Self {
        EliminationSpec::new(axis, index, vec![GaussianRational::zero(); dim.saturating_sub(1)])
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.index >= dim {
            return Err(Error::IndexOutOfRange { index: self.index, dim });
        }
        if self.coeffs.len() + 1 != dim {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for dimension {dim}",
                self.coeffs.len()
            )));
        }
        Ok(())
    }
}

/// The (dim−1)×dim matrix E with rows e_k + a_k e_i (k ≠ i).
///
/// For columns the pencil becomes P·Eᵀ, for rows E·P.
pub fn elimination_matrix(spec: &EliminationSpec, dim: usize) -> Result<Matrix> {
    spec.check(dim)?;
    let mut e = Matrix::zeros(dim - 1, dim);
    let kept = (0..dim).filter(|&k| k != spec.index);
    for (row, (k, a)) in kept.zip(&spec.coeffs).enumerate() {
        e[(row, k)] = GaussianRational::one();
        e[(row, spec.index)] = a.clone();
    }
    Ok(e)
}

/// Direct line arithmetic, independent of [`elimination_matrix`].
pub fn eliminate(p: &Pencil, spec: &EliminationSpec) -> Result<Pencil> {
    let work = match spec.axis {
        Axis::Column => p.clone(),
        Axis::Row => p.transpose(),
    };
    spec.check(work.n())?;
    let (m, n) = work.shape();
    let mut r = Matrix::zeros(m, n - 1);
    let mut s = Matrix::zeros(m, n - 1);
    let kept = (0..n).filter(|&k| k != spec.index);
    for (col, (k, a)) in kept.zip(&spec.coeffs).enumerate() {
        for i in 0..m {
            r[(i, col)] = &work.r()[(i, k)] + &(a * &work.r()[(i, spec.index)]);
            s[(i, col)] = &work.s()[(i, k)] + &(a * &work.s()[(i, spec.index)]);
        }
    }
    let out = Pencil::new(r, s)?;
    Ok(match spec.axis {
        Axis::Column => out,
        Axis::Row => out.transpose(),
    })
}

/// Local operators A ⊗ B ⊗ C (A 2×2, B m'×m, C n'×n).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TransformWitness {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
    #[serde(rename = "C")]
    pub c: Matrix,
}

impl TransformWitness {
    pub fn identity(m: usize, n: usize) -> Self {
        TransformWitness {
            a: Matrix::identity(2),
            b: Matrix::identity(m),
            c: Matrix::identity(n),
        }
    }

    pub fn from_bc(b: Matrix, c: Matrix) -> Self {
        TransformWitness { a: Matrix::identity(2), b, c }
    }

    pub fn src_shape(&self) -> (usize, usize) {
        (self.b.cols(), self.c.cols())
    }

    pub fn dst_shape(&self) -> (usize, usize) {
        (self.b.rows(), self.c.rows())
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &TransformWitness) -> TransformWitness {
        TransformWitness {
            a: next.a.mul(&self.a),
            b: next.b.mul(&self.b),
            c: next.c.mul(&self.c),
        }
    }

    pub fn apply_to_pencil(&self, p: &Pencil) -> Result<Pencil> {
        let moved = apply_bc(p, &self.b, &self.c)?;
        apply_alice(&moved, &MoebiusMap::from_operator(&self.a)?)
    }

    /// Exchange the roles of the second and third party.
    pub fn transposed(&self) -> TransformWitness {
        TransformWitness {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
        }
    }
}

/// `(A ⊗ B ⊗ C) src = κ · dst` for some non-zero scalar κ, decided exactly.
pub fn verify_witness(src: &StateTensor, w: &TransformWitness, dst: &StateTensor) -> bool {
    if w.src_shape() != (src.m(), src.n()) || w.dst_shape() != (dst.m(), dst.n()) {
        return false;
    }
    let Ok(img) = src.apply_local(&w.a, &w.b, &w.c) else {
        return false;
    };
    let Some((a, b, c, v)) = dst.nonzero().into_iter().next() else {
        return false;
    };
    let kappa = img.amplitude(a, b, c) / &v;
    if kappa.is_zero() {
        return false;
    }
    (0..2).all(|x| {
        (0..dst.m()).all(|y| (0..dst.n()).all(|z| *img.amplitude(x, y, z) == &kappa * dst.amplitude(x, y, z)))
    })
}

/// Coefficients a_0..a_{m−1} with t^m + Σ a_k t^k = Π (t − x_i).
pub fn companion_coeffs(xs: &[GaussianRational]) -> Vec<GaussianRational> {
    let p = xs
        .iter()
        .fold(Poly::one(), |acc, x| acc.mul(&Poly::linear(-x, GaussianRational::one())));
    (0..xs.len()).map(|k| p.coeff(k)).collect()
}

/// `L_m` with its last column added to column k with coefficient −a_k.
pub fn companion_pencil(a: &[GaussianRational]) -> Pencil {
    let m = a.len();
    let spec = EliminationSpec::new(Axis::Column, m, a.iter().map(|x| -x).collect());
    eliminate(&l_block(m), &spec).unwrap()
}

fn require_distinct(xs: &[GaussianRational]) -> Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if xs[..i].contains(x) {
            return Err(Error::DuplicateEigenvalues);
        }
    }
    Ok(())
}

/// Rows (1, x_i, …, x_i^{m−1}).
pub fn vandermonde(xs: &[GaussianRational]) -> Matrix {
    let m = xs.len();
    Matrix::from_rows(xs.iter().map(|x| (0..m).map(|k| x.pow(k as u32)).collect()).collect())
}

/// From the `L_m` state to the diagonal state with eigenvalues `xs`.
///
/// Claire eliminates the last column with the companion coefficients; the Vandermonde
/// matrix V then diagonalizes the companion pencil, so B = (Vᵀ)⁻¹ and C = V·E.
pub fn lm_to_distinct(xs: &[GaussianRational]) -> Result<TransformWitness> {
    require_distinct(xs)?;
    let m = xs.len();
    if m == 0 {
        return Err(Error::InvalidStructure("need at least one eigenvalue".into()));
    }
    let a = companion_coeffs(xs);
    let spec = EliminationSpec::new(Axis::Column, m, a.iter().map(|x| -x).collect());
    let e = elimination_matrix(&spec, m + 1)?;
    let v = vandermonde(xs);
    let b = v.transpose().inverse().ok_or(Error::DuplicateEigenvalues)?;
    Ok(TransformWitness::from_bc(b, v.mul(&e)))
}

/// From the diagonal (m+1)-state with eigenvalues `xs` to the `L_m` state.
///
/// Bob adds the first row to all others with coefficient one and drops it; the result has
/// D_m = 1 and is brought to `L_m` by an equivalence witness.
pub fn distinct_to_lm(xs: &[GaussianRational]) -> Result<TransformWitness> {
    require_distinct(xs)?;
    if xs.len() < 2 {
        return Err(Error::InvalidStructure("need at least two eigenvalues".into()));
    }
    let m = xs.len() - 1;
    let spec = EliminationSpec::new(Axis::Row, 0, vec![GaussianRational::one(); m]);
    let e = elimination_matrix(&spec, m + 1)?;
    let diag = crate::pencil::pencil_from_state(&crate::slocc::diagonal_state(xs));
    let reduced = eliminate(&diag, &spec)?;
    let (b, c) = equivalence_witness(&reduced, &l_block(m))
        .ok_or_else(|| Error::InvalidStructure("eliminated pencil is not L_m".into()))?;
    Ok(TransformWitness::from_bc(b.mul(&e), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gr;
    use crate::kcf::{assemble_kcf, m_block, KroneckerStructure};
    use crate::pencil::{pencil_from_state, state_from_pencil};

    #[test]
    fn claire_example_column_merge() {
        let p = l_block(2).direct_sum(&m_block(1, &gr(0)));
        let spec = EliminationSpec::new(Axis::Column, 3, vec![gr(0), gr(0), gr(1)]);
        let e = elimination_matrix(&spec, 4).unwrap();
        assert_eq!(
            e.transpose(),
            Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1]])
        );
        assert_eq!(eliminate(&p, &spec).unwrap(), m_block(3, &gr(0)));
        assert_eq!(apply_bc(&p, &Matrix::identity(3), &e).unwrap(), m_block(3, &gr(0)));
    }

    #[test]
    fn row_elimination_matches_matrix() {
        let p = Pencil::from_int_entries(&[&[(1, 0), (0, 1)], &[(2, 1), (1, 1)], &[(0, 3), (1, 0)]]);
        let spec = EliminationSpec::new(Axis::Row, 1, vec![gr(2), gr(-1)]);
        let e = elimination_matrix(&spec, 3).unwrap();
        assert_eq!(eliminate(&p, &spec).unwrap(), apply_bc(&p, &e, &Matrix::identity(2)).unwrap());
    }

    #[test]
    fn companion_small() {
        assert_eq!(companion_coeffs(&[gr(1), gr(2)]), vec![gr(2), gr(-3)]);
        assert_eq!(companion_coeffs(&[gr(0), gr(0), gr(0)]), vec![gr(0), gr(0), gr(0)]);
    }

    #[test]
    fn vandermonde_witness() {
        let xs = [gr(0), gr(1), gr(2), gr(3)];
        let w = lm_to_distinct(&xs).unwrap();
        let src = state_from_pencil(&l_block(4));
        let dst = crate::slocc::diagonal_state(&xs);
        assert!(verify_witness(&src, &w, &dst));
        let single = lm_to_distinct(&[gr(5)]).unwrap();
        assert!(verify_witness(&state_from_pencil(&l_block(1)), &single, &crate::slocc::diagonal_state(&[gr(5)])));
        assert_eq!(lm_to_distinct(&[gr(1), gr(1)]), Err(Error::DuplicateEigenvalues));
    }

    #[test]
    fn row_merge_witness() {
        let xs = [gr(0), gr(1), gr(2)];
        let w = distinct_to_lm(&xs).unwrap();
        let src = crate::slocc::diagonal_state(&xs);
        let dst = state_from_pencil(&assemble_kcf(&KroneckerStructure::right_only(&[2])));
        assert!(verify_witness(&src, &w, &dst));
        assert_eq!(pencil_from_state(&dst), l_block(2));
    }

    #[test]
    fn corrupted_witness_fails() {
        let xs = [gr(0), gr(1), gr(2)];
        let mut w = lm_to_distinct(&xs).unwrap();
        let src = state_from_pencil(&l_block(3));
        let dst = crate::slocc::diagonal_state(&xs);
        assert!(verify_witness(&src, &w, &dst));
        w.c[(0, 0)] = &w.c[(0, 0)] + &gr(1);
        assert!(!verify_witness(&src, &w, &dst));
    }
}
