//! Divisibility obstructions for column-deletion chains on the third party.
//!
//! Every column of a reachable pencil is a combination of source columns (after Alice's
//! fractional linear map). Each predicate pairs a property of the source with a
//! divisibility property that every reachable pencil of full row rank must have, and fires
//! when the target's determinantal divisors violate it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::BinaryForm;
use crate::kcf::KroneckerStructure;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ObstructionId {
    /// Source has an Lᵀ block, so every reachable D_m vanishes.
    #[serde(rename = "LT-rank")]
    LtRank,
    /// Two distinct source eigenvalues force two distinct roots of D_m.
    #[serde(rename = "two-eigenvalue divisibility")]
    TwoEigenvalue,
    /// An eigenvalue of algebraic multiplicity ≥ 2 forces a repeated root of D_m.
    #[serde(rename = "multiplicity divisibility")]
    Multiplicity,
    /// L_ε with ε ≥ 3, or L₂ ⊕ L₂, forces D_2 = 1 whenever D_m ≠ 0.
    #[serde(rename = "D2 unit")]
    RightIndexD2,
    /// Any source eigenvalue forces a root of D_m.
    #[serde(rename = "single-eigenvalue divisibility")]
    SingleEigenvalue,
}

impl ObstructionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObstructionId::LtRank => "LT-rank",
            ObstructionId::TwoEigenvalue => "two-eigenvalue divisibility",
            ObstructionId::Multiplicity => "multiplicity divisibility",
            ObstructionId::RightIndexD2 => "D2 unit",
            ObstructionId::SingleEigenvalue => "single-eigenvalue divisibility",
        }
    }
}

/// A fired predicate with the target data it was checked against.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Obstruction {
    pub id: ObstructionId,
    /// The source property that triggers the predicate.
    pub source_fact: String,
    /// D_m of the target (the zero form if the rank is below m).
    pub dst_dm: BinaryForm,
    pub dst_d2: BinaryForm,
    pub evidence: String,
}

/// D_k of a structure: product of the first k invariant polynomials, zero past the rank.
pub fn determinantal_divisor(ks: &KroneckerStructure, k: usize) -> BinaryForm {
    let es = ks.invariant_polynomials();
    if k > es.len() {
        return BinaryForm::zero();
    }
    es[..k].iter().fold(BinaryForm::one(), |acc, e| acc.mul(e))
}

/// Distinct linear factors and the largest multiplicity of a split, non-zero form.
fn root_profile(f: &BinaryForm) -> (usize, u32) {
    let fac = f.factor();
    let distinct = fac.roots.len() + usize::from(fac.mu_power > 0);
    let max = fac
        .roots
        .iter()
        .map(|r| r.1)
        .chain(std::iter::once(fac.mu_power as u32))
        .max()
        .unwrap_or(0);
    (distinct, max)
}

/// The first predicate that fires for `src` against `dst`.
///
/// Only the configuration the predicates are proven for is accepted: same number of rows
/// and strictly fewer columns in the target.
pub fn obstruction_check(src: &KroneckerStructure, dst: &KroneckerStructure) -> Result<Option<Obstruction>> {
    let (m, n) = src.dims();
    let (m2, n2) = dst.dims();
    if m != m2 || n2 >= n {
        return Err(Error::ScopeViolation(format!(
            "obstructions cover column deletions at fixed m; got ({m}, {n}) -> ({m2}, {n2})"
        )));
    }
    let dm = determinantal_divisor(dst, m);
    let d2 = determinantal_divisor(dst, 2.min(m));
    if dm.is_zero() {
        return Ok(None);
    }
    let (roots, max_mult) = root_profile(&dm);
    let make = |id: ObstructionId, source_fact: String, evidence: String| Obstruction {
        id,
        source_fact,
        dst_dm: dm.clone(),
        dst_d2: d2.clone(),
        evidence,
    };
    if let Some(&nu) = src.left_indices.first() {
        return Ok(Some(make(
            ObstructionId::LtRank,
            format!("source contains LT{nu}"),
            format!("D_{m} = {dm} is non-zero"),
        )));
    }
    if src.eigen.len() >= 2 && roots < 2 {
        return Ok(Some(make(
            ObstructionId::TwoEigenvalue,
            format!("source has {} distinct eigenvalues", src.eigen.len()),
            format!("D_{m} = {dm} has {roots} distinct linear factor(s)"),
        )));
    }
    if let Some((x, sig)) = src.eigen.iter().find(|(_, s)| s.iter().sum::<usize>() >= 2) {
        if max_mult < 2 {
            return Ok(Some(make(
                ObstructionId::Multiplicity,
                format!("source eigenvalue {x} has algebraic multiplicity {}", sig.iter().sum::<usize>()),
                format!("D_{m} = {dm} is square-free"),
            )));
        }
    }
    let big_l = src.right_indices.iter().find(|&&e| e >= 3);
    let two_l2 = src.right_indices.iter().filter(|&&e| e == 2).count() >= 2;
    if (big_l.is_some() || two_l2) && !d2.is_one() {
        let fact = match big_l {
            Some(e) => format!("source contains L{e}"),
            None => "source contains L2+L2".to_string(),
        };
        return Ok(Some(make(ObstructionId::RightIndexD2, fact, format!("D_{m} = {dm} and D_2 = {d2} != 1"))));
    }
    if let Some((x, _)) = src.eigen.first() {
        if dm.is_one() {
            return Ok(Some(make(
                ObstructionId::SingleEigenvalue,
                format!("source has eigenvalue {x}"),
                format!("D_{m} = 1"),
            )));
        }
    }
    Ok(None)
}

/// Re-derive the divisibility fact of an obstruction from the target structure.
pub fn verify_obstruction(ob: &Obstruction, src: &KroneckerStructure, dst: &KroneckerStructure) -> bool {
    let m = dst.dims().0;
    let dm = determinantal_divisor(dst, m);
    let d2 = determinantal_divisor(dst, 2.min(m));
    if dm != ob.dst_dm || d2 != ob.dst_d2 || dm.is_zero() {
        return false;
    }
    let (roots, max_mult) = root_profile(&dm);
    match ob.id {
        ObstructionId::LtRank => !src.left_indices.is_empty(),
        ObstructionId::TwoEigenvalue => src.eigen.len() >= 2 && roots < 2,
        ObstructionId::Multiplicity => src.eigen.iter().any(|(_, s)| s.iter().sum::<usize>() >= 2) && max_mult < 2,
        ObstructionId::RightIndexD2 => {
            (src.right_indices.iter().any(|&e| e >= 3) || src.right_indices.iter().filter(|&&e| e == 2).count() >= 2)
                && !d2.is_one()
        }
        ObstructionId::SingleEigenvalue => !src.eigen.is_empty() && dm.is_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Eigenvalue;

    fn ks(eps: &[usize], nu: &[usize], eigen: &[(i64, &[usize])]) -> KroneckerStructure {
        let e = eigen.iter().map(|&(x, s)| (Eigenvalue::finite(x), s.to_vec())).collect();
        KroneckerStructure::new(0, 0, eps.to_vec(), nu.to_vec(), e).unwrap()
    }

    #[test]
    fn lt_rank() {
        let src = ks(&[1, 1], &[1], &[]);
        let dst = ks(&[], &[], &[(0, &[1]), (1, &[1]), (2, &[1]), (3, &[1])]);
        let ob = obstruction_check(&src, &dst).unwrap().unwrap();
        assert_eq!(ob.id, ObstructionId::LtRank);
        assert!(verify_obstruction(&ob, &src, &dst));
    }

    #[test]
    fn two_eigenvalues_against_single_block() {
        let src = ks(&[1], &[], &[(0, &[2]), (1, &[1])]);
        let dst = ks(&[], &[], &[(0, &[4])]);
        assert_eq!(obstruction_check(&src, &dst).unwrap().unwrap().id, ObstructionId::TwoEigenvalue);
    }

    #[test]
    fn multiplicity_and_d2() {
        let src = ks(&[1], &[], &[(0, &[3])]);
        let dst = ks(&[], &[], &[(0, &[1]), (1, &[1]), (2, &[1]), (3, &[1])]);
        assert_eq!(obstruction_check(&src, &dst).unwrap().unwrap().id, ObstructionId::Multiplicity);
        let src = ks(&[4], &[], &[]);
        let dst = ks(&[], &[], &[(0, &[1, 1, 1]), (1, &[1])]);
        assert_eq!(obstruction_check(&src, &dst).unwrap().unwrap().id, ObstructionId::RightIndexD2);
    }

    #[test]
    fn silent_without_eigenvalues_and_scope() {
        let src = ks(&[1, 1, 1, 1], &[], &[]);
        let dst = ks(&[], &[], &[(0, &[1]), (1, &[1]), (2, &[1]), (3, &[1])]);
        assert_eq!(obstruction_check(&src, &dst).unwrap(), None);
        assert!(obstruction_check(&dst, &src).is_err());
    }
}
