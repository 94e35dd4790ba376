//! Seeded search for a single elimination step reaching a target class.
//!
//! Candidates are an eliminated index together with coefficients from a small pool. A
//! candidate succeeds when the eliminated pencil has the target minimal indices and its
//! eigenvalues can be matched to the target's by a fractional linear map; the witness is
//! then completed exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{elimination_matrix, eliminate, Axis, EliminationSpec, TransformWitness};
use crate::exact::{gc, GaussianRational};
use crate::kcf::{assemble_kcf, equivalence_witness, kronecker_structure, KroneckerStructure};
use crate::pencil::{apply_alice, Pencil};
use crate::slocc::{moebius_between, structures_slocc_equivalent};

/// Coefficients tried for each remaining line, as (re, im).
pub const COEFFICIENT_POOL: [(i64, i64); 7] = [(0, 0), (1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1)];

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    /// Maximum number of candidates examined.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, budget: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        spec: EliminationSpec,
        witness: TransformWitness,
    },
    /// Nothing found; `complete` is set when every candidate of the pool was examined.
    Exhausted { tried: usize, complete: bool },
}

fn pool(k: usize) -> GaussianRational {
    let (re, im) = COEFFICIENT_POOL[k];
    gc(re, im)
}

fn try_candidate(src: &Pencil, spec: &EliminationSpec, dst: &KroneckerStructure, target: &Pencil) -> Option<TransformWitness> {
    let e = eliminate(src, spec).ok()?;
    let ks = kronecker_structure(&e).ok()?;
    if !structures_slocc_equivalent(&ks, dst) {
        return None;
    }
    let t = moebius_between(&ks.eigen, &dst.eigen)?;
    let moved = apply_alice(&e, &t).ok()?;
    let (b, c2) = equivalence_witness(&moved, target)?;
    let c = c2.mul(&elimination_matrix(spec, src.n()).ok()?);
    Some(TransformWitness { a: t.operator(), b, c })
}

/// One column elimination followed by invertible local operators, from `src` to the
/// representative of `dst`.
pub fn search_column_step(src: &Pencil, dst: &KroneckerStructure, cfg: SearchConfig) -> SearchOutcome {
    let (m, n) = src.shape();
    if n < 2 || dst.dims() != (m, n - 1) {
        return SearchOutcome::Exhausted { tried: 0, complete: true };
    }
    let target = assemble_kcf(dst);
    let base = COEFFICIENT_POOL.len();
    let per = u32::try_from(n - 1).ok().and_then(|e| base.checked_pow(e));
    let total = per.and_then(|p| p.checked_mul(n));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let decode = |idx: usize, per: usize| -> EliminationSpec {
        let (i, mut rest) = (idx / per, idx % per);
        let coeffs = (0..n - 1)
            .map(|_| {
                let k = rest % base;
                rest /= base;
                pool(k)
            })
            .collect();
        EliminationSpec::new(Axis::Column, i, coeffs)
    };
    let mut tried = 0;
    match (per, total) {
        (Some(per), Some(total)) if total <= cfg.budget => {
            let mut order: Vec<usize> = (0..total).collect();
            order.shuffle(&mut rng);
            for idx in order {
                tried += 1;
                let spec = decode(idx, per);
                if let Some(witness) = try_candidate(src, &spec, dst, &target) {
                    return SearchOutcome::Found { spec, witness };
                }
            }
            SearchOutcome::Exhausted { tried, complete: true }
        }
        _ => {
            for _ in 0..cfg.budget {
                tried += 1;
                let i = rng.random_range(0..n);
                let coeffs = (0..n - 1).map(|_| pool(rng.random_range(0..base))).collect();
                let spec = EliminationSpec::new(Axis::Column, i, coeffs);
                if let Some(witness) = try_candidate(src, &spec, dst, &target) {
                    return SearchOutcome::Found { spec, witness };
                }
            }
            SearchOutcome::Exhausted { tried, complete: false }
        }
    }
}

/// Row version of [`search_column_step`], through transposition.
pub fn search_row_step(src: &Pencil, dst: &KroneckerStructure, cfg: SearchConfig) -> SearchOutcome {
    let Ok(dst_t) = KroneckerStructure::new(dst.g, dst.h, dst.left_indices.clone(), dst.right_indices.clone(), dst.eigen.clone())
    else {
        return SearchOutcome::Exhausted { tried: 0, complete: true };
    };
    match search_column_step(&src.transpose(), &dst_t, cfg) {
        SearchOutcome::Found { spec, witness } => SearchOutcome::Found {
            spec: EliminationSpec { axis: Axis::Row, ..spec },
            witness: witness.transposed(),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Eigenvalue;
    use crate::kcf::l_block;
    use crate::pencil::state_from_pencil;
    use crate::transform::verify_witness;

    #[test]
    fn finds_l2_from_two_l1() {
        let src = l_block(1).direct_sum(&l_block(1));
        let dst = KroneckerStructure::right_only(&[2]);
        let SearchOutcome::Found { witness, .. } = search_column_step(&src, &dst, SearchConfig::default()) else {
            panic!("search failed");
        };
        assert!(verify_witness(&state_from_pencil(&src), &witness, &state_from_pencil(&l_block(2))));
    }

    #[test]
    fn finds_distinct_eigenvalues_from_l3() {
        let src = l_block(3);
        let eigen = (0..3).map(|x| (Eigenvalue::finite(x), vec![1])).collect();
        let dst = KroneckerStructure::new(0, 0, vec![], vec![], eigen).unwrap();
        let cfg = SearchConfig { seed: 7, budget: 2_000 };
        let SearchOutcome::Found { witness, .. } = search_column_step(&src, &dst, cfg) else {
            panic!("search failed");
        };
        assert!(verify_witness(&state_from_pencil(&src), &witness, &state_from_pencil(&assemble_kcf(&dst))));
    }

    #[test]
    fn row_step_on_transposed_pair() {
        let src = l_block(1).direct_sum(&l_block(1)).transpose();
        let dst = KroneckerStructure::new(0, 0, vec![], vec![2], vec![]).unwrap();
        let SearchOutcome::Found { witness, .. } = search_row_step(&src, &dst, SearchConfig::default()) else {
            panic!("search failed");
        };
        assert!(verify_witness(&state_from_pencil(&src), &witness, &state_from_pencil(&assemble_kcf(&dst))));
    }
}
