//! Single-step reachability verdicts.

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{obstruction_check, verify_obstruction, Obstruction, StructureSkeleton};
use crate::exact::{Eigenvalue, GaussianRational};
use crate::kcf::{assemble_kcf, equivalence_witness, kronecker_structure, KroneckerStructure};
use crate::pencil::{apply_alice, state_from_pencil, MoebiusMap, Pencil};
use crate::slocc::{moebius_between, structures_slocc_equivalent};
use crate::transform::{
    consume_blocks, distinct_to_lm, generic_step_witness, lm_to_distinct, plan_consumption, redistribution_start,
    search_column_step, search_row_step, verify_witness, ResourcePools, SearchConfig, SearchOutcome, TransformWitness,
};

#[derive(Clone, Debug)]
pub enum ReachVerdict {
    /// Witnesses applied in order map the source representative to the target representative.
    Yes { method: String, chain: Vec<TransformWitness> },
    No(Obstruction),
    Unknown { note: String },
}

impl ReachVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ReachVerdict::Yes { .. } => "yes",
            ReachVerdict::No(_) => "no",
            ReachVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, ReachVerdict::Yes { .. })
    }

    /// Product of the chain.
    pub fn end_to_end(&self) -> Option<TransformWitness> {
        match self {
            ReachVerdict::Yes { chain, .. } => {
                let (first, rest) = chain.split_first()?;
                Some(rest.iter().fold(first.clone(), |acc, w| acc.then(w)))
            }
            _ => None,
        }
    }
}

impl Serialize for ReachVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            verdict: &'static str,
            method: Option<&'a str>,
            witness: Option<TransformWitness>,
            obstruction: Option<&'a Obstruction>,
            note: Option<&'a str>,
        }
        let out = match self {
            ReachVerdict::Yes { method, .. } => Out {
                verdict: "yes",
                method: Some(method),
                witness: self.end_to_end(),
                obstruction: None,
                note: None,
            },
            ReachVerdict::No(ob) => Out {
                verdict: "no",
                method: None,
                witness: None,
                obstruction: Some(ob),
                note: None,
            },
            ReachVerdict::Unknown { note } => Out {
                verdict: "unknown",
                method: None,
                witness: None,
                obstruction: None,
                note: Some(note),
            },
        };
        out.serialize(s)
    }
}

/// Compose verdicts along a path. Unknown absorbs everything; a No step does not certify
/// anything about the path.
pub fn chain_verdicts(steps: &[ReachVerdict]) -> ReachVerdict {
    let mut chain = Vec::new();
    let mut methods = Vec::new();
    for v in steps {
        match v {
            ReachVerdict::Yes { method, chain: c } => {
                chain.extend(c.iter().cloned());
                methods.push(method.clone());
            }
            ReachVerdict::No(ob) => {
                return ReachVerdict::Unknown {
                    note: format!("a step of the path is obstructed ({})", ob.id.as_str()),
                }
            }
            ReachVerdict::Unknown { note } => return ReachVerdict::Unknown { note: note.clone() },
        }
    }
    ReachVerdict::Yes { method: methods.join(" then "), chain }
}

/// Check a verdict against the representatives of `src` and `dst`.
pub fn verify_verdict(v: &ReachVerdict, src: &KroneckerStructure, dst: &KroneckerStructure) -> bool {
    match v {
        ReachVerdict::Yes { .. } => v.end_to_end().is_some_and(|w| {
            verify_witness(
                &state_from_pencil(&assemble_kcf(src)),
                &w,
                &state_from_pencil(&assemble_kcf(dst)),
            )
        }),
        ReachVerdict::No(ob) => verify_obstruction(ob, src, dst),
        ReachVerdict::Unknown { .. } => true,
    }
}

/// Witness carrying `p` to the representative of `dst`, if they are SLOCC equivalent.
fn conclude(p: &Pencil, dst: &KroneckerStructure) -> Option<TransformWitness> {
    let ks = kronecker_structure(p).ok()?;
    if !structures_slocc_equivalent(&ks, dst) {
        return None;
    }
    let t = moebius_between(&ks.eigen, &dst.eigen)?;
    let moved = apply_alice(p, &t).ok()?;
    let (b, c) = equivalence_witness(&moved, &assemble_kcf(dst))?;
    Some(TransformWitness { a: t.operator(), b, c })
}

fn yes(method: &str, src: &KroneckerStructure, w: TransformWitness, dst: &KroneckerStructure) -> Option<ReachVerdict> {
    let reached = w.apply_to_pencil(&assemble_kcf(src)).ok()?;
    let last = conclude(&reached, dst)?;
    Some(ReachVerdict::Yes {
        method: method.to_string(),
        chain: vec![w, last],
    })
}

/// A map making every eigenvalue finite, and the finite images.
fn finite_chart(eigs: &[Eigenvalue]) -> (MoebiusMap, Vec<GaussianRational>) {
    if eigs.iter().all(|x| !x.is_infinite()) {
        let xs = eigs
            .iter()
            .map(|x| match x {
                Eigenvalue::Finite(v) => v.clone(),
                Eigenvalue::Infinite => unreachable!(),
            })
            .collect();
        return (MoebiusMap::identity(), xs);
    }
    let w = (0..).map(Eigenvalue::finite).find(|w| !eigs.contains(w)).unwrap();
    let Eigenvalue::Finite(w) = w else { unreachable!() };
    // z ↦ 1/(z − w)
    let t = MoebiusMap::new(GaussianRational::zero(), GaussianRational::one(), GaussianRational::one(), -&w).unwrap();
    let xs = eigs
        .iter()
        .map(|x| match t.map_eigenvalue(x) {
            Eigenvalue::Finite(v) => v,
            Eigenvalue::Infinite => unreachable!("w is not an eigenvalue"),
        })
        .collect();
    (t, xs)
}

fn simple_distinct(ks: &KroneckerStructure) -> bool {
    ks.right_indices.is_empty() && ks.left_indices.is_empty() && ks.eigen.iter().all(|(_, s)| s == &vec![1])
}

fn try_vandermonde(src: &KroneckerStructure, dst: &KroneckerStructure) -> Option<ReachVerdict> {
    let m = src.dims().0;
    if src.right_indices != vec![m] || !src.left_indices.is_empty() || src.has_eigenvalues() {
        return None;
    }
    if dst.dims() != (m, m) || !simple_distinct(dst) || dst.eigen.len() != m {
        return None;
    }
    let (_, xs) = finite_chart(&dst.eigenvalues());
    yes("companion elimination", src, lm_to_distinct(&xs).ok()?, dst)
}

fn try_row_merge(src: &KroneckerStructure, dst: &KroneckerStructure) -> Option<ReachVerdict> {
    let k = src.dims().0;
    if k < 2 || src.dims() != (k, k) || !simple_distinct(src) || src.eigen.len() != k {
        return None;
    }
    if dst.right_indices != vec![k - 1] || dst.dims() != (k - 1, k) {
        return None;
    }
    let (t, xs) = finite_chart(&src.eigenvalues());
    // First Alice moves every eigenvalue to a finite point, then Bob merges rows.
    let moved = apply_alice(&assemble_kcf(src), &t).ok()?;
    let chart = KroneckerStructure::new(0, 0, vec![], vec![], xs.iter().map(|x| (Eigenvalue::Finite(x.clone()), vec![1])).collect()).ok()?;
    let (b0, c0) = equivalence_witness(&moved, &assemble_kcf(&chart))?;
    let first = TransformWitness { a: t.operator(), b: b0, c: c0 };
    let mut sorted = chart.eigenvalues();
    sorted.sort();
    let xs: Vec<GaussianRational> = sorted
        .into_iter()
        .map(|x| match x {
            Eigenvalue::Finite(v) => v,
            Eigenvalue::Infinite => unreachable!(),
        })
        .collect();
    let second = distinct_to_lm(&xs).ok()?;
    let w = first.then(&second);
    yes("row merge of distinct eigenvalues", src, w, dst)
}

fn try_generic_step(src: &KroneckerStructure, dst: &KroneckerStructure) -> Option<ReachVerdict> {
    let only_l = |k: &KroneckerStructure| k.h == 0 && k.g == 0 && k.left_indices.is_empty() && !k.has_eigenvalues();
    if !only_l(src) || !only_l(dst) || src.dims().0 != dst.dims().0 {
        return None;
    }
    redistribution_start(&src.right_indices, &dst.right_indices)?;
    let w = generic_step_witness(&src.right_indices, &dst.right_indices).ok()?;
    Some(ReachVerdict::Yes {
        method: "block redistribution".into(),
        chain: vec![w],
    })
}

fn try_blocks(src: &KroneckerStructure, dst: &KroneckerStructure) -> Option<ReachVerdict> {
    ResourcePools::of(src)?;
    let script = plan_consumption(src, dst).ok()?;
    let (_, w) = consume_blocks(&script, src).ok()?;
    yes("block consumption", src, w, dst)
}

fn search(src: &KroneckerStructure, dst: &KroneckerStructure, cfg: SearchConfig) -> Option<Result<ReachVerdict, String>> {
    let (m, n) = src.dims();
    let (m2, n2) = dst.dims();
    let p = assemble_kcf(src);
    let outcome = if m2 == m && n2 + 1 == n {
        search_column_step(&p, dst, cfg)
    } else if n2 == n && m2 + 1 == m {
        search_row_step(&p, dst, cfg)
    } else {
        return None;
    };
    Some(match outcome {
        SearchOutcome::Found { witness, .. } => Ok(ReachVerdict::Yes {
            method: "randomized elimination search".into(),
            chain: vec![witness],
        }),
        SearchOutcome::Exhausted { tried, complete } => Err(format!(
            "no witness among {tried} candidate eliminations{}",
            if complete { " (coefficient grid exhausted)" } else { "" }
        )),
    })
}

/// Known negative claims without an implemented predicate.
fn known_exception(src: &KroneckerStructure, dst: &KroneckerStructure) -> Option<&'static str> {
    let l2_m0 = KroneckerStructure::new(0, 0, vec![2], vec![], vec![(Eigenvalue::finite(0), vec![1])]).unwrap();
    let l1_lt1 = KroneckerStructure::new(0, 0, vec![1], vec![1], vec![]).unwrap();
    (src == &l2_m0 && dst == &l1_lt1)
        .then_some("known exception: L2+M1(0) is stated to reach every 3x3 pencil except L1+LT1; no certified predicate is implemented")
}

/// Verdict for one transition: constructive builders, then obstructions, then search.
pub fn reach(src: &KroneckerStructure, dst: &KroneckerStructure, cfg: SearchConfig) -> ReachVerdict {
    if src.dims() == dst.dims() && structures_slocc_equivalent(src, dst) {
        if let Some(w) = conclude(&assemble_kcf(src), dst) {
            return ReachVerdict::Yes {
                method: "invertible".into(),
                chain: vec![w],
            };
        }
    }
    let builders: [fn(&KroneckerStructure, &KroneckerStructure) -> Option<ReachVerdict>; 4] =
        [try_vandermonde, try_row_merge, try_generic_step, try_blocks];
    for b in builders {
        if let Some(v) = b(src, dst) {
            return v;
        }
    }
    if let Ok(Some(ob)) = obstruction_check(src, dst) {
        return ReachVerdict::No(ob);
    }
    let searched = search(src, dst, cfg);
    let mut note = match searched {
        Some(Ok(v)) => return v,
        Some(Err(note)) => note,
        None => "no single-step search for this dimension change".to_string(),
    };
    if let Some(remark) = known_exception(src, dst) {
        note = format!("{note}; {remark}");
    }
    ReachVerdict::Unknown { note }
}

/// [`reach`] on instantiated skeletons.
pub fn reach_skeletons(src: &StructureSkeleton, dst: &StructureSkeleton, cfg: SearchConfig) -> ReachVerdict {
    reach(&src.instantiate(), &dst.instantiate(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slocc::generic_structure;

    #[test]
    fn generic_chain_steps() {
        let cfg = SearchConfig::default();
        for m in 3..=4 {
            for n in (m + 1..=2 * m).rev() {
                let src = generic_structure(m, n).unwrap();
                let dst = generic_structure(m, n - 1).unwrap();
                let v = reach(&src, &dst, cfg);
                assert!(v.is_yes(), "({m},{n}): {v:?}");
                assert!(verify_verdict(&v, &src, &dst));
            }
        }
    }

    #[test]
    fn row_merge_with_infinite_eigenvalue() {
        let e = Eigenvalue::finite;
        let src = KroneckerStructure::new(0, 0, vec![], vec![], vec![(e(0), vec![1]), (e(1), vec![1]), (Eigenvalue::Infinite, vec![1])]).unwrap();
        let dst = KroneckerStructure::right_only(&[2]);
        let v = reach(&src, &dst, SearchConfig::default());
        assert!(v.is_yes() && verify_verdict(&v, &src, &dst), "{v:?}");
    }

    #[test]
    fn obstructed_and_unknown() {
        let e = Eigenvalue::finite;
        let src = KroneckerStructure::new(0, 0, vec![1], vec![], vec![(e(0), vec![2]), (e(1), vec![1])]).unwrap();
        let dst = KroneckerStructure::new(0, 0, vec![], vec![], vec![(e(0), vec![4])]).unwrap();
        let v = reach(&src, &dst, SearchConfig::default());
        assert_eq!(v.kind(), "no");
        assert!(verify_verdict(&v, &src, &dst));
        let l2m0 = KroneckerStructure::new(0, 0, vec![2], vec![], vec![(e(0), vec![1])]).unwrap();
        let l1lt1 = KroneckerStructure::new(0, 0, vec![1], vec![1], vec![]).unwrap();
        let v = reach(&l2m0, &l1lt1, SearchConfig::default());
        let ReachVerdict::Unknown { note } = v else { panic!("{v:?}") };
        assert!(note.contains("known exception"));
    }
}
