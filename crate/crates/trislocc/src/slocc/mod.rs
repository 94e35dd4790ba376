//! SLOCC classes of 2×m×n states: labels, equivalence through Möbius matching of
//! eigenvalues, and the generic classes.

mod moebius;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Eigenvalue, GaussianRational};
use crate::kcf::{assemble_kcf, kronecker_structure, KroneckerStructure, SizeSignature};
use crate::pencil::{local_ranks, pencil_from_state, state_from_pencil, StateTensor};

pub use moebius::{moebius_between, moebius_through, three_point_map};

/// Class label: Kronecker data with eigenvalues normalized modulo fractional linear maps.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SloccLabel {
    pub m: usize,
    pub n: usize,
    /// The structure with canonicalized eigenvalues.
    #[serde(flatten)]
    pub structure: KroneckerStructure,
    pub signature_multiset: Vec<SignatureCount>,
    /// Canonical eigenvalues in structure order.
    pub canonical_eigen: Vec<String>,
    /// True when more than three distinct eigenvalues leave free parameters in the label.
    pub parameterized: bool,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SignatureCount {
    pub sig: SizeSignature,
    pub count: usize,
}

impl SloccLabel {
    pub fn right_indices(&self) -> &[usize] {
        &self.structure.right_indices
    }

    pub fn left_indices(&self) -> &[usize] {
        &self.structure.left_indices
    }
}

/// Local ranks are (2, m, n) and n ≤ 2m.
pub fn full_entanglement_check(s: &StateTensor) -> bool {
    let (m, n) = (s.m(), s.n());
    local_ranks(s) == (2, m, n) && n <= 2 * m
}

fn require_full(s: &StateTensor) -> Result<()> {
    if full_entanglement_check(s) {
        return Ok(());
    }
    let (a, b, c) = local_ranks(s);
    Err(Error::NotFullyEntangled {
        ranks: (a, b, c),
        m: s.m(),
        n: s.n(),
    })
}

fn sort_key(e: &(Eigenvalue, SizeSignature)) -> (std::cmp::Reverse<usize>, std::cmp::Reverse<SizeSignature>) {
    (std::cmp::Reverse(e.1.iter().sum()), std::cmp::Reverse(e.1.clone()))
}

/// Normalize eigenvalues: the three leading eigenvalues (by total size, then signature) go
/// to 0, 1 and ∞. Ties are broken by trying every admissible choice and keeping the
/// smallest result.
pub fn canonical_eigen(eigen: &[(Eigenvalue, SizeSignature)]) -> Vec<(Eigenvalue, SizeSignature)> {
    let k = eigen.len();
    if k == 0 {
        return Vec::new();
    }
    let mut sorted = eigen.to_vec();
    sorted.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)).then_with(|| a.0.cmp(&b.0)));
    let lead = k.min(3);
    let keys: Vec<_> = sorted[..lead].iter().map(sort_key).collect();
    let targets = [Eigenvalue::finite(0), Eigenvalue::finite(1), Eigenvalue::Infinite];
    let mut best: Option<Vec<(Eigenvalue, SizeSignature)>> = None;
    let mut pick = Vec::with_capacity(lead);
    choose(eigen, &keys, &mut pick, &mut |idx: &[usize]| {
        let src: Vec<Eigenvalue> = idx.iter().map(|&i| eigen[i].0.clone()).collect();
        let t = moebius_through(&src, &targets[..lead]).expect("distinct eigenvalues");
        let mut img: Vec<(Eigenvalue, SizeSignature)> =
            eigen.iter().map(|(x, s)| (t.map_eigenvalue(x), s.clone())).collect();
        img.sort_by(|a, b| a.0.cmp(&b.0));
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap()
}

fn choose(
    eigen: &[(Eigenvalue, SizeSignature)],
    keys: &[(std::cmp::Reverse<usize>, std::cmp::Reverse<SizeSignature>)],
    pick: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == keys.len() {
        visit(pick);
        return;
    }
    for i in 0..eigen.len() {
        if !pick.contains(&i) && sort_key(&eigen[i]) == keys[pick.len()] {
            pick.push(i);
            choose(eigen, keys, pick, visit);
            pick.pop();
        }
    }
}

/// Label of a structure of the given shape.
pub fn label_of_structure(ks: &KroneckerStructure) -> SloccLabel {
    let (m, n) = ks.dims();
    let eigen = canonical_eigen(&ks.eigen);
    let mut counts: BTreeMap<SizeSignature, usize> = BTreeMap::new();
    for (_, s) in &eigen {
        *counts.entry(s.clone()).or_default() += 1;
    }
    let mut structure = ks.clone();
    structure.eigen = eigen;
    SloccLabel {
        m,
        n,
        canonical_eigen: structure.eigen.iter().map(|(x, _)| x.to_json_string()).collect(),
        parameterized: structure.eigen.len() > 3,
        signature_multiset: counts.into_iter().map(|(sig, count)| SignatureCount { sig, count }).collect(),
        structure,
    }
}

pub fn slocc_label(s: &StateTensor) -> Result<SloccLabel> {
    require_full(s)?;
    let ks = kronecker_structure(&pencil_from_state(s))?;
    Ok(label_of_structure(&ks))
}

/// Same shape, same minimal indices and a fractional linear map matching the
/// signature-labelled eigenvalues.
pub fn structures_slocc_equivalent(a: &KroneckerStructure, b: &KroneckerStructure) -> bool {
    a.dims() == b.dims()
        && a.h == b.h
        && a.g == b.g
        && a.right_indices == b.right_indices
        && a.left_indices == b.left_indices
        && moebius_between(&a.eigen, &b.eigen).is_some()
}

pub fn slocc_equivalent(s1: &StateTensor, s2: &StateTensor) -> Result<bool> {
    require_full(s1)?;
    require_full(s2)?;
    if (s1.m(), s1.n()) != (s2.m(), s2.n()) {
        return Ok(false);
    }
    let a = kronecker_structure(&pencil_from_state(s1))?;
    let b = kronecker_structure(&pencil_from_state(s2))?;
    Ok(structures_slocc_equivalent(&a, &b))
}

/// Generic class: m distinct simple eigenvalues 0..m−1 when n = m, balanced right
/// indices otherwise.
pub fn generic_structure(m: usize, n: usize) -> Result<KroneckerStructure> {
    if m == 0 || n < m || n > 2 * m {
        return Err(Error::ScopeViolation(format!("generic structure needs 1 <= m <= n <= 2m, got ({m}, {n})")));
    }
    if n == m {
        let eigen = (0..m as i64).map(|x| (Eigenvalue::finite(x), vec![1])).collect();
        return KroneckerStructure::new(0, 0, vec![], vec![], eigen);
    }
    let d = n - m;
    let (lo, r) = (m / d, m % d);
    let mut eps = vec![lo; d - r];
    eps.extend(std::iter::repeat_n(lo + 1, r));
    KroneckerStructure::new(0, 0, eps, vec![], vec![])
}

/// Whether the state lies in a generic class of its dimensions.
pub fn is_generic(s: &StateTensor) -> Result<bool> {
    require_full(s)?;
    let ks = kronecker_structure(&pencil_from_state(s))?;
    let (m, n) = (s.m(), s.n());
    if n < m {
        let swapped = KroneckerStructure::new(ks.g, ks.h, ks.left_indices.clone(), ks.right_indices.clone(), ks.eigen.clone())?;
        return Ok(is_generic_structure(&swapped, n, m));
    }
    Ok(is_generic_structure(&ks, m, n))
}

fn is_generic_structure(ks: &KroneckerStructure, m: usize, n: usize) -> bool {
    if m == n {
        ks.right_indices.is_empty()
            && ks.left_indices.is_empty()
            && ks.eigen.len() == m
            && ks.eigen.iter().all(|(_, s)| s == &vec![1])
    } else {
        generic_structure(m, n).is_ok_and(|g| &g == ks)
    }
}

/// Representative state of a class: the canonical block pencil read as a state.
pub fn representative_state(ks: &KroneckerStructure) -> StateTensor {
    state_from_pencil(&assemble_kcf(ks))
}

/// The state |0⟩(D⊗1)|Φ⁺⟩ + |1⟩|Φ⁺⟩ with D = diag(xs).
pub fn diagonal_state(xs: &[GaussianRational]) -> StateTensor {
    let eigen = xs.iter().map(|x| (Eigenvalue::Finite(x.clone()), vec![1])).collect::<Vec<_>>();
    let mut p = crate::pencil::Pencil::zeros(0, 0);
    for (x, _) in &eigen {
        p = p.direct_sum(&crate::kcf::eigen_block(1, x));
    }
    state_from_pencil(&p)
}
