//! Common-resource reports for 2×m×m targets.

use serde::Serialize;

use super::{enumerate_skeletons, obstruction_check, reach, verify_verdict, Obstruction, ReachVerdict};
use crate::error::{Error, Result};
use crate::exact::{gr, Eigenvalue};
use crate::kcf::KroneckerStructure;
use crate::transform::{plan_consumption, SearchConfig};

#[derive(Clone, Debug, Serialize)]
pub struct CoverageCell {
    pub src: String,
    pub dst: String,
    #[serde(flatten)]
    pub verdict: ReachVerdict,
    /// The witness re-verified against both representatives.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationRow {
    pub src: String,
    pub eliminated: bool,
    /// Targets with the predicate that fired against them.
    pub against: Vec<(String, Obstruction)>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResourceReport {
    pub m: usize,
    pub resource: String,
    pub resource_dims: (usize, usize),
    /// (a) the resource against every 2×m×m class.
    pub coverage: Vec<CoverageCell>,
    /// Whether the block construction refuses the m·M¹(x) target. Only meaningful when
    /// the resource contains L₂, so `None` for m = 3.
    pub exception_refused: Option<bool>,
    /// (b) candidates of width 2m−3, each with one obstructed 2×m×m target.
    pub narrow_candidates: Vec<EliminationRow>,
    /// (c) candidates of width 2m−1 against the targets without eigenvalues.
    pub wide_candidates: Vec<EliminationRow>,
    /// (d) m·L₁ against every 2×m×m class.
    pub teleportation: Vec<CoverageCell>,
}

impl ResourceReport {
    pub fn covered(&self) -> usize {
        self.coverage.iter().filter(|c| c.verdict.is_yes() && c.verified).count()
    }
}

/// (m−3)L₁ ⊕ L₂ ⊕ M¹(0) for m ≥ 4, and 2L₁ ⊕ M¹(0) for m = 3.
pub fn resource_structure(m: usize) -> Result<KroneckerStructure> {
    let m0 = vec![(Eigenvalue::finite(0), vec![1])];
    match m {
        3 => KroneckerStructure::new(0, 0, vec![1, 1], vec![], m0),
        4.. => {
            let mut eps = vec![1; m - 3];
            eps.push(2);
            KroneckerStructure::new(0, 0, eps, vec![], m0)
        }
        _ => Err(Error::ScopeViolation(format!("resource needs m >= 3, got {m}"))),
    }
}

fn coverage(src: &KroneckerStructure, m: usize, cfg: SearchConfig) -> Result<Vec<CoverageCell>> {
    let mut out = Vec::new();
    for sk in enumerate_skeletons(m, m)? {
        let dst = sk.instantiate();
        let verdict = reach(src, &dst, cfg);
        let verified = verdict.is_yes() && verify_verdict(&verdict, src, &dst);
        out.push(CoverageCell {
            src: src.block_string(),
            dst: sk.name(),
            verdict,
            verified,
        });
    }
    Ok(out)
}

/// Sections (a) to (d) for 3 ≤ m ≤ 6.
pub fn resource_report(m: usize, cfg: SearchConfig) -> Result<ResourceReport> {
    if !(3..=6).contains(&m) {
        return Err(Error::ScopeViolation(format!("resource reports cover 3 <= m <= 6, got {m}")));
    }
    let resource = resource_structure(m)?;
    let cov = coverage(&resource, m, cfg)?;
    let all_equal = KroneckerStructure::new(0, 0, vec![], vec![], vec![(Eigenvalue::Finite(gr(2)), vec![1; m])])?;
    let exception_refused = resource
        .right_indices
        .contains(&2)
        .then(|| matches!(plan_consumption(&resource, &all_equal), Err(Error::InsufficientBlocks(_))));

    let targets: Vec<(String, KroneckerStructure)> =
        enumerate_skeletons(m, m)?.iter().map(|s| (s.name(), s.instantiate())).collect();
    let mut narrow = Vec::new();
    if 2 * m - 3 > m {
        for sk in enumerate_skeletons(m, 2 * m - 3)? {
            let src = sk.instantiate();
            let hit = targets
                .iter()
                .find_map(|(name, dst)| obstruction_check(&src, dst).ok().flatten().map(|ob| (name.clone(), ob)));
            narrow.push(EliminationRow {
                src: sk.name(),
                eliminated: hit.is_some(),
                against: hit.into_iter().collect(),
                note: None,
            });
        }
    }

    let mut all_l = Vec::new();
    for n in m + 1..2 * m - 1 {
        for sk in enumerate_skeletons(m, n)? {
            if sk.eigen.is_empty() && sk.left_indices.is_empty() {
                all_l.push((sk.name(), sk.instantiate()));
            }
        }
    }
    let mut wide = Vec::new();
    for sk in enumerate_skeletons(m, 2 * m - 1)? {
        if sk.eigen.is_empty() {
            wide.push(EliminationRow {
                src: sk.name(),
                eliminated: false,
                against: vec![],
                note: Some("no predicate applies; nonexistence for this pencil rests on a separate argument not reproduced here".into()),
            });
            continue;
        }
        let src = sk.instantiate();
        let against: Vec<(String, Obstruction)> = all_l
            .iter()
            .filter_map(|(name, dst)| obstruction_check(&src, dst).ok().flatten().map(|ob| (name.clone(), ob)))
            .collect();
        wide.push(EliminationRow {
            src: sk.name(),
            eliminated: !all_l.is_empty() && against.len() == all_l.len(),
            against,
            note: None,
        });
    }

    let tele = KroneckerStructure::right_only(&vec![1; m]);
    Ok(ResourceReport {
        m,
        resource: resource.block_string(),
        resource_dims: resource.dims(),
        coverage: cov,
        exception_refused,
        narrow_candidates: narrow,
        wide_candidates: wide,
        teleportation: coverage(&tele, m, cfg)?,
    })
}
