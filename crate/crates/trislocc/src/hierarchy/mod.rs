//! Reachability between SLOCC classes of different dimensions: skeleton enumeration,
//! obstructions, verdicts, resource reports and DOT export.

mod graph;
mod obstruction;
mod reach;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gc, gr, Eigenvalue, GaussianRational};
use crate::kcf::{KroneckerStructure, SizeSignature};

pub use graph::{emit_graph, generic_chain, reach_matrix, GraphEdge, ReachMatrix};
pub use obstruction::{determinantal_divisor, obstruction_check, verify_obstruction, Obstruction, ObstructionId};
pub use reach::{chain_verdicts, reach, reach_skeletons, verify_verdict, ReachVerdict};
pub use report::{resource_report, resource_structure, CoverageCell, EliminationRow, ResourceReport};

/// Values substituted for free eigenvalue parameters, in order.
pub fn parameter_pool() -> [GaussianRational; 4] {
    [gr(2), gr(5), gr(-1), gc(1, 1)]
}

const PARAMETER_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// An eigenvalue position: a fixed value or a free parameter.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Concrete(Eigenvalue),
    Parameter(String),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Concrete(x) => write!(f, "{x}"),
            Slot::Parameter(p) => write!(f, "{p}"),
        }
    }
}

/// A class family: minimal indices and size signatures with eigenvalue slots. Distinct
/// slots stand for distinct eigenvalues.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct StructureSkeleton {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "eps")]
    pub right_indices: Vec<usize>,
    #[serde(rename = "nu")]
    pub left_indices: Vec<usize>,
    /// In slot order: 0, 1, ∞, then parameters.
    pub eigen: Vec<(Slot, SizeSignature)>,
}

impl StructureSkeleton {
    pub fn parameter_count(&self) -> usize {
        self.eigen.iter().filter(|(s, _)| matches!(s, Slot::Parameter(_))).count()
    }

    /// Parameters replaced by the values of [`parameter_pool`].
    pub fn instantiate(&self) -> KroneckerStructure {
        let pool = parameter_pool();
        let mut k = 0;
        let eigen = self
            .eigen
            .iter()
            .map(|(slot, sig)| {
                let x = match slot {
                    Slot::Concrete(x) => x.clone(),
                    Slot::Parameter(_) => {
                        k += 1;
                        Eigenvalue::Finite(pool[k - 1].clone())
                    }
                };
                (x, sig.clone())
            })
            .collect();
        KroneckerStructure::new(0, 0, self.right_indices.clone(), self.left_indices.clone(), eigen)
            .expect("skeletons are valid structures")
    }

    /// Canonical name such as `M1(0)+M1(1)+M1(x)+N1`; finite slots first, ∞ last.
    pub fn name(&self) -> String {
        let mut parts: Vec<String> = self.right_indices.iter().map(|e| format!("L{e}")).collect();
        parts.extend(self.left_indices.iter().map(|v| format!("LT{v}")));
        let mut finite = Vec::new();
        let mut infinite = Vec::new();
        for (slot, sig) in &self.eigen {
            for e in sig {
                match slot {
                    Slot::Concrete(Eigenvalue::Infinite) => infinite.push(format!("N{e}")),
                    _ => finite.push(format!("M{e}({slot})")),
                }
            }
        }
        parts.extend(finite);
        parts.extend(infinite);
        parts.join("+")
    }

    /// Skeleton of a concrete structure with at most three eigenvalues.
    pub fn from_structure(ks: &KroneckerStructure) -> Result<StructureSkeleton> {
        if ks.h != 0 || ks.g != 0 {
            return Err(Error::ScopeViolation(format!("{ks} has zero rows or columns")));
        }
        let label = crate::slocc::label_of_structure(ks);
        let mut eigen: Vec<(Eigenvalue, SizeSignature)> = label.structure.eigen.clone();
        eigen.sort_by(|a, b| slot_key(&a.1).cmp(&slot_key(&b.1)));
        let (m, n) = ks.dims();
        let slots = slots_for(eigen.len());
        let mut out = Vec::new();
        for ((x, sig), slot) in eigen.into_iter().zip(slots) {
            match slot {
                Slot::Concrete(_) => out.push((Slot::Concrete(x), sig)),
                Slot::Parameter(_) => {
                    return Err(Error::ScopeViolation("more than three eigenvalues leave free parameters".into()))
                }
            }
        }
        Ok(StructureSkeleton {
            m,
            n,
            right_indices: ks.right_indices.clone(),
            left_indices: ks.left_indices.clone(),
            eigen: out,
        })
    }
}

impl fmt::Display for StructureSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn slot_key(sig: &SizeSignature) -> (std::cmp::Reverse<usize>, std::cmp::Reverse<SizeSignature>) {
    (std::cmp::Reverse(sig.iter().sum()), std::cmp::Reverse(sig.clone()))
}

fn slots_for(k: usize) -> Vec<Slot> {
    let fixed = [Eigenvalue::finite(0), Eigenvalue::finite(1), Eigenvalue::Infinite];
    (0..k)
        .map(|i| match i {
            0..3 => Slot::Concrete(fixed[i].clone()),
            _ => Slot::Parameter(PARAMETER_NAMES.get(i - 3).map_or_else(|| format!("x{}", i - 2), |s| s.to_string())),
        })
        .collect()
}

/// Partitions of `total` into exactly `parts` positive parts, ascending.
fn compositions_sorted(total: usize, parts: usize, min: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for first in min..=total {
        if first * parts > total {
            break;
        }
        cur.push(first);
        compositions_sorted(total - first, parts - 1, first, out, cur);
        cur.pop();
    }
}

/// Partitions of `total` in descending order of parts.
fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=total.min(max)).rev() {
            cur.push(p);
            go(total - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// Multisets of signatures with total size `total`, each in slot order.
fn signature_multisets(total: usize) -> Vec<Vec<SizeSignature>> {
    // All signatures of size ≤ total, in slot order.
    let mut sigs: Vec<SizeSignature> = (1..=total).flat_map(partitions).collect();
    sigs.sort_by_key(slot_key);
    fn go(sigs: &[SizeSignature], start: usize, left: usize, cur: &mut Vec<SizeSignature>, out: &mut Vec<Vec<SizeSignature>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..sigs.len() {
            let w: usize = sigs[i].iter().sum();
            if w <= left {
                cur.push(sigs[i].clone());
                go(sigs, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&sigs, 0, total, &mut Vec::new(), &mut out);
    out
}

/// All fully entangled class families of 2×m×n states, in a fixed order.
pub fn enumerate_skeletons(m: usize, n: usize) -> Result<Vec<StructureSkeleton>> {
    if m < 1 || n < m || n > 2 * m {
        return Err(Error::ScopeViolation(format!("skeletons need 1 <= m <= n <= 2m, got ({m}, {n})")));
    }
    let d = n - m;
    let mut out = Vec::new();
    for n_lt in 0..=m {
        let n_l = n_lt + d;
        // Rows: Σε + Σν + #Lᵀ + q = m, with ε, ν ≥ 1.
        if n_l + 2 * n_lt > m {
            break;
        }
        for sum_eps in n_l..=m {
            for sum_nu in n_lt..=m {
                let used = sum_eps + sum_nu + n_lt;
                if used > m {
                    break;
                }
                let q = m - used;
                let mut eps_list = Vec::new();
                compositions_sorted(sum_eps, n_l, 1, &mut eps_list, &mut Vec::new());
                let mut nu_list = Vec::new();
                compositions_sorted(sum_nu, n_lt, 1, &mut nu_list, &mut Vec::new());
                let sig_sets = if q == 0 { vec![vec![]] } else { signature_multisets(q) };
                for eps in &eps_list {
                    for nu in &nu_list {
                        for sigs in &sig_sets {
                            // Alice is not entangled with m·M¹(x).
                            if n_l == 0 && n_lt == 0 && sigs.len() == 1 && sigs[0].iter().all(|&e| e == 1) {
                                continue;
                            }
                            let eigen = slots_for(sigs.len()).into_iter().zip(sigs.iter().cloned()).collect();
                            out.push(StructureSkeleton {
                                m,
                                n,
                                right_indices: eps.clone(),
                                left_indices: nu.clone(),
                                eigen,
                            });
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |s: &StructureSkeleton| {
            (
                std::cmp::Reverse(s.right_indices.len() + s.left_indices.len()),
                s.right_indices.clone(),
                s.left_indices.clone(),
                s.eigen.iter().map(|(_, sig)| slot_key(sig)).collect::<Vec<_>>(),
            )
        };
        key(a).cmp(&key(b))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::local_ranks;
    use crate::slocc::representative_state;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_skeletons(2, 2).unwrap().len(), 2);
        assert_eq!(enumerate_skeletons(3, 3).unwrap().len(), 6);
        assert_eq!(enumerate_skeletons(4, 4).unwrap().len(), 16);
    }

    #[test]
    fn names_and_parameters() {
        let sk = enumerate_skeletons(4, 4).unwrap();
        let p1 = sk.iter().find(|s| s.parameter_count() == 1).unwrap();
        assert_eq!(p1.name(), "M1(0)+M1(1)+M1(x)+N1");
        let ks = p1.instantiate();
        assert_eq!(ks.block_string(), "M1(0)+M1(1)+M1(2)+N1");
        let names: Vec<String> = enumerate_skeletons(2, 2).unwrap().iter().map(|s| s.name()).collect();
        assert_eq!(names, vec!["M2(0)", "M1(0)+M1(1)"]);
    }

    #[test]
    fn representatives_are_fully_entangled() {
        for (m, n) in [(3, 3), (3, 4), (3, 5), (3, 6), (4, 4), (4, 6)] {
            for s in enumerate_skeletons(m, n).unwrap() {
                let st = representative_state(&s.instantiate());
                assert_eq!(local_ranks(&st), (2, m, n), "{s}");
            }
        }
    }

    #[test]
    fn skeleton_round_trip() {
        for s in enumerate_skeletons(3, 4).unwrap() {
            assert_eq!(StructureSkeleton::from_structure(&s.instantiate()).unwrap(), s);
        }
    }
}
