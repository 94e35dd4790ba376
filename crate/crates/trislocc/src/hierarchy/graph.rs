//! Reach matrices between skeleton layers and their DOT rendering.

use std::fmt::Write;

use serde::Serialize;

use super::{enumerate_skeletons, reach_skeletons, slots_for, ReachVerdict, StructureSkeleton};
use crate::error::Result;
use crate::slocc::generic_structure;
use crate::transform::SearchConfig;

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    pub src: String,
    pub dst: String,
    #[serde(flatten)]
    pub verdict: ReachVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReachMatrix {
    /// Layers ordered by (m, n) descending.
    pub layers: Vec<((usize, usize), Vec<StructureSkeleton>)>,
    pub edges: Vec<GraphEdge>,
}

fn adjacent(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 == b.0 && a.1 == b.1 + 1) || (a.1 == b.1 && a.0 == b.0 + 1)
}

fn build(mut layers: Vec<((usize, usize), Vec<StructureSkeleton>)>, cfg: SearchConfig) -> ReachMatrix {
    layers.sort_by(|a, b| b.0.cmp(&a.0));
    let mut edges = Vec::new();
    for (i, (da, sa)) in layers.iter().enumerate() {
        for (db, sb) in &layers[i + 1..] {
            if !adjacent(*da, *db) {
                continue;
            }
            for s in sa {
                for t in sb {
                    edges.push(GraphEdge {
                        src: s.name(),
                        dst: t.name(),
                        verdict: reach_skeletons(s, t, cfg),
                    });
                }
            }
        }
    }
    ReachMatrix { layers, edges }
}

/// All skeletons of the given dimensions and the verdicts between adjacent layers.
pub fn reach_matrix(dims: &[(usize, usize)], cfg: SearchConfig) -> Result<ReachMatrix> {
    let layers = dims
        .iter()
        .map(|&(m, n)| Ok(((m, n), enumerate_skeletons(m, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(build(layers, cfg))
}

fn generic_skeleton(m: usize, n: usize) -> Result<StructureSkeleton> {
    let ks = generic_structure(m, n)?;
    Ok(StructureSkeleton {
        m,
        n,
        right_indices: ks.right_indices.clone(),
        left_indices: vec![],
        eigen: slots_for(ks.eigen.len()).into_iter().map(|s| (s, vec![1])).collect(),
    })
}

/// The generic class of every (m, n), n = 2m down to m, as a chain.
pub fn generic_chain(m: usize, cfg: SearchConfig) -> Result<ReachMatrix> {
    let layers = (m..=2 * m)
        .rev()
        .map(|n| Ok(((m, n), vec![generic_skeleton(m, n)?])))
        .collect::<Result<Vec<_>>>()?;
    Ok(build(layers, cfg))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Graphviz text: one cluster per layer, solid edges for Yes, dotted for Unknown, and
/// obstructed pairs listed in a trailing comment table.
pub fn emit_graph(rm: &ReachMatrix) -> String {
    let mut out = String::new();
    out.push_str("digraph hierarchy {\n  rankdir=TB;\n  node [shape=box];\n");
    for ((m, n), sk) in &rm.layers {
        let _ = writeln!(out, "  subgraph cluster_{m}_{n} {{\n    label=\"2x{m}x{n}\";");
        for s in sk {
            let _ = writeln!(out, "    {};", quote(&s.name()));
        }
        out.push_str("  }\n");
    }
    let mut blocked = Vec::new();
    for e in &rm.edges {
        match &e.verdict {
            ReachVerdict::Yes { .. } => {
                let _ = writeln!(out, "  {} -> {};", quote(&e.src), quote(&e.dst));
            }
            ReachVerdict::Unknown { .. } => {
                let _ = writeln!(out, "  {} -> {} [style=dotted];", quote(&e.src), quote(&e.dst));
            }
            ReachVerdict::No(ob) => blocked.push(format!("  // {} -/-> {} : {}", e.src, e.dst, ob.id.as_str())),
        }
    }
    if !blocked.is_empty() {
        out.push_str("  // obstructed:\n");
        for line in blocked {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stair_for_three() {
        let rm = generic_chain(3, SearchConfig::default()).unwrap();
        assert_eq!(rm.layers.len(), 4);
        assert_eq!(rm.edges.len(), 3);
        assert!(rm.edges.iter().all(|e| e.verdict.is_yes()));
        let dot = emit_graph(&rm);
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("\"L1+L1+L1\" -> \"L1+L2\";"));
    }

    #[test]
    fn single_node() {
        let sk = enumerate_skeletons(2, 2).unwrap()[1].clone();
        let name = sk.name();
        let dot = emit_graph(&build(vec![((2, 2), vec![sk])], SearchConfig::default()));
        assert_eq!(dot.matches(&name).count(), 1);
        assert!(!dot.contains("->"));
    }
}
