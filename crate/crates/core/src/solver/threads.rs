//! Threads through a tree and the restriction of Steiner spaces to them.
//!
//! A thread emitted from boundary point `x` picks one point in every vertex
//! space such that consecutive picks are related by the edge
//! correspondences. Restricting every Steiner space to the points some
//! thread picks keeps every edge correspondence a correspondence, never
//! increases an edge's distortion, and leaves at most `N` points per space.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::topology::VertexKind;

use super::tree::{exact_edge, SteinerTree, TreeEdge, TreeVertex};

/// One point index per tree vertex, starting from a boundary point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub terminal: usize,
    pub point: usize,
    pub picks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadSet {
    pub threads: Vec<Thread>,
}

impl ThreadSet {
    /// Emits one thread per boundary point; partners are the smallest index
    /// related to the previous pick.
    pub fn emit(tree: &SteinerTree) -> Result<Self> {
        tree.check_correspondences()?;
        let n = tree.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (idx, e) in tree.edges.iter().enumerate() {
            adj[e.u].push(idx);
            adj[e.v].push(idx);
        }
        let mut threads = Vec::new();
        for (t, vertex) in tree.vertices.iter().enumerate() {
            if vertex.kind != VertexKind::Terminal {
                continue;
            }
            for x in 0..vertex.space.len() {
                let mut picks = vec![usize::MAX; n];
                picks[t] = x;
                let mut stack = vec![t];
                while let Some(a) = stack.pop() {
                    for &idx in &adj[a] {
                        let e = &tree.edges[idx];
                        let b = if e.u == a { e.v } else { e.u };
                        if picks[b] != usize::MAX {
                            continue;
                        }
                        picks[b] = partner(e, a, picks[a]).ok_or(Error::MissingCorrespondence { edge: idx })?;
                        stack.push(b);
                    }
                }
                if picks.contains(&usize::MAX) {
                    return Err(Error::Input("tree is not connected".into()));
                }
                threads.push(Thread {
                    terminal: t,
                    point: x,
                    picks,
                });
            }
        }
        Ok(Self { threads })
    }

    /// Points of vertex `v` picked by at least one thread, ascending.
    pub fn touched(&self, v: usize) -> Vec<usize> {
        self.threads
            .iter()
            .map(|t| t.picks[v])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Every consecutive pair of picks is related by its edge.
    pub fn is_consistent(&self, tree: &SteinerTree) -> bool {
        self.threads.iter().all(|t| {
            tree.edges
                .iter()
                .all(|e| e.correspondence.contains(t.picks[e.u], t.picks[e.v]))
        })
    }
}

fn partner(e: &TreeEdge, from: usize, point: usize) -> Option<usize> {
    let (n_u, n_v) = e.correspondence.dims();
    if from == e.u {
        (0..n_v).find(|&j| e.correspondence.contains(point, j))
    } else {
        (0..n_u).find(|&i| e.correspondence.contains(i, point))
    }
}

/// Restricts every Steiner space and correspondence to the thread-touched
/// points, without re-optimizing anything.
pub fn restrict_to_threads(tree: &SteinerTree) -> Result<SteinerTree> {
    let threads = ThreadSet::emit(tree)?;
    let keep: Vec<Vec<usize>> = (0..tree.vertices.len()).map(|v| threads.touched(v)).collect();
    let vertices: Vec<TreeVertex> = tree
        .vertices
        .iter()
        .zip(&keep)
        .map(|(v, idx)| TreeVertex {
            kind: v.kind,
            space: match v.kind {
                VertexKind::Terminal => v.space.clone(),
                VertexKind::Steiner => v.space.subspace(idx),
            },
        })
        .collect();
    let mut edges = Vec::with_capacity(tree.edges.len());
    for (idx, e) in tree.edges.iter().enumerate() {
        let correspondence = e
            .correspondence
            .restrict_to_correspondence(&keep[e.u], &keep[e.v])
            .ok_or(Error::MissingCorrespondence { edge: idx })?;
        let length =
            crate::correspondence::distortion(&correspondence, &vertices[e.u].space, &vertices[e.v].space) / 2.0;
        edges.push(TreeEdge {
            u: e.u,
            v: e.v,
            length,
            correspondence,
        });
    }
    let mut out = SteinerTree {
        vertices,
        edges,
        total_length: 0.0,
    };
    out.total_length = out.sum_lengths();
    Ok(out)
}

/// Restricts Steiner spaces to thread-touched points, then recomputes every
/// edge exactly. No edge gets longer and every Steiner space ends up with at
/// most as many points as there are boundary points in total.
pub fn prune_threads(tree: &SteinerTree, boundary: &[FiniteMetricSpace], cap: u64) -> Result<SteinerTree> {
    let terminals: Vec<&TreeVertex> = tree
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Terminal)
        .collect();
    if terminals.len() != boundary.len()
        || terminals
            .iter()
            .zip(boundary)
            .any(|(t, m)| t.space.matrix() != m.matrix())
    {
        return Err(Error::Input("tree terminals do not match the boundary set".into()));
    }
    let restricted = restrict_to_threads(tree)?;
    let pairs: Vec<(usize, usize)> = restricted.edges.iter().map(|e| (e.u, e.v)).collect();
    let edges = pairs
        .iter()
        .map(|&(u, v)| exact_edge(&restricted.vertices, u, v, cap))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SteinerTree {
        vertices: restricted.vertices,
        edges,
        total_length: 0.0,
    };
    out.total_length = out.sum_lengths();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{Correspondence, DEFAULT_ENUMERATION_CAP};

    fn two(name: &str, d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::two_point(name, d).unwrap()
    }

    fn star_tree(steiner: FiniteMetricSpace) -> (SteinerTree, Vec<FiniteMetricSpace>) {
        let m = vec![two("a", 1.0), two("b", 2.0), two("c", 3.0)];
        let mut vertices: Vec<TreeVertex> = m
            .iter()
            .map(|s| TreeVertex {
                kind: VertexKind::Terminal,
                space: s.clone(),
            })
            .collect();
        vertices.push(TreeVertex {
            kind: VertexKind::Steiner,
            space: steiner,
        });
        let tree = SteinerTree::with_exact_edges(vertices, &[(0, 3), (1, 3), (2, 3)], DEFAULT_ENUMERATION_CAP).unwrap();
        (tree, m)
    }

    #[test]
    fn already_minimal_tree_unchanged() {
        let (tree, m) = star_tree(two("s", 2.0));
        let pruned = prune_threads(&tree, &m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(pruned.total_length, tree.total_length);
        assert_eq!(pruned.vertices[3].space.len(), 2);
        let threads = ThreadSet::emit(&tree).unwrap();
        assert_eq!(threads.threads.len(), 6);
        assert!(threads.is_consistent(&tree));
    }

    #[test]
    fn direct_edge_unchanged() {
        let m = vec![two("a", 1.0), two("b", 3.0)];
        let vertices = m
            .iter()
            .map(|s| TreeVertex {
                kind: VertexKind::Terminal,
                space: s.clone(),
            })
            .collect();
        let tree = SteinerTree::with_exact_edges(vertices, &[(0, 1)], DEFAULT_ENUMERATION_CAP).unwrap();
        let pruned = prune_threads(&tree, &m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(pruned, tree);
    }

    #[test]
    fn missing_correspondence_detected() {
        let (mut tree, m) = star_tree(two("s", 2.0));
        tree.edges[1].correspondence = Correspondence::full(2, 3);
        assert!(matches!(
            prune_threads(&tree, &m, DEFAULT_ENUMERATION_CAP),
            Err(Error::MissingCorrespondence { edge: 1 })
        ));
    }

    #[test]
    fn boundary_mismatch_detected() {
        let (tree, _) = star_tree(two("s", 2.0));
        let other = vec![two("a", 1.0), two("b", 2.0), two("c", 4.0)];
        assert!(prune_threads(&tree, &other, DEFAULT_ENUMERATION_CAP).is_err());
    }
}
