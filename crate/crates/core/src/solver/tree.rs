use crate::correspondence::{distortion, Correspondence};
use crate::error::{Error, Result};
use crate::gh::gh_distance_capped;
use crate::metric::FiniteMetricSpace;
use crate::topology::{SteinerTopology, VertexKind};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeVertex {
    pub kind: VertexKind,
    pub space: FiniteMetricSpace,
}

/// Edge `u < v`; the correspondence has `u`'s points as rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
    pub correspondence: Correspondence,
}

/// A tree with a concrete space at every vertex. Terminals come first and
/// keep their boundary index as vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
    pub total_length: f64,
}

impl SteinerTree {
    /// Builds a tree with exact edge lengths and optimal correspondences.
    pub fn with_exact_edges(vertices: Vec<TreeVertex>, edges: &[(usize, usize)], cap: u64) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&(a, b)| exact_edge(&vertices, a, b, cap))
            .collect::<Result<Vec<_>>>()?;
        let mut tree = Self {
            vertices,
            edges,
            total_length: 0.0,
        };
        tree.sort_edges();
        tree.total_length = tree.sum_lengths();
        Ok(tree)
    }

    /// A single terminal and no edges.
    pub fn single(space: FiniteMetricSpace) -> Self {
        Self {
            vertices: vec![TreeVertex {
                kind: VertexKind::Terminal,
                space,
            }],
            edges: Vec::new(),
            total_length: 0.0,
        }
    }

    pub fn terminal_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Terminal).count()
    }

    pub fn steiner_count(&self) -> usize {
        self.vertices.len() - self.terminal_count()
    }

    pub fn steiner_vertices(&self) -> impl Iterator<Item = (usize, &TreeVertex)> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VertexKind::Steiner)
    }

    pub fn topology(&self) -> SteinerTopology {
        SteinerTopology::from_edges_unchecked(
            self.terminal_count(),
            self.steiner_count(),
            self.edges.iter().map(|e| (e.u, e.v)).collect(),
        )
    }

    pub fn sum_lengths(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    fn sort_edges(&mut self) {
        self.edges.sort_by_key(|e| (e.u, e.v));
    }

    /// Checks that every edge carries a correspondence between its endpoints.
    pub fn check_correspondences(&self) -> Result<()> {
        for (idx, e) in self.edges.iter().enumerate() {
            let dims = (self.vertices[e.u].space.len(), self.vertices[e.v].space.len());
            if e.u >= e.v || e.correspondence.dims() != dims || !e.correspondence.is_correspondence() {
                return Err(Error::MissingCorrespondence { edge: idx });
            }
        }
        Ok(())
    }

    /// Length of the stored correspondence, `dis R_e / 2`, per edge.
    pub fn correspondence_lengths(&self) -> Vec<f64> {
        self.edges
            .iter()
            .map(|e| distortion(&e.correspondence, &self.vertices[e.u].space, &self.vertices[e.v].space) / 2.0)
            .collect()
    }

    /// Merges the endpoints of every edge shorter than `tol` that touches a
    /// Steiner vertex. A Steiner vertex merges into a terminal neighbour, or
    /// into the smaller-id Steiner neighbour; re-attached edges get exact
    /// lengths. Edges between two terminals are kept.
    pub fn collapse_short_edges(mut self, tol: f64, cap: u64) -> Result<Self> {
        while let Some(idx) = self.edges.iter().position(|e| {
            e.length < tol
                && (self.vertices[e.u].kind == VertexKind::Steiner || self.vertices[e.v].kind == VertexKind::Steiner)
        }) {
            let e = self.edges.remove(idx);
            // terminals precede Steiner vertices, so `u` is the keeper
            let (keep, gone) = (e.u, e.v);
            let mut rewired = Vec::new();
            self.edges.retain(|x| {
                if x.u == gone || x.v == gone {
                    rewired.push(if x.u == gone { x.v } else { x.u });
                    false
                } else {
                    true
                }
            });
            let shift = |w: usize| if w > gone { w - 1 } else { w };
            self.vertices.remove(gone);
            for x in &mut self.edges {
                x.u = shift(x.u);
                x.v = shift(x.v);
            }
            let keep = shift(keep);
            for w in rewired {
                let w = shift(w);
                let (a, b) = (keep.min(w), keep.max(w));
                self.edges.push(exact_edge(&self.vertices, a, b, cap)?);
            }
        }
        self.sort_edges();
        self.total_length = self.sum_lengths();
        Ok(self)
    }
}

pub(crate) fn exact_edge(vertices: &[TreeVertex], a: usize, b: usize, cap: u64) -> Result<TreeEdge> {
    let (u, v) = (a.min(b), a.max(b));
    let r = gh_distance_capped(&vertices[u].space, &vertices[v].space, cap)?;
    Ok(TreeEdge {
        u,
        v,
        length: r.distance,
        correspondence: r.witness,
    })
}
