//! Tree topologies over `k` terminals and `s` Steiner slots.
//!
//! Terminals are vertices `0..k`, Steiner slots are `k..k+s`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TERMINAL_CAP: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyMode {
    /// Terminals are leaves, `k - 2` Steiner slots of degree 3.
    #[default]
    Full,
    /// Full topologies plus every contraction of Steiner slots.
    All,
}

impl FromStr for TopologyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "all" => Ok(Self::All),
            other => Err(Error::InvalidConfig(format!("unknown topology mode `{other}`"))),
        }
    }
}

impl fmt::Display for TopologyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Terminal,
    Steiner,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinerTopology {
    k: usize,
    s: usize,
    edges: Vec<(usize, usize)>,
}

/// Relabeling-invariant encoding: the smallest sorted edge list over all
/// permutations of the Steiner slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopologyKey(pub Vec<(usize, usize)>);

fn normalize(edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    out.sort_unstable();
    out
}

impl SteinerTopology {
    /// Builds and checks a topology: a tree with Steiner degree ≥ 3.
    pub fn new(k: usize, s: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = Self {
            k,
            s,
            edges: normalize(edges),
        };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let n = self.k + self.s;
        let bad = |msg: String| Err(Error::Input(format!("invalid topology: {msg}")));
        if self.k == 0 {
            return bad("no terminals".into());
        }
        if self.edges.len() + 1 != n {
            return bad(format!("{} edges for {n} vertices", self.edges.len()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if a == b || b >= n {
                return bad(format!("edge ({a},{b})"));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return bad("cycle".into());
            }
            parent[ra] = rb;
        }
        let deg = self.degrees();
        for v in 0..n {
            let min = if v < self.k { usize::from(n > 1) } else { 3 };
            if deg[v] < min {
                return bad(format!("vertex {v} has degree {}", deg[v]));
            }
        }
        Ok(())
    }

    /// Skips the tree and degree checks; for programs over arbitrary trees.
    pub(crate) fn from_edges_unchecked(k: usize, s: usize, edges: Vec<(usize, usize)>) -> Self {
        Self {
            k,
            s,
            edges: normalize(edges),
        }
    }

    /// The single edge between two terminals.
    pub fn edge() -> Self {
        Self {
            k: 2,
            s: 0,
            edges: vec![(0, 1)],
        }
    }

    /// One terminal, no edges.
    pub fn single() -> Self {
        Self {
            k: 1,
            s: 0,
            edges: Vec::new(),
        }
    }

    pub fn terminals(&self) -> usize {
        self.k
    }

    pub fn steiner_count(&self) -> usize {
        self.s
    }

    pub fn vertex_count(&self) -> usize {
        self.k + self.s
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if v < self.k {
            VertexKind::Terminal
        } else {
            VertexKind::Steiner
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn is_full(&self) -> bool {
        let deg = self.degrees();
        if self.k == 2 && self.s == 0 {
            return true;
        }
        self.s + 2 == self.k && (0..self.k).all(|v| deg[v] == 1) && (self.k..self.vertex_count()).all(|v| deg[v] == 3)
    }

    fn relabeled(&self, perm: &[usize]) -> Vec<(usize, usize)> {
        let map = |v: usize| if v < self.k { v } else { perm[v - self.k] };
        normalize(self.edges.iter().map(|&(a, b)| (map(a), map(b))))
    }

    /// Same topology with Steiner slots relabeled to the canonical order.
    pub fn canonicalize(&self) -> Self {
        Self {
            k: self.k,
            s: self.s,
            edges: canonical_form(self).0,
        }
    }

    /// Merges the endpoints of edge `e`; one endpoint must be a Steiner slot.
    /// The surviving vertex is the terminal, or the smaller Steiner slot.
    pub fn contract(&self, e: usize) -> Option<Self> {
        let (a, b) = self.edges[e];
        if b < self.k {
            return None;
        }
        let (keep, gone) = (a, b);
        let remap = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(x, y))| (remap(x), remap(y)));
        Some(Self {
            k: self.k,
            s: self.s - 1,
            edges: normalize(edges),
        })
    }
}

pub fn canonical_form(t: &SteinerTopology) -> TopologyKey {
    let slots: Vec<usize> = (t.k..t.k + t.s).collect();
    let best = slots
        .iter()
        .copied()
        .permutations(t.s)
        .map(|perm| t.relabeled(&perm))
        .min()
        .unwrap_or_else(|| t.edges.clone());
    TopologyKey(best)
}

/// All full topologies by edge insertion, each terminal `t ≥ 3` subdividing
/// an existing edge with a fresh Steiner slot.
fn full_topologies(k: usize) -> Vec<SteinerTopology> {
    if k == 2 {
        return vec![SteinerTopology::edge()];
    }
    let mut current = vec![vec![(0, k), (1, k), (2, k)]];
    for t in 3..k {
        let fresh = k + t - 2;
        let mut next = Vec::with_capacity(current.len() * (2 * t - 3));
        for edges in &current {
            for idx in 0..edges.len() {
                let (a, b) = edges[idx];
                let mut e: Vec<(usize, usize)> = edges
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != idx)
                    .map(|(_, &p)| p)
                    .collect();
                e.extend([(a, fresh), (b, fresh), (t, fresh)]);
                next.push(e);
            }
        }
        current = next;
    }
    current
        .into_iter()
        .map(|edges| SteinerTopology {
            k,
            s: k - 2,
            edges: normalize(edges),
        })
        .collect()
}

/// Candidate topologies connecting `k` terminals, canonical and deduplicated,
/// sorted by encoding.
pub fn enumerate_topologies(k: usize, mode: TopologyMode, cap: usize) -> Result<Vec<SteinerTopology>> {
    if k < 2 {
        return Err(Error::Input(format!("need at least 2 terminals, got {k}")));
    }
    if k > cap {
        return Err(Error::TooManyTerminals { k, cap });
    }
    let mut seen: BTreeSet<SteinerTopology> = full_topologies(k).iter().map(SteinerTopology::canonicalize).collect();
    if mode == TopologyMode::All {
        let mut frontier: Vec<SteinerTopology> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for t in &frontier {
                for e in 0..t.edges.len() {
                    if let Some(c) = t.contract(e) {
                        let c = c.canonicalize();
                        if seen.insert(c.clone()) {
                            next.push(c);
                        }
                    }
                }
            }
            frontier = next;
        }
    }
    Ok(seen.into_iter().collect())
}
