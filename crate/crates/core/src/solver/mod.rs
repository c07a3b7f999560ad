//! Steiner minimal trees for a boundary set of finite metric spaces.
//!
//! Steiner vertices are searched among spaces with at most `N` points (`N`
//! the total number of boundary points) and diameter at most
//! `d̂ = 2·r_ub + d + 2`, where `d` is the largest boundary diameter and
//! `r_ub` the length of the GH minimum spanning tree. A minimizer exists in
//! that class, so the search is finite-dimensional: for each candidate
//! topology we alternate exact correspondences with a linear program over
//! the Steiner matrices, restrict the result to its threads, and keep the
//! shortest tree over all topologies and restarts.

mod alternate;
mod threads;
mod tree;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correspondence::DEFAULT_ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::gh::{gh_mst, GhMst};
use crate::metric::{DistanceMatrix, FiniteMetricSpace};
use crate::topology::{
    canonical_form, enumerate_topologies, SteinerTopology, TopologyKey, TopologyMode, DEFAULT_TERMINAL_CAP,
};

pub use alternate::{alternate_minimize, edge_correspondence, padded_copy, random_slot, Descent};
pub use threads::{prune_threads, restrict_to_threads, Thread, ThreadSet};
pub use tree::{SteinerTree, TreeEdge, TreeVertex};

pub const HEURISTIC_SIZE_FLAG: &str = "heuristic: size cap below paper bound N";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Total number of boundary points.
    #[serde(rename = "N")]
    pub n: usize,
    /// Largest boundary diameter.
    pub d: f64,
    /// GH minimum spanning tree length.
    pub r_ub: f64,
    pub d_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    /// Points per Steiner slot; `None` means `N`.
    pub max_steiner_size: Option<usize>,
    pub topology_mode: TopologyMode,
    pub enumeration_cap: u64,
    pub terminal_cap: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            tol: 1e-7,
            max_iters: 200,
            max_steiner_size: None,
            topology_mode: TopologyMode::Full,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            terminal_cap: DEFAULT_TERMINAL_CAP,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return bad("tol must be positive");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.max_steiner_size == Some(0) {
            return bad("max_steiner_size must be at least 1");
        }
        Ok(())
    }

    /// Points per Steiner slot for this boundary.
    pub fn steiner_size(&self, bounds: &Bounds) -> usize {
        self.max_steiner_size.unwrap_or(bounds.n)
    }
}

pub fn compute_bounds(boundary: &[FiniteMetricSpace], cap: u64) -> Result<Bounds> {
    Ok(bounds_from_mst(boundary, &gh_mst(boundary, cap)?))
}

fn bounds_from_mst(boundary: &[FiniteMetricSpace], mst: &GhMst) -> Bounds {
    let n = boundary.iter().map(FiniteMetricSpace::len).sum();
    let d = boundary.iter().map(FiniteMetricSpace::diameter).fold(0.0, f64::max);
    let r_ub = mst.length;
    Bounds {
        n,
        d,
        r_ub,
        d_hat: 2.0 * r_ub + d + 2.0,
    }
}

/// Everything a solve produces.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub tree: SteinerTree,
    pub bounds: Bounds,
    pub mst: GhMst,
    /// Final length of every completed (topology, restart) cell, in cell
    /// order. Cells whose correspondence search hit the cap are skipped and
    /// named in `flags`.
    pub restart_lengths: Vec<f64>,
    /// Per-cell tree lengths after each correspondence step.
    pub histories: Vec<Vec<f64>>,
    /// Per-cell length before and after thread pruning.
    pub pruning: Vec<(f64, f64)>,
    pub flags: Vec<String>,
}

enum Init {
    Random(u64),
    Given(Vec<DistanceMatrix>),
}

struct Cell {
    topology: SteinerTopology,
    init: Init,
}

struct CellOutcome {
    tree: SteinerTree,
    history: Vec<f64>,
    before_prune: f64,
    key: TopologyKey,
}

/// Full topology realizing the MST with Steiner vertices placed on copies of
/// terminals, so its tree length equals the MST length.
///
/// A terminal of MST degree `δ ≥ 2` becomes a chain of `δ − 1` Steiner
/// copies of itself with the terminal hanging off the first; MST edges then
/// join free ports of the chains (or the terminal itself when `δ = 1`).
pub fn mst_embedding(
    boundary: &[FiniteMetricSpace],
    mst: &GhMst,
    size: usize,
) -> Result<(SteinerTopology, Vec<DistanceMatrix>)> {
    let k = boundary.len();
    if k < 3 {
        return Ok((SteinerTopology::edge(), Vec::new()));
    }
    let mut degree = vec![0usize; k];
    for &(a, b, _) in &mst.edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut edges = Vec::new();
    let mut matrices = Vec::new();
    let mut ports: Vec<Vec<usize>> = vec![Vec::new(); k];
    for t in 0..k {
        if degree[t] == 1 {
            ports[t].push(t);
            continue;
        }
        let chain: Vec<usize> = (0..degree[t] - 1)
            .map(|_| {
                matrices.push(padded_copy(boundary[t].matrix(), size));
                k + matrices.len() - 1
            })
            .collect();
        edges.push((t, chain[0]));
        for w in chain.windows(2) {
            edges.push((w[0], w[1]));
        }
        let last = chain.len() - 1;
        for (i, &c) in chain.iter().enumerate() {
            let used = usize::from(i == 0) + usize::from(i > 0) + usize::from(i < last);
            for _ in used..3 {
                ports[t].push(c);
            }
        }
    }
    for &(a, b, _) in &mst.edges {
        let pa = ports[a].pop().expect("port");
        let pb = ports[b].pop().expect("port");
        edges.push((pa, pb));
    }
    let topology = SteinerTopology::new(k, matrices.len(), edges)?;
    debug_assert!(topology.is_full());
    Ok((topology, matrices))
}

fn cell_rng(seed: u64, cell: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell);
    rng
}

fn run_cell(cell: &Cell, boundary: &[FiniteMetricSpace], bounds: &Bounds, config: &SolveConfig) -> Result<CellOutcome> {
    let size = config.steiner_size(bounds);
    let initial = match &cell.init {
        Init::Given(m) => m.clone(),
        Init::Random(stream) => {
            let mut rng = cell_rng(config.seed, *stream);
            let terminals: Vec<DistanceMatrix> = boundary.iter().map(|m| m.matrix().clone()).collect();
            (0..cell.topology.steiner_count())
                .map(|_| random_slot(&terminals, size, bounds.d, &mut rng))
                .collect()
        }
    };
    let descent = alternate_minimize(&cell.topology, boundary, bounds, config, initial)?;
    let before_prune = descent.tree.total_length;
    let tree = prune_threads(&descent.tree, boundary, config.enumeration_cap)?
        .collapse_short_edges(config.tol, config.enumeration_cap)?;
    let key = canonical_form(&tree.topology());
    Ok(CellOutcome {
        tree,
        history: descent.history,
        before_prune,
        key,
    })
}

/// Shortest tree over all topologies and restarts.
///
/// Ties go to fewer Steiner vertices, then the smaller topology encoding,
/// then the earlier cell, so the result does not depend on scheduling.
pub fn solve(boundary: &[FiniteMetricSpace], config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    if boundary.is_empty() {
        return Err(Error::Input("empty boundary set".into()));
    }
    let k = boundary.len();
    if k > config.terminal_cap {
        return Err(Error::TooManyTerminals {
            k,
            cap: config.terminal_cap,
        });
    }
    let mst = gh_mst(boundary, config.enumeration_cap)?;
    let bounds = bounds_from_mst(boundary, &mst);
    let mut flags = Vec::new();
    if config.steiner_size(&bounds) < bounds.n {
        flags.push(HEURISTIC_SIZE_FLAG.to_owned());
    }
    if k == 1 {
        return Ok(SolveReport {
            tree: SteinerTree::single(boundary[0].clone()),
            bounds,
            mst,
            restart_lengths: vec![0.0],
            histories: vec![vec![0.0]],
            pruning: vec![(0.0, 0.0)],
            flags,
        });
    }

    let size = config.steiner_size(&bounds);
    let mut cells = Vec::new();
    let (warm_topology, warm_init) = mst_embedding(boundary, &mst, size)?;
    if warm_topology.steiner_count() > 0 {
        cells.push(Cell {
            topology: warm_topology,
            init: Init::Given(warm_init),
        });
    }
    let mut stream = 0u64;
    for topology in enumerate_topologies(k, config.topology_mode, config.terminal_cap)? {
        let restarts = if topology.steiner_count() == 0 {
            1
        } else {
            config.restarts
        };
        for _ in 0..restarts {
            cells.push(Cell {
                topology: topology.clone(),
                init: Init::Random(stream),
            });
            stream += 1;
        }
    }

    let results: Vec<Result<CellOutcome>> = cells
        .par_iter()
        .map(|c| run_cell(c, boundary, &bounds, config))
        .collect();
    let mut outcomes = Vec::with_capacity(results.len());
    let mut first_error = None;
    for (idx, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e @ Error::SearchSpaceTooLarge { .. }) => {
                flags.push(format!("cell {idx} abandoned: {e}"));
                first_error.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    if outcomes.is_empty() {
        return Err(first_error.expect("at least one cell"));
    }

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            a.tree
                .total_length
                .total_cmp(&b.tree.total_length)
                .then(a.tree.steiner_count().cmp(&b.tree.steiner_count()))
                .then_with(|| a.key.cmp(&b.key))
                .then(ia.cmp(ib))
        })
        .map(|(i, _)| i)
        .expect("at least one cell");

    let restart_lengths = outcomes.iter().map(|o| o.tree.total_length).collect();
    let histories = outcomes.iter().map(|o| o.history.clone()).collect();
    let pruning = outcomes.iter().map(|o| (o.before_prune, o.tree.total_length)).collect();
    let tree = outcomes.into_iter().nth(best).expect("best cell").tree;
    Ok(SolveReport {
        tree,
        bounds,
        mst,
        restart_lengths,
        histories,
        pruning,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(name: &str, d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::two_point(name, d).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let m = vec![two("a", 1.0), two("b", 2.0), two("c", 3.0)];
        let b = compute_bounds(&m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(b.n, 6);
        assert_eq!(b.d, 3.0);
        assert_eq!(b.r_ub, 1.0);
        assert_eq!(b.d_hat, 7.0);

        let x = FiniteMetricSpace::from_rows("x", &[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]])
            .unwrap();
        let b = compute_bounds(std::slice::from_ref(&x), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((b.n, b.r_ub, b.d_hat), (3, 0.0, 4.0));

        let b = compute_bounds(&[x.clone(), x], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((b.r_ub, b.d_hat), (0.0, 4.0));
    }

    #[test]
    fn config_validation() {
        assert!(SolveConfig::default().validate().is_ok());
        let bad = SolveConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolveConfig {
            max_steiner_size: Some(0),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mst_embedding_is_full_and_has_mst_length() {
        let m: Vec<_> = (1..=5).map(|i| two(&format!("m{i}"), i as f64)).collect();
        let mst = gh_mst(&m, DEFAULT_ENUMERATION_CAP).unwrap();
        let (topology, mats) = mst_embedding(&m, &mst, 4).unwrap();
        assert!(topology.is_full());
        assert_eq!(mats.len(), 3);
        let mut vertices: Vec<TreeVertex> = m
            .iter()
            .map(|s| TreeVertex {
                kind: crate::topology::VertexKind::Terminal,
                space: s.clone(),
            })
            .collect();
        for (i, mat) in mats.into_iter().enumerate() {
            let p = crate::metric::PseudometricSpace::new(format!("s{i}"), mat, None).unwrap();
            vertices.push(TreeVertex {
                kind: crate::topology::VertexKind::Steiner,
                space: crate::metric::quotient(&p).unwrap(),
            });
        }
        let tree = SteinerTree::with_exact_edges(vertices, topology.edges(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(tree.total_length, mst.length);
    }

    #[test]
    fn single_space_is_trivial() {
        let r = solve(&[two("a", 1.0)], &SolveConfig::default()).unwrap();
        assert_eq!(r.tree.total_length, 0.0);
        assert!(r.tree.edges.is_empty());
    }

    #[test]
    fn size_cap_flagged() {
        let m = vec![two("a", 1.0), two("b", 2.0), two("c", 3.0)];
        let config = SolveConfig {
            max_steiner_size: Some(2),
            restarts: 2,
            ..Default::default()
        };
        let r = solve(&m, &config).unwrap();
        assert_eq!(r.flags, vec![HEURISTIC_SIZE_FLAG.to_owned()]);
        assert!((r.tree.total_length - 1.0).abs() < 1e-6);
    }

    #[test]
    fn three_two_point_spaces() {
        let m = vec![two("a", 1.0), two("b", 2.0), two("c", 3.0)];
        let config = SolveConfig {
            restarts: 3,
            ..Default::default()
        };
        let r = solve(&m, &config).unwrap();
        assert!((r.tree.total_length - 1.0).abs() < 1e-6, "{}", r.tree.total_length);
        assert!(r.flags.is_empty());
    }
}
