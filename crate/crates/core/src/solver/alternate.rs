//! Alternating minimization over edge correspondences and Steiner matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::correspondence::{distortion, Correspondence, CorrespondenceSearch, Relation};
use crate::error::{Error, Result};
use crate::lp::solve_edge_lengths;
use crate::metric::{quotient, DistanceMatrix, FiniteMetricSpace, MergeClasses, PseudometricSpace};
use crate::topology::{SteinerTopology, VertexKind};

use super::tree::{SteinerTree, TreeVertex};
use super::{Bounds, SolveConfig};

/// Result of one alternating run.
#[derive(Debug, Clone)]
pub struct Descent {
    pub tree: SteinerTree,
    /// Tree length after each correspondence step.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Optimal correspondence between two pseudometric matrices.
///
/// Points within merge distance are searched as one class and the result is
/// lifted back, so duplicated points cost nothing. A `hint` (typically the
/// previous round's correspondence) bounds the search.
pub fn edge_correspondence(
    du: &DistanceMatrix,
    dv: &DistanceMatrix,
    hint: Option<&Correspondence>,
    cap: u64,
) -> Result<(Correspondence, f64)> {
    let (cu, cv) = (MergeClasses::of(du), MergeClasses::of(dv));
    let bound = hint
        .filter(|r| r.dims() == (du.len(), dv.len()))
        .map(|r| distortion(r, du, dv) + HINT_SLACK);
    let search = |a: &DistanceMatrix, b: &DistanceMatrix| {
        let mut s = CorrespondenceSearch::new(a, b).cap(cap);
        if let Some(limit) = bound {
            s = s.upper_bound(limit);
            if let Some(found) = s.run()? {
                return Ok(found);
            }
            s = CorrespondenceSearch::new(a, b).cap(cap);
        }
        s.run()?
            .ok_or_else(|| Error::NumericalFailure("no correspondence found".into()))
    };
    if cu.is_trivial() && cv.is_trivial() {
        return search(du, dv);
    }
    let (rq, _) = search(&cu.induced(du), &cv.induced(dv))?;
    let mut lifted = Relation::empty(du.len(), dv.len());
    for (a, b) in rq.pairs() {
        for &i in &cu.classes[a] {
            for &j in &cv.classes[b] {
                lifted.insert(i, j);
            }
        }
    }
    let lifted = Correspondence::try_from(lifted)?;
    let dis = distortion(&lifted, du, dv);
    Ok((lifted, dis))
}

// covers the max-based quotient overshooting the hint by merge-scale amounts
const HINT_SLACK: f64 = 1e-8;

/// Matrix of `source` pulled back along `map`: `D(i, j) = source(map i, map j)`.
fn pull_back(source: &DistanceMatrix, map: &[usize]) -> DistanceMatrix {
    source.restrict(map)
}

/// A Steiner slot seeded from a random terminal: its points are mapped onto
/// the terminal's (every terminal point hit when the slot is large enough,
/// extra slots duplicating random points), then jittered by up to `d / 10`
/// and closed back into a pseudometric.
pub fn random_slot<R: Rng>(terminals: &[DistanceMatrix], size: usize, d: f64, rng: &mut R) -> DistanceMatrix {
    let source = &terminals[rng.gen_range(0..terminals.len())];
    let n = source.len();
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let map: Vec<usize> = if size >= n {
        points
            .iter()
            .copied()
            .chain((n..size).map(|_| rng.gen_range(0..n)))
            .collect()
    } else {
        points.truncate(size);
        points
    };
    let mut m = pull_back(source, &map);
    if d > 0.0 {
        for i in 0..size {
            for j in i + 1..size {
                let jitter = rng.gen_range(0.0..d / 10.0);
                m.set_symmetric(i, j, m.get(i, j) + jitter);
            }
        }
    }
    m.metric_closure()
}

/// Copy of `source` padded to `size` points by repeating points cyclically.
pub fn padded_copy(source: &DistanceMatrix, size: usize) -> DistanceMatrix {
    let map: Vec<usize> = (0..size).map(|i| i % source.len()).collect();
    pull_back(source, &map)
}

fn vertex_matrix<'a>(v: usize, terminals: &'a [DistanceMatrix], steiner: &'a [DistanceMatrix]) -> &'a DistanceMatrix {
    let k = terminals.len();
    if v < k {
        &terminals[v]
    } else {
        &steiner[v - k]
    }
}

struct Round {
    matrices: Vec<DistanceMatrix>,
    length: f64,
}

fn correspondence_step(
    topology: &SteinerTopology,
    terminals: &[DistanceMatrix],
    steiner: &[DistanceMatrix],
    previous: Option<&[Correspondence]>,
    cap: u64,
) -> Result<(Vec<Correspondence>, f64)> {
    let mut total = 0.0;
    let mut corrs = Vec::with_capacity(topology.edges().len());
    for (idx, &(u, v)) in topology.edges().iter().enumerate() {
        let (r, dis) = edge_correspondence(
            vertex_matrix(u, terminals, steiner),
            vertex_matrix(v, terminals, steiner),
            previous.map(|p| &p[idx]),
            cap,
        )?;
        total += dis / 2.0;
        corrs.push(r);
    }
    Ok((corrs, total))
}

/// Alternates (a) optimal correspondences for the current Steiner matrices
/// and (b) the edge program for those correspondences, until the exact tree
/// length improves by less than `tol` or `max_iters` rounds ran.
///
/// The best round is quotiented, measured exactly, and has its short edges
/// collapsed.
pub fn alternate_minimize(
    topology: &SteinerTopology,
    boundary: &[FiniteMetricSpace],
    bounds: &Bounds,
    config: &SolveConfig,
    initial: Vec<DistanceMatrix>,
) -> Result<Descent> {
    let k = boundary.len();
    if topology.terminals() != k || initial.len() != topology.steiner_count() {
        return Err(Error::Input("initial matrices do not match the topology".into()));
    }
    let cap_size = config.steiner_size(bounds);
    if let Some(m) = initial.iter().find(|m| m.len() > cap_size || m.is_empty()) {
        return Err(Error::InvalidConfig(format!(
            "initial Steiner matrix has {} points, cap is {cap_size}",
            m.len()
        )));
    }
    let terminals: Vec<DistanceMatrix> = boundary.iter().map(|m| m.matrix().clone()).collect();
    let sizes: Vec<usize> = initial.iter().map(DistanceMatrix::len).collect();

    let mut history = Vec::new();
    let mut best: Option<Round> = None;
    let mut matrices = initial;
    let mut converged = false;
    let mut previous: Option<Vec<Correspondence>> = None;
    for _ in 0..config.max_iters {
        let (corrs, length) = correspondence_step(
            topology,
            &terminals,
            &matrices,
            previous.as_deref(),
            config.enumeration_cap,
        )?;
        history.push(length);
        let improvement = best.as_ref().map(|b| b.length - length);
        if best.as_ref().is_none_or(|b| length < b.length) {
            best = Some(Round {
                matrices: matrices.clone(),
                length,
            });
        }
        if improvement.is_some_and(|gain| gain < config.tol) || length == 0.0 || sizes.is_empty() {
            converged = true;
            break;
        }
        let lp = solve_edge_lengths(topology, &terminals, &sizes, &corrs, bounds.d_hat)?;
        matrices = lp.matrices;
        previous = Some(corrs);
    }
    let best = best.ok_or_else(|| Error::InvalidConfig("max_iters must be at least 1".into()))?;

    let mut vertices: Vec<TreeVertex> = boundary
        .iter()
        .map(|m| TreeVertex {
            kind: VertexKind::Terminal,
            space: m.clone(),
        })
        .collect();
    for (slot, m) in best.matrices.into_iter().enumerate() {
        let name = format!("steiner_{}", k + slot);
        let p = PseudometricSpace::new(name, m, None).map_err(|e| match e {
            Error::Invalid { source, .. } => Error::QuotientNotMetric(source),
            other => other,
        })?;
        vertices.push(TreeVertex {
            kind: VertexKind::Steiner,
            space: quotient(&p)?,
        });
    }
    let tree = SteinerTree::with_exact_edges(vertices, topology.edges(), config.enumeration_cap)?
        .collapse_short_edges(config.tol, config.enumeration_cap)?;
    Ok(Descent {
        tree,
        history,
        converged,
    })
}
