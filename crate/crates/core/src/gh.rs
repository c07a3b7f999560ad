//! Exact Gromov–Hausdorff distance between finite metric spaces.

use rayon::prelude::*;

use crate::correspondence::{distortion, Correspondence, CorrespondenceSearch, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;

/// Distance together with a correspondence attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct GhResult {
    pub distance: f64,
    pub witness: Correspondence,
}

/// Half the minimum distortion over all correspondences.
pub fn gh_distance<X, Y>(x: &X, y: &Y) -> Result<GhResult>
where
    X: AsRef<DistanceMatrix> + ?Sized,
    Y: AsRef<DistanceMatrix> + ?Sized,
{
    gh_distance_capped(x, y, DEFAULT_ENUMERATION_CAP)
}

pub fn gh_distance_capped<X, Y>(x: &X, y: &Y, cap: u64) -> Result<GhResult>
where
    X: AsRef<DistanceMatrix> + ?Sized,
    Y: AsRef<DistanceMatrix> + ?Sized,
{
    let (witness, _) = CorrespondenceSearch::new(x, y)
        .cap(cap)
        .run()?
        .ok_or_else(|| Error::NumericalFailure("no correspondence found".into()))?;
    let distance = distortion(&witness, x, y) / 2.0;
    Ok(GhResult { distance, witness })
}

/// `½ |diam X − diam Y|`, a lower bound for the distance.
pub fn diameter_lower_bound<X, Y>(x: &X, y: &Y) -> f64
where
    X: AsRef<DistanceMatrix> + ?Sized,
    Y: AsRef<DistanceMatrix> + ?Sized,
{
    (x.as_ref().diameter() - y.as_ref().diameter()).abs() / 2.0
}

/// Minimum spanning tree of the complete graph on the spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct GhMst {
    /// Edges `(u, v, length)` with `u < v`, in the order Prim's algorithm adds them.
    pub edges: Vec<(usize, usize, f64)>,
    pub length: f64,
    /// Full pairwise distance matrix.
    pub pairwise: Vec<Vec<f64>>,
}

/// Pairwise distances over all spaces, computed in parallel.
pub fn pairwise_distances<S>(spaces: &[S], cap: u64) -> Result<Vec<Vec<f64>>>
where
    S: AsRef<DistanceMatrix> + Sync,
{
    let k = spaces.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let dists = pairs
        .par_iter()
        .map(|&(i, j)| gh_distance_capped(&spaces[i], &spaces[j], cap).map(|r| r.distance))
        .collect::<Result<Vec<f64>>>()?;
    let mut out = vec![vec![0.0; k]; k];
    for (&(i, j), d) in pairs.iter().zip(dists) {
        out[i][j] = d;
        out[j][i] = d;
    }
    Ok(out)
}

/// Dense Prim's algorithm; its length is an upper bound on the Steiner length.
pub fn gh_mst<S>(spaces: &[S], cap: u64) -> Result<GhMst>
where
    S: AsRef<DistanceMatrix> + Sync,
{
    if spaces.is_empty() {
        return Err(Error::Input("empty boundary set".into()));
    }
    let pairwise = pairwise_distances(spaces, cap)?;
    let k = spaces.len();
    let mut in_tree = vec![false; k];
    let mut best = vec![(f64::INFINITY, 0usize); k];
    in_tree[0] = true;
    for v in 1..k {
        best[v] = (pairwise[0][v], 0);
    }
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    let mut length = 0.0;
    for _ in 1..k {
        let v = (0..k)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0).then(a.cmp(&b)))
            .expect("vertex left");
        let (d, u) = best[v];
        in_tree[v] = true;
        edges.push((u.min(v), u.max(v), d));
        length += d;
        for w in 0..k {
            if !in_tree[w] && pairwise[v][w] < best[w].0 {
                best[w] = (pairwise[v][w], v);
            }
        }
    }
    Ok(GhMst {
        edges,
        length,
        pairwise,
    })
}
