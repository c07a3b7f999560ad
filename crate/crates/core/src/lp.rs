//! Linear program for Steiner distance matrices under fixed correspondences.
//!
//! Variables are the upper-triangle entries of every Steiner matrix
//! (row-major, by slot) followed by one slack per edge. For an edge `e = uv`
//! with correspondence `R_e` the slack bounds `|D_u(i,i') − D_v(j,j')|` over
//! all pairs of related pairs, so `t_e / 2` bounds the edge's GH length and
//! the objective `½ Σ t_e` bounds the tree length.

use std::collections::BTreeSet;

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, EPS_FEAS};
use crate::topology::SteinerTopology;

/// Largest gap tolerated between the solver's objective and the objective
/// recomputed from its (clamped) solution.
const OBJECTIVE_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSolution {
    /// One matrix per Steiner slot.
    pub matrices: Vec<DistanceMatrix>,
    /// Tight slack per topology edge.
    pub slacks: Vec<f64>,
    /// `½ Σ slacks`.
    pub objective: f64,
}

#[derive(Clone, Copy)]
enum Entry {
    Const(f64),
    Var(Variable),
}

struct Layout<'a> {
    k: usize,
    terminals: &'a [DistanceMatrix],
    sizes: &'a [usize],
    offsets: Vec<usize>,
    vars: Vec<Variable>,
}

impl Layout<'_> {
    fn size(&self, v: usize) -> usize {
        if v < self.k {
            self.terminals[v].len()
        } else {
            self.sizes[v - self.k]
        }
    }

    fn entry(&self, v: usize, i: usize, j: usize) -> Entry {
        if v < self.k {
            return Entry::Const(self.terminals[v].get(i, j));
        }
        if i == j {
            return Entry::Const(0.0);
        }
        let slot = v - self.k;
        let n = self.sizes[slot];
        let (a, b) = (i.min(j), i.max(j));
        // index of (a, b) in the row-major upper triangle
        let idx = a * n - a * (a + 1) / 2 + (b - a - 1);
        Entry::Var(self.vars[self.offsets[slot] + idx])
    }
}

/// Adds `sign_a * a + sign_b * b + sign_t * t <= 0` with constants moved right.
fn add_row(problem: &mut Problem, terms: &[(Entry, f64)], op: ComparisonOp) {
    let mut expr = Vec::with_capacity(terms.len());
    let mut rhs = 0.0;
    for &(e, c) in terms {
        match e {
            Entry::Const(x) => rhs -= c * x,
            Entry::Var(v) => expr.push((v, c)),
        }
    }
    if !expr.is_empty() {
        problem.add_constraint(expr.as_slice(), op, rhs);
    }
}

/// Unordered index pairs `((i, i'), (j, j'))` compared by an edge program row.
fn compared_pairs(r: &Correspondence) -> BTreeSet<((usize, usize), (usize, usize))> {
    let pairs: Vec<_> = r.pairs().collect();
    let mut out = BTreeSet::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            out.insert(((i.min(i2), i.max(i2)), (j.min(j2), j.max(j2))));
        }
    }
    out
}

fn vertex_matrix<'a>(
    v: usize,
    k: usize,
    terminals: &'a [DistanceMatrix],
    steiner: &'a [DistanceMatrix],
) -> &'a DistanceMatrix {
    if v < k {
        &terminals[v]
    } else {
        &steiner[v - k]
    }
}

/// `max |D_u(i,i') − D_v(j,j')|` over the correspondence, i.e. its distortion.
pub fn tight_slack(r: &Correspondence, du: &DistanceMatrix, dv: &DistanceMatrix) -> f64 {
    crate::correspondence::distortion(r, du, dv)
}

/// Solves the edge program to global optimality.
///
/// `correspondences[e]` relates the points of `edges()[e].0` (rows) to the
/// points of `edges()[e].1` (columns).
pub fn solve_edge_lengths(
    topology: &SteinerTopology,
    terminals: &[DistanceMatrix],
    steiner_sizes: &[usize],
    correspondences: &[Correspondence],
    d_hat: f64,
) -> Result<EdgeSolution> {
    let k = topology.terminals();
    let s = topology.steiner_count();
    if terminals.len() != k || steiner_sizes.len() != s {
        return Err(Error::Input(format!(
            "edge program expects {k} terminals and {s} Steiner sizes"
        )));
    }
    if correspondences.len() != topology.edges().len() {
        return Err(Error::MissingCorrespondence {
            edge: correspondences.len(),
        });
    }
    if !(d_hat > 0.0) || steiner_sizes.contains(&0) {
        return Err(Error::Infeasible);
    }

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let mut offsets = Vec::with_capacity(s);
    let mut vars = Vec::new();
    for &n in steiner_sizes {
        offsets.push(vars.len());
        for _ in 0..n * (n - 1) / 2 {
            vars.push(problem.add_var(0.0, (0.0, d_hat)));
        }
    }
    let layout = Layout {
        k,
        terminals,
        sizes: steiner_sizes,
        offsets,
        vars,
    };

    let mut slacks = Vec::with_capacity(correspondences.len());
    let mut rows = Vec::with_capacity(correspondences.len());
    for (e, (&(u, v), r)) in topology.edges().iter().zip(correspondences).enumerate() {
        if r.dims() != (layout.size(u), layout.size(v)) {
            return Err(Error::MissingCorrespondence { edge: e });
        }
        let compared = compared_pairs(r);
        let mut floor = 0.0f64;
        let mut variable_rows = Vec::new();
        for ((i, i2), (j, j2)) in compared {
            match (layout.entry(u, i, i2), layout.entry(v, j, j2)) {
                (Entry::Const(a), Entry::Const(b)) => floor = floor.max((a - b).abs()),
                (a, b) => variable_rows.push((a, b)),
            }
        }
        let t = problem.add_var(0.5, (floor, f64::INFINITY));
        slacks.push(t);
        rows.push(variable_rows);
    }
    for (rows, &t) in rows.iter().zip(&slacks) {
        for &(a, b) in rows {
            add_row(
                &mut problem,
                &[(a, 1.0), (b, -1.0), (Entry::Var(t), -1.0)],
                ComparisonOp::Le,
            );
            add_row(
                &mut problem,
                &[(b, 1.0), (a, -1.0), (Entry::Var(t), -1.0)],
                ComparisonOp::Le,
            );
        }
    }
    for slot in 0..s {
        let v = k + slot;
        let n = steiner_sizes[slot];
        for i in 0..n {
            for j in i + 1..n {
                for m in 0..n {
                    if m == i || m == j {
                        continue;
                    }
                    add_row(
                        &mut problem,
                        &[
                            (layout.entry(v, i, j), 1.0),
                            (layout.entry(v, i, m), -1.0),
                            (layout.entry(v, m, j), -1.0),
                        ],
                        ComparisonOp::Le,
                    );
                }
            }
        }
    }

    let solution = problem
        .solve()
        .map_err(|e| match e {
            microlp::Error::Infeasible => Error::Infeasible,
            other => Error::NumericalFailure(format!("edge program: {other}")),
        })?
        .into_solution()
        .map_err(|_| Error::NumericalFailure("edge program interrupted".into()))?;

    let mut matrices = Vec::with_capacity(s);
    for slot in 0..s {
        let n = steiner_sizes[slot];
        let mut m = DistanceMatrix::from_flat(n, vec![0.0; n * n]);
        for i in 0..n {
            for j in i + 1..n {
                if let Entry::Var(x) = layout.entry(k + slot, i, j) {
                    m.set_symmetric(i, j, solution.var_value(x).clamp(0.0, d_hat));
                }
            }
        }
        if m.violations(false).into_iter().next().is_some() {
            return Err(Error::NumericalFailure(format!(
                "Steiner slot {slot} violates the triangle inequality beyond {EPS_FEAS}"
            )));
        }
        matrices.push(m);
    }

    let tight: Vec<f64> = topology
        .edges()
        .iter()
        .zip(correspondences)
        .map(|(&(u, v), r)| {
            tight_slack(
                r,
                vertex_matrix(u, k, terminals, &matrices),
                vertex_matrix(v, k, terminals, &matrices),
            )
        })
        .collect();
    let objective = tight.iter().sum::<f64>() / 2.0;
    if objective > solution.objective() + OBJECTIVE_AGREEMENT {
        return Err(Error::NumericalFailure(format!(
            "edge program objective {} but solution evaluates to {objective}",
            solution.objective()
        )));
    }
    Ok(EdgeSolution {
        matrices,
        slacks: tight,
        objective,
    })
}
