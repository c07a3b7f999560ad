//! JSON documents and DOT rendering.
//!
//! Floats are rounded to 9 significant digits when written and never
//! internally.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gh::GhResult;
use crate::metric::{validate, DistanceMatrix, FiniteMetricSpace};
use crate::solver::{Bounds, SolveReport, SteinerTree};
use crate::topology::VertexKind;

/// One space: `{"name", "points", "matrix"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub name: String,
    pub points: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

/// A boundary set: `{"spaces": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub spaces: Vec<SpaceJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpacesDocument {
    Many(BoundaryJson),
    One(SpaceJson),
}

impl SpacesDocument {
    pub fn into_spaces(self) -> Vec<SpaceJson> {
        match self {
            Self::Many(b) => b.spaces,
            Self::One(s) => vec![s],
        }
    }
}

impl SpaceJson {
    pub fn parse(&self) -> Result<FiniteMetricSpace> {
        let dist = DistanceMatrix::from_rows(&self.matrix).map_err(|e| match e {
            Error::Invalid { source, .. } => Error::Invalid {
                name: self.name.clone(),
                source,
            },
            other => other,
        })?;
        validate(self.name.clone(), dist, Some(self.points.clone()))
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self {
            name: space.name().to_owned(),
            points: space.labels().to_vec(),
            matrix: rounded_rows(space.matrix()),
        }
    }
}

pub fn read_document(path: &Path) -> Result<SpacesDocument> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Parses every space and checks that names are unique.
pub fn parse_boundary(spaces: &[SpaceJson]) -> Result<Vec<FiniteMetricSpace>> {
    let mut names = BTreeSet::new();
    for s in spaces {
        if !names.insert(s.name.as_str()) {
            return Err(Error::DuplicateName(s.name.clone()));
        }
    }
    spaces.iter().map(SpaceJson::parse).collect()
}

pub fn load_boundary(path: &Path) -> Result<Vec<FiniteMetricSpace>> {
    parse_boundary(&read_document(path)?.into_spaces())
}

/// A file holding exactly one space, bare or wrapped in `{"spaces": [...]}`.
pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    let spaces = read_document(path)?.into_spaces();
    match spaces.as_slice() {
        [one] => one.parse(),
        _ => Err(Error::Input(format!(
            "{}: expected one space, found {}",
            path.display(),
            spaces.len()
        ))),
    }
}

/// Rounds to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn rounded_rows(m: &DistanceMatrix) -> Vec<Vec<f64>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(round_sig).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhOutput {
    pub distance: f64,
    pub correspondence: Vec<[usize; 2]>,
}

impl From<&GhResult> for GhOutput {
    fn from(r: &GhResult) -> Self {
        Self {
            distance: round_sig(r.distance),
            correspondence: r.witness.to_pairs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: f64,
    pub r_ub: f64,
    pub d_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub kind: VertexKind,
    pub name: String,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub length: f64,
    pub correspondence: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub total_length: f64,
    pub bounds: BoundsJson,
    pub tree: TreeJson,
    pub restart_lengths: Vec<f64>,
    pub flags: Vec<String>,
}

fn vertex_name(tree: &SteinerTree, id: usize) -> String {
    let v = &tree.vertices[id];
    match v.kind {
        VertexKind::Terminal => v.space.name().to_owned(),
        VertexKind::Steiner => format!("steiner_{id}"),
    }
}

impl From<&Bounds> for BoundsJson {
    fn from(b: &Bounds) -> Self {
        Self {
            n: b.n,
            d: round_sig(b.d),
            r_ub: round_sig(b.r_ub),
            d_hat: round_sig(b.d_hat),
        }
    }
}

impl From<&SteinerTree> for TreeJson {
    fn from(tree: &SteinerTree) -> Self {
        Self {
            vertices: tree
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexJson {
                    id,
                    kind: v.kind,
                    name: vertex_name(tree, id),
                    matrix: rounded_rows(v.space.matrix()),
                })
                .collect(),
            edges: tree
                .edges
                .iter()
                .map(|e| EdgeJson {
                    u: e.u,
                    v: e.v,
                    length: round_sig(e.length),
                    correspondence: e.correspondence.to_pairs(),
                })
                .collect(),
        }
    }
}

impl From<&SolveReport> for SolveOutput {
    fn from(r: &SolveReport) -> Self {
        Self {
            total_length: round_sig(r.tree.total_length),
            bounds: (&r.bounds).into(),
            tree: (&r.tree).into(),
            restart_lengths: r.restart_lengths.iter().copied().map(round_sig).collect(),
            flags: r.flags.clone(),
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT graph: terminals as labeled boxes, Steiner vertices as
/// circles labeled with their point count, edges labeled with their length.
pub fn to_dot(tree: &SteinerTree) -> String {
    let mut out = String::from("graph steiner_tree {\n");
    for (id, v) in tree.vertices.iter().enumerate() {
        let (shape, label) = match v.kind {
            VertexKind::Terminal => ("box", dot_escape(v.space.name())),
            VertexKind::Steiner => ("circle", v.space.len().to_string()),
        };
        let _ = writeln!(out, "  v{id} [shape={shape}, label=\"{label}\"];");
    }
    for e in &tree.edges {
        let _ = writeln!(out, "  v{} -- v{} [label=\"{:.6}\"];", e.u, e.v, e.length);
    }
    out.push_str("}\n");
    out
}
