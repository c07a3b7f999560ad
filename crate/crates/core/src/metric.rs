//! Finite metric and pseudometric spaces stored as dense distance matrices.
//!
//! A [`FiniteMetricSpace`] is what callers hand in (boundary spaces) and what
//! the solver hands out (quotiented Steiner spaces). A [`PseudometricSpace`]
//! allows distinct points at distance zero; the edge program produces these
//! and [`quotient`] turns them back into metric spaces.

use crate::error::{Error, Result, ValidationError, Violation};

/// Absolute slack allowed in triangle inequality checks.
pub const EPS_FEAS: f64 = 1e-9;

/// Points closer than this are identified by [`quotient`].
pub const EPS_MERGE: f64 = 1e-9;

/// Row-major square matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps row-major data without checking any axioms.
    ///
    /// # Panics
    ///
    /// Panics if `data.len() != n * n`.
    pub fn from_flat(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "distance matrix must be n x n");
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut violations = Vec::new();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                violations.push(Violation::NotSquare { row, len: r.len() });
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid {
                name: String::new(),
                source: ValidationError { violations },
            });
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Matrix of a single point.
    pub fn point() -> Self {
        Self::from_flat(1, vec![0.0])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Largest entry of row `i`.
    pub fn eccentricity(&self, i: usize) -> f64 {
        self.data[i * self.n..(i + 1) * self.n]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// Submatrix on the given indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut data = Vec::with_capacity(m * m);
        for &a in idx {
            for &b in idx {
                data.push(self.get(a, b));
            }
        }
        Self::from_flat(m, data)
    }

    /// Shortest-path closure; the result is the largest pseudometric below `self`.
    pub fn metric_closure(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = out.get(i, k) + out.get(k, j);
                    if via < out.get(i, j) {
                        out.data[i * n + j] = via;
                    }
                }
            }
        }
        out
    }

    /// Checks the axioms. `strict` additionally requires positive
    /// off-diagonal entries.
    pub fn violations(&self, strict: bool) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.get(i, j).is_finite() {
                    out.push(Violation::NonFinite(i, j));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                out.push(Violation::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.get(i, j) < 0.0 {
                    out.push(Violation::NegativeEntry(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    out.push(Violation::Asymmetric(i, j));
                }
                if strict && self.get(i, j) == 0.0 {
                    out.push(Violation::ZeroDistance(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if self.get(i, j) > self.get(i, k) + self.get(k, j) + EPS_FEAS {
                        out.push(Violation::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        out
    }
}

impl AsRef<DistanceMatrix> for DistanceMatrix {
    fn as_ref(&self) -> &DistanceMatrix {
        self
    }
}

fn default_labels(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{i:0width$}")).collect()
}

macro_rules! space_common {
    ($ty:ident) => {
        impl $ty {
            pub fn name(&self) -> &str {
                &self.name
            }

            pub fn labels(&self) -> &[String] {
                &self.labels
            }

            pub fn matrix(&self) -> &DistanceMatrix {
                &self.dist
            }

            pub fn len(&self) -> usize {
                self.dist.len()
            }

            pub fn is_empty(&self) -> bool {
                self.dist.is_empty()
            }

            pub fn dist(&self, i: usize, j: usize) -> f64 {
                self.dist.get(i, j)
            }

            pub fn diameter(&self) -> f64 {
                diameter(&self.dist)
            }

            pub fn with_name(mut self, name: impl Into<String>) -> Self {
                self.name = name.into();
                self
            }
        }

        impl AsRef<DistanceMatrix> for $ty {
            fn as_ref(&self) -> &DistanceMatrix {
                &self.dist
            }
        }
    };
}

/// A finite metric space: labeled points and a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    name: String,
    labels: Vec<String>,
    dist: DistanceMatrix,
}

/// Like [`FiniteMetricSpace`] but distinct points may be at distance zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudometricSpace {
    name: String,
    labels: Vec<String>,
    dist: DistanceMatrix,
}

space_common!(FiniteMetricSpace);
space_common!(PseudometricSpace);

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::LabelMismatch {
            labels: labels.len(),
            size: n,
        });
    }
    Ok(())
}

/// Validates a matrix as a finite metric space, reporting every violated axiom.
pub fn validate(
    name: impl Into<String>,
    dist: DistanceMatrix,
    labels: Option<Vec<String>>,
) -> Result<FiniteMetricSpace> {
    let name = name.into();
    if dist.is_empty() {
        return Err(Error::EmptySpace);
    }
    let labels = labels.unwrap_or_else(|| default_labels(dist.len()));
    check_labels(&labels, dist.len())?;
    let violations = dist.violations(true);
    if !violations.is_empty() {
        return Err(Error::Invalid {
            name,
            source: ValidationError { violations },
        });
    }
    Ok(FiniteMetricSpace { name, labels, dist })
}

impl FiniteMetricSpace {
    /// Validates nested rows; see [`validate`].
    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let name = name.into();
        let dist = DistanceMatrix::from_rows(rows).map_err(|e| match e {
            Error::Invalid { source, .. } => Error::Invalid {
                name: name.clone(),
                source,
            },
            other => other,
        })?;
        validate(name, dist, None)
    }

    /// A two-point space with the given distance.
    pub fn two_point(name: impl Into<String>, distance: f64) -> Result<Self> {
        Self::from_rows(name, &[vec![0.0, distance], vec![distance, 0.0]])
    }

    pub fn one_point(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            labels: default_labels(1),
            dist: DistanceMatrix::point(),
        }
    }

    /// Every metric space is also a pseudometric space.
    pub fn to_pseudometric(&self) -> PseudometricSpace {
        PseudometricSpace {
            name: self.name.clone(),
            labels: self.labels.clone(),
            dist: self.dist.clone(),
        }
    }

    /// Subspace on the given point indices.
    pub fn subspace(&self, idx: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            dist: self.dist.restrict(idx),
        }
    }
}

impl PseudometricSpace {
    pub fn new(name: impl Into<String>, dist: DistanceMatrix, labels: Option<Vec<String>>) -> Result<Self> {
        let name = name.into();
        if dist.is_empty() {
            return Err(Error::EmptySpace);
        }
        let labels = labels.unwrap_or_else(|| default_labels(dist.len()));
        check_labels(&labels, dist.len())?;
        let violations = dist.violations(false);
        if !violations.is_empty() {
            return Err(Error::Invalid {
                name,
                source: ValidationError { violations },
            });
        }
        Ok(Self { name, labels, dist })
    }
}

/// Largest distance in the space; 0 for a single point.
pub fn diameter<M: AsRef<DistanceMatrix>>(space: &M) -> f64 {
    space.as_ref().diameter()
}

/// Partition of point indices into classes of points within [`EPS_MERGE`].
///
/// Classes are ordered by their smallest member; `class_of[i]` is the class
/// index of point `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl MergeClasses {
    pub fn of(dist: &DistanceMatrix) -> Self {
        let n = dist.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist.get(i, j) <= EPS_MERGE {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_class = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_class[r] == usize::MAX {
                root_class[r] = classes.len();
                classes.push(Vec::new());
            }
            class_of[i] = root_class[r];
            classes[root_class[r]].push(i);
        }
        Self { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    /// Induced matrix on classes: the largest distance between members.
    ///
    /// Taking the maximum keeps the diameter unchanged and never introduces a
    /// new triangle violation.
    pub fn induced(&self, dist: &DistanceMatrix) -> DistanceMatrix {
        let m = self.classes.len();
        let mut out = DistanceMatrix::from_flat(m, vec![0.0; m * m]);
        for a in 0..m {
            for b in a + 1..m {
                let mut best = 0.0f64;
                for &i in &self.classes[a] {
                    for &j in &self.classes[b] {
                        best = best.max(dist.get(i, j));
                    }
                }
                out.set_symmetric(a, b, best);
            }
        }
        out
    }
}

/// Identifies points at pseudodistance at most [`EPS_MERGE`].
///
/// Each class is labeled by the lexicographically smallest member label.
pub fn quotient(space: &PseudometricSpace) -> Result<FiniteMetricSpace> {
    let classes = MergeClasses::of(&space.dist);
    let dist = classes.induced(&space.dist);
    let labels = classes
        .classes
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&i| space.labels[i].as_str())
                .min()
                .unwrap_or_default()
                .to_owned()
        })
        .collect();
    let violations = dist.violations(true);
    if !violations.is_empty() {
        return Err(Error::QuotientNotMetric(ValidationError { violations }));
    }
    Ok(FiniteMetricSpace {
        name: space.name.clone(),
        labels,
        dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[f64]]) -> Vec<Vec<f64>> {
        r.iter().map(|x| x.to_vec()).collect()
    }

    fn violations_of(r: &[&[f64]]) -> Vec<Violation> {
        match FiniteMetricSpace::from_rows("x", &rows(r)) {
            Err(Error::Invalid { source, .. }) => source.violations,
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn two_point_is_valid() {
        let x = FiniteMetricSpace::from_rows("x", &rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.labels(), &["0", "1"]);
    }

    #[test]
    fn asymmetric_reported() {
        let v = violations_of(&[&[0.0, 1.0], &[2.0, 0.0]]);
        assert_eq!(v, vec![Violation::Asymmetric(0, 1)]);
        assert_eq!(v[0].to_string(), "Asymmetric(0,1)");
    }

    #[test]
    fn triangle_violation_reported() {
        let v = violations_of(&[&[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0], &[3.0, 1.0, 0.0]]);
        assert_eq!(v, vec![Violation::TriangleViolation(0, 2, 1)]);
    }

    #[test]
    fn all_violations_reported() {
        let v = violations_of(&[&[1.0, -1.0], &[2.0, 0.0]]);
        assert!(v.contains(&Violation::NonzeroDiagonal(0)));
        assert!(v.contains(&Violation::NegativeEntry(0, 1)));
        assert!(v.contains(&Violation::Asymmetric(0, 1)));
    }

    #[test]
    fn strict_positivity_and_shape() {
        let v = violations_of(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(v, vec![Violation::ZeroDistance(0, 1)]);
        let v = violations_of(&[&[0.0, 1.0], &[1.0]]);
        assert_eq!(v, vec![Violation::NotSquare { row: 1, len: 1 }]);
        let v = violations_of(&[&[0.0, f64::NAN], &[1.0, 0.0]]);
        assert_eq!(v, vec![Violation::NonFinite(0, 1)]);
        assert!(matches!(FiniteMetricSpace::from_rows("x", &[]), Err(Error::EmptySpace)));
    }

    #[test]
    fn triangle_within_tolerance_accepted() {
        let r = rows(&[&[0.0, 1.0, 2.0 + 5e-10], &[1.0, 0.0, 1.0], &[2.0 + 5e-10, 1.0, 0.0]]);
        assert!(FiniteMetricSpace::from_rows("x", &r).is_ok());
    }

    #[test]
    fn diameters() {
        assert_eq!(FiniteMetricSpace::one_point("p").diameter(), 0.0);
        assert_eq!(FiniteMetricSpace::two_point("x", 5.0).unwrap().diameter(), 5.0);
        let x =
            FiniteMetricSpace::from_rows("x", &rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 3.0], &[2.0, 3.0, 0.0]])).unwrap();
        assert_eq!(x.diameter(), 3.0);
    }

    fn pseudo(r: &[&[f64]]) -> PseudometricSpace {
        PseudometricSpace::new("p", DistanceMatrix::from_rows(&rows(r)).unwrap(), None).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&pseudo(&[&[0.0, 0.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(q.len(), 1);

        let p = pseudo(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let q = quotient(&p).unwrap();
        assert_eq!(q.matrix(), p.matrix());

        let q = quotient(&pseudo(&[&[0.0, 0.0, 2.0], &[0.0, 0.0, 2.0], &[2.0, 2.0, 0.0]])).unwrap();
        assert_eq!(q.matrix().rows(), rows(&[&[0.0, 2.0], &[2.0, 0.0]]));
        assert_eq!(q.labels(), &["0", "2"]);
    }

    #[test]
    fn quotient_label_is_smallest_member() {
        let p = PseudometricSpace::new(
            "p",
            DistanceMatrix::from_rows(&rows(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])).unwrap(),
            Some(vec!["c".into(), "z".into(), "b".into()]),
        )
        .unwrap();
        let q = quotient(&p).unwrap();
        assert_eq!(q.labels(), &["c", "b"]);
    }

    #[test]
    fn quotient_keeps_diameter_and_is_idempotent() {
        let p = pseudo(&[
            &[0.0, 1e-10, 3.0, 2.0],
            &[1e-10, 0.0, 3.0 + 1e-10, 2.0],
            &[3.0, 3.0 + 1e-10, 0.0, 1.5],
            &[2.0, 2.0, 1.5, 0.0],
        ]);
        let q = quotient(&p).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.diameter(), p.diameter());
        let qq = quotient(&q.to_pseudometric()).unwrap();
        assert_eq!(qq, q);
    }

    #[test]
    fn closure_repairs_triangles() {
        let m = DistanceMatrix::from_rows(&rows(&[&[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0], &[3.0, 1.0, 0.0]])).unwrap();
        let c = m.metric_closure();
        assert_eq!(c.get(0, 2), 2.0);
        assert!(c.violations(false).is_empty());
    }
}
