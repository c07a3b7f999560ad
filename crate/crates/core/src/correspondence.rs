//! Relations, correspondences and their distortion, plus the exact search for
//! an optimal correspondence between two finite spaces.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;

/// Default cap on enumerated candidates (and on search nodes).
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// A relation between point sets of sizes `n_x` and `n_y`, stored as a
/// row-major boolean incidence matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n_x: usize,
    n_y: usize,
    bits: Vec<bool>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}x{}]", self.n_x, self.n_y)?;
        f.debug_list().entries(self.pairs()).finish()
    }
}

impl Relation {
    pub fn empty(n_x: usize, n_y: usize) -> Self {
        Self {
            n_x,
            n_y,
            bits: vec![false; n_x * n_y],
        }
    }

    pub fn from_pairs(n_x: usize, n_y: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Self::empty(n_x, n_y);
        for &(i, j) in pairs {
            if i >= n_x || j >= n_y {
                return Err(Error::InvalidCorrespondence(format!(
                    "pair ({i},{j}) out of range for {n_x}x{n_y}"
                )));
            }
            r.insert(i, j);
        }
        if r.is_empty() {
            return Err(Error::InvalidCorrespondence("relation is empty".into()));
        }
        Ok(r)
    }

    pub fn full(n_x: usize, n_y: usize) -> Self {
        Self {
            n_x,
            n_y,
            bits: vec![true; n_x * n_y],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_x, self.n_y)
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n_y + j]
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.n_y + j] = true;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Pairs in row-major (sorted) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n_y = self.n_y;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| (k / n_y, k % n_y))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::empty(self.n_y, self.n_x);
        for (i, j) in self.pairs() {
            t.insert(j, i);
        }
        t
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Both projections are surjective.
    pub fn is_correspondence(&self) -> bool {
        let rows_ok = (0..self.n_x).all(|i| (0..self.n_y).any(|j| self.contains(i, j)));
        let cols_ok = (0..self.n_y).all(|j| (0..self.n_x).any(|i| self.contains(i, j)));
        rows_ok && cols_ok
    }

    /// Pairs with `i ∈ xs` and `j ∈ ys`, reindexed to positions within the
    /// subsets. `None` when no pair survives.
    pub fn restrict(&self, xs: &[usize], ys: &[usize]) -> Option<Relation> {
        let mut out = Relation::empty(xs.len(), ys.len());
        for (a, &i) in xs.iter().enumerate() {
            for (b, &j) in ys.iter().enumerate() {
                if self.contains(i, j) {
                    out.insert(a, b);
                }
            }
        }
        (!out.is_empty()).then_some(out)
    }
}

/// A relation whose projections onto both factors are surjective.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence(Relation);

impl TryFrom<Relation> for Correspondence {
    type Error = Error;

    fn try_from(r: Relation) -> Result<Self> {
        if r.n_x == 0 || r.n_y == 0 || !r.is_correspondence() {
            return Err(Error::InvalidCorrespondence("projections are not surjective".into()));
        }
        Ok(Self(r))
    }
}

impl std::ops::Deref for Correspondence {
    type Target = Relation;

    fn deref(&self) -> &Relation {
        &self.0
    }
}

impl Correspondence {
    pub fn from_pairs(n_x: usize, n_y: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Relation::from_pairs(n_x, n_y, pairs)?.try_into()
    }

    pub fn identity(n: usize) -> Self {
        Self(Relation::identity(n))
    }

    pub fn full(n_x: usize, n_y: usize) -> Self {
        Self(Relation::full(n_x, n_y))
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0
    }

    pub fn into_relation(self) -> Relation {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Sorted list of index pairs, the serialized form.
    pub fn to_pairs(&self) -> Vec<[usize; 2]> {
        self.pairs().map(|(i, j)| [i, j]).collect()
    }

    /// Restriction that must remain a correspondence on the subsets.
    pub fn restrict_to_correspondence(&self, xs: &[usize], ys: &[usize]) -> Option<Self> {
        self.0.restrict(xs, ys).and_then(|r| Self::try_from(r).ok())
    }
}

/// `max | d_X(i,i') - d_Y(j,j') |` over all ordered pairs of related pairs.
pub fn distortion<X, Y>(sigma: &Relation, x: &X, y: &Y) -> f64
where
    X: AsRef<DistanceMatrix> + ?Sized,
    Y: AsRef<DistanceMatrix> + ?Sized,
{
    let (dx, dy) = (x.as_ref(), y.as_ref());
    let pairs: Vec<_> = sigma.pairs().collect();
    let mut dis = 0.0f64;
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            dis = dis.max((dx.get(i, i2) - dy.get(j, j2)).abs());
        }
    }
    dis
}

/// `n_y^n_x * n_x^n_y`, the number of `(f, g)` pairs.
pub fn search_space_size(n_x: usize, n_y: usize) -> f64 {
    (n_y as f64).powi(n_x as i32) * (n_x as f64).powi(n_y as i32)
}

/// Every correspondence of the form `graph(f) ∪ graph(g)` with `f: X → Y` and
/// `g: Y → X`, deduplicated and in incidence-matrix order.
///
/// Every correspondence contains such a union and distortion only grows under
/// supersets, so the minimum distortion is attained on this family.
pub fn enumerate_minimal_correspondences(
    n_x: usize,
    n_y: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Correspondence>> {
    if n_x == 0 || n_y == 0 {
        return Err(Error::EmptySpace);
    }
    let size = search_space_size(n_x, n_y);
    if size > cap as f64 {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    let mut seen = BTreeSet::new();
    let mut f = vec![0usize; n_x];
    loop {
        let mut g = vec![0usize; n_y];
        loop {
            let mut r = Relation::empty(n_x, n_y);
            for (i, &j) in f.iter().enumerate() {
                r.insert(i, j);
            }
            for (j, &i) in g.iter().enumerate() {
                r.insert(i, j);
            }
            seen.insert(Correspondence(r));
            if !odometer(&mut g, n_x) {
                break;
            }
        }
        if !odometer(&mut f, n_y) {
            break;
        }
    }
    Ok(seen.into_iter())
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exact search for a correspondence of minimum distortion.
///
/// Depth-first over `f` and then over `g` for the Y points `f` left
/// uncovered, with branch-and-bound on the running distortion. Every pair
/// carries a static lower bound (each point of either space must be related
/// to something), the point with the fewest admissible partners is branched
/// on first, and a branch is cut as soon as some unpaired point has none.
///
/// A first pass finds the optimal value. A second pass fixes the incidence
/// matrix cell by cell in row-major order, keeping a cell at 0 whenever some
/// optimal correspondence still agrees with every cell fixed so far, which
/// yields the lexicographically smallest optimum.
#[derive(Debug, Clone)]
pub struct CorrespondenceSearch<'a> {
    x: &'a DistanceMatrix,
    y: &'a DistanceMatrix,
    upper_bound: Option<f64>,
    cap: u64,
}

impl<'a> CorrespondenceSearch<'a> {
    pub fn new<X, Y>(x: &'a X, y: &'a Y) -> Self
    where
        X: AsRef<DistanceMatrix> + ?Sized,
        Y: AsRef<DistanceMatrix> + ?Sized,
    {
        Self {
            x: x.as_ref(),
            y: y.as_ref(),
            upper_bound: None,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// Discard any branch whose distortion exceeds `bound`.
    pub fn upper_bound(mut self, bound: f64) -> Self {
        self.upper_bound = Some(bound);
        self
    }

    /// Maximum number of search nodes before giving up.
    pub fn cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// `Ok(None)` only when an upper bound excludes every correspondence.
    pub fn run(&self) -> Result<Option<(Correspondence, f64)>> {
        let (n_x, n_y) = (self.x.len(), self.y.len());
        if n_x == 0 || n_y == 0 {
            return Err(Error::EmptySpace);
        }
        let mut bnb = Bnb::new(self.x, self.y, self.cap);
        let limit = self.upper_bound.unwrap_or(f64::INFINITY);
        let floor = (self.x.diameter() - self.y.diameter()).abs();

        let (greedy, greedy_bits) = bnb.greedy();
        if greedy <= limit {
            bnb.best = Some(greedy);
            bnb.witness = Some(greedy_bits);
        }
        bnb.limit = limit;
        if bnb.best.is_none_or(|b| b > floor) {
            bnb.floor = floor;
            bnb.search(0.0)?;
        }
        let Some(target) = bnb.best else {
            return Ok(None);
        };
        let bits = bnb.lex_min(target)?;
        let r = Correspondence(Relation { n_x, n_y, bits });
        let dis = distortion(&r, self.x, self.y);
        Ok(Some((r, dis)))
    }
}

/// Optimal correspondence and its distortion, under the default cap.
pub fn optimal_correspondence<X, Y>(x: &X, y: &Y) -> Result<(Correspondence, f64)>
where
    X: AsRef<DistanceMatrix> + ?Sized,
    Y: AsRef<DistanceMatrix> + ?Sized,
{
    CorrespondenceSearch::new(x, y)
        .run()?
        .ok_or_else(|| Error::NumericalFailure("no correspondence found".into()))
}

/// Branching candidate: (over Y, point, admissible partners with costs).
type Choice = (bool, usize, Vec<(f64, usize)>);

enum Step {
    Leaf,
    Prune,
    /// Pair `point` (an X point, or a Y point when `over_y`) with one of
    /// `partners`.
    Branch {
        over_y: bool,
        point: usize,
        partners: Vec<(f64, usize)>,
    },
}

struct Bnb<'a> {
    dx: &'a DistanceMatrix,
    dy: &'a DistanceMatrix,
    pair_lb: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    bits: Vec<bool>,
    forbidden: Vec<bool>,
    assigned_x: Vec<bool>,
    covered: Vec<u32>,
    nodes: u64,
    cap: u64,
    done: bool,
    limit: f64,
    floor: f64,
    /// Minimizing when false; otherwise any leaf within `limit` ends the run.
    feasibility: bool,
    best: Option<f64>,
    witness: Option<Vec<bool>>,
}

fn by_eccentricity(d: &DistanceMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d.eccentricity(b).total_cmp(&d.eccentricity(a)).then(a.cmp(&b)));
    order
}

/// Distortion any correspondence containing `(i, j)` must have: every point
/// of X is related to some point of Y and vice versa.
fn pair_lower_bounds(dx: &DistanceMatrix, dy: &DistanceMatrix) -> Vec<f64> {
    let (n_x, n_y) = (dx.len(), dy.len());
    let mut lb = vec![0.0f64; n_x * n_y];
    for i in 0..n_x {
        for j in 0..n_y {
            let gap = |i2: usize, j2: usize| (dx.get(i, i2) - dy.get(j, j2)).abs();
            let from_x = (0..n_x).fold(0.0f64, |acc, i2| {
                acc.max((0..n_y).fold(f64::INFINITY, |m, j2| m.min(gap(i2, j2))))
            });
            let from_y = (0..n_y).fold(0.0f64, |acc, j2| {
                acc.max((0..n_x).fold(f64::INFINITY, |m, i2| m.min(gap(i2, j2))))
            });
            lb[i * n_y + j] = from_x.max(from_y);
        }
    }
    lb
}

fn by_cost(a: &(f64, usize), b: &(f64, usize)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl<'a> Bnb<'a> {
    fn new(dx: &'a DistanceMatrix, dy: &'a DistanceMatrix, cap: u64) -> Self {
        let cells = dx.len() * dy.len();
        Self {
            dx,
            dy,
            pair_lb: pair_lower_bounds(dx, dy),
            pairs: Vec::with_capacity(dx.len() + dy.len()),
            bits: vec![false; cells],
            forbidden: vec![false; cells],
            assigned_x: vec![false; dx.len()],
            covered: vec![0; dy.len()],
            nodes: 0,
            cap,
            done: false,
            limit: f64::INFINITY,
            floor: f64::NEG_INFINITY,
            feasibility: false,
            best: None,
            witness: None,
        }
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        i * self.dy.len() + j
    }

    /// Lower bound on the distortion once `(i, j)` joins the fixed pairs.
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.pairs.iter().fold(self.pair_lb[self.cell(i, j)], |acc, &(i2, j2)| {
            acc.max((self.dx.get(i, i2) - self.dy.get(j, j2)).abs())
        })
    }

    /// Cheapest-first assignment without backtracking.
    fn greedy(&mut self) -> (f64, Vec<bool>) {
        let mut cur = 0.0f64;
        for i in by_eccentricity(self.dx) {
            let (c, j) = (0..self.dy.len())
                .map(|j| (cur.max(self.cost(i, j)), j))
                .min_by(by_cost)
                .expect("nonempty");
            cur = c;
            self.push(i, j, true);
        }
        for j in by_eccentricity(self.dy) {
            if self.covered[j] > 0 {
                continue;
            }
            let (c, i) = (0..self.dx.len())
                .map(|i| (cur.max(self.cost(i, j)), i))
                .min_by(by_cost)
                .expect("nonempty");
            cur = c;
            self.push(i, j, false);
        }
        let bits = self.bits.clone();
        self.reset();
        (cur, bits)
    }

    fn reset(&mut self) {
        self.pairs.clear();
        self.bits.iter_mut().for_each(|b| *b = false);
        self.assigned_x.iter_mut().for_each(|a| *a = false);
        self.covered.iter_mut().for_each(|c| *c = 0);
    }

    fn admits(&self, c: f64) -> bool {
        c <= self.limit && (self.feasibility || self.best.is_none_or(|b| c < b))
    }

    fn allowed(&self, i: usize, j: usize, cur: f64) -> bool {
        !self.forbidden[self.cell(i, j)] && self.admits(cur.max(self.cost(i, j)))
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::SearchSpaceTooLarge {
                size: search_space_size(self.dx.len(), self.dy.len()),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Admissible partners of X point `p` (or Y point `p` when `over_y`).
    fn partners(&self, p: usize, over_y: bool, cur: f64) -> Vec<(f64, usize)> {
        let n = if over_y { self.dx.len() } else { self.dy.len() };
        (0..n)
            .filter_map(|o| {
                let (i, j) = if over_y { (o, p) } else { (p, o) };
                let c = cur.max(self.cost(i, j));
                (!self.forbidden[self.cell(i, j)] && self.admits(c)).then_some((c, o))
            })
            .collect()
    }

    /// Chooses the point with the fewest admissible partners.
    fn step(&self, cur: f64) -> Step {
        let in_f = self.assigned_x.contains(&false);
        let mut choice: Option<Choice> = None;
        let better = |choice: &Option<Choice>, n: usize| choice.as_ref().is_none_or(|c| n < c.2.len());
        for i in (0..self.dx.len()).filter(|&i| !self.assigned_x[i]) {
            let p = self.partners(i, false, cur);
            if p.is_empty() {
                return Step::Prune;
            }
            if better(&choice, p.len()) {
                choice = Some((false, i, p));
            }
        }
        for j in (0..self.dy.len()).filter(|&j| self.covered[j] == 0) {
            if in_f {
                if !(0..self.dx.len()).any(|i| self.allowed(i, j, cur)) {
                    return Step::Prune;
                }
                continue;
            }
            let p = self.partners(j, true, cur);
            if p.is_empty() {
                return Step::Prune;
            }
            if better(&choice, p.len()) {
                choice = Some((true, j, p));
            }
        }
        match choice {
            None => Step::Leaf,
            Some((over_y, point, mut partners)) => {
                partners.sort_by(by_cost);
                Step::Branch {
                    over_y,
                    point,
                    partners,
                }
            }
        }
    }

    fn push(&mut self, i: usize, j: usize, f_step: bool) {
        let c = self.cell(i, j);
        self.pairs.push((i, j));
        self.covered[j] += 1;
        self.bits[c] = true;
        if f_step {
            self.assigned_x[i] = true;
        }
    }

    fn pop(&mut self, i: usize, j: usize, f_step: bool) {
        let c = self.cell(i, j);
        self.pairs.pop();
        self.covered[j] -= 1;
        self.bits[c] = false;
        if f_step {
            self.assigned_x[i] = false;
        }
    }

    fn search(&mut self, cur: f64) -> Result<()> {
        if self.done {
            return Ok(());
        }
        let (over_y, point, partners) = match self.step(cur) {
            Step::Prune => return Ok(()),
            Step::Leaf => {
                self.leaf(cur);
                return Ok(());
            }
            Step::Branch {
                over_y,
                point,
                partners,
            } => (over_y, point, partners),
        };
        for (c, other) in partners {
            if !self.admits(c) {
                continue;
            }
            let (i, j) = if over_y { (other, point) } else { (point, other) };
            self.tick()?;
            self.push(i, j, !over_y);
            let out = self.search(c);
            self.pop(i, j, !over_y);
            out?;
            if self.done {
                break;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, cur: f64) {
        self.witness = Some(self.bits.clone());
        if self.feasibility {
            self.done = true;
            return;
        }
        self.best = Some(cur);
        if cur <= self.floor {
            self.done = true;
        }
    }

    /// Row-major smallest incidence matrix of a correspondence with
    /// distortion at most `target`, given a witness in `self.witness`.
    fn lex_min(&mut self, target: f64) -> Result<Vec<bool>> {
        let mut witness = self
            .witness
            .take()
            .ok_or_else(|| Error::NumericalFailure("optimal correspondence not re-found".into()))?;
        self.reset();
        self.limit = target;
        self.feasibility = true;
        let mut cur = 0.0f64;
        for pos in 0..self.bits.len() {
            let (i, j) = (pos / self.dy.len(), pos % self.dy.len());
            self.forbidden[pos] = true;
            let zero = !witness[pos] || {
                // the witness uses this cell; look for one that does not
                self.done = false;
                self.witness = None;
                self.search(cur)?;
                match self.witness.take() {
                    Some(w) => {
                        witness = w;
                        true
                    }
                    None => false,
                }
            };
            if !zero {
                self.forbidden[pos] = false;
                cur = cur.max(self.cost(i, j));
                self.push(i, j, true);
            }
        }
        Ok(self.bits.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(d: f64) -> DistanceMatrix {
        DistanceMatrix::from_flat(2, vec![0.0, d, d, 0.0])
    }

    #[test]
    fn distortion_examples() {
        let x = two(1.0);
        assert_eq!(distortion(&Relation::identity(2), &x, &x), 0.0);
        assert_eq!(distortion(&Relation::full(2, 1), &x, &DistanceMatrix::point()), 1.0);
        assert_eq!(distortion(&Relation::identity(2), &x, &two(3.0)), 2.0);
        let single = Relation::from_pairs(2, 2, &[(0, 1)]).unwrap();
        assert_eq!(distortion(&single, &x, &two(3.0)), 0.0);
    }

    #[test]
    fn restrict_examples() {
        let id3 = Relation::identity(3);
        assert_eq!(id3.restrict(&[0, 1], &[0, 1]), Some(Relation::identity(2)));
        let r = Relation::from_pairs(2, 1, &[(0, 0)]).unwrap();
        assert_eq!(r.restrict(&[1], &[0]), None);
        let full = Relation::full(2, 2);
        assert_eq!(
            full.restrict(&[0], &[0, 1]).unwrap().pairs().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1)]
        );
    }

    #[test]
    fn correspondence_requires_surjectivity() {
        assert!(Correspondence::from_pairs(2, 2, &[(0, 0), (1, 0)]).is_err());
        assert!(Correspondence::from_pairs(2, 2, &[(0, 0), (1, 1)]).is_ok());
        assert!(Relation::from_pairs(2, 2, &[(2, 0)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let count = |a, b| {
            enumerate_minimal_correspondences(a, b, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .count()
        };
        assert_eq!(count(1, 1), 1);
        assert_eq!(count(2, 1), 1);
        assert_eq!(count(2, 2), 7);
        let only: Vec<_> = enumerate_minimal_correspondences(2, 1, 10).unwrap().collect();
        assert_eq!(only[0].to_pairs(), vec![[0, 0], [1, 0]]);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_minimal_correspondences(4, 4, 1000),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn optimal_examples() {
        let x = DistanceMatrix::from_flat(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.5, 2.0, 1.5, 0.0]);
        let (r, dis) = optimal_correspondence(&x, &x).unwrap();
        assert_eq!(dis, 0.0);
        assert_eq!(r, Correspondence::identity(3));

        let (_, dis) = optimal_correspondence(&two(1.0), &two(3.0)).unwrap();
        assert_eq!(dis, 2.0);
        let (r, dis) = optimal_correspondence(&two(1.0), &DistanceMatrix::point()).unwrap();
        assert_eq!(dis, 1.0);
        assert_eq!(r.to_pairs(), vec![[0, 0], [1, 0]]);
    }

    #[test]
    fn lexicographic_tie_break() {
        // Both bijections between equal 2-point spaces have distortion 0;
        // row-major, the swap 0110 precedes the identity 1001.
        let (r, _) = optimal_correspondence(&two(2.0), &two(2.0)).unwrap();
        assert_eq!(r.to_pairs(), vec![[0, 1], [1, 0]]);
    }

    #[test]
    fn upper_bound_excludes() {
        let res = CorrespondenceSearch::new(&two(1.0), &two(3.0))
            .upper_bound(1.5)
            .run()
            .unwrap();
        assert!(res.is_none());
        let res = CorrespondenceSearch::new(&two(1.0), &two(3.0))
            .upper_bound(2.0)
            .run()
            .unwrap();
        assert_eq!(res.unwrap().1, 2.0);
    }

    #[test]
    fn node_cap_errors() {
        // equal diameters, so the floor never ends the search early
        let line: Vec<f64> = (0..25).map(|c| ((c / 5) as f64 - (c % 5) as f64).abs()).collect();
        let x = DistanceMatrix::from_flat(5, line);
        let y = DistanceMatrix::from_flat(5, (0..25).map(|c| if c % 6 == 0 { 0.0 } else { 4.0 }).collect());
        assert!(CorrespondenceSearch::new(&x, &y).run().is_ok());
        assert!(matches!(
            CorrespondenceSearch::new(&x, &y).cap(2).run(),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }
}
