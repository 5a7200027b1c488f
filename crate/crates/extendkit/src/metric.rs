//! Metric spaces, finite samples of closed sets, and the lattice of bounded
//! functions attached to a sample.
//!
//! A [`PointCloudSet`] is a finite sample of a closed set `A` together with a
//! distance oracle. Finite sets are closed, so every hypothesis the extension
//! operators need holds exactly for the sampled set; how well the sample
//! approximates a continuum is the caller's responsibility.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{ExtendError, Result};
use crate::vptree::VpTree;

/// Point clouds at or above this size get an acceleration index by default.
pub const DEFAULT_INDEX_THRESHOLD: usize = 256;

static NEXT_SET_ID: AtomicU64 = AtomicU64::new(1);

/// A point of the ambient metric space: a finite coordinate vector, or a
/// scalar for the real line / a matrix row index for the explicit-matrix kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(ExtendError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ExtendError::NonFiniteCoordinate);
        }
        Ok(Point { coords })
    }

    /// A point on the real line (or a matrix row index).
    pub fn scalar(x: f64) -> Result<Self> {
        Point::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// The distance oracle for the ambient space.
#[derive(Clone, Debug)]
pub enum MetricOracle {
    /// Euclidean distance on coordinate vectors of a fixed dimension.
    Euclidean,
    /// Absolute value on the real line (dimension-1 points).
    RealLine,
    /// Distances tabulated for a fixed universe of `n` points; points are
    /// integer row indices `0..n`.
    Matrix(DistanceMatrix),
}

impl MetricOracle {
    /// d(p, q). Errors on dimension mismatches and, for the matrix kind, on
    /// non-integer or out-of-range indices.
    pub fn dist(&self, p: &Point, q: &Point) -> Result<f64> {
        match self {
            MetricOracle::Euclidean => {
                if p.dim() != q.dim() {
                    return Err(ExtendError::DimensionMismatch {
                        expected: p.dim(),
                        got: q.dim(),
                    });
                }
                let mut sum = 0.0;
                for (a, b) in p.coords.iter().zip(&q.coords) {
                    let d = a - b;
                    sum += d * d;
                }
                Ok(sum.sqrt())
            }
            MetricOracle::RealLine => {
                let (a, b) = (scalar_of(p)?, scalar_of(q)?);
                Ok((a - b).abs())
            }
            MetricOracle::Matrix(m) => {
                let (i, j) = (m.index_of(p)?, m.index_of(q)?);
                Ok(m.entries[i * m.n + j])
            }
        }
    }
}

fn scalar_of(p: &Point) -> Result<f64> {
    if p.dim() != 1 {
        return Err(ExtendError::DimensionMismatch {
            expected: 1,
            got: p.dim(),
        });
    }
    Ok(p.coords[0])
}

/// Explicit pairwise distances over a universe of `n` points, row-major.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// Outcome of the opt-in metric validation on a [`DistanceMatrix`].
#[derive(Clone, Debug, serde::Serialize)]
pub struct MetricValidation {
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub nonnegative: bool,
    pub triangle_violations: usize,
    pub triples_checked: usize,
    pub pass: bool,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(ExtendError::EmptySet);
        }
        if entries.len() != n * n {
            return Err(ExtendError::LengthMismatch {
                points: n * n,
                values: entries.len(),
            });
        }
        if entries.iter().any(|d| !d.is_finite()) {
            return Err(ExtendError::NonFiniteValue);
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index_of(&self, p: &Point) -> Result<usize> {
        let x = scalar_of(p)?;
        if x.fract() != 0.0 || x < 0.0 || x >= self.n as f64 {
            return Err(ExtendError::IndexOutOfRange {
                index: x,
                len: self.n,
            });
        }
        Ok(x as usize)
    }

    /// Symmetry, zero diagonal, nonnegativity, and the triangle inequality.
    /// Exhaustive on all triples up to 128 points, a seeded sample beyond
    /// that. Deliberately not run per-call; distances are taken on trust
    /// until the caller asks.
    pub fn validate(&self) -> MetricValidation {
        let n = self.n;
        let d = |i: usize, j: usize| self.entries[i * n + j];
        let mut symmetric = true;
        let mut zero_diagonal = true;
        let mut nonnegative = true;
        for i in 0..n {
            if d(i, i) != 0.0 {
                zero_diagonal = false;
            }
            for j in 0..n {
                if d(i, j) != d(j, i) {
                    symmetric = false;
                }
                if d(i, j) < 0.0 {
                    nonnegative = false;
                }
            }
        }
        let mut triangle_violations = 0usize;
        let mut triples_checked = 0usize;
        if n <= 128 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        triples_checked += 1;
                        if d(i, k) > d(i, j) + d(j, k) {
                            triangle_violations += 1;
                        }
                    }
                }
            }
        } else {
            use rand::Rng;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7152);
            for _ in 0..1_000_000 {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                let k = rng.random_range(0..n);
                triples_checked += 1;
                if d(i, k) > d(i, j) + d(j, k) {
                    triangle_violations += 1;
                }
            }
        }
        let pass = symmetric && zero_diagonal && nonnegative && triangle_violations == 0;
        MetricValidation {
            symmetric,
            zero_diagonal,
            nonnegative,
            triangle_violations,
            triples_checked,
            pass,
        }
    }
}

/// Result of a distance-to-set query: the distance and the id of the nearest
/// sample point (smallest id on ties).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistToSet {
    pub rho: f64,
    pub nearest: usize,
}

/// A nonempty finite sample of the closed set `A`, with its distance oracle
/// and an optional acceleration index.
///
/// Immutable after construction; queries are safe to run concurrently.
#[derive(Debug)]
pub struct PointCloudSet {
    id: u64,
    points: Vec<Point>,
    metric: MetricOracle,
    index: Option<VpTree>,
}

impl PointCloudSet {
    /// Builds a sample, validating nonemptiness, finite coordinates, uniform
    /// dimension, and the absence of exact duplicates. An index is built when
    /// the sample has at least [`DEFAULT_INDEX_THRESHOLD`] points.
    pub fn new(points: Vec<Point>, metric: MetricOracle) -> Result<Arc<Self>> {
        let build_index = points.len() >= DEFAULT_INDEX_THRESHOLD;
        Self::with_options(points, metric, build_index)
    }

    /// As [`PointCloudSet::new`], with explicit control over the index.
    pub fn with_options(
        points: Vec<Point>,
        metric: MetricOracle,
        build_index: bool,
    ) -> Result<Arc<Self>> {
        if points.is_empty() {
            return Err(ExtendError::EmptySet);
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(ExtendError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        if let MetricOracle::Matrix(m) = &metric {
            for p in &points {
                m.index_of(p)?;
            }
        }
        check_duplicates(&points)?;

        let index = if build_index {
            let dist = |i: usize, j: usize| {
                metric
                    .dist(&points[i], &points[j])
                    .expect("points validated at construction")
            };
            Some(VpTree::build(points.len(), &dist))
        } else {
            None
        };
        Ok(Arc::new(PointCloudSet {
            id: NEXT_SET_ID.fetch_add(1, Ordering::Relaxed),
            points,
            metric,
            index,
        }))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn metric(&self) -> &MetricOracle {
        &self.metric
    }

    pub fn has_index(&self) -> bool {
        self.index.is_some()
    }

    pub(crate) fn index(&self) -> Option<&VpTree> {
        self.index.as_ref()
    }

    /// Distance from `p` to every sample point, as a closure for the index.
    pub(crate) fn dist_fn<'a>(&'a self, p: &'a Point) -> impl Fn(usize) -> f64 + 'a {
        move |i: usize| {
            self.metric
                .dist(p, &self.points[i])
                .expect("query validated before scanning")
        }
    }

    fn validate_query(&self, p: &Point) -> Result<()> {
        // Surface dimension / index errors once instead of per candidate.
        self.metric.dist(p, &self.points[0]).map(|_| ())
    }

    /// d(p, A) and the nearest sample point, ties broken by smallest id.
    /// Uses the index when present; identical to the linear scan by
    /// construction (covered by tests).
    pub fn dist_to_set(&self, p: &Point) -> Result<DistToSet> {
        self.validate_query(p)?;
        if let Some(tree) = &self.index {
            let dist = self.dist_fn(p);
            let (rho, nearest) = tree.nearest(&dist);
            Ok(DistToSet { rho, nearest })
        } else {
            Ok(self.dist_to_set_linear_unchecked(p))
        }
    }

    /// Reference linear scan; the oracle against which the index is checked.
    pub fn dist_to_set_linear(&self, p: &Point) -> Result<DistToSet> {
        self.validate_query(p)?;
        Ok(self.dist_to_set_linear_unchecked(p))
    }

    fn dist_to_set_linear_unchecked(&self, p: &Point) -> DistToSet {
        let dist = self.dist_fn(p);
        let mut rho = dist(0);
        let mut nearest = 0usize;
        for i in 1..self.points.len() {
            let d = dist(i);
            if d < rho {
                rho = d;
                nearest = i;
            }
        }
        DistToSet { rho, nearest }
    }

    /// All sample points within distance `r` of `p`, sorted by (distance, id).
    pub fn neighbors_within(&self, p: &Point, r: f64) -> Result<Vec<(f64, usize)>> {
        self.validate_query(p)?;
        let dist = self.dist_fn(p);
        let mut out = if let Some(tree) = &self.index {
            tree.within(&dist, r)
        } else {
            (0..self.points.len())
                .filter_map(|i| {
                    let d = dist(i);
                    (d <= r).then_some((d, i))
                })
                .collect::<Vec<_>>()
        };
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(out)
    }

    /// Attaches function values to this sample.
    pub fn function(self: &Arc<Self>, values: Vec<f64>) -> Result<BoundedFunction> {
        if values.len() != self.points.len() {
            return Err(ExtendError::LengthMismatch {
                points: self.points.len(),
                values: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ExtendError::NonFiniteValue);
        }
        Ok(BoundedFunction {
            set_id: self.id,
            values,
        })
    }
}

fn check_duplicates(points: &[Point]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a].coords(), points[b].coords());
        for (x, y) in pa.iter().zip(pb) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(ExtendError::DuplicatePoint {
                first: a,
                second: b,
            });
        }
    }
    Ok(())
}

/// An element of the lattice of bounded functions on the sample: one finite
/// value per point, plus the identity of the sample it is attached to.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedFunction {
    set_id: u64,
    values: Vec<f64>,
}

impl BoundedFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn set_id(&self) -> u64 {
        self.set_id
    }

    /// sup-norm: max |values|.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn same_set(&self, other: &Self) -> Result<()> {
        if self.set_id != other.set_id {
            return Err(ExtendError::SetMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_set(other)?;
        Ok(BoundedFunction {
            set_id: self.set_id,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        BoundedFunction {
            set_id: self.set_id,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::min)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        self.map(|v| lambda * v)
    }

    pub fn offset(&self, mu: f64) -> Self {
        self.map(|v| v + mu)
    }

    /// Positive part `v ∨ 0`.
    pub fn pos_part(&self) -> Self {
        self.map(|v| v.max(0.0))
    }

    /// Negative part `(−v) ∨ 0`, so that `self = pos_part − neg_part`.
    pub fn neg_part(&self) -> Self {
        self.map(|v| (-v).max(0.0))
    }

    pub fn abs_val(&self) -> Self {
        self.map(f64::abs)
    }
}
