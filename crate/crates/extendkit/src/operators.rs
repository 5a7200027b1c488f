//! The extension operators.
//!
//! Each evaluator answers queries at arbitrary points of the ambient space
//! from the sampled data `(A, φ)`. For a finite sample the suprema and
//! infima in the defining formulas are exact minima and maxima over the
//! sample, so every operator has a brute-force path (scan everything) and a
//! pruned path (scan in increasing distance order, stop once the running
//! extremum can no longer change). The two paths compute each candidate
//! with identical arithmetic, so their results are identical — the pruned
//! path is a pure acceleration.
//!
//! Queries that land on the sample short-circuit to the attached value; the
//! formulas all divide by d(p, A), and the piecewise definition of an
//! extension makes that split explicit. A query with d(p, A) below
//! [`MEMBER_EPS`] is treated as membership.

use std::sync::Arc;

use crate::error::{ExtendError, Result};
use crate::extenders::{DualWeight, Extender};
use crate::metric::{BoundedFunction, Point, PointCloudSet};

/// Queries closer to the sample than this count as sample points.
pub const MEMBER_EPS: f64 = 1e-12;

/// How an evaluator walks the sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Scan every sample point.
    Brute,
    /// Scan in increasing distance with a monotone stopping bound. Falls
    /// back to the brute scan when the sample has no index or the weight
    /// has no analytic monotonicity.
    Pruned,
}

/// The operator an [`Extension`] evaluates.
#[derive(Clone, Debug)]
pub enum OperatorKind {
    /// inf over a of [φ(a) + d(a,p)/d(p,A) − 1].
    Hausdorff,
    /// sup over a of φ(a)·F(d(a,p), d(p,A)), for φ ≥ 0.
    Omega(Extender),
    /// inf over a of φ(a)·G(d(a,p), d(p,A)), for φ ≥ 0 and G ≥ 1.
    Mho(DualWeight),
    /// Ω_F applied to the positive and negative parts separately.
    Theta(Extender),
    /// Mean of the running-sup step function over [ρ, 2ρ].
    Bohr,
    /// inf over a of [φ(a)·d(p,A) + d(a,p)]. Not an extension of φ: on the
    /// sample it returns 0, not φ. Exposed because the Hausdorff operator
    /// factors through it.
    Pasch,
    /// inf over a of [φ(a) + κ·d(a,p)], the classical κ-Lipschitz
    /// regularization. Also not an extension (it returns f_κ(a) ≤ φ(a)).
    PaschKappa(f64),
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Hausdorff => "hausdorff",
            OperatorKind::Omega(_) => "omega",
            OperatorKind::Mho(_) => "mho",
            OperatorKind::Theta(_) => "theta",
            OperatorKind::Bohr => "bohr",
            OperatorKind::Pasch | OperatorKind::PaschKappa(_) => "pasch",
        }
    }

    /// Whether evaluation at a sample point reproduces the attached value.
    pub fn is_extension(&self) -> bool {
        !matches!(self, OperatorKind::Pasch | OperatorKind::PaschKappa(_))
    }
}

/// Structured warnings attached to an [`Extension`] at construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// The infimum construction collapses to 0 off the sample when min φ = 0,
    /// so the extension cannot be continuous at the zero of φ.
    MhoZeroMin { index: usize },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::MhoZeroMin { index } => write!(
                f,
                "min φ = 0 (at point {index}): the infimum construction is 0 \
                 everywhere off the sample and cannot be continuous there"
            ),
        }
    }
}

/// Which branch of the piecewise definition answered a query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QueryBranch {
    /// The query coincided with sample point `point` (d < [`MEMBER_EPS`]).
    OnSet { point: usize },
    /// The query was answered by the operator formula at distance `rho`.
    Exterior { rho: f64 },
}

#[derive(Debug)]
struct EvalCache {
    min_phi: f64,
    max_phi: f64,
    /// For Θ: positive/negative parts and their maxima, computed once.
    theta_parts: Option<ThetaParts>,
}

#[derive(Debug)]
struct ThetaParts {
    pos: Vec<f64>,
    pos_max: f64,
    neg: Vec<f64>,
    neg_max: f64,
}

/// An evaluatable pairing of a sample, a bounded function, and an operator.
/// Immutable; evaluation at distinct points may run concurrently.
#[derive(Debug)]
pub struct Extension {
    set: Arc<PointCloudSet>,
    phi: BoundedFunction,
    kind: OperatorKind,
    strategy: Strategy,
    warnings: Vec<Warning>,
    cache: EvalCache,
}

impl Extension {
    pub fn new(set: Arc<PointCloudSet>, phi: BoundedFunction, kind: OperatorKind) -> Result<Self> {
        if phi.set_id() != set.id() {
            return Err(ExtendError::SetMismatch);
        }
        let mut warnings = Vec::new();
        match &kind {
            OperatorKind::Omega(_) | OperatorKind::Mho(_) | OperatorKind::Pasch => {
                if let Some(i) = phi.values().iter().position(|&v| v < 0.0) {
                    return Err(ExtendError::NegativeValues {
                        index: i,
                        value: phi.value(i),
                    });
                }
            }
            OperatorKind::PaschKappa(kappa) => {
                if !(*kappa >= 0.0) || !kappa.is_finite() {
                    return Err(ExtendError::Config(format!(
                        "slope must be a nonnegative real, got {kappa}"
                    )));
                }
            }
            _ => {}
        }
        if matches!(kind, OperatorKind::Mho(_)) {
            if let Some(i) = phi.values().iter().position(|&v| v == 0.0) {
                warnings.push(Warning::MhoZeroMin { index: i });
            }
        }
        let theta_parts = if let OperatorKind::Theta(_) = &kind {
            let pos: Vec<f64> = phi.values().iter().map(|&v| v.max(0.0)).collect();
            let neg: Vec<f64> = phi.values().iter().map(|&v| (-v).max(0.0)).collect();
            let pos_max = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let neg_max = neg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Some(ThetaParts {
                pos,
                pos_max,
                neg,
                neg_max,
            })
        } else {
            None
        };
        let cache = EvalCache {
            min_phi: phi.min_value(),
            max_phi: phi.max_value(),
            theta_parts,
        };
        Ok(Extension {
            set,
            phi,
            kind,
            strategy: Strategy::Pruned,
            warnings,
            cache,
        })
    }

    pub fn hausdorff(set: Arc<PointCloudSet>, phi: BoundedFunction) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Hausdorff)
    }

    pub fn omega(set: Arc<PointCloudSet>, phi: BoundedFunction, f: Extender) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Omega(f))
    }

    pub fn mho(set: Arc<PointCloudSet>, phi: BoundedFunction, g: DualWeight) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Mho(g))
    }

    pub fn theta(set: Arc<PointCloudSet>, phi: BoundedFunction, f: Extender) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Theta(f))
    }

    pub fn bohr(set: Arc<PointCloudSet>, phi: BoundedFunction) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Bohr)
    }

    pub fn pasch(set: Arc<PointCloudSet>, phi: BoundedFunction) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::Pasch)
    }

    pub fn pasch_kappa(set: Arc<PointCloudSet>, phi: BoundedFunction, kappa: f64) -> Result<Self> {
        Extension::new(set, phi, OperatorKind::PaschKappa(kappa))
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn set(&self) -> &Arc<PointCloudSet> {
        &self.set
    }

    pub fn phi(&self) -> &BoundedFunction {
        &self.phi
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        self.eval_detailed(p).map(|(v, _)| v)
    }

    /// Evaluates and reports which branch of the piecewise definition fired.
    pub fn eval_detailed(&self, p: &Point) -> Result<(f64, QueryBranch)> {
        let dts = self.set.dist_to_set(p)?;
        let values = self.phi.values();

        // The inf-convolution forms are defined by their formula everywhere,
        // including on the sample; everything else short-circuits.
        match &self.kind {
            OperatorKind::Pasch => {
                let v = pasch_engine(
                    &self.set,
                    values,
                    self.cache.min_phi,
                    p,
                    dts.rho,
                    self.strategy,
                );
                return Ok((v, QueryBranch::Exterior { rho: dts.rho }));
            }
            OperatorKind::PaschKappa(kappa) => {
                let v = pasch_kappa_engine(
                    &self.set,
                    values,
                    self.cache.min_phi,
                    *kappa,
                    p,
                    self.strategy,
                );
                return Ok((v, QueryBranch::Exterior { rho: dts.rho }));
            }
            _ => {}
        }

        if dts.rho < MEMBER_EPS {
            return Ok((
                values[dts.nearest],
                QueryBranch::OnSet { point: dts.nearest },
            ));
        }

        let rho = dts.rho;
        let v = match &self.kind {
            OperatorKind::Hausdorff => {
                hausdorff_engine(&self.set, values, self.cache.min_phi, p, rho, self.strategy)
            }
            OperatorKind::Omega(f) => {
                omega_engine(&self.set, values, self.cache.max_phi, f, p, rho, self.strategy)
            }
            OperatorKind::Mho(g) => {
                mho_engine(&self.set, values, self.cache.min_phi, g, p, rho, self.strategy)
            }
            OperatorKind::Theta(f) => {
                let parts = self.cache.theta_parts.as_ref().expect("built for theta");
                let pos = omega_engine(&self.set, &parts.pos, parts.pos_max, f, p, rho, self.strategy);
                let neg = omega_engine(&self.set, &parts.neg, parts.neg_max, f, p, rho, self.strategy);
                pos - neg
            }
            OperatorKind::Bohr => {
                bohr_engine(&self.set, values, p, rho, self.strategy)
            }
            OperatorKind::Pasch | OperatorKind::PaschKappa(_) => unreachable!(),
        };
        Ok((v, QueryBranch::Exterior { rho }))
    }

    /// Evaluates many queries in parallel; results come back in query order.
    pub fn eval_batch(&self, queries: &[Point]) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        queries.par_iter().map(|p| self.eval(p)).collect()
    }
}

#[inline]
fn hausdorff_term(phi: f64, d: f64, rho: f64) -> f64 {
    phi + d / rho - 1.0
}

fn hausdorff_engine(
    set: &PointCloudSet,
    values: &[f64],
    min_phi: f64,
    p: &Point,
    rho: f64,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    if strategy == Strategy::Pruned {
        if let Some(tree) = set.index() {
            let mut best = f64::INFINITY;
            for (d, id) in tree.scan(&dist) {
                if hausdorff_term(min_phi, d, rho) >= best {
                    break;
                }
                let v = hausdorff_term(values[id], d, rho);
                if v < best {
                    best = v;
                }
            }
            return best;
        }
    }
    let mut best = f64::INFINITY;
    for (id, &phi) in values.iter().enumerate() {
        let v = hausdorff_term(phi, dist(id), rho);
        if v < best {
            best = v;
        }
    }
    best
}

fn omega_engine(
    set: &PointCloudSet,
    values: &[f64],
    max_phi: f64,
    f: &Extender,
    p: &Point,
    rho: f64,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    // The stopping bound max φ · F(d, ρ) shrinks along the scan only when
    // F decreases in s and max φ ≥ 0.
    if strategy == Strategy::Pruned && f.monotone_decreasing_in_s() && max_phi >= 0.0 {
        if let Some(tree) = set.index() {
            let mut best = f64::NEG_INFINITY;
            for (d, id) in tree.scan(&dist) {
                let w = f.weight(d, rho);
                if max_phi * w <= best {
                    break;
                }
                let v = values[id] * w;
                if v > best {
                    best = v;
                }
            }
            return best;
        }
    }
    let mut best = f64::NEG_INFINITY;
    for (id, &phi) in values.iter().enumerate() {
        let v = phi * f.weight(dist(id), rho);
        if v > best {
            best = v;
        }
    }
    best
}

/// The supremum formula with no sign restriction on φ. The construction is
/// wrong for functions with negative values — that is precisely what the
/// failure demos reproduce — so this stays brute-force and is not wired
/// into [`Extension`].
pub fn omega_eval_raw(
    set: &PointCloudSet,
    phi: &BoundedFunction,
    f: &Extender,
    p: &Point,
) -> Result<f64> {
    if phi.set_id() != set.id() {
        return Err(ExtendError::SetMismatch);
    }
    let dts = set.dist_to_set(p)?;
    if dts.rho < MEMBER_EPS {
        return Ok(phi.value(dts.nearest));
    }
    let dist = set.dist_fn(p);
    let mut best = f64::NEG_INFINITY;
    for (id, &v) in phi.values().iter().enumerate() {
        let c = v * f.weight(dist(id), dts.rho);
        if c > best {
            best = c;
        }
    }
    Ok(best)
}

fn mho_engine(
    set: &PointCloudSet,
    values: &[f64],
    min_phi: f64,
    g: &DualWeight,
    p: &Point,
    rho: f64,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    if strategy == Strategy::Pruned && g.monotone_increasing_in_s() {
        if let Some(tree) = set.index() {
            let mut best = f64::INFINITY;
            for (d, id) in tree.scan(&dist) {
                let w = g.weight(d, rho);
                if min_phi * w >= best {
                    break;
                }
                let v = values[id] * w;
                if v < best {
                    best = v;
                }
            }
            return best;
        }
    }
    let mut best = f64::INFINITY;
    for (id, &phi) in values.iter().enumerate() {
        let v = phi * g.weight(dist(id), rho);
        if v < best {
            best = v;
        }
    }
    best
}

#[inline]
fn pasch_term(phi: f64, rho: f64, d: f64) -> f64 {
    phi * rho + d
}

fn pasch_engine(
    set: &PointCloudSet,
    values: &[f64],
    min_phi: f64,
    p: &Point,
    rho: f64,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    if strategy == Strategy::Pruned {
        if let Some(tree) = set.index() {
            let mut best = f64::INFINITY;
            for (d, id) in tree.scan(&dist) {
                if pasch_term(min_phi, rho, d) >= best {
                    break;
                }
                let v = pasch_term(values[id], rho, d);
                if v < best {
                    best = v;
                }
            }
            return best;
        }
    }
    let mut best = f64::INFINITY;
    for (id, &phi) in values.iter().enumerate() {
        let v = pasch_term(phi, rho, dist(id));
        if v < best {
            best = v;
        }
    }
    best
}

#[inline]
fn pasch_kappa_term(phi: f64, kappa: f64, d: f64) -> f64 {
    phi + kappa * d
}

fn pasch_kappa_engine(
    set: &PointCloudSet,
    values: &[f64],
    min_phi: f64,
    kappa: f64,
    p: &Point,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    if strategy == Strategy::Pruned {
        if let Some(tree) = set.index() {
            let mut best = f64::INFINITY;
            for (d, id) in tree.scan(&dist) {
                if pasch_kappa_term(min_phi, kappa, d) >= best {
                    break;
                }
                let v = pasch_kappa_term(values[id], kappa, d);
                if v < best {
                    best = v;
                }
            }
            return best;
        }
    }
    let mut best = f64::INFINITY;
    for (id, &phi) in values.iter().enumerate() {
        let v = pasch_kappa_term(phi, kappa, dist(id));
        if v < best {
            best = v;
        }
    }
    best
}

/// The sorted-breakpoint form of the step function t ↦ sup of φ over the
/// open t-ball around a fixed exterior query, which is what the integral
/// operator integrates. Exact for finite samples.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaStep {
    breakpoints: Vec<f64>,
    plateaus: Vec<f64>,
    floor: f64,
}

impl EtaStep {
    /// Sorted distances from the query to the sample; the first one is ρ.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Running prefix maxima of φ in breakpoint order; nondecreasing.
    pub fn plateaus(&self) -> &[f64] {
        &self.plateaus
    }

    /// min φ, the value below the first breakpoint.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn rho(&self) -> f64 {
        self.breakpoints[0]
    }

    /// η(t): `floor` for t ≤ ρ, the plateau of the interval (d_k, d_{k+1}]
    /// containing t otherwise. Open balls put a breakpoint itself on the
    /// lower plateau.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&d| d < t);
        if k == 0 {
            self.floor
        } else {
            self.plateaus[k - 1]
        }
    }

    /// (1/ρ)·∫ η over [ρ, 2ρ], in closed form over the plateau segments.
    pub fn window_mean(&self) -> f64 {
        integrate_plateaus(&self.breakpoints, &self.plateaus, self.rho())
    }
}

/// Builds the full step representation for an exterior query.
pub fn bohr_eta(set: &PointCloudSet, phi: &BoundedFunction, x: &Point) -> Result<EtaStep> {
    if phi.set_id() != set.id() {
        return Err(ExtendError::SetMismatch);
    }
    let dts = set.dist_to_set(x)?;
    if dts.rho < MEMBER_EPS {
        return Err(ExtendError::MemberPoint { rho: dts.rho });
    }
    let dist = set.dist_fn(x);
    let mut pairs: Vec<(f64, usize)> = (0..set.len()).map(|i| (dist(i), i)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (breakpoints, plateaus) = prefix_plateaus(&pairs, phi.values());
    Ok(EtaStep {
        breakpoints,
        plateaus,
        floor: phi.min_value(),
    })
}

fn prefix_plateaus(pairs: &[(f64, usize)], values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut breakpoints = Vec::with_capacity(pairs.len());
    let mut plateaus = Vec::with_capacity(pairs.len());
    let mut run = f64::NEG_INFINITY;
    for &(d, id) in pairs {
        run = run.max(values[id]);
        breakpoints.push(d);
        plateaus.push(run);
    }
    (breakpoints, plateaus)
}

/// Closed-form mean of the plateau step function over [ρ, 2ρ]. No
/// quadrature: each plateau contributes its exact overlap with the window.
/// The result is clamped into the range of the plateaus that actually
/// touch the window, which the exact mean lies in; this keeps the lattice
/// bounds exact under rounding (a constant φ comes back bit-exact).
fn integrate_plateaus(breakpoints: &[f64], plateaus: &[f64], rho: f64) -> f64 {
    let two_rho = 2.0 * rho;
    let mut sum = 0.0;
    let mut lo_seen = f64::INFINITY;
    let mut hi_seen = f64::NEG_INFINITY;
    for k in 0..breakpoints.len() {
        let start = breakpoints[k];
        if start >= two_rho {
            break;
        }
        let end = if k + 1 < breakpoints.len() {
            breakpoints[k + 1]
        } else {
            f64::INFINITY
        };
        let lo = start.max(rho);
        let hi = end.min(two_rho);
        if hi > lo {
            sum += plateaus[k] * (hi - lo);
            lo_seen = lo_seen.min(plateaus[k]);
            hi_seen = hi_seen.max(plateaus[k]);
        }
    }
    (sum / rho).clamp(lo_seen, hi_seen)
}

fn bohr_engine(
    set: &PointCloudSet,
    values: &[f64],
    p: &Point,
    rho: f64,
    strategy: Strategy,
) -> f64 {
    let dist = set.dist_fn(p);
    let two_rho = 2.0 * rho;
    // Only points inside the closed 2ρ-ball can place a plateau inside the
    // integration window; everything further contributes zero width.
    let mut pairs: Vec<(f64, usize)> = if strategy == Strategy::Pruned && set.index().is_some() {
        set.index().unwrap().within(&dist, two_rho)
    } else {
        (0..set.len()).map(|i| (dist(i), i)).collect()
    };
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (breakpoints, plateaus) = prefix_plateaus(&pairs, values);
    integrate_plateaus(&breakpoints, &plateaus, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricOracle;

    fn line_set(xs: &[f64]) -> Arc<PointCloudSet> {
        let points = xs.iter().map(|&x| Point::scalar(x).unwrap()).collect();
        PointCloudSet::new(points, MetricOracle::RealLine).unwrap()
    }

    fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn q(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    #[test]
    fn hausdorff_identity_sample() {
        // A = 1001 uniform points on [-1, 0], φ(a) = a. The piecewise
        // closed form gives 1/p − k for p ≥ 1/k; here k = 1, p = 2.
        let xs = uniform(-1.0, 0.0, 1001);
        let set = line_set(&xs);
        let phi = set.function(xs.clone()).unwrap();
        let ext = Extension::hausdorff(set.clone(), phi).unwrap();
        assert!((ext.eval(&q(2.0)).unwrap() - (-0.5)).abs() < 1e-12);

        // Doubling φ does not double the extension: −1.5 against −1.
        let phi2 = set.function(xs.iter().map(|a| 2.0 * a).collect()).unwrap();
        let ext2 = Extension::hausdorff(set, phi2).unwrap();
        assert!((ext2.eval(&q(2.0)).unwrap() - (-1.5)).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_two_point_enumeration() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.0, 1.0]).unwrap();
        let ext = Extension::hausdorff(set, phi).unwrap();
        // min(0 + 1 − 1, 1 + 1 − 1) = 0.
        assert_eq!(ext.eval(&q(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_translation_covariance() {
        let xs = uniform(-1.0, 0.0, 101);
        let set = line_set(&xs);
        let phi = set.function(xs.iter().map(|a| a.sin()).collect()).unwrap();
        let shifted = set.function(xs.iter().map(|a| a.sin() + 0.25).collect()).unwrap();
        let e1 = Extension::hausdorff(set.clone(), phi).unwrap();
        let e2 = Extension::hausdorff(set, shifted).unwrap();
        for x in [0.3, 1.0, 2.5, 7.0] {
            let a = e1.eval(&q(x)).unwrap();
            let b = e2.eval(&q(x)).unwrap();
            assert!((b - (a + 0.25)).abs() <= 1e-9);
        }
    }

    #[test]
    fn omega_riesz_enumeration() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![1.0, 2.0]).unwrap();
        let ext = Extension::omega(set, phi, Extender::Riesz).unwrap();
        // max(1·(0.5/0.5), 2·(0.5/0.5)) = 2.
        assert_eq!(ext.eval(&q(0.5)).unwrap(), 2.0);
    }

    #[test]
    fn omega_tietze_on_constants() {
        // With φ ≡ 1 and ρ(p) = 1 the supremum is (1+1)^(−1) = 1/2.
        let set = line_set(&[0.0]);
        let phi = set.function(vec![1.0]).unwrap();
        let ext = Extension::omega(set, phi, Extender::Tietze).unwrap();
        assert!((ext.eval(&q(1.0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn omega_riesz_preserves_lower_bound() {
        let xs = uniform(-1e3, 0.0, 1001);
        let set = line_set(&xs);
        let phi = set.function(vec![1.0; 1001]).unwrap();
        let ext = Extension::omega(set, phi, Extender::Riesz).unwrap();
        // sup φ(a)·ρ/d(a,p) is attained at the nearest point, where it is 1.
        assert_eq!(ext.eval(&q(1.0)).unwrap(), 1.0);
    }

    #[test]
    fn omega_rejects_negative_values() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.5, -0.1]).unwrap();
        match Extension::omega(set, phi, Extender::Riesz) {
            Err(ExtendError::NegativeValues { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected negative-value rejection, got {other:?}"),
        }
    }

    #[test]
    fn omega_on_unit_constant_equals_diagonal_weight() {
        let xs = uniform(0.0, 1.0, 57);
        let set = line_set(&xs);
        let one = set.function(vec![1.0; 57]).unwrap();
        for f in [Extender::Riesz, Extender::Tietze] {
            let ext = Extension::omega(set.clone(), one.clone(), f.clone()).unwrap();
            for x in [-0.4, 1.3, 2.0, 5.5] {
                let rho = set.dist_to_set(&q(x)).unwrap().rho;
                assert_eq!(
                    ext.eval(&q(x)).unwrap(),
                    f.weight(rho, rho),
                    "sup attained at the nearest sample point, exactly"
                );
            }
        }
    }

    #[test]
    fn mho_dieudonne_enumeration() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![1.0, 2.0]).unwrap();
        let ext = Extension::mho(set, phi, DualWeight::Dieudonne).unwrap();
        // min(1·1, 2·1) = 1.
        assert_eq!(ext.eval(&q(0.5)).unwrap(), 1.0);
    }

    #[test]
    fn mho_collapses_when_phi_touches_zero() {
        let xs = uniform(-1.0, 0.0, 1001);
        let set = line_set(&xs);
        let phi = set.function(xs.iter().map(|a| 1.0 + a).collect()).unwrap();
        let ext = Extension::mho(set, phi, DualWeight::Dieudonne).unwrap();
        assert_eq!(
            ext.warnings(),
            &[Warning::MhoZeroMin { index: 0 }],
            "φ(−1) = 0 must be flagged"
        );
        assert_eq!(ext.eval(&q(0.5)).unwrap(), 0.0);
        // ... while the value on the sample stays φ: the discontinuity.
        assert_eq!(ext.eval(&q(0.0)).unwrap(), 1.0);
    }

    #[test]
    fn mho_reciprocal_matches_inverse_omega() {
        let xs = uniform(0.0, 2.0, 41);
        let set = line_set(&xs);
        let phi: Vec<f64> = xs.iter().map(|a| 1.5 + a.cos() * 0.4).collect();
        let inv: Vec<f64> = phi.iter().map(|v| 1.0 / v).collect();
        let mho = Extension::mho(
            set.clone(),
            set.function(phi).unwrap(),
            DualWeight::Reciprocal(Extender::Riesz),
        )
        .unwrap();
        let omega = Extension::omega(set.clone(), set.function(inv).unwrap(), Extender::Riesz)
            .unwrap();
        for x in [-1.0, 2.5, 3.0, 10.0] {
            let a = mho.eval(&q(x)).unwrap();
            let b = omega.eval(&q(x)).unwrap();
            let prod = a * b;
            assert!((prod - 1.0).abs() <= 1e-12, "product {prod} at {x}");
        }
    }

    #[test]
    fn theta_riesz_remark_values() {
        // A = 2001 points on [-1, 1]; the closed forms put both suprema at
        // sampled endpoints, so the values are exact.
        let xs = uniform(-1.0, 1.0, 2001);
        let set = line_set(&xs);
        let phi = set
            .function(xs.iter().map(|a| (3.0 * a + 1.0) / 4.0).collect())
            .unwrap();
        let psi = set
            .function(xs.iter().map(|a| (3.0 * a - 1.0) / 4.0).collect())
            .unwrap();
        let tphi = Extension::theta(set.clone(), phi, Extender::Riesz).unwrap();
        let tpsi = Extension::theta(set, psi, Extender::Riesz).unwrap();
        let p = 3.0;
        let expect_phi = (p + 3.0) / (2.0 * (p + 1.0)); // 0.75
        let expect_psi = (3.0 - p) / (2.0 * (p + 1.0)); // 0
        assert!((tphi.eval(&q(p)).unwrap() - expect_phi).abs() < 1e-12);
        assert!((tpsi.eval(&q(p)).unwrap() - expect_psi).abs() < 1e-12);
    }

    #[test]
    fn theta_on_positive_cone_equals_omega() {
        // φ ≥ 0 makes the negative part vanish, so Θ reduces to Ω exactly.
        let xs = uniform(0.0, 1.0, 33);
        let set = line_set(&xs);
        let vals: Vec<f64> = xs.iter().map(|a| 0.3 + a * a).collect();
        let phi = set.function(vals).unwrap();
        let theta = Extension::theta(set.clone(), phi.clone(), Extender::Riesz).unwrap();
        let omega = Extension::omega(set, phi, Extender::Riesz).unwrap();
        for x in [-0.7, 1.1, 2.6, 12.0] {
            assert_eq!(theta.eval(&q(x)).unwrap(), omega.eval(&q(x)).unwrap());
        }
    }

    #[test]
    fn theta_norm_bound() {
        let xs = uniform(-1.0, 1.0, 101);
        let set = line_set(&xs);
        let vals: Vec<f64> = xs.iter().map(|a| a.sin() - 0.2).collect();
        let phi = set.function(vals).unwrap();
        let norm = phi.sup_norm();
        let theta = Extension::theta(set, phi, Extender::Tietze).unwrap();
        for x in [-0.95, 1.5, 2.0, 30.0] {
            let v = theta.eval(&q(x)).unwrap();
            assert!(v.abs() <= norm + 1e-12);
        }
    }

    #[test]
    fn eta_step_two_point_examples() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.0, 1.0]).unwrap();

        let eta = bohr_eta(&set, &phi, &q(2.0)).unwrap();
        assert_eq!(eta.breakpoints(), &[1.0, 2.0]);
        assert_eq!(eta.plateaus(), &[1.0, 1.0]);
        assert_eq!(eta.floor(), 0.0);
        assert_eq!(eta.value_at(1.5), 1.0);
        assert_eq!(eta.value_at(0.5), 0.0);

        let eta = bohr_eta(&set, &phi, &q(0.1)).unwrap();
        assert_eq!(eta.breakpoints(), &[0.1, 0.9]);
        assert_eq!(eta.plateaus(), &[0.0, 1.0]);

        // Constant φ: every plateau is the constant.
        let c = set.function(vec![0.7, 0.7]).unwrap();
        let eta = bohr_eta(&set, &c, &q(3.0)).unwrap();
        assert_eq!(eta.plateaus(), &[0.7, 0.7]);
    }

    #[test]
    fn eta_rejects_sample_points() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            bohr_eta(&set, &phi, &q(1.0)),
            Err(ExtendError::MemberPoint { .. })
        ));
    }

    #[test]
    fn bohr_two_point_examples() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.0, 1.0]).unwrap();
        let ext = Extension::bohr(set.clone(), phi).unwrap();
        assert_eq!(ext.eval(&q(2.0)).unwrap(), 1.0);
        assert_eq!(ext.eval(&q(0.1)).unwrap(), 0.0);

        let c = set.function(vec![0.3, 0.3]).unwrap();
        let bc = Extension::bohr(set, c).unwrap();
        for x in [-2.0, 0.4, 1.7, 100.0] {
            assert_eq!(bc.eval(&q(x)).unwrap(), 0.3, "constants come back exact");
        }
    }

    #[test]
    fn bohr_range_and_affine_covariance() {
        let xs = uniform(0.0, 1.0, 97);
        let set = line_set(&xs);
        let vals: Vec<f64> = xs.iter().map(|a| (7.3 * a).sin() * 0.8).collect();
        let phi = set.function(vals.clone()).unwrap();
        let ext = Extension::bohr(set.clone(), phi.clone()).unwrap();
        let (lam, mu) = (2.5, -0.75);
        let aff = set
            .function(vals.iter().map(|v| lam * v + mu).collect())
            .unwrap();
        let ext_aff = Extension::bohr(set, aff).unwrap();
        let (lo, hi) = (phi.min_value(), phi.max_value());
        for x in [-0.5, 1.2, 1.9, 4.0] {
            let v = ext.eval(&q(x)).unwrap();
            assert!(v >= lo && v <= hi);
            let w = ext_aff.eval(&q(x)).unwrap();
            assert!((w - (lam * v + mu)).abs() <= 1e-9);
        }
    }

    #[test]
    fn pasch_single_point() {
        let set = line_set(&[0.0]);
        let phi = set.function(vec![3.0]).unwrap();
        let ext = Extension::pasch(set, phi).unwrap();
        // φ(0)·d(2,A) + d(0,2) = 3·2 + 2 = 8.
        assert_eq!(ext.eval(&q(2.0)).unwrap(), 8.0);
    }

    #[test]
    fn pasch_is_not_an_extension() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.5, 1.0]).unwrap();
        let ext = Extension::pasch(set, phi).unwrap();
        // On the sample the formula gives 0, not φ.
        assert_eq!(ext.eval(&q(0.0)).unwrap(), 0.0);
        assert!(!ext.kind().is_extension());
    }

    #[test]
    fn pasch_kappa_examples() {
        let set = line_set(&[0.0, 1.0]);
        let phi = set.function(vec![0.0, 1.0]).unwrap();
        let ext = Extension::pasch_kappa(set.clone(), phi.clone(), 1.0).unwrap();
        // min(0 + 0.5, 1 + 0.5) = 0.5.
        assert_eq!(ext.eval(&q(0.5)).unwrap(), 0.5);

        let flat = Extension::pasch_kappa(set.clone(), phi.clone(), 0.0).unwrap();
        for x in [-3.0, 0.25, 8.0] {
            assert_eq!(flat.eval(&q(x)).unwrap(), 0.0, "zero slope gives min φ");
        }
        assert!(matches!(
            Extension::pasch_kappa(set, phi, -1.0),
            Err(ExtendError::Config(_))
        ));
    }

    #[test]
    fn extension_identity_on_sample() {
        let xs = uniform(-1.0, 1.0, 37);
        let set = line_set(&xs);
        let vals: Vec<f64> = xs.iter().map(|a| 0.6 + 0.5 * (3.0 * a).cos()).collect();
        let phi = set.function(vals.clone()).unwrap();
        let exts: Vec<Extension> = vec![
            Extension::hausdorff(set.clone(), phi.clone()).unwrap(),
            Extension::omega(set.clone(), phi.clone(), Extender::Riesz).unwrap(),
            Extension::omega(set.clone(), phi.clone(), Extender::Tietze).unwrap(),
            Extension::mho(set.clone(), phi.clone(), DualWeight::Dieudonne).unwrap(),
            Extension::theta(set.clone(), phi.clone(), Extender::Riesz).unwrap(),
            Extension::bohr(set.clone(), phi.clone()).unwrap(),
        ];
        for ext in &exts {
            for (i, &x) in xs.iter().enumerate() {
                let (v, branch) = ext.eval_detailed(&q(x)).unwrap();
                assert_eq!(v, vals[i], "{} at sample point {i}", ext.kind().name());
                assert_eq!(branch, QueryBranch::OnSet { point: i });
            }
        }
    }

    #[test]
    fn pasch_hausdorff_structural_identity() {
        let xs = uniform(-1.0, 0.0, 201);
        let set = line_set(&xs);
        let vals: Vec<f64> = xs.iter().map(|a| 1.0 + 0.5 * a).collect();
        let phi = set.function(vals).unwrap();
        let psi = Extension::hausdorff(set.clone(), phi.clone()).unwrap();
        let pas = Extension::pasch(set.clone(), phi).unwrap();
        for x in [0.5, 1.0, 2.0, 9.0] {
            let rho = set.dist_to_set(&q(x)).unwrap().rho;
            let lhs = psi.eval(&q(x)).unwrap();
            let rhs = pas.eval(&q(x)).unwrap() / rho - 1.0;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn pruned_equals_brute_on_indexed_cloud() {
        // Force an index on a small cloud and compare all operators.
        let xs = uniform(-2.0, 2.0, 400);
        let points: Vec<Point> = xs.iter().map(|&x| Point::scalar(x).unwrap()).collect();
        let set = crate::metric::PointCloudSet::with_options(points, MetricOracle::RealLine, true)
            .unwrap();
        assert!(set.has_index());
        let vals: Vec<f64> = xs.iter().map(|a| 0.5 + 0.4 * (5.0 * a).sin()).collect();
        let phi = set.function(vals).unwrap();
        let kinds: Vec<OperatorKind> = vec![
            OperatorKind::Hausdorff,
            OperatorKind::Omega(Extender::Riesz),
            OperatorKind::Omega(Extender::Tietze),
            OperatorKind::Mho(DualWeight::Dieudonne),
            OperatorKind::Mho(DualWeight::Reciprocal(Extender::Riesz)),
            OperatorKind::Theta(Extender::Tietze),
            OperatorKind::Bohr,
            OperatorKind::Pasch,
            OperatorKind::PaschKappa(0.7),
        ];
        for kind in kinds {
            let pruned = Extension::new(set.clone(), phi.clone(), kind.clone())
                .unwrap()
                .with_strategy(Strategy::Pruned);
            let brute = Extension::new(set.clone(), phi.clone(), kind.clone())
                .unwrap()
                .with_strategy(Strategy::Brute);
            for x in [-3.0, -1.97, 0.123, 1.5, 2.4, 11.0] {
                let a = pruned.eval(&q(x)).unwrap();
                let b = brute.eval(&q(x)).unwrap();
                assert_eq!(a, b, "{:?} at {x}", kind);
            }
        }
    }

    #[test]
    fn omega_pointwise_sublinearity_and_bounds() {
        let xs = uniform(0.0, 1.0, 61);
        let set = line_set(&xs);
        let f: Vec<f64> = xs.iter().map(|a| 0.2 + a).collect();
        let g: Vec<f64> = xs.iter().map(|a| 1.0 - 0.5 * a).collect();
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let lam = 3.5;
        let scaled: Vec<f64> = f.iter().map(|a| lam * a).collect();

        let ef = Extension::omega(set.clone(), set.function(f.clone()).unwrap(), Extender::Riesz).unwrap();
        let eg = Extension::omega(set.clone(), set.function(g).unwrap(), Extender::Riesz).unwrap();
        let esum = Extension::omega(set.clone(), set.function(sum).unwrap(), Extender::Riesz).unwrap();
        let escaled = Extension::omega(set.clone(), set.function(scaled).unwrap(), Extender::Riesz).unwrap();
        let norm = set.function(f).unwrap().sup_norm();

        for x in [-1.0, 1.25, 2.0, 6.0] {
            let vf = ef.eval(&q(x)).unwrap();
            let vg = eg.eval(&q(x)).unwrap();
            let vs = esum.eval(&q(x)).unwrap();
            let vl = escaled.eval(&q(x)).unwrap();
            assert!(vf >= 0.0 && vf <= norm + 1e-12);
            assert!(vs <= vf + vg + 1e-9, "subadditive");
            assert!((vl - lam * vf).abs() <= 1e-9, "positively homogeneous");
        }
    }
}
