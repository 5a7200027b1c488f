//! Weight functions on the half-plane Δ = {(s, t) : s ≥ t > 0} and their
//! numeric axiom validation.
//!
//! An extender maps Δ into (0, 1]; its reciprocal, and the Dieudonné weight
//! s/t, map Δ into [1, ∞). The built-in weights have analytic monotonicity
//! in s, which is what entitles the evaluators to prune their scans.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ExtendError, Result};

/// Upper end of the validation grid for both s and t. Arbitrary, but
/// recorded in every report so results are reproducible.
pub const GRID_MAX: f64 = 1e4;

/// Seed for the sampled parts of validation (recorded in the report).
const VALIDATION_SEED: u64 = 0x7152;

type WeightFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A weight function F : Δ → (0, 1].
#[derive(Clone)]
pub enum Extender {
    /// F(s, t) = (1 + s²)^(−1/t), evaluated in log space.
    Tietze,
    /// F(s, t) = t/s.
    Riesz,
    /// A user-supplied rule. Not assumed monotone: evaluators never prune
    /// with it, and it should be gated through [`validate_extender`].
    Custom { name: String, rule: WeightFn },
}

impl fmt::Debug for Extender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Extender {
    pub fn custom(
        name: impl Into<String>,
        rule: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Extender::Custom {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    /// Lookup by the CLI/config name.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "tietze" => Some(Extender::Tietze),
            "riesz" => Some(Extender::Riesz),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Extender::Tietze => "tietze",
            Extender::Riesz => "riesz",
            Extender::Custom { name, .. } => name,
        }
    }

    /// All extenders declare values in (0, 1]; the validator checks it.
    pub fn declared_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    /// Whether F(·, t) is decreasing by analysis rather than by sampling.
    /// Only then may an evaluator prune a scan with it.
    pub fn monotone_decreasing_in_s(&self) -> bool {
        matches!(self, Extender::Tietze | Extender::Riesz)
    }

    /// F(s, t) for s ≥ t > 0; rejects arguments outside Δ.
    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        check_domain(s, t)?;
        Ok(self.weight(s, t))
    }

    /// The raw rule, domain already established by the caller.
    pub(crate) fn weight(&self, s: f64, t: f64) -> f64 {
        match self {
            Extender::Tietze => tietze_weight(s, t),
            Extender::Riesz => t / s,
            Extender::Custom { rule, .. } => rule(s, t),
        }
    }
}

/// (1 + s²)^(−1/t) computed as exp(−log1p(s²)/t) so the power never
/// overflows for tiny t. Results below the smallest positive normal are
/// clamped up to it: the weight must stay strictly positive, its reciprocal
/// finite, and subnormal exp output is too coarse to stay monotone.
fn tietze_weight(s: f64, t: f64) -> f64 {
    let v = (-(s * s).ln_1p() / t).exp();
    if v < f64::MIN_POSITIVE {
        f64::MIN_POSITIVE
    } else {
        v
    }
}

fn check_domain(s: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && s >= t) || !s.is_finite() || !t.is_finite() {
        return Err(ExtendError::WeightDomain { s, t });
    }
    Ok(())
}

/// A weight G : Δ → [1, ∞) used by the infimum construction.
#[derive(Clone)]
pub enum DualWeight {
    /// G(s, t) = s/t.
    Dieudonne,
    /// G = 1/F for an extender F.
    Reciprocal(Extender),
}

impl fmt::Debug for DualWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl DualWeight {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "dieudonne" => Some(DualWeight::Dieudonne),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            DualWeight::Dieudonne => "dieudonne".to_owned(),
            DualWeight::Reciprocal(f) => format!("reciprocal-{}", f.name()),
        }
    }

    /// Whether G(·, t) is increasing by analysis (Dieudonné, or the
    /// reciprocal of an analytically decreasing extender).
    pub fn monotone_increasing_in_s(&self) -> bool {
        match self {
            DualWeight::Dieudonne => true,
            DualWeight::Reciprocal(f) => f.monotone_decreasing_in_s(),
        }
    }

    /// G(s, t) for s ≥ t > 0; rejects arguments outside Δ.
    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        check_domain(s, t)?;
        Ok(self.weight(s, t))
    }

    pub(crate) fn weight(&self, s: f64, t: f64) -> f64 {
        match self {
            DualWeight::Dieudonne => s / t,
            DualWeight::Reciprocal(f) => 1.0 / f.weight(s, t),
        }
    }
}

/// One sampled value of a weight function.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleValue {
    pub t: f64,
    pub value: f64,
}

/// Decay of F(s, ·) toward 0 for one fixed s.
#[derive(Clone, Debug, Serialize)]
pub struct DecaySeries {
    pub s: f64,
    pub samples: Vec<SampleValue>,
    pub final_value: f64,
}

/// Limit behaviour at the corner of Δ: F(t,t) → 1 and F(s,t) → 0.
#[derive(Clone, Debug, Serialize)]
pub struct Axiom1Report {
    pub diagonal: Vec<SampleValue>,
    /// |F(t,t) − 1| at the smallest sampled t.
    pub diagonal_residual: f64,
    pub decay: Vec<DecaySeries>,
    pub pass: bool,
}

/// Monotonicity of F(·, t) on the sampled grid.
#[derive(Clone, Debug, Serialize)]
pub struct Axiom2Report {
    pub violations: usize,
    pub pairs_checked: usize,
    pub pass: bool,
}

/// Empirical uniform-continuity modulus on {s ≥ t ≥ τ}.
#[derive(Clone, Debug, Serialize)]
pub struct Axiom3Report {
    /// (δ, ω(δ)) pairs, δ descending; ω(δ) = max |ΔF| over sampled pairs
    /// at Chebyshev distance ≤ δ in (s, t).
    pub modulus: Vec<(f64, f64)>,
    pub pass: bool,
}

/// Validation verdicts for one extender, with the grids that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct ExtenderReport {
    pub extender: String,
    pub tau: f64,
    pub grid_n: usize,
    pub grid_max: f64,
    pub seed: u64,
    pub range_ok: bool,
    pub axiom1: Axiom1Report,
    pub axiom2: Axiom2Report,
    pub axiom3: Axiom3Report,
    pub pass: bool,
}

/// Samples the three extender axioms on grids anchored at `tau`. Axioms are
/// statements about a continuum; this is a gate for user-supplied rules,
/// not a proof. Failures are reported, never thrown.
pub fn validate_extender(f: &Extender, tau: f64, grid_n: usize) -> Result<ExtenderReport> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(ExtendError::Config(format!(
            "tau must be a positive real, got {tau}"
        )));
    }
    if grid_n < 16 {
        return Err(ExtendError::Config(format!(
            "grid must have at least 16 nodes, got {grid_n}"
        )));
    }

    let grid = log_grid(tau, GRID_MAX, grid_n);
    let mut range_ok = true;
    for (gi, &t) in grid.iter().enumerate() {
        for &s in &grid[gi..] {
            let v = f.weight(s, t);
            if !(v > 0.0 && v <= 1.0) || !v.is_finite() {
                range_ok = false;
            }
        }
    }

    // Axiom 1: t_k = tau * 2^-k along the diagonal and below fixed s.
    let ts: Vec<f64> = (0..=20).map(|k| tau * (-(k as f64)).exp2()).collect();
    let diagonal: Vec<SampleValue> = ts
        .iter()
        .map(|&t| SampleValue {
            t,
            value: f.weight(t, t),
        })
        .collect();
    let residuals: Vec<f64> = diagonal.iter().map(|s| (s.value - 1.0).abs()).collect();
    let diagonal_residual = *residuals.last().unwrap();
    let diag_monotone = residuals.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let mut decay = Vec::new();
    let mut decay_ok = true;
    for s in [tau, 1.0_f64.max(tau), 10.0_f64.max(tau)] {
        let samples: Vec<SampleValue> = ts
            .iter()
            .filter(|&&t| t <= s)
            .map(|&t| SampleValue {
                t,
                value: f.weight(s, t),
            })
            .collect();
        let final_value = samples.last().map(|s| s.value).unwrap_or(f64::NAN);
        if !(final_value.abs() <= 1e-3) {
            decay_ok = false;
        }
        decay.push(DecaySeries {
            s,
            samples,
            final_value,
        });
    }
    let axiom1 = Axiom1Report {
        diagonal,
        diagonal_residual,
        decay,
        pass: diag_monotone && diagonal_residual <= 1e-3 && decay_ok,
    };

    // Axiom 2: F(·, t) nonincreasing along each grid row.
    let mut violations = 0usize;
    let mut pairs_checked = 0usize;
    for (gi, &t) in grid.iter().enumerate() {
        let row: Vec<f64> = grid[gi..].iter().map(|&s| f.weight(s, t)).collect();
        for w in row.windows(2) {
            pairs_checked += 1;
            if w[1] > w[0] {
                violations += 1;
            }
        }
    }
    let axiom2 = Axiom2Report {
        violations,
        pairs_checked,
        pass: violations == 0,
    };

    // Axiom 3: ω(δ) over random in-region pairs at Chebyshev distance ≤ δ,
    // cumulative so that ω is nondecreasing in δ.
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let levels = 13usize;
    let pairs_per_level = (grid_n * grid_n).max(1024);
    let mut raw = vec![0.0f64; levels];
    let log_lo = tau.ln();
    let log_hi = GRID_MAX.ln();
    for (k, w) in raw.iter_mut().enumerate() {
        let delta = tau * (-(k as f64)).exp2();
        for _ in 0..pairs_per_level {
            let t = (rng.random_range(log_lo..=log_hi)).exp();
            let s = (rng.random_range(t.ln()..=log_hi)).exp();
            let t2 = (t + rng.random_range(-delta..=delta)).clamp(tau, GRID_MAX);
            let s2 = (s + rng.random_range(-delta..=delta)).clamp(t2, GRID_MAX);
            let dv = (f.weight(s, t) - f.weight(s2, t2)).abs();
            if dv > *w {
                *w = dv;
            }
        }
    }
    for k in (0..levels - 1).rev() {
        // A pair within a smaller δ is also within every larger δ.
        raw[k] = raw[k].max(raw[k + 1]);
    }
    let modulus: Vec<(f64, f64)> = (0..levels)
        .map(|k| (tau * (-(k as f64)).exp2(), raw[k]))
        .collect();
    let omega_large = modulus[0].1;
    let omega_small = modulus[levels - 1].1;
    let axiom3 = Axiom3Report {
        modulus,
        pass: omega_small <= 1e-2 && omega_small <= 0.25 * omega_large + 1e-9,
    };

    let pass = range_ok && axiom1.pass && axiom2.pass && axiom3.pass;
    Ok(ExtenderReport {
        extender: f.name().to_owned(),
        tau,
        grid_n,
        grid_max: GRID_MAX,
        seed: VALIDATION_SEED,
        range_ok,
        axiom1,
        axiom2,
        axiom3,
        pass,
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
