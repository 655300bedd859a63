//! Test statistics for frequency-deviation detection.
//!
//! All statistics are pure functions of the observations and the scenario
//! (which carries the known noise variances, and for the clairvoyant tests
//! also the true amplitudes).
//!
//! # Score convention
//!
//! [`score_first`] and [`score_second`] are the exact first and second
//! derivatives in `Δ` at `Δ = 0` of [`loglik`](crate::signal::loglik),
//! `-Σ_m ‖x_m - A_m s(ω0+Δ)‖²/σ_m²`. Differentiating the cross term
//! `-2 Re{A_m x_m^H s}` keeps a factor 2 in front of both scores:
//!
//! ```text
//! ℓ'  = -2 Σ_m γ/(ω0 σ_m²)   Im{A_m x_m^H D s(ω0)}
//! ℓ'' = -2 Σ_m γ²/(ω0² σ_m²) Re{A_m x_m^H D² s(ω0)}
//! ```
//!
//! where `D = diag(0, 1, ..., N-1)`. The LMPU statistic is
//! `ℓ'' + ℓ'² - κ1 - κ2 ℓ'`; writing `-ℓ'` as the summed imaginary term gives
//! the `+κ2 Σ(..)Im{..}` form. GLMPU substitutes the null amplitude estimate
//! `Â_m = s^H(ω0) x_m / N`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::signal::{check_amplitudes, steering_unchecked, ObservationSet, Scenario};
use crate::{Error, Result};

/// Uniform half-open search grid for the ML frequency estimator.
///
/// Point `k` is `lo + k (hi - lo) / n_alpha` for `k = 0..n_alpha`. Missing
/// bounds default to the unambiguous range `[-ω0π/γ, ω0π/γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_alpha: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::new(60_000)
    }
}

impl GridSpec {
    /// Grid over the full unambiguous range.
    pub fn new(n_alpha: usize) -> Self {
        GridSpec {
            n_alpha,
            lo: None,
            hi: None,
        }
    }

    pub fn with_bounds(n_alpha: usize, lo: f64, hi: f64) -> Self {
        GridSpec {
            n_alpha,
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn bounds(&self, scenario: &Scenario) -> (f64, f64) {
        let half = scenario.unambiguous_half_width();
        (self.lo.unwrap_or(-half), self.hi.unwrap_or(half))
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.n_alpha == 0 {
            return Err(Error::EmptyGrid);
        }
        let (lo, hi) = self.bounds(scenario);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidGrid(format!(
                "need lo < hi, got [{lo}, {hi})"
            )));
        }
        Ok(())
    }

    pub fn points(&self, scenario: &Scenario) -> Result<Vec<f64>> {
        self.validate(scenario)?;
        let (lo, hi) = self.bounds(scenario);
        let step = (hi - lo) / self.n_alpha as f64;
        Ok((0..self.n_alpha).map(|k| lo + k as f64 * step).collect())
    }

    /// Grid points with `0` inserted (in order) if no point equals it.
    pub fn points_with_zero(&self, scenario: &Scenario) -> Result<Vec<f64>> {
        let mut points = self.points(scenario)?;
        if !points.contains(&0.0) {
            let at = points.partition_point(|&p| p < 0.0);
            points.insert(at, 0.0);
        }
        Ok(points)
    }
}

/// Coefficients of the LMPU/GLMPU statistics.
///
/// `kappa2` must be nonnegative. `kappa1` plays the role of the decision
/// threshold and is left unconstrained: calibrated null quantiles of the
/// plug-in statistic are negative in common settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaPair {
    pub kappa1: f64,
    pub kappa2: f64,
}

impl KappaPair {
    pub const ZERO: KappaPair = KappaPair {
        kappa1: 0.0,
        kappa2: 0.0,
    };

    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !kappa1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "kappa1 must be finite, got {kappa1}"
            )));
        }
        if !(kappa2.is_finite() && kappa2 >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa2 must be finite and >= 0, got {kappa2}"
            )));
        }
        Ok(KappaPair { kappa1, kappa2 })
    }
}

/// Weighted moments `q_k = Σ_n n^k conj(s_n(ω0)) x_m[n]`, `k = 0, 1, 2`.
///
/// `x_m^H D^k s(ω0) = conj(q_k)`.
#[derive(Debug, Clone, Copy)]
struct NullMoments {
    q0: Complex64,
    q1: Complex64,
    q2: Complex64,
}

fn null_moments(obs: &ObservationSet, scenario: &Scenario) -> Vec<NullMoments> {
    let s0 = steering_unchecked(scenario.omega0, scenario);
    obs.rows()
        .map(|x| {
            let mut q = NullMoments {
                q0: Complex64::new(0.0, 0.0),
                q1: Complex64::new(0.0, 0.0),
                q2: Complex64::new(0.0, 0.0),
            };
            for (n, (x, s)) in x.iter().zip(s0.entries()).enumerate() {
                let t = s.conj() * x;
                let n = n as f64;
                q.q0 += t;
                q.q1 += t * n;
                q.q2 += t * (n * n);
            }
            q
        })
        .collect()
}

/// First and second `Δ`-derivatives of the log-likelihood at `Δ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalScores {
    pub first: f64,
    pub second: f64,
}

impl LocalScores {
    /// `ℓ'' + ℓ'² - κ1 - κ2 ℓ'`.
    pub fn lmpu(&self, kappa: KappaPair) -> f64 {
        self.second + self.first * self.first - kappa.kappa1 - kappa.kappa2 * self.first
    }
}

fn scores_from_moments(
    moments: &[NullMoments],
    amplitudes: &[Complex64],
    scenario: &Scenario,
) -> LocalScores {
    let ratio = scenario.gamma / scenario.omega0;
    let mut first = 0.0;
    let mut second = 0.0;
    for ((q, a), var) in moments.iter().zip(amplitudes).zip(&scenario.variances) {
        first += (a * q.q1.conj()).im / var;
        second += (a * q.q2.conj()).re / var;
    }
    LocalScores {
        first: -2.0 * ratio * first,
        second: -2.0 * ratio * ratio * second,
    }
}

fn check_inputs(obs: &ObservationSet, scenario: &Scenario) -> Result<()> {
    scenario.validate()?;
    obs.check_matches(scenario)
}

/// Scores at known amplitudes.
pub fn local_scores(
    obs: &ObservationSet,
    scenario: &Scenario,
    amplitudes: &[Complex64],
) -> Result<LocalScores> {
    check_inputs(obs, scenario)?;
    check_amplitudes(amplitudes, scenario)?;
    Ok(scores_from_moments(
        &null_moments(obs, scenario),
        amplitudes,
        scenario,
    ))
}

/// Scores at the null amplitude estimate, computed from the quadratic forms
/// `x^H D^k s(ω0) s^H(ω0) x / N` without forming `Â` explicitly.
pub fn plug_in_local_scores(obs: &ObservationSet, scenario: &Scenario) -> Result<LocalScores> {
    check_inputs(obs, scenario)?;
    let ratio = scenario.gamma / scenario.omega0;
    let n = scenario.samples as f64;
    let mut first = 0.0;
    let mut second = 0.0;
    for (q, var) in null_moments(obs, scenario).iter().zip(&scenario.variances) {
        first += (q.q1.conj() * q.q0).im / (n * var);
        second += (q.q2.conj() * q.q0).re / (n * var);
    }
    Ok(LocalScores {
        first: -2.0 * ratio * first,
        second: -2.0 * ratio * ratio * second,
    })
}

/// Clairvoyant likelihood ratio statistic for known `Δ` and amplitudes:
/// `Σ_m Re{A_m x_m^H s(ω0+Δ)}/σ_m² - Σ_m Re{A_m x_m^H s(ω0)}/σ_m²`.
pub fn lrt_statistic(
    obs: &ObservationSet,
    scenario: &Scenario,
    delta: f64,
    amplitudes: &[Complex64],
) -> Result<f64> {
    check_inputs(obs, scenario)?;
    check_amplitudes(amplitudes, scenario)?;
    let s1 = steering_unchecked(scenario.omega0 + delta, scenario);
    let s0 = steering_unchecked(scenario.omega0, scenario);
    let mut alt = 0.0;
    let mut null = 0.0;
    for (m, x) in obs.rows().enumerate() {
        let var = scenario.variances[m];
        // x^H s = conj(s^H x)
        alt += (amplitudes[m] * s1.project(x).conj()).re / var;
        null += (amplitudes[m] * s0.project(x).conj()).re / var;
    }
    Ok(alt - null)
}

/// Periodogram objective `(1/N) Σ_m |s^H(ω0+α) x_m|² / σ_m²`.
///
/// The conjugate steering vector is built by phasor rotation, re-anchored
/// with an exact `cis` every 32 samples.
fn periodogram(
    obs: &ObservationSet,
    scenario: &Scenario,
    alpha: f64,
    scratch: &mut [Complex64],
) -> f64 {
    const ANCHOR: usize = 32;
    let step = -scenario.phase_step(scenario.omega0 + alpha);
    let rot = Complex64::cis(step);
    let mut p = Complex64::new(1.0, 0.0);
    for (n, slot) in scratch.iter_mut().enumerate() {
        if n % ANCHOR == 0 {
            p = Complex64::cis(step * n as f64);
        }
        *slot = p;
        p *= rot;
    }
    let mut total = 0.0;
    for (x, var) in obs.rows().zip(&scenario.variances) {
        let z: Complex64 = x.iter().zip(scratch.iter()).map(|(x, s)| x * s).sum();
        total += z.norm_sqr() / var;
    }
    total / scenario.samples as f64
}

/// Outcome of the grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyFit {
    pub delta_hat: f64,
    /// Periodogram objective at `delta_hat`.
    pub objective: f64,
}

/// `a` beats `b` on ties when it is closer to zero, then when it is negative.
fn tie_preferred(a: f64, b: f64) -> bool {
    a.abs() < b.abs() || (a.abs() == b.abs() && a < b)
}

fn search(obs: &ObservationSet, scenario: &Scenario, points: &[f64]) -> Result<FrequencyFit> {
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); scenario.samples];
    let mut best: Option<FrequencyFit> = None;
    for &alpha in points {
        let objective = periodogram(obs, scenario, alpha, &mut scratch);
        let better = match best {
            None => true,
            Some(b) => {
                objective > b.objective
                    || (objective == b.objective && tie_preferred(alpha, b.delta_hat))
            }
        };
        if better {
            best = Some(FrequencyFit {
                delta_hat: alpha,
                objective,
            });
        }
    }
    Ok(best.expect("nonempty grid"))
}

/// Exhaustive grid search for the ML frequency deviation, returning the fit.
pub fn ml_frequency_fit(
    obs: &ObservationSet,
    scenario: &Scenario,
    grid: &GridSpec,
) -> Result<FrequencyFit> {
    check_inputs(obs, scenario)?;
    search(obs, scenario, &grid.points(scenario)?)
}

/// ML estimate of `Δ`: the grid point maximizing the periodogram objective.
///
/// Ties go to the smallest `|α|`, then to the negative point.
pub fn ml_frequency(obs: &ObservationSet, scenario: &Scenario, grid: &GridSpec) -> Result<f64> {
    ml_frequency_fit(obs, scenario, grid).map(|fit| fit.delta_hat)
}

fn amplitudes_at(obs: &ObservationSet, scenario: &Scenario, omega: f64) -> Vec<Complex64> {
    let s = steering_unchecked(omega, scenario);
    let n = scenario.samples as f64;
    obs.rows().map(|x| s.project(x) / n).collect()
}

/// `Â_m = s^H(ω0) x_m / N`.
pub fn amplitude_ml_null(obs: &ObservationSet, scenario: &Scenario) -> Result<Vec<Complex64>> {
    check_inputs(obs, scenario)?;
    Ok(amplitudes_at(obs, scenario, scenario.omega0))
}

/// `Â_m = s^H(ω0 + Δ̂) x_m / N`.
pub fn amplitude_ml_alt(
    obs: &ObservationSet,
    scenario: &Scenario,
    delta_hat: f64,
) -> Result<Vec<Complex64>> {
    check_inputs(obs, scenario)?;
    Ok(amplitudes_at(obs, scenario, scenario.omega0 + delta_hat))
}

/// GLRT with fit details: the statistic and the `Δ̂` it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlrtOutcome {
    pub statistic: f64,
    pub delta_hat: f64,
}

pub fn glrt_outcome(
    obs: &ObservationSet,
    scenario: &Scenario,
    grid: &GridSpec,
) -> Result<GlrtOutcome> {
    check_inputs(obs, scenario)?;
    let points = grid.points_with_zero(scenario)?;
    let fit = search(obs, scenario, &points)?;
    let mut scratch = vec![Complex64::new(0.0, 0.0); scenario.samples];
    // Same kernel as the search, so the max dominates this term exactly.
    let at_zero = periodogram(obs, scenario, 0.0, &mut scratch);
    Ok(GlrtOutcome {
        statistic: fit.objective - at_zero,
        delta_hat: fit.delta_hat,
    })
}

/// `(1/N) Σ_m (|x_m^H s(ω0+Δ̂)|² - |x_m^H s(ω0)|²)/σ_m²` with `Δ̂` searched
/// over `grid ∪ {0}`.
pub fn glrt_statistic(obs: &ObservationSet, scenario: &Scenario, grid: &GridSpec) -> Result<f64> {
    glrt_outcome(obs, scenario, grid).map(|o| o.statistic)
}

/// `∂ℓ/∂Δ` at `Δ = 0` for the given amplitudes.
pub fn score_first(
    obs: &ObservationSet,
    scenario: &Scenario,
    amplitudes: &[Complex64],
) -> Result<f64> {
    local_scores(obs, scenario, amplitudes).map(|s| s.first)
}

/// `∂²ℓ/∂Δ²` at `Δ = 0` for the given amplitudes.
pub fn score_second(
    obs: &ObservationSet,
    scenario: &Scenario,
    amplitudes: &[Complex64],
) -> Result<f64> {
    local_scores(obs, scenario, amplitudes).map(|s| s.second)
}

/// LMPU statistic at known amplitudes. Reject `H0` when it is positive.
pub fn lmpu_statistic(
    obs: &ObservationSet,
    scenario: &Scenario,
    amplitudes: &[Complex64],
    kappa: KappaPair,
) -> Result<f64> {
    local_scores(obs, scenario, amplitudes).map(|s| s.lmpu(kappa))
}

/// GLMPU statistic: LMPU with the null amplitude estimate plugged in.
/// Reject `H0` when it is positive.
pub fn glmpu_statistic(obs: &ObservationSet, scenario: &Scenario, kappa: KappaPair) -> Result<f64> {
    plug_in_local_scores(obs, scenario).map(|s| s.lmpu(kappa))
}

/// One-sided GLMP: the score at the null amplitude estimate.
pub fn glmp_one_sided(obs: &ObservationSet, scenario: &Scenario) -> Result<f64> {
    plug_in_local_scores(obs, scenario).map(|s| s.first)
}

/// Detector identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DetectorId {
    #[serde(rename = "LRT")]
    Lrt,
    #[serde(rename = "GLRT")]
    Glrt,
    #[serde(rename = "LMPU")]
    Lmpu,
    #[serde(rename = "GLMPU")]
    Glmpu,
    #[serde(rename = "GLMP1S")]
    Glmp1s,
}

impl DetectorId {
    pub const ALL: [DetectorId; 5] = [
        DetectorId::Lrt,
        DetectorId::Glrt,
        DetectorId::Lmpu,
        DetectorId::Glmpu,
        DetectorId::Glmp1s,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DetectorId::Lrt => "LRT",
            DetectorId::Glrt => "GLRT",
            DetectorId::Lmpu => "LMPU",
            DetectorId::Glmpu => "GLMPU",
            DetectorId::Glmp1s => "GLMP1S",
        }
    }

    /// Whether the threshold is stored as `κ1`.
    pub fn uses_kappa(&self) -> bool {
        matches!(self, DetectorId::Lmpu | DetectorId::Glmpu)
    }
}

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for DetectorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown detector `{s}`")))
    }
}

/// A detector with everything needed to evaluate its raw statistic.
///
/// The raw statistic has `κ1 = 0`; thresholds are applied by the caller.
/// LRT and LMPU read the true amplitudes from the scenario; LRT additionally
/// tests against the fixed alternative `design_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detector {
    pub id: DetectorId,
    pub grid: GridSpec,
    #[serde(default)]
    pub kappa2: f64,
    #[serde(default)]
    pub design_delta: f64,
}

impl Detector {
    pub fn new(id: DetectorId) -> Self {
        Detector {
            id,
            grid: GridSpec::default(),
            kappa2: 0.0,
            design_delta: 0.0,
        }
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_kappa2(mut self, kappa2: f64) -> Self {
        self.kappa2 = kappa2;
        self
    }

    pub fn with_design_delta(mut self, delta: f64) -> Self {
        self.design_delta = delta;
        self
    }

    pub fn statistic(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<f64> {
        let kappa = KappaPair::new(0.0, self.kappa2)?;
        match self.id {
            DetectorId::Lrt => {
                lrt_statistic(obs, scenario, self.design_delta, &scenario.amplitudes)
            }
            DetectorId::Glrt => glrt_statistic(obs, scenario, &self.grid),
            DetectorId::Lmpu => lmpu_statistic(obs, scenario, &scenario.amplitudes, kappa),
            DetectorId::Glmpu => glmpu_statistic(obs, scenario, kappa),
            DetectorId::Glmp1s => glmp_one_sided(obs, scenario),
        }
    }
}
