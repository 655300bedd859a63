//! Monte Carlo calibration and power estimation.
//!
//! Decisions are strict: a trial rejects `H0` when its statistic is strictly
//! greater than the threshold. Thresholds are empirical `(1 - α)` quantiles
//! taken as the `⌈(1 - α) T⌉`-th order statistic of `T` null samples.
//!
//! Trial `t` of a run seeded with `s` draws its data with
//! `seed::derive(s, t)`; curve points derive their run seeds from the master
//! seed through [`seed::point_seed`] with separate calibration and evaluation
//! streams. Trials run in parallel on the current rayon pool and are
//! collected in index order, so results do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detectors::{
    local_scores, plug_in_local_scores, Detector, DetectorId, GridSpec, KappaPair, LocalScores,
};
use crate::seed::{self, STREAM_CALIBRATION, STREAM_EVALUATION, STREAM_ROC_ALT, STREAM_ROC_NULL};
use crate::signal::{generate_unchecked, GenerationOptions, Hypothesis, ObservationSet, Scenario};
use crate::{Error, Result};

/// Anything that maps one observation set to a real test statistic.
pub trait Statistic: Sync {
    fn evaluate(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<f64>;
}

impl Statistic for Detector {
    fn evaluate(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<f64> {
        self.statistic(obs, scenario)
    }
}

impl<F> Statistic for F
where
    F: Fn(&ObservationSet, &Scenario) -> Result<f64> + Sync,
{
    fn evaluate(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<f64> {
        self(obs, scenario)
    }
}

/// Runs `trials` independent draws and maps each through `f`, in trial order.
pub fn simulate_with<T, F>(
    scenario: &Scenario,
    hypothesis: Hypothesis,
    trials: usize,
    run_seed: u64,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ObservationSet) -> Result<T> + Sync,
{
    scenario.validate()?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let obs = generate_unchecked(
                scenario,
                hypothesis,
                seed::derive(run_seed, t),
                GenerationOptions::default(),
            );
            f(&obs)
        })
        .collect()
}

pub fn simulate_statistic<S: Statistic + ?Sized>(
    stat: &S,
    scenario: &Scenario,
    hypothesis: Hypothesis,
    trials: usize,
    run_seed: u64,
) -> Result<Vec<f64>> {
    simulate_with(scenario, hypothesis, trials, run_seed, |obs| {
        stat.evaluate(obs, scenario)
    })
}

fn check_alpha(alpha: f64, trials: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let needed = (1.0 / alpha).ceil() as usize;
    if trials < needed {
        return Err(Error::TooFewTrials {
            trials,
            alpha,
            needed,
        });
    }
    Ok(())
}

/// The `⌈(1 - α) T⌉`-th order statistic (1-based) of `samples`.
pub fn empirical_threshold(samples: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha, samples.len())?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let t = sorted.len();
    // ⌈(1-α)T⌉ = T - ⌊αT⌋; the guard absorbs representation error in αT.
    let rejected = (alpha * t as f64 * (1.0 + 1e-12)).floor() as usize;
    let rank = (t - rejected.min(t - 1)).clamp(1, t);
    Ok(sorted[rank - 1])
}

/// Fraction of samples strictly above `threshold`.
pub fn exceedance_rate(samples: &[f64], threshold: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().filter(|&&s| s > threshold).count() as f64 / samples.len() as f64
}

/// Binomial standard error of a proportion.
pub fn binomial_stderr(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Threshold and in-sample false-alarm rate of a calibration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub threshold: f64,
    pub empirical_pfa: f64,
}

/// Calibrates any statistic to size `alpha` on `trials` null draws.
pub fn calibrate_statistic<S: Statistic + ?Sized>(
    stat: &S,
    scenario: &Scenario,
    alpha: f64,
    trials: usize,
    run_seed: u64,
) -> Result<Calibration> {
    check_alpha(alpha, trials)?;
    let samples = simulate_statistic(stat, scenario, Hypothesis::H0, trials, run_seed)?;
    let threshold = empirical_threshold(&samples, alpha)?;
    Ok(Calibration {
        threshold,
        empirical_pfa: exceedance_rate(&samples, threshold),
    })
}

/// A detector with a threshold calibrated to a false-alarm level.
///
/// For LMPU and GLMPU the threshold is stored as `κ1` and the full statistic
/// is `raw - κ1`, so "reject when the statistic is positive" and "reject when
/// the raw statistic exceeds the threshold" coincide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedDetector {
    pub detector_id: DetectorId,
    pub threshold: f64,
    pub kappa: KappaPair,
    pub alpha: f64,
    pub calibration_trials: usize,
    pub seed: u64,
    /// Rejection rate on the calibration sample itself.
    pub empirical_pfa: f64,
    pub grid: GridSpec,
    /// Alternative the LRT is built for; unused by the other detectors.
    pub design_delta: f64,
    /// Null scenario the threshold was calibrated on.
    pub scenario: Scenario,
}

impl CalibratedDetector {
    pub fn detector(&self) -> Detector {
        Detector {
            id: self.detector_id,
            grid: self.grid,
            kappa2: self.kappa.kappa2,
            design_delta: self.design_delta,
        }
    }

    /// The thresholded statistic; positive means reject.
    pub fn statistic(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<f64> {
        Ok(self.detector().statistic(obs, scenario)? - self.threshold)
    }

    pub fn rejects(&self, obs: &ObservationSet, scenario: &Scenario) -> Result<bool> {
        Ok(self.detector().statistic(obs, scenario)? > self.threshold)
    }

    /// Errors unless `scenario` differs from the calibration scenario only in
    /// `Δ` and the amplitudes.
    pub fn check_compatible(&self, scenario: &Scenario) -> Result<()> {
        let cal = &self.scenario;
        let mismatch = |what: &str| Err(Error::CalibrationMismatch(what.to_string()));
        if cal.sensors != scenario.sensors {
            return mismatch("M differs");
        }
        if cal.samples != scenario.samples {
            return mismatch("N differs");
        }
        if cal.gamma != scenario.gamma {
            return mismatch("gamma differs");
        }
        if cal.omega0 != scenario.omega0 {
            return mismatch("omega0 differs");
        }
        if cal.variances != scenario.variances {
            return mismatch("noise variances differ");
        }
        Ok(())
    }
}

/// Calibrates `detector` (with `κ1 = 0`) to size `alpha` under `H0`.
///
/// The GLRT null distribution has an atom at exactly `0` (the search grid
/// always contains `Δ = 0`). When the grid spacing is coarse relative to the
/// spread of `Δ̂`, that atom can exceed `1 - α`; the threshold is then `0` and
/// the test is conservative. `empirical_pfa` shows the achieved rate.
pub fn calibrate_threshold(
    detector: &Detector,
    scenario: &Scenario,
    alpha: f64,
    trials: usize,
    run_seed: u64,
) -> Result<CalibratedDetector> {
    let null = scenario.with_delta(0.0);
    let cal = calibrate_statistic(detector, &null, alpha, trials, run_seed)?;
    let kappa = if detector.id.uses_kappa() {
        KappaPair::new(cal.threshold, detector.kappa2)?
    } else {
        KappaPair::ZERO
    };
    Ok(CalibratedDetector {
        detector_id: detector.id,
        threshold: cal.threshold,
        kappa,
        alpha,
        calibration_trials: trials,
        seed: run_seed,
        empirical_pfa: cal.empirical_pfa,
        grid: detector.grid,
        design_delta: detector.design_delta,
        scenario: null,
    })
}

/// Estimated detection probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdEstimate {
    pub pd: f64,
    pub stderr: f64,
}

pub fn estimate_pd_with<S: Statistic + ?Sized>(
    stat: &S,
    threshold: f64,
    scenario: &Scenario,
    trials: usize,
    run_seed: u64,
) -> Result<PdEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let samples = simulate_statistic(stat, scenario, Hypothesis::H1, trials, run_seed)?;
    let pd = exceedance_rate(&samples, threshold);
    Ok(PdEstimate {
        pd,
        stderr: binomial_stderr(pd, trials),
    })
}

/// Fraction of `H1` trials (at the scenario's `Δ`) that reject.
pub fn estimate_pd(
    cal: &CalibratedDetector,
    scenario: &Scenario,
    trials: usize,
    run_seed: u64,
) -> Result<PdEstimate> {
    cal.check_compatible(scenario)?;
    estimate_pd_with(&cal.detector(), cal.threshold, scenario, trials, run_seed)
}

/// Abscissa of a detection curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Frequency deviation in rad/s.
    #[serde(rename = "DELTA")]
    Delta,
    /// Per-sensor SNR in dB.
    #[serde(rename = "SNR_DB")]
    SnrDb,
    /// Empirical false-alarm rate (ROC curves).
    #[serde(rename = "THRESHOLD")]
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub abscissa: f64,
    pub pd: f64,
    pub pd_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionCurve {
    pub axis: Axis,
    pub points: Vec<CurvePoint>,
    /// Design false-alarm level; `None` for ROC curves.
    pub alpha: Option<f64>,
    pub trials_per_point: usize,
}

impl DetectionCurve {
    pub fn pd_at(&self, abscissa: f64) -> Option<CurvePoint> {
        self.points.iter().copied().find(|p| p.abscissa == abscissa)
    }
}

fn check_increasing(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("sweep has no values".into()));
    }
    if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sweep values must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Pd swept over `Δ` or SNR at fixed false-alarm level `alpha`.
///
/// A `Δ` sweep calibrates once on the null scenario; an SNR sweep
/// recalibrates at every point because the null distribution moves with the
/// noise variances. The LRT is rebuilt for each alternative it is evaluated
/// at and therefore recalibrated per point as well.
pub fn detection_curve(
    detector: &Detector,
    scenario_base: &Scenario,
    sweep: &Sweep,
    alpha: f64,
    trials: usize,
    master_seed: u64,
) -> Result<DetectionCurve> {
    check_increasing(&sweep.values)?;
    let cal_seed = |i: usize| seed::point_seed(master_seed, STREAM_CALIBRATION, i as u64);
    let eval_seed = |i: usize| seed::point_seed(master_seed, STREAM_EVALUATION, i as u64);

    let mut points = Vec::with_capacity(sweep.values.len());
    match sweep.axis {
        Axis::Delta => {
            let shared = if detector.id == DetectorId::Lrt {
                None
            } else {
                Some(calibrate_threshold(
                    detector,
                    scenario_base,
                    alpha,
                    trials,
                    cal_seed(0),
                )?)
            };
            for (i, &delta) in sweep.values.iter().enumerate() {
                let scenario = scenario_base.with_delta(delta);
                scenario.validate()?;
                let cal = match &shared {
                    Some(cal) => cal.clone(),
                    None => calibrate_threshold(
                        &detector.with_design_delta(delta),
                        scenario_base,
                        alpha,
                        trials,
                        cal_seed(i),
                    )?,
                };
                let est = estimate_pd(&cal, &scenario, trials, eval_seed(i))?;
                points.push(CurvePoint {
                    abscissa: delta,
                    pd: est.pd,
                    pd_stderr: est.stderr,
                });
            }
        }
        Axis::SnrDb => {
            let detector = if detector.id == DetectorId::Lrt {
                detector.with_design_delta(scenario_base.delta)
            } else {
                *detector
            };
            for (i, &snr) in sweep.values.iter().enumerate() {
                let scenario = scenario_base.with_snr_db(snr)?;
                let cal = calibrate_threshold(&detector, &scenario, alpha, trials, cal_seed(i))?;
                let est = estimate_pd(&cal, &scenario, trials, eval_seed(i))?;
                points.push(CurvePoint {
                    abscissa: snr,
                    pd: est.pd,
                    pd_stderr: est.stderr,
                });
            }
        }
        Axis::Threshold => {
            return Err(Error::InvalidArgument(
                "threshold sweeps are produced by roc_curve".into(),
            ))
        }
    }
    Ok(DetectionCurve {
        axis: sweep.axis,
        points,
        alpha: Some(alpha),
        trials_per_point: trials,
    })
}

/// ROC of any statistic from `trials` null and `trials` alternative draws.
///
/// Thresholds run over the distinct null samples below the largest one, in
/// decreasing order, giving strictly increasing false-alarm rates; `(0, 0)`
/// and `(1, 1)` close the curve.
pub fn roc_curve_with<S: Statistic + ?Sized>(
    stat: &S,
    scenario: &Scenario,
    trials: usize,
    master_seed: u64,
) -> Result<DetectionCurve> {
    if scenario.delta == 0.0 {
        return Err(Error::InvalidArgument(
            "ROC curves need a nonzero delta".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let null_seed = seed::point_seed(master_seed, STREAM_ROC_NULL, 0);
    let alt_seed = seed::point_seed(master_seed, STREAM_ROC_ALT, 0);
    let mut null = simulate_statistic(stat, scenario, Hypothesis::H0, trials, null_seed)?;
    let mut alt = simulate_statistic(stat, scenario, Hypothesis::H1, trials, alt_seed)?;
    null.sort_by(f64::total_cmp);
    alt.sort_by(f64::total_cmp);
    let total = trials as f64;
    let above = |sorted: &[f64], t: f64| sorted.len() - sorted.partition_point(|&s| s <= t);

    let mut thresholds = null.clone();
    thresholds.dedup();
    thresholds.pop();

    let mut points = vec![CurvePoint {
        abscissa: 0.0,
        pd: 0.0,
        pd_stderr: 0.0,
    }];
    for &t in thresholds.iter().rev() {
        let pfa = above(&null, t) as f64 / total;
        let pd = above(&alt, t) as f64 / total;
        points.push(CurvePoint {
            abscissa: pfa,
            pd,
            pd_stderr: binomial_stderr(pd, trials),
        });
    }
    points.push(CurvePoint {
        abscissa: 1.0,
        pd: 1.0,
        pd_stderr: 0.0,
    });
    Ok(DetectionCurve {
        axis: Axis::Threshold,
        points,
        alpha: None,
        trials_per_point: trials,
    })
}

/// ROC of `detector` at the scenario's (nonzero) `Δ`.
pub fn roc_curve(
    detector: &Detector,
    scenario: &Scenario,
    trials: usize,
    master_seed: u64,
) -> Result<DetectionCurve> {
    let detector = if detector.id == DetectorId::Lrt {
        detector.with_design_delta(scenario.delta)
    } else {
        *detector
    };
    roc_curve_with(&detector, scenario, trials, master_seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnbiasednessReport {
    pub delta_radius: f64,
    pub grid: Vec<f64>,
    pub pd_values: Vec<f64>,
    pub pd_stderr: Vec<f64>,
    pub alpha: f64,
    pub passed: bool,
    pub tolerance: f64,
}

/// `n_points` evenly spaced deviations strictly inside `(-radius, radius)`,
/// excluding `0`.
pub fn neighborhood_grid(delta_radius: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(delta_radius.is_finite() && delta_radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta_radius must be > 0, got {delta_radius}"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidArgument("n_points must be at least 2".into()));
    }
    let step = 2.0 * delta_radius / (n_points + 1) as f64;
    Ok((1..=n_points)
        .map(|k| -delta_radius + k as f64 * step)
        .filter(|d| d.abs() > 1e-12 * delta_radius)
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn unbiasedness_from<S: Statistic + ?Sized>(
    stat: &S,
    threshold: f64,
    alpha: f64,
    scenario_base: &Scenario,
    delta_radius: f64,
    n_points: usize,
    trials: usize,
    master_seed: u64,
    tolerance: Option<f64>,
) -> Result<UnbiasednessReport> {
    let grid = neighborhood_grid(delta_radius, n_points)?;
    let tolerance = tolerance.unwrap_or(3.0 * binomial_stderr(alpha, trials));
    let mut pd_values = Vec::with_capacity(grid.len());
    let mut pd_stderr = Vec::with_capacity(grid.len());
    for (i, &delta) in grid.iter().enumerate() {
        let scenario = scenario_base.with_delta(delta);
        let run_seed = seed::point_seed(master_seed, STREAM_EVALUATION, i as u64);
        let est = estimate_pd_with(stat, threshold, &scenario, trials, run_seed)?;
        pd_values.push(est.pd);
        pd_stderr.push(est.stderr);
    }
    let passed = pd_values.iter().all(|&pd| pd >= alpha - tolerance);
    Ok(UnbiasednessReport {
        delta_radius,
        grid,
        pd_values,
        pd_stderr,
        alpha,
        passed,
        tolerance,
    })
}

/// Checks `Pd(Δ) ≥ α - tolerance` over a symmetric neighborhood of `Δ = 0`.
///
/// The default tolerance is three binomial standard errors at `p = α`.
pub fn verify_unbiasedness(
    cal: &CalibratedDetector,
    scenario_base: &Scenario,
    delta_radius: f64,
    n_points: usize,
    trials: usize,
    master_seed: u64,
    tolerance: Option<f64>,
) -> Result<UnbiasednessReport> {
    cal.check_compatible(scenario_base)?;
    unbiasedness_from(
        &cal.detector(),
        cal.threshold,
        cal.alpha,
        scenario_base,
        delta_radius,
        n_points,
        trials,
        master_seed,
        tolerance,
    )
}

/// Same check for an arbitrary statistic and threshold.
#[allow(clippy::too_many_arguments)]
pub fn verify_unbiasedness_with<S: Statistic + ?Sized>(
    stat: &S,
    threshold: f64,
    alpha: f64,
    scenario_base: &Scenario,
    delta_radius: f64,
    n_points: usize,
    trials: usize,
    master_seed: u64,
    tolerance: Option<f64>,
) -> Result<UnbiasednessReport> {
    unbiasedness_from(
        stat,
        threshold,
        alpha,
        scenario_base,
        delta_radius,
        n_points,
        trials,
        master_seed,
        tolerance,
    )
}

/// Candidate values of `κ2` for [`search_kappa2`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Kappa2Scan {
    /// Values used as given.
    Absolute(Vec<f64>),
    /// Multiples of `sd(ℓ'' + ℓ'²) / sd(ℓ')` under `H0`, which puts the
    /// linear term on the scale of the quadratic one.
    Relative(Vec<f64>),
}

impl Default for Kappa2Scan {
    fn default() -> Self {
        Kappa2Scan::Relative(vec![0.0, 0.25, 0.5, 1.0, 2.0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kappa2Candidate {
    pub kappa: KappaPair,
    pub min_pd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kappa2Search {
    pub best: KappaPair,
    pub candidates: Vec<Kappa2Candidate>,
    pub grid: Vec<f64>,
}

fn std_dev(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt()
}

/// Scans `κ2`, recalibrating `κ1` to size `alpha` for each candidate, and
/// keeps the pair with the largest worst-case Pd over the unbiasedness
/// neighborhood. `κ2 = 0` is always scanned and wins ties.
///
/// Every candidate reuses the same null and alternative draws (only the
/// linear coefficient changes), so candidates are compared on common random
/// numbers.
#[allow(clippy::too_many_arguments)]
pub fn search_kappa2(
    detector_id: DetectorId,
    scenario_base: &Scenario,
    alpha: f64,
    delta_radius: f64,
    n_points: usize,
    trials: usize,
    master_seed: u64,
    scan: &Kappa2Scan,
) -> Result<Kappa2Search> {
    check_alpha(alpha, trials)?;
    let scores = |scenario: &Scenario, h: Hypothesis, run_seed: u64| -> Result<Vec<LocalScores>> {
        simulate_with(scenario, h, trials, run_seed, |obs| match detector_id {
            DetectorId::Lmpu => local_scores(obs, scenario, &scenario.amplitudes),
            DetectorId::Glmpu => plug_in_local_scores(obs, scenario),
            other => Err(Error::InvalidArgument(format!(
                "kappa2 search applies to LMPU and GLMPU, not {other}"
            ))),
        })
    };
    let grid = neighborhood_grid(delta_radius, n_points)?;
    let null_scenario = scenario_base.with_delta(0.0);
    let null = scores(
        &null_scenario,
        Hypothesis::H0,
        seed::point_seed(master_seed, STREAM_CALIBRATION, 0),
    )?;
    let alts = grid
        .iter()
        .enumerate()
        .map(|(i, &delta)| {
            scores(
                &scenario_base.with_delta(delta),
                Hypothesis::H1,
                seed::point_seed(master_seed, STREAM_EVALUATION, i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = match scan {
        Kappa2Scan::Absolute(v) => v.clone(),
        Kappa2Scan::Relative(v) => {
            let quad = std_dev(null.iter().map(|s| s.lmpu(KappaPair::ZERO)));
            let lin = std_dev(null.iter().map(|s| s.first));
            let scale = if lin > 0.0 { quad / lin } else { 0.0 };
            v.iter().map(|c| c * scale).collect()
        }
    };
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidArgument(
            "kappa2 candidates must be >= 0".into(),
        ));
    }
    if !values.contains(&0.0) {
        values.insert(0, 0.0);
    }
    values.sort_by(f64::total_cmp);
    values.dedup();

    let mut candidates = Vec::with_capacity(values.len());
    for &kappa2 in &values {
        let k = KappaPair::new(0.0, kappa2)?;
        let null_stats: Vec<f64> = null.iter().map(|s| s.lmpu(k)).collect();
        let kappa1 = empirical_threshold(&null_stats, alpha)?;
        let min_pd = alts
            .iter()
            .map(|alt| {
                let stats: Vec<f64> = alt.iter().map(|s| s.lmpu(k)).collect();
                exceedance_rate(&stats, kappa1)
            })
            .fold(f64::INFINITY, f64::min);
        candidates.push(Kappa2Candidate {
            kappa: KappaPair::new(kappa1, kappa2)?,
            min_pd,
        });
    }
    let best = candidates
        .iter()
        .fold(None::<Kappa2Candidate>, |best, c| match best {
            Some(b) if b.min_pd >= c.min_pd => Some(b),
            _ => Some(*c),
        })
        .expect("at least one candidate")
        .kappa;
    Ok(Kappa2Search {
        best,
        candidates,
        grid,
    })
}
