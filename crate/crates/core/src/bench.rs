//! Analytic flop model and wall-clock runtime sweeps.
//!
//! # Flop convention
//!
//! Every scalar arithmetic operation counts as one flop whether it acts on a
//! real or a complex value, so a length-`N` inner product costs `2N` flops
//! (`N` products and `N` accumulations). Constant vectors that depend only on
//! the scenario (`s(ω0)`, `D s(ω0)`, `D² s(ω0)`) are treated as precomputed;
//! steering vectors on the search grid are not. Under this convention the ML
//! search costs exactly `N_α (M(2N+1) - 1)`: per grid point and sensor one
//! inner product and one `|.|²/σ²` step, plus `M - 1` additions across
//! sensors.
//!
//! Per-detector counts (`M` sensors, `N` samples):
//!
//! | detector | per sensor                                  | across sensors | tail |
//! |----------|---------------------------------------------|----------------|------|
//! | LRT      | 2 inner products, 2 amplitude products, 2 scalings, 1 difference: `4N + 5` | `M - 1` | 0 |
//! | GLRT     | search as above, then 2 inner products, 2 `|.|²/σ²`, 1 difference: `4N + 5` | `N_α(M(2N+1)-1) + M - 1` | 1 (÷N) |
//! | LMPU     | 2 inner products, 2 amplitude products, 2 scalings: `4N + 4` | `2(M - 1)` | 5 |
//! | GLMPU    | 3 inner products, 2 products, 2 scalings: `6N + 4` | `2(M - 1)` | 5 |
//! | GLMP1S   | 2 inner products, 1 product, 1 scaling: `4N + 2` | `M - 1` | 0 |
//!
//! The five-flop tail of LMPU/GLMPU is the square of the first score, the
//! sum with the second score, `-κ1`, and the two operations of `-κ2 ℓ'`.

use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::detectors::{Detector, DetectorId, GridSpec};
use crate::signal::{generate_observations, Hypothesis, Scenario};
use crate::{Error, Result};

/// Flops of the ML frequency search alone: `N_α (M(2N+1) - 1)`.
pub fn glrt_search_flops(sensors: usize, samples: usize, n_alpha: usize) -> u64 {
    let (m, n, na) = (sensors as u64, samples as u64, n_alpha as u64);
    na * (m * (2 * n + 1) - 1)
}

/// Flop count of one evaluation of `detector_id`'s statistic.
pub fn flop_estimate(detector_id: DetectorId, scenario: &Scenario, grid: &GridSpec) -> u64 {
    let m = scenario.sensors as u64;
    let n = scenario.samples as u64;
    let sum_across = m.saturating_sub(1);
    match detector_id {
        DetectorId::Lrt => m * (4 * n + 5) + sum_across,
        DetectorId::Glrt => {
            glrt_search_flops(scenario.sensors, scenario.samples, grid.n_alpha)
                + m * (4 * n + 5)
                + sum_across
                + 1
        }
        DetectorId::Lmpu => m * (4 * n + 4) + 2 * sum_across + 5,
        DetectorId::Glmpu => m * (6 * n + 4) + 2 * sum_across + 5,
        DetectorId::Glmp1s => m * (4 * n + 2) + sum_across,
    }
}

/// Timing and flop summary for one detector at one problem size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub detector_id: DetectorId,
    #[serde(rename = "N")]
    pub samples: usize,
    #[serde(rename = "M")]
    pub sensors: usize,
    pub n_alpha: usize,
    pub flops_model: u64,
    pub wall_ns_median: u64,
    pub wall_ns_p90: u64,
    pub repetitions: usize,
    /// Statistic evaluations per timed sample; times are per evaluation.
    pub batch: usize,
}

/// Timed samples shorter than this are batched.
const MIN_SAMPLE: Duration = Duration::from_micros(200);

fn percentile(sorted: &[u64], q: f64) -> u64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Times each detector's statistic for each `N`.
///
/// One dataset is generated per `(detector, N)` before timing; a warm-up
/// evaluation is discarded and also sizes the batch so that every timed
/// sample lasts at least 200 µs. Runs on the calling thread.
pub fn runtime_sweep(
    detector_ids: &[DetectorId],
    n_values: &[usize],
    scenario_base: &Scenario,
    grid: &GridSpec,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<CostReport>> {
    if repetitions < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 repetitions, got {repetitions}"
        )));
    }
    let mut reports = Vec::new();
    for &id in detector_ids {
        for &samples in n_values {
            let scenario = scenario_base.with_samples(samples);
            let detector = Detector::new(id)
                .with_grid(*grid)
                .with_design_delta(scenario_base.delta);
            let obs = generate_observations(&scenario, Hypothesis::H0, seed)?;

            let start = Instant::now();
            black_box(detector.statistic(black_box(&obs), &scenario)?);
            let warm = start.elapsed();
            let batch = if warm >= MIN_SAMPLE {
                1
            } else {
                let per = warm.as_nanos().max(1);
                (MIN_SAMPLE.as_nanos() / per + 1) as usize
            };

            let mut times = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let start = Instant::now();
                for _ in 0..batch {
                    black_box(detector.statistic(black_box(&obs), &scenario)?);
                }
                times.push((start.elapsed().as_nanos() / batch as u128) as u64);
            }
            times.sort_unstable();
            reports.push(CostReport {
                detector_id: id,
                samples,
                sensors: scenario.sensors,
                n_alpha: grid.n_alpha,
                flops_model: flop_estimate(id, &scenario, grid),
                wall_ns_median: percentile(&times, 0.5),
                wall_ns_p90: percentile(&times, 0.9),
                repetitions,
                batch,
            });
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glrt_search_term_matches_formula() {
        assert_eq!(glrt_search_flops(6, 48, 60_000), 34_860_000);
        assert_eq!(glrt_search_flops(1, 1, 1), 2);
    }

    #[test]
    fn glmpu_independent_of_grid() {
        let sc = Scenario::pmu_default();
        let a = flop_estimate(DetectorId::Glmpu, &sc, &GridSpec::new(10));
        let b = flop_estimate(DetectorId::Glmpu, &sc, &GridSpec::new(60_000));
        assert_eq!(a, b);
        assert_eq!(a, 6 * (6 * 48 + 4) + 2 * 5 + 5);
    }

    #[test]
    fn percentile_ranks() {
        let v: Vec<u64> = (1..=11).collect();
        assert_eq!(percentile(&v, 0.5), 6);
        assert_eq!(percentile(&v, 0.9), 10);
    }

    #[test]
    fn too_few_repetitions() {
        let sc = Scenario::pmu_default();
        assert!(runtime_sweep(&[DetectorId::Glmpu], &[4], &sc, &GridSpec::new(8), 4, 0).is_err());
    }
}
