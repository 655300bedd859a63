mod common;

use std::f64::consts::PI;

use common::{random_instance, rel_close, rng};
use freqdev::detectors::{
    amplitude_ml_alt, amplitude_ml_null, glmp_one_sided, glmpu_statistic, glrt_outcome,
    glrt_statistic, lmpu_statistic, local_scores, lrt_statistic, ml_frequency, ml_frequency_fit,
    score_first, score_second, Detector, DetectorId, GridSpec, KappaPair,
};
use freqdev::signal::{
    generate_observations, generate_observations_with, loglik, steering_vector, GenerationOptions,
    Hypothesis, ObservationSet, Scenario,
};
use freqdev::{Complex64, Error};
use proptest::prelude::*;
use rand::Rng;

/// Independent objective: `(1/N) Σ_m |s^H x_m|² / σ_m²` from a freshly built
/// steering vector (no phasor recurrence).
fn objective(obs: &ObservationSet, sc: &Scenario, alpha: f64) -> f64 {
    let s = steering_vector(sc.omega0 + alpha, sc).unwrap();
    obs.rows()
        .zip(&sc.variances)
        .map(|(x, v)| s.project(x).norm_sqr() / v)
        .sum::<f64>()
        / sc.samples as f64
}

#[test]
fn scores_match_finite_differences() {
    let mut r = rng(11);
    for _ in 0..200 {
        let (sc, obs) = random_instance(&mut r, 6, 64);
        let a = &sc.amplitudes;
        let h1 = 1e-6 * sc.omega0;
        let d1 =
            (loglik(&obs, h1, a, &sc).unwrap() - loglik(&obs, -h1, a, &sc).unwrap()) / (2.0 * h1);
        let h2 = 1e-4 * sc.omega0;
        let d2 = (loglik(&obs, h2, a, &sc).unwrap() - 2.0 * loglik(&obs, 0.0, a, &sc).unwrap()
            + loglik(&obs, -h2, a, &sc).unwrap())
            / (h2 * h2);
        let s1 = score_first(&obs, &sc, a).unwrap();
        let s2 = score_second(&obs, &sc, a).unwrap();
        assert!(rel_close(s1, d1, 1e-4), "first: {s1} vs {d1}");
        assert!(rel_close(s2, d2, 1e-3), "second: {s2} vs {d2}");
    }
}

#[test]
fn plug_in_identity() {
    let mut r = rng(12);
    for _ in 0..500 {
        let (sc, obs) = random_instance(&mut r, 6, 64);
        let kappa = KappaPair::new(r.random_range(-2.0..2.0), r.random_range(0.0..2.0)).unwrap();
        let a0 = amplitude_ml_null(&obs, &sc).unwrap();
        let composed = lmpu_statistic(&obs, &sc, &a0, kappa).unwrap();
        let direct = glmpu_statistic(&obs, &sc, kappa).unwrap();
        assert!(rel_close(direct, composed, 1e-10), "{direct} vs {composed}");
        let one_sided = glmp_one_sided(&obs, &sc).unwrap();
        assert!(rel_close(
            one_sided,
            score_first(&obs, &sc, &a0).unwrap(),
            1e-10
        ));
    }
}

#[test]
fn glrt_equals_plug_in_likelihood_ratio() {
    let mut r = rng(13);
    for _ in 0..100 {
        let (sc, obs) = random_instance(&mut r, 4, 40);
        let grid = GridSpec::new(257);
        let out = glrt_outcome(&obs, &sc, &grid).unwrap();
        let a1 = amplitude_ml_alt(&obs, &sc, out.delta_hat).unwrap();
        let a0 = amplitude_ml_null(&obs, &sc).unwrap();
        let s1 = steering_vector(sc.omega0 + out.delta_hat, &sc).unwrap();
        let s0 = steering_vector(sc.omega0, &sc).unwrap();
        let mut oracle = 0.0;
        for (m, x) in obs.rows().enumerate() {
            let v = sc.variances[m];
            oracle += (a1[m] * s1.project(x).conj()).re / v - (a0[m] * s0.project(x).conj()).re / v;
        }
        let scale = objective(&obs, &sc, 0.0).max(1.0);
        assert!(
            (out.statistic - oracle).abs() <= 1e-10 * scale,
            "{} vs {oracle}",
            out.statistic
        );
        assert!(out.statistic >= 0.0);
    }
}

#[test]
fn alt_amplitudes_reproduce_fit_objective() {
    let mut r = rng(14);
    for _ in 0..50 {
        let (sc, obs) = random_instance(&mut r, 6, 48);
        let fit = ml_frequency_fit(&obs, &sc, &GridSpec::new(101)).unwrap();
        let a1 = amplitude_ml_alt(&obs, &sc, fit.delta_hat).unwrap();
        let n = sc.samples as f64;
        let from_amps: f64 = a1
            .iter()
            .zip(&sc.variances)
            .map(|(a, v)| n * a.norm_sqr() / v)
            .sum();
        assert!(rel_close(from_amps, fit.objective, 1e-10));
    }
}

#[test]
fn ml_frequency_matches_exhaustive_search() {
    let mut r = rng(15);
    for _ in 0..100 {
        let (sc, obs) = random_instance(&mut r, 3, 24);
        let grid = GridSpec::new(9);
        let (lo, hi) = grid.bounds(&sc);
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..9 {
            let alpha = lo + (hi - lo) * k as f64 / 9.0;
            let o = objective(&obs, &sc, alpha);
            if o > best.0 {
                best = (o, alpha);
            }
        }
        let found = ml_frequency(&obs, &sc, &grid).unwrap();
        assert!(
            (found - best.1).abs() <= 1e-9 * sc.omega0,
            "{found} vs {}",
            best.1
        );
    }
}

#[test]
fn ml_frequency_maximizes_concentrated_likelihood() {
    // Brute force over the grid with the full log-likelihood at the ML
    // amplitudes for each candidate.
    let mut r = rng(16);
    for _ in 0..20 {
        let (sc, obs) = random_instance(&mut r, 3, 32);
        let grid = GridSpec::new(33);
        let mut best = (f64::NEG_INFINITY, 0.0);
        for alpha in grid.points(&sc).unwrap() {
            let a = amplitude_ml_alt(&obs, &sc, alpha).unwrap();
            let l = loglik(&obs, alpha, &a, &sc).unwrap();
            if l > best.0 {
                best = (l, alpha);
            }
        }
        assert_eq!(ml_frequency(&obs, &sc, &grid).unwrap(), best.1);
    }
}

#[test]
fn lrt_noiseless_matches_hand_expansion() {
    let sc = Scenario::pmu_default().with_delta(0.1 * 2.0 * PI * 60.0);
    let obs = generate_observations_with(
        &sc,
        Hypothesis::H1,
        0,
        GenerationOptions { noiseless: true },
    )
    .unwrap();
    let s1 = steering_vector(sc.omega0 + sc.delta, &sc).unwrap();
    let s0 = steering_vector(sc.omega0, &sc).unwrap();
    // x = A s1, so Re{A x^H (s1 - s0)} = |A|² (N - Re{s1^H s0}).
    let cross: Complex64 = s1
        .entries()
        .iter()
        .zip(s0.entries())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let expected: f64 = sc
        .amplitudes
        .iter()
        .zip(&sc.variances)
        .map(|(a, v)| a.norm_sqr() * (sc.samples as f64 - cross.re) / v)
        .sum();
    let got = lrt_statistic(&obs, &sc, sc.delta, &sc.amplitudes).unwrap();
    assert!(rel_close(got, expected, 1e-12), "{got} vs {expected}");
    assert!(got > 0.0);
}

#[test]
fn generic_detector_dispatch() {
    let sc = Scenario::pmu_default();
    let obs = generate_observations(&sc, Hypothesis::H0, 3).unwrap();
    let grid = GridSpec::new(300);
    let d = |id| Detector::new(id).with_grid(grid).with_design_delta(5.0);
    assert_eq!(
        d(DetectorId::Glrt).statistic(&obs, &sc).unwrap(),
        glrt_statistic(&obs, &sc, &grid).unwrap()
    );
    assert_eq!(
        d(DetectorId::Glmpu).statistic(&obs, &sc).unwrap(),
        glmpu_statistic(&obs, &sc, KappaPair::ZERO).unwrap()
    );
    assert_eq!(
        d(DetectorId::Lmpu).statistic(&obs, &sc).unwrap(),
        lmpu_statistic(&obs, &sc, &sc.amplitudes, KappaPair::ZERO).unwrap()
    );
    assert_eq!(
        d(DetectorId::Lrt).statistic(&obs, &sc).unwrap(),
        lrt_statistic(&obs, &sc, 5.0, &sc.amplitudes).unwrap()
    );
    assert_eq!(
        d(DetectorId::Glmp1s).statistic(&obs, &sc).unwrap(),
        glmp_one_sided(&obs, &sc).unwrap()
    );
}

#[test]
fn mismatched_observations_are_rejected() {
    let sc = Scenario::pmu_default();
    let obs = generate_observations(&sc.with_samples(10), Hypothesis::H0, 3).unwrap();
    for id in DetectorId::ALL {
        let err = Detector::new(id)
            .with_grid(GridSpec::new(10))
            .statistic(&obs, &sc)
            .unwrap_err();
        assert!(
            matches!(err, Error::DimensionMismatch { .. }),
            "{id}: {err}"
        );
    }
    assert!(local_scores(&obs, &sc, &sc.amplitudes).is_err());
}

fn scenario_strategy() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..6, 2usize..40)
}

fn instance(seed: u64, m: usize, n: usize) -> (Scenario, ObservationSet) {
    let mut r = rng(seed);
    let (mut sc, _) = random_instance(&mut r, 1, 2);
    sc.sensors = m;
    sc.samples = n;
    sc.amplitudes = (0..m)
        .map(|_| Complex64::from_polar(r.random_range(0.2..2.0), r.random_range(-PI..PI)))
        .collect();
    sc.variances = (0..m).map(|_| r.random_range(0.2..3.0)).collect();
    let obs = generate_observations(&sc, Hypothesis::H1, seed).unwrap();
    (sc, obs)
}

fn rotate(obs: &ObservationSet, sc: &Scenario, phase: &[f64]) -> (ObservationSet, Scenario) {
    let rows = obs
        .rows()
        .zip(phase)
        .map(|(x, p)| x.iter().map(|v| v * Complex64::cis(*p)).collect())
        .collect();
    let mut sc = sc.clone();
    for (a, p) in sc.amplitudes.iter_mut().zip(phase) {
        *a *= Complex64::cis(*p);
    }
    (ObservationSet::from_rows(rows).unwrap(), sc)
}

fn permute(obs: &ObservationSet, sc: &Scenario, perm: &[usize]) -> (ObservationSet, Scenario) {
    let rows = perm.iter().map(|&i| obs.sensor(i).to_vec()).collect();
    let mut p = sc.clone();
    p.amplitudes = perm.iter().map(|&i| sc.amplitudes[i]).collect();
    p.variances = perm.iter().map(|&i| sc.variances[i]).collect();
    (ObservationSet::from_rows(rows).unwrap(), p)
}

fn all_statistics(obs: &ObservationSet, sc: &Scenario) -> Vec<f64> {
    let grid = GridSpec::new(64);
    DetectorId::ALL
        .iter()
        .map(|&id| {
            Detector::new(id)
                .with_grid(grid)
                .with_kappa2(0.3)
                .with_design_delta(0.01 * sc.omega0)
                .statistic(obs, sc)
                .unwrap()
        })
        .collect()
}

fn close_all(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn glrt_is_nonnegative((seed, m, n) in scenario_strategy()) {
        let (sc, obs) = instance(seed, m, n);
        prop_assert!(glrt_statistic(&obs, &sc, &GridSpec::new(50)).unwrap() >= 0.0);
    }

    #[test]
    fn common_phase_rotation_is_invisible((seed, m, n) in scenario_strategy(), phi in -PI..PI) {
        let (sc, obs) = instance(seed, m, n);
        let (obs_r, sc_r) = rotate(&obs, &sc, &vec![phi; m]);
        prop_assert!(close_all(&all_statistics(&obs, &sc), &all_statistics(&obs_r, &sc_r)));
    }

    #[test]
    fn per_sensor_phase_rotation_is_invisible((seed, m, n) in scenario_strategy(), phis in prop::collection::vec(-PI..PI, 6)) {
        let (sc, obs) = instance(seed, m, n);
        let (obs_r, sc_r) = rotate(&obs, &sc, &phis[..m]);
        prop_assert!(close_all(&all_statistics(&obs, &sc), &all_statistics(&obs_r, &sc_r)));
    }

    #[test]
    fn sensor_order_is_irrelevant((seed, m, n) in scenario_strategy(), shift in 0usize..6) {
        let (sc, obs) = instance(seed, m, n);
        let perm: Vec<usize> = (0..m).map(|i| (i + shift) % m).rev().collect();
        let (obs_p, sc_p) = permute(&obs, &sc, &perm);
        prop_assert!(close_all(&all_statistics(&obs, &sc), &all_statistics(&obs_p, &sc_p)));
    }

    #[test]
    fn noiseless_null_gives_zero_glrt((seed, m, n) in scenario_strategy()) {
        let (sc, _) = instance(seed, m, n);
        let obs = generate_observations_with(&sc, Hypothesis::H0, seed, GenerationOptions { noiseless: true }).unwrap();
        prop_assert_eq!(glrt_statistic(&obs, &sc, &GridSpec::new(31)).unwrap(), 0.0);
    }
}
