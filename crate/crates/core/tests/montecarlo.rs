use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use freqdev::detectors::{Detector, DetectorId, GridSpec};
use freqdev::montecarlo::{
    binomial_stderr, calibrate_statistic, calibrate_threshold, detection_curve, estimate_pd,
    estimate_pd_with, exceedance_rate, roc_curve, roc_curve_with, search_kappa2,
    simulate_statistic, verify_unbiasedness, verify_unbiasedness_with, Axis, DetectionCurve,
    Kappa2Scan, Sweep,
};
use freqdev::seed::{point_seed, STREAM_CALIBRATION};
use freqdev::signal::{Hypothesis, ObservationSet, Scenario};
use freqdev::Error;

const OMEGA0: f64 = 2.0 * PI * 60.0;

fn pmu() -> Scenario {
    Scenario::pmu_default()
}

fn glmpu() -> Detector {
    Detector::new(DetectorId::Glmpu)
}

fn se(alpha: f64, trials: usize) -> f64 {
    binomial_stderr(alpha, trials)
}

#[test]
fn counter_stub_calibrates_on_third_order_statistic() {
    let counter = AtomicUsize::new(0);
    let stub =
        |_: &ObservationSet, _: &Scenario| Ok((counter.fetch_add(1, Ordering::SeqCst) + 1) as f64);
    let cal = calibrate_statistic(&stub, &pmu(), 0.25, 4, 0).unwrap();
    assert_eq!(cal.threshold, 3.0);
    assert_eq!(cal.empirical_pfa, 0.25);
}

#[test]
fn constant_stub_never_rejects() {
    let stub = |_: &ObservationSet, _: &Scenario| Ok(1.5);
    let cal = calibrate_statistic(&stub, &pmu(), 0.1, 100, 0).unwrap();
    assert_eq!(cal.threshold, 1.5);
    assert_eq!(cal.empirical_pfa, 0.0);
}

#[test]
fn calibration_errors() {
    let d = glmpu();
    assert!(matches!(
        calibrate_threshold(&d, &pmu(), 0.0, 100, 0),
        Err(Error::InvalidAlpha(_))
    ));
    assert!(matches!(
        calibrate_threshold(&d, &pmu(), 1.0, 100, 0),
        Err(Error::InvalidAlpha(_))
    ));
    assert!(matches!(
        calibrate_threshold(&d, &pmu(), 0.01, 50, 0),
        Err(Error::TooFewTrials { needed: 100, .. })
    ));
}

#[test]
fn glmpu_size_on_fresh_seed() {
    let trials = 10_000;
    let cal = calibrate_threshold(&glmpu(), &pmu(), 0.05, trials, 1).unwrap();
    assert_eq!(cal.kappa.kappa1, cal.threshold);
    assert_eq!(cal.kappa.kappa2, 0.0);
    let null = simulate_statistic(&cal.detector(), &pmu(), Hypothesis::H0, trials, 2).unwrap();
    let pfa = exceedance_rate(&null, cal.threshold);
    assert!((pfa - 0.05).abs() <= 3.0 * se(0.05, trials), "pfa {pfa}");
}

#[test]
fn pd_at_zero_with_calibration_seed_reproduces_calibration() {
    for id in [DetectorId::Glmpu, DetectorId::Glrt, DetectorId::Lmpu] {
        let d = Detector::new(id).with_grid(GridSpec::new(200));
        let cal = calibrate_threshold(&d, &pmu(), 0.1, 500, 9).unwrap();
        let est = estimate_pd(&cal, &pmu(), 500, 9).unwrap();
        assert_eq!(est.pd, cal.empirical_pfa, "{id}");
    }
}

#[test]
fn always_reject_and_always_accept_stubs() {
    let one = |_: &ObservationSet, _: &Scenario| Ok(1.0);
    let sc = pmu().with_delta(0.1 * OMEGA0);
    assert_eq!(estimate_pd_with(&one, 0.0, &sc, 200, 0).unwrap().pd, 1.0);
    assert_eq!(estimate_pd_with(&one, 1.0, &sc, 200, 0).unwrap().pd, 0.0);
}

#[test]
fn calibration_mismatch_is_reported() {
    let cal = calibrate_threshold(&glmpu(), &pmu(), 0.1, 100, 0).unwrap();
    let mut other = pmu().with_samples(24);
    assert!(matches!(
        estimate_pd(&cal, &other, 10, 0),
        Err(Error::CalibrationMismatch(_))
    ));
    other = pmu();
    other.variances[0] = 2.0;
    assert!(matches!(
        estimate_pd(&cal, &other, 10, 0),
        Err(Error::CalibrationMismatch(_))
    ));
    // Amplitudes and Δ may differ.
    other = pmu().with_delta(1.0);
    other.amplitudes[0] *= 2.0;
    assert!(estimate_pd(&cal, &other, 10, 0).is_ok());
}

fn delta_sweep(multiples: &[f64]) -> Sweep {
    Sweep {
        axis: Axis::Delta,
        values: multiples.iter().map(|k| k * OMEGA0).collect(),
    }
}

#[test]
fn curve_point_at_zero_has_nominal_size() {
    let trials = 10_000;
    let curve = detection_curve(
        &glmpu(),
        &pmu(),
        &delta_sweep(&[-0.1, 0.0, 0.1]),
        0.05,
        trials,
        3,
    )
    .unwrap();
    let p0 = curve.pd_at(0.0).unwrap();
    assert!((p0.pd - 0.05).abs() <= 3.0 * se(0.05, trials), "{}", p0.pd);
    assert_eq!(curve.alpha, Some(0.05));
    assert!(curve
        .points
        .windows(2)
        .all(|w| w[0].abscissa < w[1].abscissa));
}

fn pair_tol(a: f64, b: f64, trials: usize) -> f64 {
    3.0 * (binomial_stderr(a, trials).powi(2) + binomial_stderr(b, trials).powi(2)).sqrt()
}

#[test]
fn lrt_dominates_glrt() {
    // Short windows keep the GLRT search cheap; Δ = 0 is excluded because the
    // clairvoyant LRT designed for Δ = 0 is identically zero.
    let trials = 10_000;
    let sc = pmu().with_samples(8);
    let grid = GridSpec::new(256);
    let sweep = delta_sweep(&[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]);
    let lrt = detection_curve(
        &Detector::new(DetectorId::Lrt),
        &sc,
        &sweep,
        0.05,
        trials,
        4,
    )
    .unwrap();
    let glrt = detection_curve(
        &Detector::new(DetectorId::Glrt).with_grid(grid),
        &sc,
        &sweep,
        0.05,
        trials,
        4,
    )
    .unwrap();
    for (l, g) in lrt.points.iter().zip(&glrt.points) {
        assert!(
            l.pd >= g.pd - pair_tol(l.pd, g.pd, trials),
            "Δ={}: LRT {} < GLRT {}",
            l.abscissa,
            l.pd,
            g.pd
        );
    }
}

#[test]
fn glmpu_power_is_symmetric() {
    let trials = 10_000;
    let curve = detection_curve(
        &glmpu(),
        &pmu(),
        &delta_sweep(&[-0.2, -0.1, -0.05, -0.02, 0.02, 0.05, 0.1, 0.2]),
        0.05,
        trials,
        5,
    )
    .unwrap();
    let n = curve.points.len();
    for k in 0..n / 2 {
        let (a, b) = (curve.points[k], curve.points[n - 1 - k]);
        assert_eq!(a.abscissa, -b.abscissa);
        assert!(
            (a.pd - b.pd).abs() <= pair_tol(a.pd, b.pd, trials),
            "{a:?} vs {b:?}"
        );
    }
}

#[test]
fn glmpu_power_grows_with_deviation() {
    let trials = 10_000;
    let multiples: Vec<f64> = (0..=6).map(|k| k as f64 * 0.05).collect();
    let curve =
        detection_curve(&glmpu(), &pmu(), &delta_sweep(&multiples), 0.05, trials, 6).unwrap();
    for w in curve.points.windows(2) {
        assert!(
            w[1].pd >= w[0].pd - pair_tol(w[0].pd, w[1].pd, trials),
            "{:?} -> {:?}",
            w[0],
            w[1]
        );
    }
    assert!(curve.points.last().unwrap().pd > 0.5);
}

#[test]
fn snr_curve_recalibrates_per_point() {
    let trials = 2_000;
    let sweep = Sweep {
        axis: Axis::SnrDb,
        values: vec![-5.0, 0.0, 5.0],
    };
    let curve = detection_curve(
        &glmpu(),
        &pmu().with_delta(0.242 * OMEGA0),
        &sweep,
        0.05,
        trials,
        7,
    )
    .unwrap();
    assert_eq!(curve.axis, Axis::SnrDb);
    for w in curve.points.windows(2) {
        assert!(w[1].pd >= w[0].pd - pair_tol(w[0].pd, w[1].pd, trials));
    }
}

fn check_roc_shape(roc: &DetectionCurve) {
    let first = roc.points.first().unwrap();
    let last = roc.points.last().unwrap();
    assert_eq!((first.abscissa, first.pd), (0.0, 0.0));
    assert_eq!((last.abscissa, last.pd), (1.0, 1.0));
    for w in roc.points.windows(2) {
        assert!(w[0].abscissa < w[1].abscissa);
        assert!(w[0].pd <= w[1].pd);
    }
}

#[test]
fn roc_endpoints_and_monotonicity() {
    let sc = pmu().with_delta(0.1 * OMEGA0);
    for id in [DetectorId::Glmpu, DetectorId::Glrt, DetectorId::Lrt] {
        let d = Detector::new(id).with_grid(GridSpec::new(128));
        let roc = roc_curve(&d, &sc, 1_000, 8).unwrap();
        assert_eq!(roc.axis, Axis::Threshold);
        check_roc_shape(&roc);
    }
    assert!(roc_curve(&glmpu(), &pmu(), 100, 0).is_err());
}

#[test]
fn coin_flip_roc_is_diagonal() {
    // x[0][0] = A_0 + w under both hypotheses (the first sample has zero phase),
    // so this statistic is uninformative.
    let trials = 10_000;
    let coin =
        |obs: &ObservationSet, sc: &Scenario| Ok((obs.sensor(0)[0] - sc.amplitudes[0]).re.signum());
    let roc = roc_curve_with(&coin, &pmu().with_delta(0.3 * OMEGA0), trials, 10).unwrap();
    check_roc_shape(&roc);
    assert_eq!(roc.points.len(), 3);
    for p in &roc.points {
        assert!(
            (p.pd - p.abscissa).abs() <= pair_tol(p.pd, p.abscissa, trials),
            "{p:?}"
        );
    }
}

#[test]
fn lrt_roc_dominates_glrt_roc() {
    let trials = 5_000;
    let sc = pmu().with_samples(8).with_delta(1.0 * OMEGA0);
    let lrt = roc_curve(&Detector::new(DetectorId::Lrt), &sc, trials, 11).unwrap();
    let glrt = roc_curve(
        &Detector::new(DetectorId::Glrt).with_grid(GridSpec::new(256)),
        &sc,
        trials,
        11,
    )
    .unwrap();
    // Both curves share the null draws, so their Pfa points coincide where
    // neither statistic has ties.
    let lrt_at = |pfa: f64| lrt.points.iter().find(|p| p.abscissa == pfa).map(|p| p.pd);
    let mut compared = 0;
    for g in &glrt.points {
        if let Some(l) = lrt_at(g.abscissa) {
            assert!(
                l >= g.pd - pair_tol(l, g.pd, trials),
                "Pfa {}: LRT {l} < GLRT {}",
                g.abscissa,
                g.pd
            );
            compared += 1;
        }
    }
    assert!(compared > trials / 2);
}

#[test]
fn glmpu_is_locally_unbiased() {
    let trials = 10_000;
    let cal = calibrate_threshold(&glmpu(), &pmu(), 0.1, trials, 12).unwrap();
    let report = verify_unbiasedness(&cal, &pmu(), 0.05 * OMEGA0, 6, trials, 13, None).unwrap();
    assert!(report.passed, "{report:?}");
    assert!(report
        .grid
        .iter()
        .all(|d| *d != 0.0 && d.abs() < 0.05 * OMEGA0));
    assert!((report.tolerance - 3.0 * se(0.1, trials)).abs() < 1e-15);
}

#[test]
fn one_sided_score_test_is_biased() {
    let trials = 5_000;
    let d = Detector::new(DetectorId::Glmp1s);
    let cal = calibrate_threshold(&d, &pmu(), 0.1, trials, 14).unwrap();
    let report = verify_unbiasedness(&cal, &pmu(), 0.2 * OMEGA0, 4, trials, 15, None).unwrap();
    assert!(!report.passed, "{report:?}");
}

#[test]
fn always_accept_stub_fails_unbiasedness() {
    let zero = |_: &ObservationSet, _: &Scenario| Ok(0.0);
    let report =
        verify_unbiasedness_with(&zero, 0.0, 0.1, &pmu(), 0.05 * OMEGA0, 4, 500, 0, None).unwrap();
    assert!(!report.passed);
    assert!(report.pd_values.iter().all(|&p| p == 0.0));
}

#[test]
fn kappa2_scan_of_zero_reproduces_calibration() {
    let trials = 2_000;
    let master = 21;
    let search = search_kappa2(
        DetectorId::Glmpu,
        &pmu(),
        0.1,
        0.05 * OMEGA0,
        4,
        trials,
        master,
        &Kappa2Scan::Absolute(vec![0.0]),
    )
    .unwrap();
    let cal = calibrate_threshold(
        &glmpu(),
        &pmu(),
        0.1,
        trials,
        point_seed(master, STREAM_CALIBRATION, 0),
    )
    .unwrap();
    assert_eq!(search.best.kappa2, 0.0);
    assert_eq!(search.best.kappa1, cal.kappa.kappa1);
    assert_eq!(search.candidates.len(), 1);
}

#[test]
fn kappa2_search_prefers_no_linear_term_in_symmetric_setting() {
    for id in [DetectorId::Glmpu, DetectorId::Lmpu] {
        let search = search_kappa2(
            id,
            &pmu(),
            0.1,
            0.05 * OMEGA0,
            6,
            10_000,
            22,
            &Kappa2Scan::default(),
        )
        .unwrap();
        assert_eq!(search.best.kappa2, 0.0, "{id}: {search:?}");
        assert!(search.candidates.iter().all(|c| c.kappa.kappa2 >= 0.0));
    }
    assert!(search_kappa2(
        DetectorId::Glrt,
        &pmu(),
        0.1,
        1.0,
        4,
        100,
        0,
        &Kappa2Scan::default()
    )
    .is_err());
}

#[test]
fn curves_do_not_depend_on_thread_count() {
    let d = Detector::new(DetectorId::Glrt).with_grid(GridSpec::new(64));
    let sc = pmu().with_samples(12);
    let sweep = delta_sweep(&[-0.5, 0.0, 0.5]);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| detection_curve(&d, &sc, &sweep, 0.1, 1_000, 99).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}
