//! ROC curves of GLRT and GLMPU, and the single-sample case where both
//! statistics are constant.
//!
//! cargo run --example roc_curve [trials]

use std::f64::consts::PI;

use freqdev::detectors::{Detector, DetectorId, GridSpec};
use freqdev::montecarlo::{roc_curve, simulate_statistic};
use freqdev::signal::{Hypothesis, Scenario};

fn main() -> freqdev::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2000);
    let omega0 = 2.0 * PI * 60.0;
    let scenario = Scenario::pmu_default()
        .with_samples(4)
        .with_delta(0.5 * omega0);
    for id in [DetectorId::Glrt, DetectorId::Glmpu] {
        let detector = Detector::new(id).with_grid(GridSpec::new(1000));
        let roc = roc_curve(&detector, &scenario, trials, 3)?;
        print!("{id}:");
        for pfa in [0.01, 0.05, 0.1, 0.2, 0.5] {
            // Last ROC point at or below the target false-alarm rate.
            let p = roc.points.iter().rev().find(|p| p.abscissa <= pfa).unwrap();
            print!("  Pd({:.3}) = {:.3}", p.abscissa, p.pd);
        }
        println!();
    }

    // With one sample per sensor the phase ramp is invisible: GLMPU is -κ1
    // and GLRT is 0 on every draw, so neither can detect anything.
    let single = Scenario::pmu_default()
        .with_samples(1)
        .with_delta(0.242 * omega0)
        .with_snr_db(10.0)?;
    for id in [DetectorId::Glrt, DetectorId::Glmpu] {
        let d = Detector::new(id).with_grid(GridSpec::new(1000));
        let v = simulate_statistic(&d, &single, Hypothesis::H1, 100, 4)?;
        let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("N = 1, {id}: statistic spread over 100 draws = {spread:e}");
    }
    Ok(())
}
