//! Probability of detection versus SNR at a fixed deviation. The threshold is
//! recalibrated at every SNR.
//!
//! cargo run --example snr_curve [trials]

use std::f64::consts::PI;

use freqdev::detectors::{Detector, DetectorId, GridSpec};
use freqdev::montecarlo::{detection_curve, Axis, Sweep};
use freqdev::signal::Scenario;

fn main() -> freqdev::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2000);
    let scenario = Scenario::pmu_default().with_delta(0.242 * 2.0 * PI * 60.0);
    let sweep = Sweep {
        axis: Axis::SnrDb,
        values: vec![-25.0, -20.0, -15.0, -10.0, -5.0],
    };
    println!("detector,snr_db,pd,stderr");
    for id in [DetectorId::Lmpu, DetectorId::Glmpu, DetectorId::Glrt] {
        let detector = Detector::new(id).with_grid(GridSpec::new(1000));
        let curve = detection_curve(&detector, &scenario, &sweep, 0.05, trials, 7)?;
        for p in &curve.points {
            println!("{id},{},{:.4},{:.4}", p.abscissa, p.pd, p.pd_stderr);
        }
    }
    Ok(())
}
