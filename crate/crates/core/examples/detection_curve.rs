//! Probability of detection versus the frequency deviation for GLRT and
//! GLMPU (unknown amplitudes), as CSV on stdout.
//!
//! cargo run --example detection_curve [trials]

use std::f64::consts::PI;

use freqdev::detectors::{Detector, DetectorId, GridSpec};
use freqdev::montecarlo::{detection_curve, Axis, Sweep};
use freqdev::signal::Scenario;

fn main() -> freqdev::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2000);
    let omega0 = 2.0 * PI * 60.0;
    let scenario = Scenario::pmu_default().with_samples(4);
    let sweep = Sweep {
        axis: Axis::Delta,
        values: (-8..=8).map(|k| k as f64 * 0.25 * omega0).collect(),
    };
    println!("detector,alpha,delta_over_omega0,pd,stderr");
    for id in [DetectorId::Glrt, DetectorId::Glmpu] {
        let detector = Detector::new(id).with_grid(GridSpec::new(1000));
        for alpha in [0.01, 0.1] {
            let curve = detection_curve(&detector, &scenario, &sweep, alpha, trials, 42)?;
            for p in &curve.points {
                println!(
                    "{id},{alpha},{:.2},{:.4},{:.4}",
                    p.abscissa / omega0,
                    p.pd,
                    p.pd_stderr
                );
            }
        }
    }
    Ok(())
}
