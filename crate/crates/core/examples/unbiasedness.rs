//! Local unbiasedness check and the κ2 search.
//!
//! cargo run --example unbiasedness [trials]

use std::f64::consts::PI;

use freqdev::detectors::{Detector, DetectorId};
use freqdev::montecarlo::{calibrate_threshold, search_kappa2, verify_unbiasedness, Kappa2Scan};
use freqdev::signal::Scenario;

fn main() -> freqdev::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4000);
    let radius = 0.05 * 2.0 * PI * 60.0;
    let scenario = Scenario::pmu_default();

    for id in [DetectorId::Glmpu, DetectorId::Glmp1s] {
        let cal = calibrate_threshold(&Detector::new(id), &scenario, 0.1, trials, 1)?;
        let report = verify_unbiasedness(&cal, &scenario, radius, 6, trials, 2, None)?;
        println!("{id}: passed = {}", report.passed);
        for (d, pd) in report.grid.iter().zip(&report.pd_values) {
            println!("    Δ = {d:+7.3}  Pd = {pd:.4}");
        }
    }

    let search = search_kappa2(
        DetectorId::Glmpu,
        &scenario,
        0.1,
        radius,
        6,
        trials,
        3,
        &Kappa2Scan::default(),
    )?;
    for c in &search.candidates {
        println!(
            "κ2 = {:8.4}  κ1 = {:+.5}  min Pd = {:.4}",
            c.kappa.kappa2, c.kappa.kappa1, c.min_pd
        );
    }
    println!("best: {:?}", search.best);
    Ok(())
}
