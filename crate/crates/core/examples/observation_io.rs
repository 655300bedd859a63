//! Write observations to CSV, read them back and run a calibrated decision,
//! the same path the `detect` subcommand takes.
//!
//! cargo run --example observation_io

use std::f64::consts::PI;

use freqdev::detectors::{Detector, DetectorId};
use freqdev::io::{read_observations, write_observations};
use freqdev::montecarlo::calibrate_threshold;
use freqdev::signal::{generate_observations, Hypothesis, Scenario};

fn main() -> freqdev::Result<()> {
    let scenario = Scenario::pmu_default().with_delta(0.3 * 2.0 * PI * 60.0);
    let obs = generate_observations(&scenario, Hypothesis::H1, 11)?;
    let mut buf = Vec::new();
    write_observations(&obs, &mut buf)?;
    let text = String::from_utf8_lossy(&buf);
    for line in text.lines().take(3) {
        println!("{line}");
    }
    let back = read_observations(buf.as_slice())?;
    assert_eq!(back, obs);

    let cal = calibrate_threshold(&Detector::new(DetectorId::Glmpu), &scenario, 0.05, 2000, 5)?;
    let stat = cal.statistic(&back, &scenario)?;
    println!(
        "GLMPU - κ1 = {stat:.4} -> {}",
        if stat > 0.0 { "reject H0" } else { "accept H0" }
    );
    Ok(())
}
