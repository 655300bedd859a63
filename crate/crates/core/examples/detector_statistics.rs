//! Evaluate every detector on one noisy observation set.
//!
//! cargo run --example detector_statistics

use std::f64::consts::PI;

use freqdev::detectors::{
    amplitude_ml_null, glmp_one_sided, glmpu_statistic, glrt_outcome, lmpu_statistic, local_scores,
    lrt_statistic, Detector, DetectorId, GridSpec, KappaPair,
};
use freqdev::signal::{generate_observations, Hypothesis, Scenario};

fn main() -> freqdev::Result<()> {
    let omega0 = 2.0 * PI * 60.0;
    let scenario = Scenario::pmu_default().with_delta(0.02 * omega0);
    let obs = generate_observations(&scenario, Hypothesis::H1, 1)?;
    let grid = GridSpec::new(2000);

    let scores = local_scores(&obs, &scenario, &scenario.amplitudes)?;
    println!(
        "scores at known amplitudes: ℓ' = {:.4}, ℓ'' = {:.4}",
        scores.first, scores.second
    );

    let a0 = amplitude_ml_null(&obs, &scenario)?;
    println!(
        "null amplitude estimate, sensor 1: {:.3} (true {:.3})",
        a0[0], scenario.amplitudes[0]
    );

    let glrt = glrt_outcome(&obs, &scenario, &grid)?;
    println!(
        "GLRT   = {:.4} (Δ̂ = {:.3} rad/s)",
        glrt.statistic, glrt.delta_hat
    );
    println!(
        "LRT    = {:.4}",
        lrt_statistic(&obs, &scenario, scenario.delta, &scenario.amplitudes)?
    );
    println!(
        "LMPU   = {:.4}",
        lmpu_statistic(&obs, &scenario, &scenario.amplitudes, KappaPair::ZERO)?
    );
    println!(
        "GLMPU  = {:.4}",
        glmpu_statistic(&obs, &scenario, KappaPair::ZERO)?
    );
    println!("GLMP1S = {:.4}", glmp_one_sided(&obs, &scenario)?);

    // The same through the uniform detector interface.
    for id in DetectorId::ALL {
        let d = Detector::new(id)
            .with_grid(grid)
            .with_design_delta(scenario.delta);
        println!("{id:>6}: {:.4}", d.statistic(&obs, &scenario)?);
    }
    Ok(())
}
