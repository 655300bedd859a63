//! Grid-search ML estimation of the frequency deviation and the matching
//! amplitude estimates.
//!
//! cargo run --example frequency_estimation

use std::f64::consts::PI;

use freqdev::detectors::{amplitude_ml_alt, ml_frequency_fit, GridSpec};
use freqdev::signal::{generate_observations, Hypothesis, Scenario};

fn main() -> freqdev::Result<()> {
    let omega0 = 2.0 * PI * 60.0;
    let base = Scenario::pmu_default().with_snr_db(10.0)?;
    // A grid restricted to ±ω0 gives much finer resolution for the same cost.
    let grid = GridSpec::with_bounds(4000, -omega0, omega0);
    for factor in [-0.3, 0.0, 0.1, 0.242] {
        let scenario = base.with_delta(factor * omega0);
        let obs = generate_observations(&scenario, Hypothesis::H1, 3)?;
        let fit = ml_frequency_fit(&obs, &scenario, &grid)?;
        let amps = amplitude_ml_alt(&obs, &scenario, fit.delta_hat)?;
        println!(
            "Δ = {:8.3}  Δ̂ = {:8.3}  objective = {:8.2}  Â_1 = {:.3}",
            scenario.delta, fit.delta_hat, fit.objective, amps[0]
        );
    }
    Ok(())
}
