//! Generate multi-sensor observations under both hypotheses and evaluate the
//! log-likelihood around the true deviation.
//!
//! cargo run --example signal_model

use std::f64::consts::PI;

use freqdev::signal::{generate_observations, loglik, steering_vector, Hypothesis, Scenario};

fn main() -> freqdev::Result<()> {
    let omega0 = 2.0 * PI * 60.0;
    let scenario = Scenario::pmu_default()
        .with_delta(0.05 * omega0)
        .with_snr_db(10.0)?;
    println!(
        "M = {}, N = {}, gamma = {:.4}, unambiguous |Δ| < {:.1} rad/s",
        scenario.sensors,
        scenario.samples,
        scenario.gamma,
        scenario.unambiguous_half_width()
    );

    let s = steering_vector(scenario.omega0, &scenario)?;
    println!("s(ω0)[0..3] = {:?}", &s.entries()[..3]);

    for hypothesis in [Hypothesis::H0, Hypothesis::H1] {
        let obs = generate_observations(&scenario, hypothesis, 7)?;
        let x = obs.sensor(0);
        println!(
            "{hypothesis:?}: sensor 1 first samples {:.3} {:.3} {:.3}",
            x[0], x[1], x[2]
        );
        for factor in [-1.0, 0.0, 0.5, 1.0, 1.5] {
            let delta = factor * scenario.delta;
            let l = loglik(&obs, delta, &scenario.amplitudes, &scenario)?;
            println!("    loglik(Δ = {delta:7.3}) = {l:10.3}");
        }
    }
    Ok(())
}
