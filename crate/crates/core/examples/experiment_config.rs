//! Build, override and serialize the JSON experiment config used by the CLI.
//!
//! cargo run --example experiment_config > experiment.json
//! cargo run -- curve --config experiment.json --set trials=500

use freqdev::config::ExperimentConfig;

fn main() -> freqdev::Result<()> {
    let config = ExperimentConfig::default().with_overrides(&[
        "trials=2000",
        "alpha_list=[0.05]",
        "detector_ids=[\"GLRT\",\"GLMPU\",\"LMPU\"]",
        "scenario.N=4",
    ])?;
    config.validate()?;
    println!("{}", config.to_json()?);
    Ok(())
}
