#![allow(dead_code)]

use std::f64::consts::PI;

use freqdev::signal::{generate_observations, Hypothesis, ObservationSet, Scenario};
use freqdev::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random but valid scenario together with an observation drawn from it.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_sensors: usize,
    max_samples: usize,
) -> (Scenario, ObservationSet) {
    let sensors = rng.random_range(1..=max_sensors);
    let samples = rng.random_range(2..=max_samples);
    let omega0 = rng.random_range(10.0..1000.0);
    let gamma = 2.0 * PI / rng.random_range(4.0..64.0);
    let amplitudes: Vec<Complex64> = (0..sensors)
        .map(|_| Complex64::from_polar(rng.random_range(0.2..3.0), rng.random_range(-PI..PI)))
        .collect();
    let variances = (0..sensors).map(|_| rng.random_range(0.1..4.0)).collect();
    let half = omega0 * PI / gamma;
    let scenario = Scenario {
        sensors,
        samples,
        gamma,
        omega0,
        amplitudes,
        variances,
        delta: rng.random_range(-0.05..0.05) * half,
    };
    let obs = generate_observations(&scenario, Hypothesis::H1, rng.random()).unwrap();
    (scenario, obs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Runs the CLI in-process; `args` exclude the program name.
pub fn cli(args: &[&str]) -> i32 {
    let mut full = vec!["freqdev"];
    full.extend_from_slice(args);
    freqdev::cli::main_with_args(full)
}

/// Small, fast overrides on top of the default experiment.
pub const QUICK: &[&str] = &[
    "--set",
    "trials=200",
    "--set",
    "grid.n_alpha=128",
    "--set",
    "sweep.values=[-50.0,0.0,50.0]",
];

/// Every CSV in `dir` as (file name, bytes), sorted by name.
pub fn csv_files(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}
