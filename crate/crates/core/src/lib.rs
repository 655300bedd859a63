//! Detection of small frequency deviations in multi-sensor complex sinusoids
//! with unknown complex amplitudes.
//!
//! The crate is organized around the measurement model
//!
//! ```text
//! H0: x_m[n] = A_m exp(j γ n)                 + w_m[n]
//! H1: x_m[n] = A_m exp(j γ (ω0 + Δ)/ω0 · n)   + w_m[n]
//! ```
//!
//! with `m = 1..M` sensors, `n = 0..N-1` samples and circularly symmetric
//! complex Gaussian noise of known variance `σ_m²`.
//!
//! * [`signal`]: scenario parameterization, steering vectors, synthetic data
//!   and the log-likelihood.
//! * [`detectors`]: the clairvoyant LRT, the grid-search GLRT, the locally
//!   most powerful unbiased test (LMPU, amplitudes known), its plug-in
//!   generalization GLMPU, and the one-sided GLMP.
//! * [`montecarlo`]: threshold calibration to a false-alarm level, detection
//!   probability estimation, Pd-vs-Δ / Pd-vs-SNR / ROC sweeps, and local
//!   unbiasedness checks.
//! * [`bench`]: the analytic flop model and wall-clock runtime sweeps.
//! * [`config`] and [`cli`]: the JSON-driven experiment runner behind the
//!   `freqdev` binary.
//!
//! ```
//! use freqdev::detectors::{glmpu_statistic, KappaPair};
//! use freqdev::signal::{generate_observations, Hypothesis, Scenario};
//!
//! let scenario = Scenario::pmu_default();
//! let obs = generate_observations(&scenario, Hypothesis::H0, 7).unwrap();
//! let t = glmpu_statistic(&obs, &scenario, KappaPair::ZERO).unwrap();
//! assert!(t.is_finite());
//! ```

pub mod bench;
pub mod cli;
pub mod config;
pub mod detectors;
mod error;
pub mod io;
pub mod montecarlo;
pub mod seed;
pub mod signal;

pub use error::{Error, Result};

pub use num_complex::Complex64;
