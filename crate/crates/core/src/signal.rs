//! Multi-sensor single-tone measurement model.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::{Error, Result};

/// Which hypothesis generates the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Nominal frequency, `Δ` ignored.
    H0,
    /// Deviated frequency `ω0 + Δ`.
    H1,
}

/// Full parameterization of the signal model.
///
/// JSON field names are `M`, `N`, `gamma`, `omega0`, `amplitudes`,
/// `variances` and `delta`; complex values are `{"re": .., "im": ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Number of sensors.
    #[serde(rename = "M")]
    pub sensors: usize,
    /// Samples per sensor.
    #[serde(rename = "N")]
    pub samples: usize,
    /// Sampling angle in radians.
    pub gamma: f64,
    /// Nominal frequency in rad/s.
    pub omega0: f64,
    #[serde(with = "complex_vec")]
    pub amplitudes: Vec<Complex64>,
    pub variances: Vec<f64>,
    /// Frequency deviation in rad/s (irrelevant under H0).
    pub delta: f64,
}

impl Scenario {
    /// The six-sensor PMU setting: `ω0 = 2π·60`, 48 samples per nominal
    /// cycle, equal 0 dB SNR on every sensor and `Δ = 0`.
    pub fn pmu_default() -> Self {
        let amplitudes = vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, PI / 3.0),
            Complex64::from_polar(3f64.sqrt(), -5.0 * PI / 6.0),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, PI),
            Complex64::new(1.0, 0.0),
        ];
        let variances = amplitudes.iter().map(|a| a.norm_sqr()).collect();
        Scenario {
            sensors: 6,
            samples: 48,
            gamma: 2.0 * PI / 48.0,
            omega0: 2.0 * PI * 60.0,
            amplitudes,
            variances,
            delta: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.sensors == 0 {
            return bad("M must be at least 1".into());
        }
        if self.samples == 0 {
            return bad("N must be at least 1".into());
        }
        if self.amplitudes.len() != self.sensors {
            return bad(format!(
                "expected {} amplitudes, got {}",
                self.sensors,
                self.amplitudes.len()
            ));
        }
        if self.variances.len() != self.sensors {
            return bad(format!(
                "expected {} variances, got {}",
                self.sensors,
                self.variances.len()
            ));
        }
        if let Some(v) = self
            .variances
            .iter()
            .find(|v| !(v.is_finite() && **v > 0.0))
        {
            return bad(format!("noise variances must be finite and > 0, got {v}"));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return bad(format!("omega0 must be > 0, got {}", self.omega0));
        }
        if !self.gamma.is_finite() || self.gamma == 0.0 {
            return bad(format!(
                "gamma must be finite and nonzero, got {}",
                self.gamma
            ));
        }
        if self
            .amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return bad("amplitudes must be finite".into());
        }
        let half = self.unambiguous_half_width();
        if !(self.delta >= -half && self.delta < half) {
            return bad(format!(
                "delta {} outside the unambiguous range [{}, {})",
                self.delta, -half, half
            ));
        }
        Ok(())
    }

    /// `ω0 π / |γ|`: deviations are identifiable in `[-w, w)`.
    pub fn unambiguous_half_width(&self) -> f64 {
        self.omega0 * PI / self.gamma.abs()
    }

    /// Copy with `Δ` replaced.
    pub fn with_delta(&self, delta: f64) -> Self {
        Scenario {
            delta,
            ..self.clone()
        }
    }

    /// Copy with every sensor's variance set for the given per-sensor SNR.
    pub fn with_snr_db(&self, snr_db: f64) -> Result<Self> {
        let variances = self
            .amplitudes
            .iter()
            .map(|a| snr_to_variance(*a, snr_db))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            variances,
            ..self.clone()
        })
    }

    /// Copy with `N` replaced.
    pub fn with_samples(&self, samples: usize) -> Self {
        Scenario {
            samples,
            ..self.clone()
        }
    }

    /// Phase increment per sample of a tone at `omega`.
    pub(crate) fn phase_step(&self, omega: f64) -> f64 {
        self.gamma * omega / self.omega0
    }
}

/// `s(ω) = [1, e^{jγω/ω0}, ..., e^{jγω/ω0 (N-1)}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector(Vec<Complex64>);

impl SteeringVector {
    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s^H x`.
    pub fn project(&self, x: &[Complex64]) -> Complex64 {
        self.0.iter().zip(x).map(|(s, x)| s.conj() * x).sum()
    }
}

/// Steering vector of a tone at `omega` rad/s for the scenario's `γ`, `ω0`, `N`.
pub fn steering_vector(omega: f64, scenario: &Scenario) -> Result<SteeringVector> {
    scenario.validate()?;
    Ok(steering_unchecked(omega, scenario))
}

pub(crate) fn steering_unchecked(omega: f64, scenario: &Scenario) -> SteeringVector {
    let step = scenario.phase_step(omega);
    SteeringVector(
        (0..scenario.samples)
            .map(|n| Complex64::cis(step * n as f64))
            .collect(),
    )
}

/// Diagonal of the sample-index matrix: `[0, 1, ..., N-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RampDiagonal(Vec<u64>);

impl RampDiagonal {
    pub fn new(samples: usize) -> Self {
        RampDiagonal((0..samples as u64).collect())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `Σ n^power` over the ramp.
    pub fn power_sum(&self, power: u32) -> f64 {
        self.0.iter().map(|&n| (n as f64).powi(power as i32)).sum()
    }
}

/// M×N complex measurements, sensor-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    sensors: usize,
    samples: usize,
    data: Vec<Complex64>,
}

impl ObservationSet {
    pub fn new(sensors: usize, samples: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != sensors * samples {
            return Err(Error::DimensionMismatch {
                what: "observation data",
                expected: sensors * samples,
                actual: data.len(),
            });
        }
        Ok(ObservationSet {
            sensors,
            samples,
            data,
        })
    }

    pub fn zeros(sensors: usize, samples: usize) -> Self {
        ObservationSet {
            sensors,
            samples,
            data: vec![Complex64::new(0.0, 0.0); sensors * samples],
        }
    }

    /// Builds from one row per sensor.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let sensors = rows.len();
        let samples = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(sensors * samples);
        for row in rows {
            if row.len() != samples {
                return Err(Error::DimensionMismatch {
                    what: "observation row",
                    expected: samples,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ObservationSet {
            sensors,
            samples,
            data,
        })
    }

    pub fn sensors(&self) -> usize {
        self.sensors
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// `x_m` for zero-based sensor index `m`.
    pub fn sensor(&self, m: usize) -> &[Complex64] {
        &self.data[m * self.samples..(m + 1) * self.samples]
    }

    pub fn sensor_mut(&mut self, m: usize) -> &mut [Complex64] {
        &mut self.data[m * self.samples..(m + 1) * self.samples]
    }

    pub fn rows(&self) -> impl DoubleEndedIterator<Item = &[Complex64]> + ExactSizeIterator {
        self.data
            .chunks_exact(self.samples.max(1))
            .take(self.sensors)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Checks that the dimensions agree with `scenario`.
    pub fn check_matches(&self, scenario: &Scenario) -> Result<()> {
        if self.sensors != scenario.sensors {
            return Err(Error::DimensionMismatch {
                what: "sensor count",
                expected: scenario.sensors,
                actual: self.sensors,
            });
        }
        if self.samples != scenario.samples {
            return Err(Error::DimensionMismatch {
                what: "samples per sensor",
                expected: scenario.samples,
                actual: self.samples,
            });
        }
        Ok(())
    }
}

/// Options for [`generate_observations_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerationOptions {
    /// Skip the noise term entirely.
    pub noiseless: bool,
}

/// Draws one observation set under `hypothesis`.
///
/// Sensor `m` draws its noise from its own ChaCha8 stream seeded with
/// `seed::derive(seed, m)`, so the output does not depend on the order in
/// which sensors are filled. Each sample takes two standard normals (real
/// part first) from `rand_distr::StandardNormal` (ziggurat method) scaled by
/// `sqrt(σ_m²/2)`. The hypothesis only changes the tone frequency, never the
/// random stream, so `H1` with `Δ = 0` reproduces `H0` exactly.
pub fn generate_observations(
    scenario: &Scenario,
    hypothesis: Hypothesis,
    seed: u64,
) -> Result<ObservationSet> {
    generate_observations_with(scenario, hypothesis, seed, GenerationOptions::default())
}

pub fn generate_observations_with(
    scenario: &Scenario,
    hypothesis: Hypothesis,
    seed: u64,
    options: GenerationOptions,
) -> Result<ObservationSet> {
    scenario.validate()?;
    Ok(generate_unchecked(scenario, hypothesis, seed, options))
}

pub(crate) fn generate_unchecked(
    scenario: &Scenario,
    hypothesis: Hypothesis,
    seed: u64,
    options: GenerationOptions,
) -> ObservationSet {
    let omega = match hypothesis {
        Hypothesis::H0 => scenario.omega0,
        Hypothesis::H1 => scenario.omega0 + scenario.delta,
    };
    let tone = steering_unchecked(omega, scenario);
    let mut obs = ObservationSet::zeros(scenario.sensors, scenario.samples);
    for m in 0..scenario.sensors {
        let amplitude = scenario.amplitudes[m];
        let row = obs.sensor_mut(m);
        for (x, s) in row.iter_mut().zip(tone.entries()) {
            *x = amplitude * s;
        }
        if !options.noiseless {
            let scale = (scenario.variances[m] / 2.0).sqrt();
            let mut rng = seed::rng(seed::derive(seed, m as u64));
            for x in row.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *x += Complex64::new(re, im) * scale;
            }
        }
    }
    obs
}

/// Log-likelihood up to additive constants:
/// `-Σ_m ‖x_m - A_m s(ω0 + Δ)‖² / σ_m²`.
pub fn loglik(
    obs: &ObservationSet,
    delta: f64,
    amplitudes: &[Complex64],
    scenario: &Scenario,
) -> Result<f64> {
    obs.check_matches(scenario)?;
    check_amplitudes(amplitudes, scenario)?;
    let tone = steering_unchecked(scenario.omega0 + delta, scenario);
    let mut total = 0.0;
    for (m, x) in obs.rows().enumerate() {
        let residual: f64 = x
            .iter()
            .zip(tone.entries())
            .map(|(x, s)| (x - amplitudes[m] * s).norm_sqr())
            .sum();
        total -= residual / scenario.variances[m];
    }
    Ok(total)
}

pub(crate) fn check_amplitudes(amplitudes: &[Complex64], scenario: &Scenario) -> Result<()> {
    if amplitudes.len() != scenario.sensors {
        return Err(Error::DimensionMismatch {
            what: "amplitude vector",
            expected: scenario.sensors,
            actual: amplitudes.len(),
        });
    }
    Ok(())
}

/// Noise variance giving `snr_db` for a sensor of amplitude `amplitude`,
/// with `SNR = |A|²/σ²`.
pub fn snr_to_variance(amplitude: Complex64, snr_db: f64) -> Result<f64> {
    let power = amplitude.norm_sqr();
    if power == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    Ok(power / 10f64.powf(snr_db / 10.0))
}

pub(crate) mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Repr> = v.iter().map(|c| Repr { re: c.re, im: c.im }).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let reprs = Vec::<Repr>::deserialize(d)?;
        Ok(reprs
            .into_iter()
            .map(|r| Complex64::new(r.re, r.im))
            .collect())
    }
}
