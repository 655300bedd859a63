//! CSV formats.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that files diff cleanly across runs and round-trip exactly.
//!
//! | file               | header                                                              |
//! |--------------------|---------------------------------------------------------------------|
//! | observations       | `sensor,n,re,im` (sensor 1-based, sample index 0-based)             |
//! | detection curve    | `abscissa,pd,stderr`                                                |
//! | cost reports       | `detector,N,M,n_alpha,flops,wall_ns_median,wall_ns_p90,repetitions` |

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::Deserialize;

use crate::bench::CostReport;
use crate::montecarlo::DetectionCurve;
use crate::signal::ObservationSet;
use crate::{Error, Result};

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_observations<W: Write>(obs: &ObservationSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sensor", "n", "re", "im"])?;
    for (m, row) in obs.rows().enumerate() {
        for (n, x) in row.iter().enumerate() {
            w.write_record([
                (m + 1).to_string(),
                n.to_string(),
                fmt_float(x.re),
                fmt_float(x.im),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct ObservationRow {
    sensor: usize,
    n: usize,
    re: f64,
    im: f64,
}

/// Reads an observation CSV. Rows may come in any order but every
/// `(sensor, n)` cell must appear exactly once.
pub fn read_observations<R: Read>(input: R) -> Result<ObservationSet> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["sensor", "n", "re", "im"] {
        return Err(Error::MalformedObservations(format!(
            "expected header sensor,n,re,im, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<ObservationRow>, _>>()?;
    if rows.is_empty() {
        return Err(Error::MalformedObservations("no data rows".into()));
    }
    if rows.iter().any(|r| r.sensor == 0) {
        return Err(Error::MalformedObservations(
            "sensor indices start at 1".into(),
        ));
    }
    let sensors = rows.iter().map(|r| r.sensor).max().unwrap_or(0);
    let samples = rows.iter().map(|r| r.n).max().unwrap_or(0) + 1;
    if rows.len() != sensors * samples {
        return Err(Error::MalformedObservations(format!(
            "{} rows do not fill a {sensors}x{samples} grid",
            rows.len()
        )));
    }
    let mut data = vec![None; sensors * samples];
    for r in rows {
        let cell = &mut data[(r.sensor - 1) * samples + r.n];
        if cell.is_some() {
            return Err(Error::MalformedObservations(format!(
                "duplicate cell sensor={} n={}",
                r.sensor, r.n
            )));
        }
        *cell = Some(Complex64::new(r.re, r.im));
    }
    let data = data
        .into_iter()
        .map(|c| c.expect("all cells filled"))
        .collect();
    ObservationSet::new(sensors, samples, data)
}

pub fn write_curve<W: Write>(curve: &DetectionCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["abscissa", "pd", "stderr"])?;
    for p in &curve.points {
        w.write_record([
            fmt_float(p.abscissa),
            fmt_float(p.pd),
            fmt_float(p.pd_stderr),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cost_reports<W: Write>(reports: &[CostReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "detector",
        "N",
        "M",
        "n_alpha",
        "flops",
        "wall_ns_median",
        "wall_ns_p90",
        "repetitions",
    ])?;
    for r in reports {
        w.write_record([
            r.detector_id.to_string(),
            r.samples.to_string(),
            r.sensors.to_string(),
            r.n_alpha.to_string(),
            r.flops_model.to_string(),
            r.wall_ns_median.to_string(),
            r.wall_ns_p90.to_string(),
            r.repetitions.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
