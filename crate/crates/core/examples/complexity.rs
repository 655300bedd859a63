//! Analytic flop counts and measured runtime versus N.
//!
//! cargo run --release --example complexity

use freqdev::bench::{flop_estimate, runtime_sweep};
use freqdev::detectors::{DetectorId, GridSpec};
use freqdev::signal::Scenario;

fn main() -> freqdev::Result<()> {
    let base = Scenario::pmu_default();
    let grid = GridSpec::new(6000);
    println!("{:>6} {:>8} {:>14}", "det", "N", "flops");
    for id in DetectorId::ALL {
        for n in [48, 480] {
            println!(
                "{id:>6} {n:>8} {:>14}",
                flop_estimate(id, &base.with_samples(n), &grid)
            );
        }
    }
    let reports = runtime_sweep(
        &[DetectorId::Glmpu, DetectorId::Glrt],
        &[48, 480, 4800],
        &base,
        &grid,
        5,
        0,
    )?;
    for r in reports {
        println!(
            "{:>6} N={:<5} median {:>12} ns  p90 {:>12} ns  (batch {})",
            r.detector_id, r.samples, r.wall_ns_median, r.wall_ns_p90, r.batch
        );
    }
    Ok(())
}
