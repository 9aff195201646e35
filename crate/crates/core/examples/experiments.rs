//! Relative error against the horizon, a mean shift, or a biased plan.
//!
//! `cargo run --example experiments -- 2` runs the shift experiment.

use fpa_bidding::model::ExperimentKind;
use fpa_bidding::sim::{experiment, ExperimentConfig};

fn main() -> fpa_bidding::Result<()> {
    let kind: u8 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let kind = ExperimentKind::try_from(kind)?;
    let mut config = ExperimentConfig::new(kind, 50, 7);
    if kind == ExperimentKind::Horizon {
        config.horizons = vec![100, 300, 1000];
    }
    let report = experiment(&config)?;
    for row in &report.rows {
        println!(
            "{:<14} knob {:>6} T {:>5}: V^LR {:>9.3}  mean {:>9.3}  rel.err {:.4} +/- {:.4}",
            row.policy.label(),
            row.knob,
            row.horizon,
            row.benchmark,
            row.mean_reward,
            row.relative_error,
            row.relative_error_stderr
        );
    }
    Ok(())
}
