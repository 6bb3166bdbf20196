//! Expected learner mean over time for a target far in the prior's tail,
//! and when it first comes within ε of the target.
//!
//!     cargo run --release --example expectation_curve -- 10000

use noisy_bisect::experiments::{run_preset, ExperimentPreset, PresetName};
use noisy_bisect::sim::LearnerKind;

fn main() -> noisy_bisect::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let mut preset = ExperimentPreset::defaults(PresetName::Fig3EpsSweep);
    preset.base.episodes = episodes;
    let report = run_preset(&preset)?;

    for c in &report.crossings {
        println!(
            "{:>12} eps={:<5} crossing t={:?}  (oracle closed form {:.1})",
            c.learner.name(),
            c.eps,
            c.crossing_time,
            c.kalman_expectation_time
        );
    }
    if let Some(k) = report.crossing_slope(LearnerKind::Approximate) {
        println!("approximate learner: crossing time ~ (1/eps)^{k:.2}");
    }
    Ok(())
}
