//! Mean hit time against the tolerance ε at ρ0 = 0.5, with the histogram
//! resolution tied to ε.
//!
//!     cargo run --release --example eps_sweep -- 10000

use noisy_bisect::experiments::{run_preset, ExperimentPreset, PresetName};

fn main() -> noisy_bisect::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let mut preset = ExperimentPreset::defaults(PresetName::Fig5EpsSweep);
    preset.base.episodes = episodes;
    for eps in &preset.sweep_values {
        let bins = preset
            .point_spec(noisy_bisect::sim::LearnerKind::Histogram, *eps)
            .histogram_bins();
        println!("eps={eps}: {bins} histogram bins");
    }
    print!("{}", run_preset(&preset)?.summary());
    Ok(())
}
