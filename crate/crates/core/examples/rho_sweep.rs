//! Mean hit time against prior width for all three learners.
//!
//!     cargo run --release --example rho_sweep -- 10000

use noisy_bisect::experiments::{run_preset, ExperimentPreset, PresetName};

fn main() -> noisy_bisect::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let mut preset = ExperimentPreset::defaults(PresetName::Fig4RhoSweep);
    preset.base.episodes = episodes;
    print!("{}", run_preset(&preset)?.summary());
    Ok(())
}
