//! Build a sweep from config text plus overrides, the way the CLI does,
//! and write the CSV into a temporary directory.

use noisy_bisect::experiments::{run_preset, Settings};

const CONFIG: &str = "
# approximate learner versus the oracle at a few tolerances
preset = custom
sweep_param = eps
sweep = 0.5, 0.25, 0.125
rho0 = 2
learners = approximate, kalman
episodes = 500
seed = 42
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = Settings::parse(CONFIG, "inline")?;
    let mut flags = Settings::default();
    let out = std::env::temp_dir().join("noisy-bisect-custom.csv");
    flags.set("out", out.to_str().unwrap(), "override")?;
    flags.set("rho_star", "3", "override")?;

    let preset = file.overlay(flags).resolve()?;
    eprintln!("{preset}\n");
    let report = run_preset(&preset)?;
    for path in report.write()? {
        println!("wrote {}", path.display());
    }
    print!("{}", report.csv());
    Ok(())
}
