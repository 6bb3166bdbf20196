use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noisy_bisect::experiments::{run_preset, ConfigError, Settings};

#[derive(Parser)]
#[command(
    name = "noisy-bisect",
    version,
    about = "Monte Carlo sweeps for noisy bisection learners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset sweep and write CSV plus plot files.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// fig3, fig4, fig5 or custom
    #[arg(long)]
    preset: Option<String>,
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    episodes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho0: Option<String>,
    /// fixed target, or `prior` to sample it
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long = "rho-star", allow_hyphen_values = true)]
    rho_star: Option<String>,
    /// comma-separated: approximate,histogram,kalman
    #[arg(long)]
    learners: Option<String>,
    #[arg(long = "max-steps")]
    max_steps: Option<String>,
    /// histogram bin count, or `auto` for ε/2 spacing
    #[arg(long)]
    bins: Option<String>,
    /// comma-separated sweep values
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("preset", &self.preset, "--preset"),
            ("out", &self.out, "--out"),
            ("seed", &self.seed, "--seed"),
            ("episodes", &self.episodes, "--episodes"),
            ("eps", &self.eps, "--eps"),
            ("rho0", &self.rho0, "--rho0"),
            ("v", &self.v, "--v"),
            ("rho_star", &self.rho_star, "--rho-star"),
            ("learners", &self.learners, "--learners"),
            ("max_steps", &self.max_steps, "--max-steps"),
            ("bins", &self.bins, "--bins"),
            ("sweep", &self.sweep, "--sweep"),
            ("horizon", &self.horizon, "--horizon"),
        ];
        for (key, value, flag) in pairs {
            if let Some(v) = value {
                flags.set(key, v, flag)?;
            }
        }
        s = s.overlay(flags);
        Ok(s)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let Command::Run(args) = cli.command;

    let preset = match args.settings().and_then(Settings::resolve) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    eprintln!("resolved preset:\n{preset}\n");

    let report = match run_preset(&preset) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match report.write() {
        Ok(paths) => {
            print!("{}", report.summary());
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", preset.out.display());
            ExitCode::from(2)
        }
    }
}
