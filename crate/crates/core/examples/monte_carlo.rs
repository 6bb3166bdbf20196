//! One Monte Carlo point: aggregate hit-time statistics and a peek at the
//! per-episode records.

use noisy_bisect::sim::{monte_carlo, run_episodes, LearnerKind, SimulationSpec};

fn main() -> noisy_bisect::Result<()> {
    for learner in LearnerKind::ALL {
        let mut spec = SimulationSpec::new(learner, 1.0, 0.2);
        spec.episodes = 2000;
        let stats = monte_carlo(&spec)?;
        println!(
            "{:>12}: mean hit {:.3} ± {:.3}, timeouts {:.2}%",
            learner.name(),
            stats.mean_hit_time,
            stats.stderr,
            100.0 * stats.timeout_fraction
        );
    }

    let mut spec = SimulationSpec::new(LearnerKind::Approximate, 1.0, 0.2);
    spec.episodes = 5;
    for (i, r) in run_episodes(&spec)?.iter().enumerate() {
        println!(
            "episode {i}: V={:+.3} hit={:?} final mean {:+.3}",
            r.v_true, r.hit_time, r.final_mu
        );
    }
    Ok(())
}
