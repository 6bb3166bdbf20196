//! Exact grid posterior versus the approximate learner on the same signals.

use noisy_bisect::belief::{ApproximateLearner, LearnerConfig};
use noisy_bisect::histogram::{Histogram, HistogramLearner};
use noisy_bisect::sim::{episode_rng, sample_signal};

fn main() -> noisy_bisect::Result<()> {
    let (rho0, v) = (4.0, 5.3);
    let grid = Histogram::gaussian_prior(-6.0 * rho0, 6.0 * rho0, 1000, rho0)?;
    let mut exact = HistogramLearner::new(grid, 1.0)?;
    let mut approx = ApproximateLearner::new(LearnerConfig::new(rho0, 1.0))?;

    // Each learner picks its own thresholds, so each gets its own noise stream.
    let (mut rng_a, mut rng_b) = (episode_rng(1, 0), episode_rng(1, 1));
    println!("{:>4} {:>12} {:>12}", "t", "histogram", "approximate");
    for t in 1..=60 {
        exact.observe(sample_signal(v, exact.threshold(), 1.0, &mut rng_a))?;
        approx.observe(sample_signal(v, approx.threshold(), 1.0, &mut rng_b))?;
        if t % 5 == 0 {
            println!("{t:>4} {:>12.4} {:>12.4}", exact.mean(), approx.mean());
        }
    }
    println!("target V = {v}");
    Ok(())
}
