//! The unthresholded oracle: closed-form sampling distribution of its mean,
//! convergence bounds, and one simulated episode.

use noisy_bisect::kalman::{convergence_bounds, kalman_episode, mean_distribution};
use noisy_bisect::normal;
use noisy_bisect::sim::episode_rng;

fn main() -> noisy_bisect::Result<()> {
    let (v, rho0, eps) = (3.0, 0.5, 0.3);
    for t in [0, 4, 16, 64, 256] {
        let (m, var) = mean_distribution(v, rho0, t);
        println!("t={t:>3}: E[mu_t]={m:.4}  Var[mu_t]={var:.5}");
    }

    let b = convergence_bounds(v, eps, normal::cdf(-2.0), rho0)?;
    println!(
        "V={v} eps={eps}: E[mu_t] within eps at t={:.1}; high-probability bound t={:.1} (zeta={:.3})",
        b.t_expectation, b.t_highprob, b.zeta
    );

    let mut rng = episode_rng(0, 0);
    let r = kalman_episode(v, rho0, 1.0, eps, 10_000, &mut rng);
    println!("one episode: hit at {:?}, final mean {:.4}", r.hit_time, r.final_mu);
    Ok(())
}
