//! The normal-distribution helpers the learner is built on, including tails
//! where naive formulas lose every digit.

use noisy_bisect::belief::{belief_moments, entropy_matched_gaussian, BeliefState};
use noisy_bisect::normal::{self, TruncatedStdNormal};

fn main() -> noisy_bisect::Result<()> {
    for x in [-1.0, 0.0, 1.0, 8.0, 30.0] {
        println!(
            "x={x:>5}: cdf={:.6e} sf={:.6e} ln_sf={:.6} hazard={:.6}",
            normal::cdf(x),
            normal::sf(x),
            normal::ln_sf(x),
            normal::hazard(x)
        );
    }
    println!("inv_cdf(0.975) = {:.12}", normal::inv_cdf(0.975));

    // Half-line (−1, ∞) and a window far out in the tail.
    let b = belief_moments(&BeliefState::new(-1.0, f64::INFINITY, 0.0, 1.0)?, 1.0)?;
    println!("N(0,1) on (-1, inf): mean {:.9}, sd {:.9}", b.mu, b.sigma);
    let t = TruncatedStdNormal::new(35.0, 36.0)?;
    println!(
        "N(0,1) on (35, 36): ln mass {:.6}, mean {:.9}, var {:.3e}",
        t.ln_mass(),
        t.mean(),
        t.variance()
    );

    let (m, s) = entropy_matched_gaussian(0.0, 1.0, -1.0, 1.0)?;
    println!("entropy-matched Gaussian for N(0,1) on (-1, 1): mean {m:.3}, sd {s:.9}");
    Ok(())
}
