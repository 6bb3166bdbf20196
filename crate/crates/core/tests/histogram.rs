use noisy_bisect::belief::Sign;
use noisy_bisect::histogram::{Histogram, HistogramLearner};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Bayes rule written out as one product per grid point, normalized once at the end.
fn brute_force(grid: &[f64], prior: &[f64], obs: &[(f64, Sign)], sigma_z: f64) -> Vec<f64> {
    let w: Vec<f64> = grid
        .iter()
        .zip(prior)
        .map(|(v, p)| {
            obs.iter()
                .fold(*p, |acc, (theta, x)| acc * phi(x.value() * (v - theta) / sigma_z))
        })
        .collect();
    let z: f64 = w.iter().sum();
    w.iter().map(|x| x / z).collect()
}

#[test]
fn learner_sequence_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=20 {
        let grid: Vec<f64> = (0..n).map(|i| -2.0 + 4.0 * i as f64 / (n - 1) as f64).collect();
        let prior: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let mut learner = HistogramLearner::new(Histogram::new(grid.clone(), prior.clone()).unwrap(), 1.0).unwrap();
        let mut obs = Vec::new();
        for _ in 0..10 {
            let x = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
            obs.push((learner.threshold(), x));
            learner.observe(x).unwrap();
        }
        let exact = brute_force(&grid, &prior, &obs, 1.0);
        for (a, b) in learner.histogram().probabilities().iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn plus_signal_moves_mean_up() {
    let h = Histogram::gaussian_prior(-3.0, 3.0, 61, 1.0).unwrap();
    for theta in [-2.0, -0.5, 0.0, 0.7, 2.5] {
        assert!(h.updated(theta, Sign::Plus, 1.0).unwrap().mean() > h.mean());
        assert!(h.updated(theta, Sign::Minus, 1.0).unwrap().mean() < h.mean());
    }
}

proptest! {
    #[test]
    fn arbitrary_updates_match_brute_force(
        n in 2usize..=20,
        weights in proptest::collection::vec(0.01f64..1.0, 20),
        steps in proptest::collection::vec((-3.0f64..3.0, any::<bool>()), 10),
        sigma_z in 0.3f64..3.0,
    ) {
        let grid: Vec<f64> = (0..n).map(|i| -2.5 + 5.0 * i as f64 / (n - 1) as f64).collect();
        let prior = weights[..n].to_vec();
        let mut h = Histogram::new(grid.clone(), prior.clone()).unwrap();
        let obs: Vec<(f64, Sign)> = steps.iter().map(|&(t, b)| (t, if b { Sign::Plus } else { Sign::Minus })).collect();
        for &(theta, x) in &obs {
            h.update(theta, x, sigma_z).unwrap();
        }
        let exact = brute_force(&grid, &prior, &obs, sigma_z);
        let total: f64 = h.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for (a, b) in h.probabilities().iter().zip(&exact) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
