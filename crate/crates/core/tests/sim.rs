use noisy_bisect::belief::Sign;
use noisy_bisect::normal;
use noisy_bisect::sim::{
    episode_rng, expectation_curve, monte_carlo, run_episodes, sample_signal, AggregateStats, LearnerKind,
    SimulationSpec, VSource,
};

fn spec(learner: LearnerKind, rho0: f64, eps: f64, episodes: u64) -> SimulationSpec {
    let mut s = SimulationSpec::new(learner, rho0, eps);
    s.episodes = episodes;
    s.seed = 17;
    s
}

#[test]
fn signal_probability_is_normal_cdf() {
    let mut rng = episode_rng(5, 0);
    let n = 200_000;
    let plus = (0..n)
        .filter(|_| sample_signal(1.0, 0.0, 1.0, &mut rng) == Sign::Plus)
        .count();
    let p = normal::cdf(1.0);
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((plus as f64 / n as f64 - p).abs() < 4.0 * se);
}

#[test]
fn records_do_not_depend_on_thread_count() {
    for learner in LearnerKind::ALL {
        let s = spec(learner, 2.0, 0.2, 300);
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run_episodes(&s).unwrap())
        };
        assert_eq!(run(1), run(4), "{learner}");
    }
}

#[test]
fn seeds_change_results() {
    let mut a = spec(LearnerKind::Approximate, 1.0, 0.2, 200);
    let r1 = run_episodes(&a).unwrap();
    a.seed += 1;
    assert_ne!(r1, run_episodes(&a).unwrap());
}

#[test]
fn learners_share_targets_for_a_seed() {
    let a = run_episodes(&spec(LearnerKind::Approximate, 1.0, 0.2, 100)).unwrap();
    let k = run_episodes(&spec(LearnerKind::KalmanOracle, 1.0, 0.2, 100)).unwrap();
    for (x, y) in a.iter().zip(&k) {
        assert_eq!(x.v_true, y.v_true);
    }
}

#[test]
fn mean_is_drawn_toward_the_target() {
    for v in [-2.0, 2.0] {
        for learner in LearnerKind::ALL {
            let mut s = spec(learner, 1.0, 0.1, 500);
            s.v_source = VSource::Fixed(v);
            let c = expectation_curve(&s, 200).unwrap();
            assert!(c.mean[200] * v > 0.0, "{learner} V={v}");
            assert!((c.mean[200] - v).abs() < (c.mean[0] - v).abs());
        }
    }
}

#[test]
fn tighter_bands_take_longer() {
    for learner in LearnerKind::ALL {
        let wide = monte_carlo(&spec(learner, 1.0, 0.4, 2000)).unwrap();
        let narrow = monte_carlo(&spec(learner, 1.0, 0.1, 2000)).unwrap();
        assert!(narrow.mean_hit_time > wide.mean_hit_time, "{learner}");
    }
}

#[test]
fn thresholded_learner_is_slower_than_oracle() {
    // Same seed, same targets: compare hit times episode by episode.
    let a = run_episodes(&spec(LearnerKind::Approximate, 0.5, 0.1, 3000)).unwrap();
    let k = run_episodes(&spec(LearnerKind::KalmanOracle, 0.5, 0.1, 3000)).unwrap();
    let d: Vec<f64> = a
        .iter()
        .zip(&k)
        .map(|(x, y)| x.hit_time.unwrap() as f64 - y.hit_time.unwrap() as f64)
        .collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(
        mean > 4.0 * (var / n).sqrt(),
        "paired gap {mean}, se {}",
        (var / n).sqrt()
    );
}

#[test]
fn timeouts_are_counted_not_averaged() {
    let mut s = spec(LearnerKind::Approximate, 1.0, 0.01, 400);
    s.max_steps = 50;
    let records = run_episodes(&s).unwrap();
    let stats = AggregateStats::from_records(&records, s.max_steps).unwrap();
    let timeouts = records.iter().filter(|r| r.timed_out).count();
    assert!(timeouts > 0);
    assert_eq!(stats.timeout_fraction, timeouts as f64 / 400.0);
    assert!(stats.mean_hit_time <= 50.0);
    for r in records.iter().filter(|r| r.timed_out) {
        assert_eq!(r.steps_run, 50);
    }
}

#[test]
fn kalman_expectation_curve_is_monotone() {
    let mut s = spec(LearnerKind::KalmanOracle, 0.5, 0.1, 4000);
    s.v_source = VSource::Fixed(3.0);
    let c = expectation_curve(&s, 300).unwrap();
    // E[μ_t] rises by 3ρ0²/((1+tρ0²)(1+(t+1)ρ0²)), far above its noise for early t
    for t in 0..20 {
        assert!(c.mean[t + 1] > c.mean[t], "t={t}");
    }
    assert!(c.mean[300] > c.mean[100] && c.mean[100] > c.mean[20]);
}
