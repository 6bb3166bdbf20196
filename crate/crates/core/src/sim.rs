//! Monte Carlo harness: draws targets, feeds learners noisy thresholded
//! signals and measures the first entry of the learner's mean into
//! [V − ε, V + ε].
//!
//! Every episode owns an independent ChaCha8 stream selected by
//! `(seed, episode_index)`, so results do not depend on how episodes are
//! scheduled across threads. Aggregation always runs in episode order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::belief::{ApproximateLearner, LearnerConfig, Sign, DEFAULT_RHO_STAR, DEFAULT_TRUNC_WIDTH};
use crate::error::{ensure_positive, Error, Result};
use crate::histogram::{Histogram, HistogramLearner};
use crate::kalman::{kalman_episode, KalmanState};

pub const DEFAULT_EPISODES: u64 = 10_000;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_HISTOGRAM_BINS: usize = 1000;
pub const DEFAULT_SUPPORT_MULT: f64 = 6.0;

/// Episodes per accumulation chunk in [`expectation_curve`].
const CURVE_CHUNK: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    Approximate,
    Histogram,
    KalmanOracle,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 3] = [
        LearnerKind::Approximate,
        LearnerKind::Histogram,
        LearnerKind::KalmanOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Approximate => "approximate",
            LearnerKind::Histogram => "histogram",
            LearnerKind::KalmanOracle => "kalman",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "approximate" | "approx" => Ok(LearnerKind::Approximate),
            "histogram" | "hist" | "nonparam" => Ok(LearnerKind::Histogram),
            "kalman" | "kalman-oracle" | "oracle" => Ok(LearnerKind::KalmanOracle),
            other => Err(Error::InvalidParameter {
                name: "learner",
                reason: format!("unknown learner `{other}` (expected approximate, histogram or kalman)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VSource {
    SampledFromPrior,
    Fixed(f64),
}

/// How many histogram bins to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinRule {
    Fixed(usize),
    /// Enough bins for a spacing of ε/2 across the support (24ρ0/ε at the default support).
    HalfEpsilon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSettings {
    pub bins: BinRule,
    /// Support is [−mult·ρ0·σ_z, mult·ρ0·σ_z].
    pub support_mult: f64,
}

impl Default for HistogramSettings {
    fn default() -> Self {
        Self {
            bins: BinRule::Fixed(DEFAULT_HISTOGRAM_BINS),
            support_mult: DEFAULT_SUPPORT_MULT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub learner: LearnerKind,
    pub rho0: f64,
    pub sigma_z: f64,
    pub eps: f64,
    pub v_source: VSource,
    pub episodes: u64,
    pub max_steps: u64,
    pub seed: u64,
    pub rho_star: f64,
    pub trunc_width: f64,
    pub histogram: HistogramSettings,
}

impl SimulationSpec {
    pub fn new(learner: LearnerKind, rho0: f64, eps: f64) -> Self {
        Self {
            learner,
            rho0,
            sigma_z: 1.0,
            eps,
            v_source: VSource::SampledFromPrior,
            episodes: DEFAULT_EPISODES,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            rho_star: DEFAULT_RHO_STAR,
            trunc_width: DEFAULT_TRUNC_WIDTH,
            histogram: HistogramSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("rho0", self.rho0)?;
        ensure_positive("sigma_z", self.sigma_z)?;
        ensure_positive("eps", self.eps)?;
        ensure_positive("rho_star", self.rho_star)?;
        ensure_positive("trunc_width", self.trunc_width)?;
        ensure_positive("support_mult", self.histogram.support_mult)?;
        if self.episodes == 0 {
            return Err(invalid("episodes", "must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps", "must be at least 1"));
        }
        if let VSource::Fixed(v) = self.v_source {
            if !v.is_finite() {
                return Err(invalid("v", "must be finite"));
            }
            if self.learner == LearnerKind::Histogram {
                let (lo, hi) = self.histogram_support();
                if v < lo || v > hi {
                    return Err(invalid("v", "fixed target lies outside the histogram support"));
                }
            }
        }
        if self.learner == LearnerKind::Histogram && self.histogram_bins() < 2 {
            return Err(invalid("bins", "need at least 2 histogram bins"));
        }
        Ok(())
    }

    pub fn learner_config(&self) -> LearnerConfig {
        LearnerConfig::new(self.rho0, self.sigma_z)
            .with_rho_star(self.rho_star)
            .with_trunc_width(self.trunc_width)
    }

    pub fn histogram_support(&self) -> (f64, f64) {
        let half = self.histogram.support_mult * self.rho0 * self.sigma_z;
        (-half, half)
    }

    pub fn histogram_bins(&self) -> usize {
        match self.histogram.bins {
            BinRule::Fixed(n) => n,
            BinRule::HalfEpsilon => {
                let (lo, hi) = self.histogram_support();
                ((hi - lo) / (0.5 * self.eps)).ceil().max(2.0) as usize
            }
        }
    }

    fn histogram_prior(&self) -> Result<Histogram> {
        let (lo, hi) = self.histogram_support();
        Histogram::gaussian_prior(lo, hi, self.histogram_bins(), self.rho0 * self.sigma_z)
    }
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.to_string(),
    }
}

/// Outcome of a single episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    /// First t with |μ_t − V| <= ε; `None` on timeout.
    pub hit_time: Option<u64>,
    pub timed_out: bool,
    /// Learner mean when the episode stopped.
    pub final_mu: f64,
    pub v_true: f64,
    pub steps_run: u64,
    /// Running max and min of μ_t over the episode.
    pub max_mu: f64,
    pub min_mu: f64,
}

/// Tracks one trajectory of learner means against the band [V − ε, V + ε].
#[derive(Debug, Clone)]
pub(crate) struct HitTracker {
    v: f64,
    eps: f64,
    t: u64,
    mu: f64,
    max_mu: f64,
    min_mu: f64,
    hit: Option<u64>,
}

impl HitTracker {
    pub(crate) fn new(v: f64, eps: f64, mu0: f64) -> Self {
        let hit = ((mu0 - v).abs() <= eps).then_some(0);
        Self {
            v,
            eps,
            t: 0,
            mu: mu0,
            max_mu: mu0,
            min_mu: mu0,
            hit,
        }
    }

    pub(crate) fn is_done(&self, max_steps: u64) -> bool {
        self.hit.is_some() || self.t >= max_steps
    }

    pub(crate) fn record(&mut self, mu: f64) {
        self.t += 1;
        self.mu = mu;
        self.max_mu = self.max_mu.max(mu);
        self.min_mu = self.min_mu.min(mu);
        if self.hit.is_none() && (mu - self.v).abs() <= self.eps {
            self.hit = Some(self.t);
        }
    }

    pub(crate) fn finish(self) -> ConvergenceRecord {
        ConvergenceRecord {
            hit_time: self.hit,
            timed_out: self.hit.is_none(),
            final_mu: self.mu,
            v_true: self.v,
            steps_run: self.t,
            max_mu: self.max_mu,
            min_mu: self.min_mu,
        }
    }
}

/// A learner that places its threshold at its own mean and consumes signs.
pub trait ThresholdLearner {
    fn threshold(&self) -> f64;
    fn mean(&self) -> f64;
    fn observe(&mut self, x: Sign) -> Result<()>;
}

impl ThresholdLearner for ApproximateLearner {
    fn threshold(&self) -> f64 {
        ApproximateLearner::threshold(self)
    }
    fn mean(&self) -> f64 {
        ApproximateLearner::mean(self)
    }
    fn observe(&mut self, x: Sign) -> Result<()> {
        ApproximateLearner::observe(self, x)
    }
}

impl ThresholdLearner for HistogramLearner {
    fn threshold(&self) -> f64 {
        HistogramLearner::threshold(self)
    }
    fn mean(&self) -> f64 {
        HistogramLearner::mean(self)
    }
    fn observe(&mut self, x: Sign) -> Result<()> {
        HistogramLearner::observe(self, x)
    }
}

/// RNG stream for one episode; a pure function of `(seed, episode_index)`.
pub fn episode_rng(seed: u64, episode_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode_index);
    rng
}

/// sign(V + z − θ) with z ~ N(0, σ_z²), where sign(0) = +1.
pub fn sample_signal<R: Rng + ?Sized>(v: f64, theta: f64, sigma_z: f64, rng: &mut R) -> Sign {
    let z: f64 = rng.sample(StandardNormal);
    Sign::of(v + sigma_z * z - theta)
}

/// Draw the episode's target. Always consumes at least one normal draw so
/// that fixed and sampled targets leave the noise stream aligned.
fn draw_target<R: Rng + ?Sized>(spec: &SimulationSpec, rng: &mut R) -> f64 {
    let prior_sd = spec.rho0 * spec.sigma_z;
    match spec.v_source {
        VSource::Fixed(v) => {
            let _: f64 = rng.sample(StandardNormal);
            v
        }
        VSource::SampledFromPrior => loop {
            let v = prior_sd * rng.sample::<f64, _>(StandardNormal);
            if spec.learner != LearnerKind::Histogram {
                return v;
            }
            // Targets outside the grid are discarded and redrawn.
            let (lo, hi) = spec.histogram_support();
            if (lo..=hi).contains(&v) {
                return v;
            }
        },
    }
}

fn run_thresholded<L: ThresholdLearner, R: Rng + ?Sized>(
    mut learner: L,
    v: f64,
    spec: &SimulationSpec,
    rng: &mut R,
) -> Result<ConvergenceRecord> {
    let mut tracker = HitTracker::new(v, spec.eps, learner.mean());
    while !tracker.is_done(spec.max_steps) {
        let x = sample_signal(v, learner.threshold(), spec.sigma_z, rng);
        learner.observe(x)?;
        tracker.record(learner.mean());
    }
    Ok(tracker.finish())
}

/// Run episode `episode_index` of `spec` to convergence or timeout.
pub fn run_episode(spec: &SimulationSpec, episode_index: u64) -> Result<ConvergenceRecord> {
    spec.validate()?;
    run_episode_unchecked(spec, episode_index).map_err(|e| Error::Episode {
        index: episode_index,
        source: Box::new(e),
    })
}

fn run_episode_unchecked(spec: &SimulationSpec, episode_index: u64) -> Result<ConvergenceRecord> {
    let mut rng = episode_rng(spec.seed, episode_index);
    let v = draw_target(spec, &mut rng);
    match spec.learner {
        LearnerKind::Approximate => {
            let learner = ApproximateLearner::new(spec.learner_config())?;
            run_thresholded(learner, v, spec, &mut rng)
        }
        LearnerKind::Histogram => {
            let learner = HistogramLearner::new(spec.histogram_prior()?, spec.sigma_z)?;
            run_thresholded(learner, v, spec, &mut rng)
        }
        LearnerKind::KalmanOracle => Ok(kalman_episode(
            v,
            spec.rho0,
            spec.sigma_z,
            spec.eps,
            spec.max_steps,
            &mut rng,
        )),
    }
}

/// All episode records of `spec`, in episode order.
pub fn run_episodes(spec: &SimulationSpec) -> Result<Vec<ConvergenceRecord>> {
    spec.validate()?;
    (0..spec.episodes)
        .into_par_iter()
        .map(|i| {
            run_episode_unchecked(spec, i).map_err(|e| Error::Episode {
                index: i,
                source: Box::new(e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateStats {
    /// Mean hit time over converged episodes.
    pub mean_hit_time: f64,
    /// Standard error of `mean_hit_time` (zero with a single converged episode).
    pub stderr: f64,
    pub timeout_fraction: f64,
    pub episode_count: u64,
    pub converged: u64,
}

impl AggregateStats {
    /// Timeouts are counted in `timeout_fraction`, not folded into the mean.
    pub fn from_records(records: &[ConvergenceRecord], max_steps: u64) -> Result<Self> {
        let (mut n, mut sum) = (0u64, 0.0f64);
        for t in records.iter().filter_map(|r| r.hit_time) {
            n += 1;
            sum += t as f64;
        }
        let episodes = records.len() as u64;
        if n == 0 {
            return Err(Error::AllTimedOut { episodes, max_steps });
        }
        let mean = sum / n as f64;
        let ss: f64 = records
            .iter()
            .filter_map(|r| r.hit_time)
            .map(|t| (t as f64 - mean).powi(2))
            .sum();
        let stderr = if n > 1 {
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            mean_hit_time: mean,
            stderr,
            timeout_fraction: (episodes - n) as f64 / episodes as f64,
            episode_count: episodes,
            converged: n,
        })
    }
}

pub fn monte_carlo(spec: &SimulationSpec) -> Result<AggregateStats> {
    let records = run_episodes(spec)?;
    AggregateStats::from_records(&records, spec.max_steps)
}

/// Per-step sample mean of the learner mean across episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationCurve {
    /// E[μ_t] for t = 0..=horizon.
    pub mean: Vec<f64>,
    /// Sample variance of μ_t across episodes.
    pub variance: Vec<f64>,
    /// Standard error of each entry of `mean`.
    pub stderr: Vec<f64>,
    pub episodes: u64,
}

impl ExpectationCurve {
    /// First t with E[μ_t] > level.
    pub fn first_above(&self, level: f64) -> Option<usize> {
        self.mean.iter().position(|&m| m > level)
    }

    /// First t with E[μ_t] < level.
    pub fn first_below(&self, level: f64) -> Option<usize> {
        self.mean.iter().position(|&m| m < level)
    }

    /// First t at which E[μ_t] has come within `eps` of `v` from the prior side
    /// (above V − ε for V > 0, below V + ε for V < 0).
    pub fn crossing_time(&self, v: f64, eps: f64) -> Option<usize> {
        if v >= 0.0 {
            self.first_above(v - eps)
        } else {
            self.first_below(v + eps)
        }
    }
}

struct CurveSums {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl CurveSums {
    fn zeros(len: usize) -> Self {
        Self {
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
        }
    }

    fn add_point(&mut self, t: usize, mu: f64) {
        self.sum[t] += mu;
        self.sum_sq[t] += mu * mu;
    }

    fn merge(mut self, other: &CurveSums) -> Self {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self
    }
}

fn trajectory<L: ThresholdLearner, R: Rng + ?Sized>(
    mut learner: L,
    v: f64,
    sigma_z: f64,
    sums: &mut CurveSums,
    rng: &mut R,
) -> Result<()> {
    sums.add_point(0, learner.mean());
    for t in 1..sums.sum.len() {
        let x = sample_signal(v, learner.threshold(), sigma_z, rng);
        learner.observe(x)?;
        sums.add_point(t, learner.mean());
    }
    Ok(())
}

fn curve_episode(spec: &SimulationSpec, index: u64, sums: &mut CurveSums) -> Result<()> {
    let mut rng = episode_rng(spec.seed, index);
    let v = draw_target(spec, &mut rng);
    match spec.learner {
        LearnerKind::Approximate => trajectory(
            ApproximateLearner::new(spec.learner_config())?,
            v,
            spec.sigma_z,
            sums,
            &mut rng,
        ),
        LearnerKind::Histogram => trajectory(
            HistogramLearner::new(spec.histogram_prior()?, spec.sigma_z)?,
            v,
            spec.sigma_z,
            sums,
            &mut rng,
        ),
        LearnerKind::KalmanOracle => {
            let mut state = KalmanState::new(spec.rho0);
            sums.add_point(0, state.mu);
            for t in 1..sums.sum.len() {
                let z: f64 = rng.sample(StandardNormal);
                state = state.step(v + spec.sigma_z * z);
                sums.add_point(t, state.mu);
            }
            Ok(())
        }
    }
}

/// E[μ_t] over `spec.episodes` episodes with a fixed target, for t = 0..=horizon.
///
/// Episodes run the full horizon regardless of when they enter the band.
pub fn expectation_curve(spec: &SimulationSpec, horizon: usize) -> Result<ExpectationCurve> {
    spec.validate()?;
    if !matches!(spec.v_source, VSource::Fixed(_)) {
        return Err(Error::Domain("expectation curves need a fixed target".into()));
    }
    let len = horizon + 1;
    let chunks = spec.episodes.div_ceil(CURVE_CHUNK);
    let partials: Vec<CurveSums> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sums = CurveSums::zeros(len);
            let end = ((c + 1) * CURVE_CHUNK).min(spec.episodes);
            for i in c * CURVE_CHUNK..end {
                curve_episode(spec, i, &mut sums).map_err(|e| Error::Episode {
                    index: i,
                    source: Box::new(e),
                })?;
            }
            Ok(sums)
        })
        .collect::<Result<_>>()?;
    let total = partials.iter().fold(CurveSums::zeros(len), |acc, p| acc.merge(p));

    let n = spec.episodes as f64;
    let mean: Vec<f64> = total.sum.iter().map(|s| s / n).collect();
    let variance: Vec<f64> = total
        .sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| {
            if spec.episodes < 2 {
                0.0
            } else {
                ((sq - n * m * m) / (n - 1.0)).max(0.0)
            }
        })
        .collect();
    let stderr = variance.iter().map(|v| (v / n).sqrt()).collect();
    Ok(ExpectationCurve {
        mean,
        variance,
        stderr,
        episodes: spec.episodes,
    })
}
