//! Exact Bayesian learner on a fixed grid of candidate targets.
//!
//! Weights are carried in log space and renormalized with a max shift after
//! every update, so long one-sided signal runs cannot underflow the grid.

use crate::belief::Sign;
use crate::error::{ensure_positive, Error, Result};
use crate::normal;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    grid: Vec<f64>,
    log_q: Vec<f64>,
    q: Vec<f64>,
}

impl Histogram {
    /// Build from explicit grid values and (not necessarily normalized) weights.
    pub fn new(grid: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != weights.len() {
            return Err(Error::InvalidRange(format!(
                "grid has {} points but {} weights",
                grid.len(),
                weights.len()
            )));
        }
        if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRange(
                "grid must be finite and strictly increasing".into(),
            ));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w >= 0.0)) {
            return Err(Error::InvalidRange("weights must be finite and nonnegative".into()));
        }
        let log_w: Vec<f64> = weights.iter().map(|w| w.ln()).collect();
        let log_q = normalize(log_w).ok_or_else(|| Error::InvalidRange("weights sum to zero".into()))?;
        Ok(Self::from_log(grid, log_q))
    }

    /// Uniform grid of `n` points on [lo, hi] (endpoints included) carrying
    /// the N(0, prior_sd²) density, normalized.
    pub fn gaussian_prior(lo: f64, hi: f64, n: usize, prior_sd: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidRange(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::InvalidRange(format!("need at least 2 bins, got {n}")));
        }
        ensure_positive("prior_sd", prior_sd)?;
        let step = (hi - lo) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
            .collect();
        let log_w = grid.iter().map(|v| -0.5 * (v / prior_sd).powi(2)).collect();
        let log_q = normalize(log_w).expect("gaussian log-weights are finite");
        Ok(Self::from_log(grid, log_q))
    }

    fn from_log(grid: Vec<f64>, log_q: Vec<f64>) -> Self {
        let q = log_q.iter().map(|l| l.exp()).collect();
        Self { grid, log_q, q }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.q
    }

    pub fn support(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    pub fn mean(&self) -> f64 {
        self.grid.iter().zip(&self.q).map(|(v, q)| v * q).sum()
    }

    /// Bayes update for sign `x` observed at threshold `theta`:
    /// q_i ∝ Φ(x·(v_i − θ)/σ_z)·q_i.
    pub fn update(&mut self, theta: f64, x: Sign, sigma_z: f64) -> Result<()> {
        let sign = x.value();
        let mut next: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.log_q)
            .map(|(v, lq)| lq + normal::ln_cdf(sign * (v - theta) / sigma_z))
            .collect();
        // The current log_q is normalized, so the shift-and-sum below is ln A.
        let ln_mass = log_sum_exp(&next);
        if !(ln_mass.is_finite() && ln_mass >= f64::MIN_POSITIVE.ln()) {
            return Err(Error::MassUnderflow { theta });
        }
        for (lq, q) in next.iter_mut().zip(self.q.iter_mut()) {
            *lq -= ln_mass;
            *q = lq.exp();
        }
        self.log_q = next;
        Ok(())
    }

    /// Value-to-value form of [`Histogram::update`].
    pub fn updated(&self, theta: f64, x: Sign, sigma_z: f64) -> Result<Self> {
        let mut out = self.clone();
        out.update(theta, x, sigma_z)?;
        Ok(out)
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn normalize(mut log_w: Vec<f64>) -> Option<Vec<f64>> {
    let total = log_sum_exp(&log_w);
    if !total.is_finite() {
        return None;
    }
    log_w.iter_mut().for_each(|l| *l -= total);
    Some(log_w)
}

/// The grid learner with myopic thresholds at the histogram mean.
#[derive(Debug, Clone)]
pub struct HistogramLearner {
    hist: Histogram,
    sigma_z: f64,
    mean: f64,
}

impl HistogramLearner {
    pub fn new(hist: Histogram, sigma_z: f64) -> Result<Self> {
        ensure_positive("sigma_z", sigma_z)?;
        let mean = hist.mean();
        Ok(Self { hist, sigma_z, mean })
    }

    pub fn histogram(&self) -> &Histogram {
        &self.hist
    }

    pub fn threshold(&self) -> f64 {
        self.mean
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn observe(&mut self, x: Sign) -> Result<()> {
        self.hist.update(self.mean, x, self.sigma_z)?;
        self.mean = self.hist.mean();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_symmetric_prior() {
        let h = Histogram::gaussian_prior(-1.0, 1.0, 2, 1.0).unwrap();
        assert_eq!(h.grid(), &[-1.0, 1.0]);
        assert!((h.probabilities()[0] - 0.5).abs() < 1e-15);
        assert!(h.mean().abs() < 1e-15);
    }

    #[test]
    fn three_point_prior_hand_values() {
        let h = Histogram::gaussian_prior(0.0, 1.0, 3, 1.0).unwrap();
        let raw = [1.0, (-0.125f64).exp(), (-0.5f64).exp()];
        let total: f64 = raw.iter().sum();
        for (q, r) in h.probabilities().iter().zip(raw) {
            assert!((q - r / total).abs() < 1e-15);
        }
        assert_eq!(h.grid(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn large_prior_grid_shape() {
        let rho0 = 10.0;
        let h = Histogram::gaussian_prior(-6.0 * rho0, 6.0 * rho0, 1000, rho0).unwrap();
        assert_eq!(h.len(), 1000);
        assert_eq!(h.support(), (-60.0, 60.0));
        let s: f64 = h.probabilities().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(h.mean().abs() < 1e-12);
    }

    #[test]
    fn single_update_hand_values() {
        let mut h = Histogram::gaussian_prior(-1.0, 1.0, 2, 1.0).unwrap();
        h.update(0.0, Sign::Plus, 1.0).unwrap();
        assert!((h.probabilities()[0] - 0.158_655_253_931_457_05).abs() < 1e-14);
        assert!((h.probabilities()[1] - 0.841_344_746_068_542_9).abs() < 1e-14);
        assert!((h.mean() - 0.682_689_492_137_085_9).abs() < 1e-14);
    }

    #[test]
    fn far_threshold_is_uninformative() {
        let h = Histogram::gaussian_prior(-3.0, 3.0, 7, 1.0).unwrap();
        let u = h.updated(-1e4, Sign::Plus, 1.0).unwrap();
        for (a, b) in h.probabilities().iter().zip(u.probabilities()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn point_mass_mean() {
        let h = Histogram::new(vec![-1.0, 0.5, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(h.mean(), 0.5);
    }

    #[test]
    fn updates_commute() {
        let h = Histogram::gaussian_prior(-2.0, 2.0, 9, 1.0).unwrap();
        let a = h
            .updated(0.3, Sign::Plus, 1.0)
            .unwrap()
            .updated(-0.2, Sign::Minus, 1.0)
            .unwrap();
        let b = h
            .updated(-0.2, Sign::Minus, 1.0)
            .unwrap()
            .updated(0.3, Sign::Plus, 1.0)
            .unwrap();
        for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn impossible_signal_underflows() {
        let mut h = Histogram::gaussian_prior(-1.0, 1.0, 5, 1.0).unwrap();
        // every grid point is ~50σ below the threshold yet the signal says "above"
        assert_eq!(
            h.update(60.0, Sign::Plus, 1.0),
            Err(Error::MassUnderflow { theta: 60.0 })
        );
    }

    #[test]
    fn long_one_sided_runs_stay_normalized() {
        let mut h = Histogram::gaussian_prior(-5.0, 5.0, 50, 1.0).unwrap();
        for _ in 0..5000 {
            h.update(h.mean(), Sign::Plus, 0.05).unwrap();
        }
        let s: f64 = h.probabilities().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(h.mean() > 4.9);
    }

    #[test]
    fn invalid_construction() {
        assert!(Histogram::gaussian_prior(1.0, -1.0, 10, 1.0).is_err());
        assert!(Histogram::gaussian_prior(-1.0, 1.0, 1, 1.0).is_err());
        assert!(Histogram::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Histogram::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(Histogram::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }
}
