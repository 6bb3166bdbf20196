//! Exact inference on unthresholded signals V + z: a scalar Kalman filter
//! with a static state. Serves as the performance yardstick for the
//! thresholded learners.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure_positive, Error, Result};
use crate::normal;
use crate::sim::{ConvergenceRecord, HitTracker};

/// Posterior N(mu, rho2·σ_z²) after `t` unthresholded observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanState {
    pub mu: f64,
    /// Posterior variance in units of σ_z².
    pub rho2: f64,
    pub t: u64,
}

impl KalmanState {
    /// Prior N(0, rho0²·σ_z²).
    pub fn new(rho0: f64) -> Self {
        Self {
            mu: 0.0,
            rho2: rho0 * rho0,
            t: 0,
        }
    }

    pub fn step(&self, y: f64) -> Self {
        let denom = 1.0 + self.rho2;
        Self {
            mu: (self.mu + self.rho2 * y) / denom,
            rho2: self.rho2 / denom,
            t: self.t + 1,
        }
    }
}

/// Closed-form posterior variance ratio after `t` steps: ρ0²/(1 + ρ0²t).
pub fn variance_after(rho0: f64, t: u64) -> f64 {
    let r2 = rho0 * rho0;
    r2 / (1.0 + r2 * t as f64)
}

/// Sampling distribution of the posterior mean after `t` steps, for a fixed
/// target `v`, μ0 = 0 and unit noise: returns (E[μ_t], Var[μ_t]).
pub fn mean_distribution(v: f64, rho0: f64, t: u64) -> (f64, f64) {
    let tr = t as f64 * rho0 * rho0;
    let mean = v - v / (1.0 + tr);
    let var = rho0 * rho0 * tr / ((1.0 + tr) * (1.0 + tr));
    (mean, var)
}

/// Time at which |V − E[μ_t]| drops to `eps`: (|V|/ε − 1)/ρ0², floored at 0.
pub fn expectation_time(v: f64, eps: f64, rho0: f64) -> Result<f64> {
    ensure_positive("eps", eps)?;
    ensure_positive("rho0", rho0)?;
    Ok(((v.abs() / eps - 1.0) / (rho0 * rho0)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceBounds {
    /// Exact time for the expected mean to come within ε of V.
    pub t_expectation: f64,
    /// Sufficient time for Pr[μ_t on the right side of V ∓ ε] > 1 − δ.
    pub t_highprob: f64,
    /// The expectation threshold |V|/(2ερ0²) in its published form, kept for reference.
    pub t_expectation_published: f64,
    /// ζ = −Φ⁻¹(δ).
    pub zeta: f64,
}

pub fn convergence_bounds(v: f64, eps: f64, delta: f64, rho0: f64) -> Result<ConvergenceBounds> {
    ensure_positive("eps", eps)?;
    ensure_positive("rho0", rho0)?;
    if !v.is_finite() || eps >= v.abs() / 2.0 {
        return Err(Error::Domain(format!("need eps < |V|/2, got eps={eps}, V={v}")));
    }
    if !(delta > 0.0 && delta <= normal::cdf(-1.0)) {
        return Err(Error::Domain(format!("need 0 < delta <= Φ(-1), got {delta}")));
    }
    let zeta = -normal::inv_cdf(delta);
    let r2 = rho0 * rho0;
    Ok(ConvergenceBounds {
        t_expectation: expectation_time(v, eps, rho0)?,
        t_highprob: (2.0 * v.abs() / (eps * r2)).max(4.0 * zeta * zeta / (eps * eps)),
        t_expectation_published: v.abs() / (2.0 * eps * r2),
        zeta,
    })
}

/// Run the filter on y_t = V + σ_z·z_t until |μ_t − V| <= eps or `max_steps`.
pub fn kalman_episode<R: Rng + ?Sized>(
    v: f64,
    rho0: f64,
    sigma_z: f64,
    eps: f64,
    max_steps: u64,
    rng: &mut R,
) -> ConvergenceRecord {
    let mut state = KalmanState::new(rho0);
    let mut tracker = HitTracker::new(v, eps, state.mu);
    while !tracker.is_done(max_steps) {
        let z: f64 = rng.sample(StandardNormal);
        state = state.step(v + sigma_z * z);
        tracker.record(state.mu);
    }
    tracker.finish()
}
