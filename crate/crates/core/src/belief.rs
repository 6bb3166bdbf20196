//! The approximate learner's belief and its state machine.
//!
//! A belief is a normal N(m, s²) restricted to a support (l, r) where at most
//! one end is finite. While its spread is small relative to the noise the
//! belief stays Gaussian and is updated by moment matching. When the spread
//! is large, consistent signals chop the support just behind the threshold,
//! and a contradicting signal collapses it back to a Gaussian with the same
//! mean and entropy as the doubly truncated belief.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{ensure_positive, Error, Result};
use crate::normal::TruncatedStdNormal;

/// Default switch-over ratio between Gaussian inference and truncation.
pub const DEFAULT_RHO_STAR: f64 = 2.5;
/// Default truncation offset, in units of the noise standard deviation.
pub const DEFAULT_TRUNC_WIDTH: f64 = 2.0;

/// A thresholded observation: the sign of V + z − θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// Signum with `of(0.0) == Plus`.
    #[inline]
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-1",
            Sign::Plus => "+1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Support is the whole real line.
    Gaussian,
    /// Finite lower bound, r = +∞.
    TruncatedLower,
    /// Finite upper bound, l = −∞.
    TruncatedUpper,
}

/// Four-parameter belief (l, r, m, s). The mode is derived from the bounds,
/// so it can never disagree with them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefState {
    lower: f64,
    upper: f64,
    m: f64,
    s: f64,
}

impl BeliefState {
    pub fn new(lower: f64, upper: f64, m: f64, s: f64) -> Result<Self> {
        let reject = |reason| {
            Err(Error::InvalidState {
                lower,
                upper,
                m,
                s,
                reason,
            })
        };
        if !(s.is_finite() && s > 0.0) {
            return reject("s must be finite and positive");
        }
        if !m.is_finite() {
            return reject("m must be finite");
        }
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return reject("support must satisfy l < r");
        }
        if lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return reject("support bounds point the wrong way");
        }
        if lower.is_finite() && upper.is_finite() {
            return reject("at most one support bound may be finite");
        }
        Ok(Self { lower, upper, m, s })
    }

    /// Untruncated N(m, s²); panics if `s` is not positive or `m` not finite.
    pub fn gaussian(m: f64, s: f64) -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, m, s).expect("valid gaussian belief")
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Mean of the underlying (untruncated) normal.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Standard deviation of the underlying normal.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn mode(&self) -> Mode {
        match (self.lower.is_finite(), self.upper.is_finite()) {
            (false, false) => Mode::Gaussian,
            (true, _) => Mode::TruncatedLower,
            (false, true) => Mode::TruncatedUpper,
        }
    }

    fn standardized(&self) -> Result<TruncatedStdNormal> {
        TruncatedStdNormal::new((self.lower - self.m) / self.s, (self.upper - self.m) / self.s)
    }

    /// Density of the belief at `v`; zero outside the open support.
    pub fn density(&self, v: f64) -> f64 {
        if v <= self.lower || v >= self.upper {
            return 0.0;
        }
        match self.standardized() {
            Ok(t) => t.density((v - self.m) / self.s) / self.s,
            Err(_) => f64::NAN,
        }
    }

    /// Mean and spread of the (possibly truncated) belief.
    pub fn moments(&self, sigma_z: f64) -> Result<BeliefSummary> {
        if self.mode() == Mode::Gaussian {
            return Ok(BeliefSummary::new(self.m, self.s, sigma_z));
        }
        let t = self.standardized()?;
        let var = t.variance();
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::DegenerateMass {
                alpha: t.alpha(),
                beta: t.beta(),
            });
        }
        Ok(BeliefSummary::new(
            self.m + self.s * t.mean(),
            self.s * var.sqrt(),
            sigma_z,
        ))
    }
}

/// Free-function form of [`BeliefState::density`].
pub fn posterior_density(state: &BeliefState, v: f64) -> f64 {
    state.density(v)
}

/// Free-function form of [`BeliefState::moments`].
pub fn belief_moments(state: &BeliefState, sigma_z: f64) -> Result<BeliefSummary> {
    state.moments(sigma_z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefSummary {
    pub mu: f64,
    pub sigma: f64,
    /// `sigma / sigma_z`.
    pub rho: f64,
}

impl BeliefSummary {
    fn new(mu: f64, sigma: f64, sigma_z: f64) -> Self {
        Self {
            mu,
            sigma,
            rho: sigma / sigma_z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnerConfig {
    /// Initial prior standard deviation in units of `sigma_z`.
    pub rho0: f64,
    /// Observation noise standard deviation.
    pub sigma_z: f64,
    /// Gaussian inference while rho <= rho_star, truncation above.
    pub rho_star: f64,
    /// Truncation offset multiplier w: bounds move to θ ∓ w·σ_z.
    pub trunc_width: f64,
}

impl LearnerConfig {
    pub fn new(rho0: f64, sigma_z: f64) -> Self {
        Self {
            rho0,
            sigma_z,
            rho_star: DEFAULT_RHO_STAR,
            trunc_width: DEFAULT_TRUNC_WIDTH,
        }
    }

    pub fn with_rho_star(mut self, rho_star: f64) -> Self {
        self.rho_star = rho_star;
        self
    }

    pub fn with_trunc_width(mut self, trunc_width: f64) -> Self {
        self.trunc_width = trunc_width;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("rho0", self.rho0)?;
        ensure_positive("sigma_z", self.sigma_z)?;
        ensure_positive("rho_star", self.rho_star)?;
        ensure_positive("trunc_width", self.trunc_width)
    }

    /// The prior N(0, (rho0·sigma_z)²).
    pub fn prior(&self) -> BeliefState {
        BeliefState::gaussian(0.0, self.rho0 * self.sigma_z)
    }
}

/// |Δμ| of a moment-matched update with the threshold at the belief mean.
#[inline]
pub fn eta(rho: f64, sigma_z: f64) -> f64 {
    let r2 = rho * rho;
    sigma_z * (2.0 / PI).sqrt() * r2 / (1.0 + r2).sqrt()
}

/// Moment-matched Gaussian update for a sign observed at the belief mean.
///
/// Returns the new mean and the new spread ratio rho.
pub fn gaussian_step(mu: f64, rho: f64, x: Sign, sigma_z: f64) -> (f64, f64) {
    let r2 = rho * rho;
    let mu_next = mu + x.value() * eta(rho, sigma_z);
    let r2_next = r2 * (1.0 + r2 * (1.0 - 2.0 / PI)) / (1.0 + r2);
    (mu_next, r2_next.sqrt())
}

/// Chop the support at θ ∓ w·σ_z on the side the signal rules out.
///
/// The bound only ever advances; m and s are untouched.
pub fn truncate_step(state: &BeliefState, theta: f64, x: Sign, sigma_z: f64, trunc_width: f64) -> Result<BeliefState> {
    let offset = trunc_width * sigma_z;
    match (x, state.mode()) {
        (Sign::Plus, Mode::Gaussian | Mode::TruncatedLower) => {
            BeliefState::new(state.lower.max(theta - offset), f64::INFINITY, state.m, state.s)
        }
        (Sign::Minus, Mode::Gaussian | Mode::TruncatedUpper) => {
            BeliefState::new(f64::NEG_INFINITY, state.upper.min(theta + offset), state.m, state.s)
        }
        _ => Err(Error::InconsistentSign { sign: x.as_i8() }),
    }
}

/// Mean and standard deviation of the Gaussian that matches the mean and the
/// differential entropy of N(m, s²) restricted to (lower, upper).
pub fn entropy_matched_gaussian(m: f64, s: f64, lower: f64, upper: f64) -> Result<(f64, f64)> {
    let t = TruncatedStdNormal::new((lower - m) / s, (upper - m) / s)?;
    let mean = m + s * t.mean();
    let sigma = s * (0.5 * t.ln_entropy_matched_variance()).exp();
    if !(mean.is_finite() && sigma.is_finite() && sigma > 0.0) {
        return Err(Error::DegenerateMass {
            alpha: t.alpha(),
            beta: t.beta(),
        });
    }
    Ok((mean, sigma))
}

/// Collapse a truncated belief hit by a contradicting signal.
///
/// The belief is first doubly truncated to (l, θ + w·σ_z) for a −1 against a
/// lower bound, or (θ − w·σ_z, r) for a +1 against an upper bound, and then
/// replaced by the entropy-matched Gaussian.
pub fn collapse_step(state: &BeliefState, theta: f64, x: Sign, sigma_z: f64, trunc_width: f64) -> Result<BeliefState> {
    let offset = trunc_width * sigma_z;
    let (lower, upper) = match (x, state.mode()) {
        (Sign::Minus, Mode::TruncatedLower) => (state.lower, theta + offset),
        (Sign::Plus, Mode::TruncatedUpper) => (theta - offset, state.upper),
        _ => return Err(Error::NotCollapsible),
    };
    if lower >= upper {
        return Err(Error::InvalidState {
            lower,
            upper,
            m: state.m,
            s: state.s,
            reason: "collapse window is empty",
        });
    }
    let (mean, sigma) = entropy_matched_gaussian(state.m, state.s, lower, upper)?;
    Ok(BeliefState::gaussian(mean, sigma))
}

/// One transition of the learner: consume the sign observed at the current
/// threshold and return the new belief together with the next threshold.
pub fn learner_step(state: &BeliefState, x: Sign, config: &LearnerConfig) -> Result<(BeliefState, f64)> {
    let sigma_z = config.sigma_z;
    let w = config.trunc_width;
    let current = state.moments(sigma_z)?;
    let theta = current.mu;

    let next = match (state.mode(), x) {
        (Mode::Gaussian, _) if current.rho <= config.rho_star => {
            let (mu, rho) = gaussian_step(current.mu, current.rho, x, sigma_z);
            BeliefState::gaussian(mu, rho * sigma_z)
        }
        (Mode::Gaussian, _) | (Mode::TruncatedLower, Sign::Plus) | (Mode::TruncatedUpper, Sign::Minus) => {
            truncate_step(state, theta, x, sigma_z, w)?
        }
        (Mode::TruncatedLower, Sign::Minus) | (Mode::TruncatedUpper, Sign::Plus) => {
            collapse_step(state, theta, x, sigma_z, w)?
        }
    };

    // Truncated beliefs narrow enough for Gaussian inference are moment matched.
    let summary = next.moments(sigma_z)?;
    if next.mode() != Mode::Gaussian && summary.rho <= config.rho_star {
        return Ok((BeliefState::gaussian(summary.mu, summary.sigma), summary.mu));
    }
    Ok((next, summary.mu))
}

/// The approximate learner as a stateful object: holds the belief and the
/// myopic threshold (the belief mean).
#[derive(Debug, Clone)]
pub struct ApproximateLearner {
    config: LearnerConfig,
    state: BeliefState,
    threshold: f64,
}

impl ApproximateLearner {
    pub fn new(config: LearnerConfig) -> Result<Self> {
        config.validate()?;
        let state = config.prior();
        Ok(Self {
            config,
            state,
            threshold: state.m(),
        })
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.config
    }

    pub fn state(&self) -> &BeliefState {
        &self.state
    }

    /// Where the next query goes; equal to the current belief mean.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn mean(&self) -> f64 {
        self.threshold
    }

    pub fn observe(&mut self, x: Sign) -> Result<()> {
        let (state, theta) = learner_step(&self.state, x, &self.config)?;
        self.state = state;
        self.threshold = theta;
        Ok(())
    }
}

/// Constants (c1, c2) of the Θ(1/t) envelope on the Gaussian-regime step size.
pub fn step_size_constants(rho0: f64) -> (f64, f64) {
    let c1 = 1.0 / (2.0 * PI.sqrt());
    let c2 = (2.0 / PI).sqrt() * (PI + (PI - 2.0) * rho0 * rho0) / 2.0;
    (c1, c2)
}
