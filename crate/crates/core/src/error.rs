use thiserror::Error;

/// Everything that can go wrong inside the learners, the harness and the
/// experiment front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid belief state (l={lower}, r={upper}, m={m}, s={s}): {reason}")]
    InvalidState {
        lower: f64,
        upper: f64,
        m: f64,
        s: f64,
        reason: &'static str,
    },

    /// The normalizing mass of a truncated normal is not representable.
    #[error("degenerate truncation mass on standardized window ({alpha}, {beta})")]
    DegenerateMass { alpha: f64, beta: f64 },

    /// A truncation was requested for a signal that should have triggered a collapse.
    #[error("signal {sign} is inconsistent with the truncation direction; collapse expected")]
    InconsistentSign { sign: i8 },

    /// A collapse was requested for a state that has nothing to collapse.
    #[error("collapse requires a truncated state and a contradicting signal")]
    NotCollapsible,

    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// All histogram weights vanished after an update; the target is far outside the grid.
    #[error("histogram mass underflow after update at threshold {theta}")]
    MassUnderflow { theta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("episode {index}: {source}")]
    Episode {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("no episode converged within {max_steps} steps ({episodes} episodes)")]
    AllTimedOut { episodes: u64, max_steps: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
