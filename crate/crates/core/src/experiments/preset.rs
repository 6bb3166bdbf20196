use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sim::{BinRule, LearnerKind, SimulationSpec, VSource};

/// Smallest episode count a preset accepts.
pub const MIN_EPISODES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    /// Expected-mean crossing times against ε for a fixed target.
    Fig3EpsSweep,
    /// Mean hit time against ρ0 at fixed ε.
    Fig4RhoSweep,
    /// Mean hit time against ε at fixed ρ0.
    Fig5EpsSweep,
    Custom,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Fig3EpsSweep => "fig3",
            PresetName::Fig4RhoSweep => "fig4",
            PresetName::Fig5EpsSweep => "fig5",
            PresetName::Custom => "custom",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "fig3" => Ok(PresetName::Fig3EpsSweep),
            "fig4" => Ok(PresetName::Fig4RhoSweep),
            "fig5" => Ok(PresetName::Fig5EpsSweep),
            "custom" => Ok(PresetName::Custom),
            other => Err(format!(
                "unknown preset `{other}` (expected fig3, fig4, fig5 or custom)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Rho0,
    Eps,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Rho0 => "rho0",
            SweepParam::Eps => "eps",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "rho0" => Ok(SweepParam::Rho0),
            "eps" => Ok(SweepParam::Eps),
            other => Err(format!("cannot sweep `{other}` (expected rho0 or eps)")),
        }
    }
}

/// A fully resolved sweep: one Monte Carlo run per (sweep value, learner).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: PresetName,
    pub sweep_param: SweepParam,
    pub sweep_values: Vec<f64>,
    pub learners: Vec<LearnerKind>,
    /// Shared settings; the learner and the swept field are overwritten per point.
    pub base: SimulationSpec,
    /// Length of the expectation curve (fig3 only).
    pub horizon: usize,
    pub out: PathBuf,
}

impl ExperimentPreset {
    pub fn defaults(name: PresetName) -> Self {
        let eps_grid = vec![0.4, 0.2, 0.1, 0.05];
        match name {
            PresetName::Fig3EpsSweep => {
                let mut base = SimulationSpec::new(LearnerKind::Approximate, 0.5, 0.1);
                base.v_source = VSource::Fixed(3.0);
                Self {
                    name,
                    sweep_param: SweepParam::Eps,
                    sweep_values: eps_grid,
                    learners: vec![LearnerKind::Approximate, LearnerKind::KalmanOracle],
                    base,
                    horizon: 4000,
                    out: PathBuf::from("fig3.csv"),
                }
            }
            PresetName::Fig4RhoSweep => Self {
                name,
                sweep_param: SweepParam::Rho0,
                sweep_values: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
                learners: LearnerKind::ALL.to_vec(),
                base: SimulationSpec::new(LearnerKind::Approximate, 1.0, 0.2),
                horizon: 0,
                out: PathBuf::from("fig4.csv"),
            },
            PresetName::Fig5EpsSweep => {
                let mut base = SimulationSpec::new(LearnerKind::Approximate, 0.5, 0.1);
                base.histogram.bins = BinRule::HalfEpsilon;
                Self {
                    name,
                    sweep_param: SweepParam::Eps,
                    sweep_values: eps_grid,
                    learners: LearnerKind::ALL.to_vec(),
                    base,
                    horizon: 0,
                    out: PathBuf::from("fig5.csv"),
                }
            }
            PresetName::Custom => Self {
                name,
                sweep_param: SweepParam::Rho0,
                sweep_values: vec![1.0],
                learners: LearnerKind::ALL.to_vec(),
                base: SimulationSpec::new(LearnerKind::Approximate, 1.0, 0.1),
                horizon: 0,
                out: PathBuf::from("custom.csv"),
            },
        }
    }

    /// The simulation run for `learner` at one sweep value.
    pub fn point_spec(&self, learner: LearnerKind, value: f64) -> SimulationSpec {
        let mut spec = self.base.clone();
        spec.learner = learner;
        match self.sweep_param {
            SweepParam::Rho0 => spec.rho0 = value,
            SweepParam::Eps => spec.eps = value,
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if self.sweep_values.is_empty() {
            return bad("sweep", "needs at least one value");
        }
        if self.sweep_values.iter().any(|v| !v.is_finite()) {
            return bad("sweep", "values must be finite");
        }
        let increasing = self.sweep_values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.sweep_values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return bad("sweep", "values must be strictly monotone");
        }
        if self.base.episodes < MIN_EPISODES {
            return Err(Error::InvalidParameter {
                name: "episodes",
                reason: format!("must be at least {MIN_EPISODES}, got {}", self.base.episodes),
            });
        }
        if self.learners.is_empty() {
            return bad("learners", "needs at least one learner");
        }
        for (i, l) in self.learners.iter().enumerate() {
            if self.learners[..i].contains(l) {
                return Err(Error::InvalidParameter {
                    name: "learners",
                    reason: format!("`{l}` listed twice"),
                });
            }
        }
        if self.name == PresetName::Fig3EpsSweep {
            if !matches!(self.base.v_source, VSource::Fixed(_)) {
                return bad("v", "fig3 needs a fixed target");
            }
            if self.horizon == 0 {
                return bad("horizon", "must be at least 1");
            }
        }
        for &value in &self.sweep_values {
            for &learner in &self.learners {
                self.point_spec(learner, value).validate()?;
            }
        }
        Ok(())
    }
}

/// Renders in the config-file format, so the echo can be saved and re-run.
impl fmt::Display for ExperimentPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<String>| xs.join(",");
        let b = &self.base;
        writeln!(f, "preset={}", self.name)?;
        writeln!(f, "sweep_param={}", self.sweep_param)?;
        writeln!(
            f,
            "sweep={}",
            join(self.sweep_values.iter().map(|v| v.to_string()).collect())
        )?;
        writeln!(
            f,
            "learners={}",
            join(self.learners.iter().map(|l| l.to_string()).collect())
        )?;
        match self.sweep_param {
            SweepParam::Rho0 => writeln!(f, "eps={}", b.eps)?,
            SweepParam::Eps => writeln!(f, "rho0={}", b.rho0)?,
        }
        match b.v_source {
            VSource::Fixed(v) => writeln!(f, "v={v}")?,
            VSource::SampledFromPrior => writeln!(f, "v=prior")?,
        }
        writeln!(f, "sigma_z={}", b.sigma_z)?;
        writeln!(f, "rho_star={}", b.rho_star)?;
        writeln!(f, "trunc_width={}", b.trunc_width)?;
        match b.histogram.bins {
            BinRule::Fixed(n) => writeln!(f, "bins={n}")?,
            BinRule::HalfEpsilon => writeln!(f, "bins=auto")?,
        }
        writeln!(f, "support_mult={}", b.histogram.support_mult)?;
        writeln!(f, "episodes={}", b.episodes)?;
        writeln!(f, "max_steps={}", b.max_steps)?;
        writeln!(f, "seed={}", b.seed)?;
        if self.name == PresetName::Fig3EpsSweep {
            writeln!(f, "horizon={}", self.horizon)?;
        }
        write!(f, "out={}", self.out.display())
    }
}
