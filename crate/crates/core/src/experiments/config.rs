//! Flat `key=value` configuration. Blank lines and `#` comments are skipped;
//! unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use super::preset::{ExperimentPreset, PresetName, SweepParam};
use crate::sim::{BinRule, LearnerKind, VSource};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {}: {reason}", path.display())]
    Read { path: PathBuf, reason: String },
    #[error("{location}: expected key=value, got `{text}`")]
    Syntax { location: String, text: String },
    #[error("{location}: unknown key `{key}`")]
    UnknownKey { location: String, key: String },
    #[error("{location}: bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        location: String,
        key: String,
        value: String,
        reason: String,
    },
    #[error("no preset given (use --preset or a `preset=` line)")]
    MissingPreset,
    #[error("invalid configuration: {0}")]
    Invalid(#[from] crate::Error),
}

/// Every setting a config file or command-line flag may supply. `None`
/// means "use the preset default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub preset: Option<PresetName>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub episodes: Option<u64>,
    pub max_steps: Option<u64>,
    pub eps: Option<f64>,
    pub rho0: Option<f64>,
    pub sigma_z: Option<f64>,
    pub v: Option<VSource>,
    pub rho_star: Option<f64>,
    pub trunc_width: Option<f64>,
    pub learners: Option<Vec<LearnerKind>>,
    pub bins: Option<BinRule>,
    pub support_mult: Option<f64>,
    pub sweep: Option<Vec<f64>>,
    pub sweep_param: Option<SweepParam>,
    pub horizon: Option<usize>,
}

fn parse_num<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| e.to_string())
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|s| parse_num(s)).collect()
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse config text; `source` labels error locations.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("{source} line {}", i + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    location,
                    text: line.to_string(),
                });
            };
            out.set(key.trim(), value.trim(), &location)?;
        }
        Ok(out)
    }

    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str, location: &str) -> Result<(), ConfigError> {
        let parsed: Result<(), String> = match key {
            "preset" => value.parse().map(|v| self.preset = Some(v)),
            "out" => {
                self.out = Some(PathBuf::from(value));
                Ok(())
            }
            "seed" => parse_num(value).map(|v| self.seed = Some(v)),
            "episodes" => parse_num(value).map(|v| self.episodes = Some(v)),
            "max_steps" => parse_num(value).map(|v| self.max_steps = Some(v)),
            "eps" => parse_num(value).map(|v| self.eps = Some(v)),
            "rho0" => parse_num(value).map(|v| self.rho0 = Some(v)),
            "sigma_z" => parse_num(value).map(|v| self.sigma_z = Some(v)),
            "rho_star" => parse_num(value).map(|v| self.rho_star = Some(v)),
            "trunc_width" => parse_num(value).map(|v| self.trunc_width = Some(v)),
            "support_mult" => parse_num(value).map(|v| self.support_mult = Some(v)),
            "horizon" => parse_num(value).map(|v| self.horizon = Some(v)),
            "v" => match value {
                "prior" => {
                    self.v = Some(VSource::SampledFromPrior);
                    Ok(())
                }
                _ => parse_num(value).map(|v| self.v = Some(VSource::Fixed(v))),
            },
            "bins" => match value {
                "auto" => {
                    self.bins = Some(BinRule::HalfEpsilon);
                    Ok(())
                }
                _ => parse_num(value).map(|n| self.bins = Some(BinRule::Fixed(n))),
            },
            "learners" => parse_list(value).map(|v| self.learners = Some(v)),
            "sweep" => parse_list(value).map(|v| self.sweep = Some(v)),
            "sweep_param" => value.parse().map(|v| self.sweep_param = Some(v)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    location: location.to_string(),
                    key: key.to_string(),
                });
            }
        };
        parsed.map_err(|reason| ConfigError::BadValue {
            location: location.to_string(),
            key: key.to_string(),
            value: value.to_string(),
            reason,
        })
    }

    /// Layer `top` over `self`: any field set in `top` wins.
    pub fn overlay(self, top: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            preset,
            out,
            seed,
            episodes,
            max_steps,
            eps,
            rho0,
            sigma_z,
            v,
            rho_star,
            trunc_width,
            learners,
            bins,
            support_mult,
            sweep,
            sweep_param,
            horizon
        )
    }

    /// Apply these settings to the named preset's defaults and validate.
    pub fn resolve(self) -> Result<ExperimentPreset, ConfigError> {
        let name = self.preset.ok_or(ConfigError::MissingPreset)?;
        let mut p = ExperimentPreset::defaults(name);
        let default_param = p.sweep_param;
        if let Some(param) = self.sweep_param {
            p.sweep_param = param;
        }
        let b = &mut p.base;
        b.seed = self.seed.unwrap_or(b.seed);
        b.episodes = self.episodes.unwrap_or(b.episodes);
        b.max_steps = self.max_steps.unwrap_or(b.max_steps);
        b.eps = self.eps.unwrap_or(b.eps);
        b.rho0 = self.rho0.unwrap_or(b.rho0);
        b.sigma_z = self.sigma_z.unwrap_or(b.sigma_z);
        b.v_source = self.v.unwrap_or(b.v_source);
        b.rho_star = self.rho_star.unwrap_or(b.rho_star);
        b.trunc_width = self.trunc_width.unwrap_or(b.trunc_width);
        b.histogram.bins = self.bins.unwrap_or(b.histogram.bins);
        b.histogram.support_mult = self.support_mult.unwrap_or(b.histogram.support_mult);
        let scalar = match p.sweep_param {
            SweepParam::Rho0 => self.rho0,
            SweepParam::Eps => self.eps,
        };
        let base_value = match p.sweep_param {
            SweepParam::Rho0 => p.base.rho0,
            SweepParam::Eps => p.base.eps,
        };
        // An explicit list wins; a scalar for the swept parameter pins it.
        if let Some(values) = self.sweep {
            p.sweep_values = values;
        } else if let Some(x) = scalar {
            p.sweep_values = vec![x];
        } else if p.sweep_param != default_param {
            p.sweep_values = vec![base_value];
        }
        if let Some(l) = self.learners {
            p.learners = l;
        }
        if let Some(h) = self.horizon {
            p.horizon = h;
        }
        if let Some(out) = self.out {
            p.out = out;
        }
        p.validate()?;
        Ok(p)
    }
}
