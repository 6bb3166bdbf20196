use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::preset::{ExperimentPreset, PresetName, SweepParam};
use crate::error::{Error, Result};
use crate::kalman;
use crate::sim::{expectation_curve, monte_carlo, ExpectationCurve, LearnerKind, VSource};

pub const CSV_HEADER: &str = "sweep_param,sweep_value,learner,mean_hit_time,stderr,timeout_fraction,episodes,seed";
const CROSSING_HEADER: &str = "eps,learner,crossing_time,kalman_expectation_time";

/// C-style `%.12g`.
pub fn format_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("`e` formatting always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub learner: LearnerKind,
    /// NaN when every episode at this point timed out.
    pub mean_hit_time: f64,
    pub stderr: f64,
    pub timeout_fraction: f64,
    pub episodes: u64,
    pub seed: u64,
}

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.sweep_param,
            format_g12(self.sweep_value),
            self.learner,
            format_g12(self.mean_hit_time),
            format_g12(self.stderr),
            format_g12(self.timeout_fraction),
            self.episodes,
            self.seed
        )
    }
}

/// When the expected learner mean first comes within ε of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingRow {
    pub eps: f64,
    pub learner: LearnerKind,
    /// `None` if the curve never crosses within the horizon.
    pub crossing_time: Option<usize>,
    /// Closed-form value for the unthresholded filter.
    pub kalman_expectation_time: f64,
}

#[derive(Debug, Clone)]
pub struct PresetReport {
    pub preset: ExperimentPreset,
    pub rows: Vec<ResultRow>,
    pub crossings: Vec<CrossingRow>,
    pub curves: Vec<(LearnerKind, ExpectationCurve)>,
}

/// Run every (sweep value, learner) point of the preset.
pub fn run_preset(preset: &ExperimentPreset) -> Result<PresetReport> {
    preset.validate()?;
    let mut rows = Vec::new();
    for &value in &preset.sweep_values {
        for &learner in &preset.learners {
            let spec = preset.point_spec(learner, value);
            let (mean, stderr, timeout) = match monte_carlo(&spec) {
                Ok(s) => (s.mean_hit_time, s.stderr, s.timeout_fraction),
                Err(Error::AllTimedOut { .. }) => (f64::NAN, f64::NAN, 1.0),
                Err(e) => return Err(e),
            };
            rows.push(ResultRow {
                sweep_param: preset.sweep_param,
                sweep_value: value,
                learner,
                mean_hit_time: mean,
                stderr,
                timeout_fraction: timeout,
                episodes: spec.episodes,
                seed: spec.seed,
            });
        }
    }
    if rows.iter().all(|r| r.timeout_fraction == 1.0) {
        return Err(Error::AllTimedOut {
            episodes: preset.base.episodes * rows.len() as u64,
            max_steps: preset.base.max_steps,
        });
    }

    let (mut crossings, mut curves) = (Vec::new(), Vec::new());
    if let (PresetName::Fig3EpsSweep, VSource::Fixed(v)) = (preset.name, preset.base.v_source) {
        // The trajectory does not depend on ε, so one curve serves the whole sweep.
        for &learner in &preset.learners {
            let spec = preset.point_spec(learner, preset.sweep_values[0]);
            let curve = expectation_curve(&spec, preset.horizon)?;
            for &eps in &preset.sweep_values {
                crossings.push(CrossingRow {
                    eps,
                    learner,
                    crossing_time: curve.crossing_time(v, eps),
                    kalman_expectation_time: kalman::expectation_time(v, eps, spec.rho0)?,
                });
            }
            curves.push((learner, curve));
        }
    }
    Ok(PresetReport {
        preset: preset.clone(),
        rows,
        crossings,
        curves,
    })
}

/// Least-squares slope of ln y against ln x.
pub(crate) fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    out.with_file_name(format!("{stem}.{suffix}"))
}

impl PresetReport {
    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn crossings_csv(&self) -> String {
        let mut s = String::from(CROSSING_HEADER);
        s.push('\n');
        for c in &self.crossings {
            let t = c.crossing_time.map(|t| t.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{}",
                format_g12(c.eps),
                c.learner,
                t,
                format_g12(c.kalman_expectation_time)
            );
        }
        s
    }

    /// Two-column `sweep_value mean_hit_time` data for one learner.
    pub fn plot_data(&self, learner: LearnerKind) -> String {
        let mut s = format!("# {} mean_hit_time ({learner})\n", self.preset.sweep_param);
        for r in self.rows.iter().filter(|r| r.learner == learner) {
            let _ = writeln!(s, "{} {}", format_g12(r.sweep_value), format_g12(r.mean_hit_time));
        }
        s
    }

    fn curve_data(curve: &ExpectationCurve, learner: LearnerKind) -> String {
        let mut s = format!("# t mean_mu ({learner})\n");
        for (t, m) in curve.mean.iter().enumerate() {
            let _ = writeln!(s, "{t} {}", format_g12(*m));
        }
        s
    }

    /// Slope of ln(crossing time) against ln(1/ε) for one learner, through
    /// the two smallest ε whose curves crossed at t > 0.
    pub fn crossing_slope(&self, learner: LearnerKind) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self
            .crossings
            .iter()
            .filter(|c| c.learner == learner)
            .filter_map(|c| c.crossing_time.filter(|&t| t > 0).map(|t| (1.0 / c.eps, t as f64)))
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        pts.truncate(2);
        loglog_slope(&pts)
    }

    /// Write the CSV and plot files, returning every path written.
    pub fn write(&self) -> io::Result<Vec<PathBuf>> {
        let out = &self.preset.out;
        let mut written = Vec::new();
        let mut put = |path: PathBuf, body: String| -> io::Result<()> {
            fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        put(out.clone(), self.csv())?;
        for &learner in &self.preset.learners {
            put(sibling(out, &format!("{learner}.dat")), self.plot_data(learner))?;
        }
        if !self.crossings.is_empty() {
            put(sibling(out, "crossings.csv"), self.crossings_csv())?;
        }
        for (learner, curve) in &self.curves {
            put(
                sibling(out, &format!("curve.{learner}.dat")),
                Self::curve_data(curve, *learner),
            )?;
        }
        Ok(written)
    }

    /// Human-readable table of the results.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>10} {:>12} {:>14} {:>10} {:>9}",
            self.preset.sweep_param.as_str(),
            "learner",
            "mean_hit",
            "stderr",
            "timeout"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>10} {:>12} {:>14.4} {:>10.4} {:>9.4}",
                format_g12(r.sweep_value),
                r.learner.name(),
                r.mean_hit_time,
                r.stderr,
                r.timeout_fraction
            );
        }
        for c in &self.crossings {
            let t = c.crossing_time.map(|t| t.to_string()).unwrap_or_else(|| "none".into());
            let _ = writeln!(s, "eps={} {}: E[mu_t] crosses at t={t}", format_g12(c.eps), c.learner);
        }
        for (learner, _) in &self.curves {
            if let Some(k) = self.crossing_slope(*learner) {
                let _ = writeln!(s, "{learner}: log-log slope of crossing time vs 1/eps = {k:.3}");
            }
        }
        s
    }
}
