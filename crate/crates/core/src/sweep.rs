//! Parameter sweeps of the TAGS/SITA waiting-time ratio over `r`, and the
//! CSV layout they are written in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{ratio_lower_bound, sita_upper_bound, tags_lower_bound};
use crate::distributions::BoundedPareto;
use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::simulator::{simulate, SimConfig};
use crate::sita::{optimal_sita_cutoff, sita_objective};
use crate::tags::optimal_tags_threshold;

/// Fixed column order of sweep CSV files.
pub const CSV_COLUMNS: [&str; 13] = [
    "r",
    "lambda",
    "alpha",
    "s_tags",
    "s_sita",
    "w_tags",
    "w_sita",
    "ratio",
    "ratio_lower_bound",
    "tags_lower_bound",
    "sita_upper_bound",
    "feasible_tags",
    "feasible_sita",
];

/// Extra columns appended in [`SweepMode::Both`].
pub const SIM_COLUMNS: [&str; 3] = ["w_tags_sim", "w_sita_sim", "ratio_sim"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioMode {
    /// Each policy at its own optimal threshold.
    #[default]
    OptimalEach,
    /// SITA evaluated at the optimal TAGS threshold.
    SitaAtTagsThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    #[default]
    Analytic,
    Simulate,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for RGrid {
    fn default() -> Self {
        Self {
            min: 10.0,
            max: 1000.0,
            points: 60,
            spacing: Spacing::Log,
        }
    }
}

impl RGrid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let mut out: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                    Spacing::Linear => self.min + t * (self.max - self.min),
                }
            })
            .collect();
        out[0] = self.min;
        out[n - 1] = self.max;
        out
    }
}

/// Simulation settings used by sweeps in simulate/both mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSimulation {
    pub jobs: usize,
    pub seed: u64,
}

impl Default for SweepSimulation {
    fn default() -> Self {
        Self {
            jobs: 1_000_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    pub alpha_values: Vec<f64>,
    pub lambda_values: Vec<f64>,
    pub r_grid: RGrid,
    pub mode: SweepMode,
    pub ratio_mode: RatioMode,
    pub simulation: SweepSimulation,
    pub output_path: String,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            alpha_values: vec![1.0],
            lambda_values: vec![0.05, 0.01, 0.005, 0.001],
            r_grid: RGrid::default(),
            mode: SweepMode::Analytic,
            ratio_mode: RatioMode::OptimalEach,
            simulation: SweepSimulation::default(),
            output_path: "sweep.csv".into(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_values.is_empty() || self.lambda_values.is_empty() {
            return Err(Error::Config("alpha and lambda lists must be non-empty".into()));
        }
        let g = &self.r_grid;
        if !(g.min >= 2.0 && g.max >= g.min && g.max.is_finite()) {
            return Err(Error::Config(format!(
                "r grid must satisfy 2 <= min <= max, got [{}, {}]",
                g.min, g.max
            )));
        }
        if g.points < 2 {
            return Err(Error::Config("r grid needs at least 2 points".into()));
        }
        for &a in &self.alpha_values {
            if !a.is_finite() || a == 0.0 {
                return Err(Error::Config(format!("bad alpha {a}")));
            }
        }
        for &l in &self.lambda_values {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("bad lambda {l}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub s_tags: f64,
    pub s_sita: f64,
    pub w_tags: f64,
    pub w_sita: f64,
    pub ratio: f64,
    pub ratio_lower_bound: Option<f64>,
    pub tags_lower_bound: Option<f64>,
    pub sita_upper_bound: Option<f64>,
    pub feasible_tags: bool,
    pub feasible_sita: bool,
    /// Simulated values, filled in `Both` mode.
    pub sim: Option<(f64, f64, f64)>,
}

/// Analytic ratio at one `(alpha, lambda, r)` point.
pub fn ratio_point(alpha: f64, lambda: f64, r: f64, mode: RatioMode) -> Result<SweepRow> {
    let d = BoundedPareto::new(alpha, r)?;
    let tags = optimal_tags_threshold(&d, lambda).ok();
    let sita = optimal_sita_cutoff(&d, lambda).ok();

    let (s_tags, w_tags) = tags.map_or((f64::NAN, f64::INFINITY), |t| {
        (t.optimal_threshold, t.optimal_value)
    });
    let (s_sita, w_sita) = match mode {
        RatioMode::OptimalEach => sita.map_or((f64::NAN, f64::INFINITY), |t| {
            (t.optimal_threshold, t.optimal_value)
        }),
        RatioMode::SitaAtTagsThreshold => {
            if tags.is_some() {
                (s_tags, sita_objective(&d, lambda, s_tags))
            } else {
                (f64::NAN, f64::INFINITY)
            }
        }
    };

    let bounds_apply = alpha == 1.0 && lambda * r < 1.0;
    Ok(SweepRow {
        r,
        lambda,
        alpha,
        s_tags,
        s_sita,
        w_tags,
        w_sita,
        ratio: w_tags / w_sita,
        ratio_lower_bound: bounds_apply.then(|| ratio_lower_bound(r).ok()).flatten(),
        tags_lower_bound: bounds_apply.then(|| tags_lower_bound(lambda, r).ok()).flatten(),
        sita_upper_bound: bounds_apply.then(|| sita_upper_bound(lambda, r).ok()).flatten(),
        feasible_tags: w_tags.is_finite(),
        feasible_sita: w_sita.is_finite(),
        sim: None,
    })
}

fn simulated_waits(row: &SweepRow, sim: &SweepSimulation) -> Result<(f64, f64, f64)> {
    let d = BoundedPareto::new(row.alpha, row.r)?;
    let run = |policy, s: f64, feasible: bool| -> Result<f64> {
        if !feasible || !s.is_finite() {
            return Ok(f64::INFINITY);
        }
        let cfg = SimConfig::new(policy, d, row.lambda, s)
            .with_jobs(sim.jobs)
            .with_seed(sim.seed);
        Ok(simulate(&cfg)?.mean_wait)
    };
    let wt = run(Policy::Tags, row.s_tags, row.feasible_tags)?;
    let ws = run(Policy::Sita, row.s_sita, row.feasible_sita)?;
    Ok((wt, ws, wt / ws))
}

/// All rows of a sweep, sorted by `(alpha, lambda, r)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let rs = spec.r_grid.values();
    let mut points = Vec::new();
    for &alpha in &spec.alpha_values {
        for &lambda in &spec.lambda_values {
            for &r in &rs {
                points.push((alpha, lambda, r));
            }
        }
    }
    let mut rows: Vec<SweepRow> = points
        .into_par_iter()
        .map(|(alpha, lambda, r)| {
            let mut row = ratio_point(alpha, lambda, r, spec.ratio_mode)?;
            match spec.mode {
                SweepMode::Analytic => {}
                SweepMode::Simulate => {
                    let (wt, ws, ratio) = simulated_waits(&row, &spec.simulation)?;
                    row.w_tags = wt;
                    row.w_sita = ws;
                    row.ratio = ratio;
                }
                SweepMode::Both => row.sim = Some(simulated_waits(&row, &spec.simulation)?),
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| {
        a.alpha
            .total_cmp(&b.alpha)
            .then(a.lambda.total_cmp(&b.lambda))
            .then(a.r.total_cmp(&b.r))
    });
    Ok(rows)
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    const DIGITS: usize = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

pub fn csv_header(mode: SweepMode) -> String {
    let mut cols: Vec<&str> = CSV_COLUMNS.to_vec();
    if mode == SweepMode::Both {
        cols.extend(SIM_COLUMNS);
    }
    cols.join(",")
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let mut fields = vec![
            format_sig(self.r),
            format_sig(self.lambda),
            format_sig(self.alpha),
            format_sig(self.s_tags),
            format_sig(self.s_sita),
            format_sig(self.w_tags),
            format_sig(self.w_sita),
            format_sig(self.ratio),
            opt(self.ratio_lower_bound),
            opt(self.tags_lower_bound),
            opt(self.sita_upper_bound),
            self.feasible_tags.to_string(),
            self.feasible_sita.to_string(),
        ];
        if let Some((wt, ws, ratio)) = self.sim {
            fields.extend([format_sig(wt), format_sig(ws), format_sig(ratio)]);
        }
        fields.join(",")
    }
}

pub fn to_csv(rows: &[SweepRow], mode: SweepMode) -> String {
    let mut out = csv_header(mode);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Gnuplot script plotting `ratio` against `r` (log x axis), one curve per
/// `(alpha, lambda)` pair found in `rows`.
pub fn gnuplot_script(rows: &[SweepRow], csv_path: &str, png_path: &str) -> String {
    let mut series: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        if !series.contains(&(row.alpha, row.lambda)) {
            series.push((row.alpha, row.lambda));
        }
    }
    let mut out = String::new();
    out.push_str("set datafile separator ','\n");
    out.push_str("set terminal pngcairo size 900,600\n");
    out.push_str(&format!("set output '{png_path}'\n"));
    out.push_str("set logscale x\n");
    out.push_str("set xlabel 'r'\n");
    out.push_str("set ylabel 'E[W TAGS] / E[W SITA]'\n");
    out.push_str("set key left top\n");
    let plots: Vec<String> = series
        .iter()
        .map(|(a, l)| {
            format!(
                "'{csv_path}' using 1:(($3=={a} && $2=={l}) ? $8 : 1/0) skip 1 with linespoints \
                 title 'alpha={a}, lambda={l}'",
                a = format_sig(*a),
                l = format_sig(*l),
            )
        })
        .collect();
    out.push_str("plot ");
    out.push_str(&plots.join(", \\\n     "));
    out.push('\n');
    out
}
