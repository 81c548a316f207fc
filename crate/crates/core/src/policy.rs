//! Types shared by the SITA and TAGS evaluators, and the threshold search.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mg1::StationEvaluation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Sita,
    Tags,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Sita => f.write_str("sita"),
            Policy::Tags => f.write_str("tags"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Station {
    Server1,
    Server2,
}

/// Result of evaluating a policy at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvaluation {
    pub policy: Policy,
    pub threshold: f64,
    pub station1: StationEvaluation,
    pub station2: StationEvaluation,
    /// Probability that a job is served (SITA) or restarted (TAGS) at server 2.
    pub fraction_to_2: f64,
    /// Mean waiting time over all jobs; `+inf` when infeasible.
    pub total_wait: f64,
}

impl PolicyEvaluation {
    pub fn is_feasible(&self) -> bool {
        self.station1.is_stable() && self.station2.is_stable()
    }

    pub fn unstable_stations(&self) -> Vec<Station> {
        let mut out = Vec::new();
        if !self.station1.is_stable() {
            out.push(Station::Server1);
        }
        if !self.station2.is_stable() {
            out.push(Station::Server2);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearchResult {
    pub optimal_threshold: f64,
    pub optimal_value: f64,
    pub evaluations: usize,
    pub feasible: bool,
}

/// Number of log-spaced grid points probed before refinement.
pub const GRID_POINTS: usize = 1024;

/// Relative width in `s` at which golden-section refinement stops.
pub const REFINE_RTOL: f64 = 1e-8;

/// `n` log-spaced points on `[1, r]`, including both ends exactly.
pub fn log_grid(r: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let log_r = r.ln();
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (log_r * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = 1.0;
    grid[n - 1] = r;
    grid
}

/// Minimize `objective` over `[1, r]`: scan the log grid, then run a golden
/// section search inside the bracket around the best grid point.
///
/// Infeasible thresholds should map to `+inf`. The returned value is never
/// larger than any grid value.
pub fn minimize_threshold<F>(r: f64, objective: F) -> ThresholdSearchResult
where
    F: Fn(f64) -> f64,
{
    let grid = log_grid(r, GRID_POINTS);
    let values: Vec<f64> = grid.iter().map(|&s| objective(s)).collect();
    let mut evaluations = grid.len();

    let (best_idx, &best_val) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    if !best_val.is_finite() {
        return ThresholdSearchResult {
            optimal_threshold: r,
            optimal_value: f64::INFINITY,
            evaluations,
            feasible: false,
        };
    }

    let mut best_s = grid[best_idx];
    let mut best = best_val;
    let lo = grid[best_idx.saturating_sub(1)];
    let hi = grid[(best_idx + 1).min(grid.len() - 1)];
    let (s, v, n) = golden_section(&objective, lo, hi);
    evaluations += n;
    if v < best {
        best = v;
        best_s = s;
    }

    ThresholdSearchResult {
        optimal_threshold: best_s,
        optimal_value: best,
        evaluations,
        feasible: true,
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64, usize)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    while hi - lo > REFINE_RTOL * 0.5 * (hi + lo) && evals < 200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 <= f2 {
        (x1, f1, evals)
    } else {
        (x2, f2, evals)
    }
}
