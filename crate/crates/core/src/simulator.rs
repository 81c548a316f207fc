//! Seeded simulation of the two-server SITA and TAGS systems.
//!
//! The topology is feed-forward (TAGS server 1 feeds server 2), so each queue
//! is advanced with a Lindley recursion on the unfinished work seen by an
//! arriving job; no event calendar is needed. Per-job waiting time is the
//! sojourn minus the job's own size: the server-1 delay, plus `s` and the
//! server-2 delay for jobs killed under TAGS.
//!
//! Random numbers come from `ChaCha8Rng` seeded with `seed_from_u64(seed)`,
//! stream 0 for [`simulate`] and stream `i` for replication `i`. Each job
//! consumes two `f64` draws in order: the exponential interarrival gap
//! (inverse transform) and the job size (Bounded Pareto quantile).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::distributions::BoundedPareto;
use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::tags::truncated_service_moments;

pub const DEFAULT_BATCHES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub num_jobs: usize,
    pub warmup_jobs: usize,
    pub policy: Policy,
    pub threshold: f64,
    pub arrival_rate: f64,
    pub dist: BoundedPareto,
    pub batches: usize,
}

impl SimConfig {
    /// One million jobs, 10% warmup, 32 batches, seed 0.
    pub fn new(policy: Policy, dist: BoundedPareto, arrival_rate: f64, threshold: f64) -> Self {
        Self {
            seed: 0,
            num_jobs: 1_000_000,
            warmup_jobs: 100_000,
            policy,
            threshold,
            arrival_rate,
            dist,
            batches: DEFAULT_BATCHES,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sets the job count and resets warmup to 10% of it.
    pub fn with_jobs(mut self, num_jobs: usize) -> Self {
        self.num_jobs = num_jobs;
        self.warmup_jobs = num_jobs / 10;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_jobs <= self.warmup_jobs {
            return Err(Error::Config(format!(
                "num_jobs ({}) must exceed warmup_jobs ({})",
                self.num_jobs, self.warmup_jobs
            )));
        }
        if self.batches < 2 {
            return Err(Error::Config(format!("need at least 2 batches, got {}", self.batches)));
        }
        if self.num_jobs - self.warmup_jobs < self.batches {
            return Err(Error::Config("fewer measured jobs than batches".into()));
        }
        if !(self.arrival_rate > 0.0 && self.arrival_rate.is_finite()) {
            return Err(Error::Config(format!("bad arrival rate {}", self.arrival_rate)));
        }
        if !(self.threshold >= 1.0 && self.threshold <= self.dist.r()) {
            return Err(Error::Config(format!(
                "threshold {} not in [1, {}]",
                self.threshold,
                self.dist.r()
            )));
        }
        Ok(())
    }

    /// Whether the analytic load of either server is at least 1.
    fn overloaded(&self) -> bool {
        let d = &self.dist;
        let s = self.threshold;
        let tail_work = d.partial_moment(1.0, s, d.r()).unwrap_or(f64::INFINITY);
        let first = match self.policy {
            Policy::Sita => d.partial_moment(1.0, 1.0, s).unwrap_or(f64::INFINITY),
            Policy::Tags => truncated_service_moments(d, s, 1.0).unwrap_or(f64::INFINITY),
        };
        self.arrival_rate * first >= 1.0 || self.arrival_rate * tail_work >= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub mean_wait: f64,
    /// 95% confidence half-width.
    pub ci_halfwidth: f64,
    /// Standard error behind the half-width (batch means or replications).
    pub std_error: f64,
    /// Degrees of freedom of the Student-t critical value.
    pub dof: usize,
    /// Mean wait of jobs queued at server 1.
    pub station1_mean_wait: f64,
    /// 95% half-width for `station1_mean_wait`.
    pub station1_ci_halfwidth: f64,
    /// Mean wait in queue 2 of jobs that visit server 2; 0 when none do.
    pub station2_mean_wait: f64,
    pub overflow_fraction: f64,
    pub jobs_measured: usize,
    pub mean_job_size: f64,
    pub job_size_std: f64,
    /// Set when the configuration overloads a server; estimates then diverge.
    pub unstable: bool,
}

impl SimResult {
    /// Confidence half-width at an arbitrary two-sided level.
    pub fn halfwidth_at(&self, level: f64) -> f64 {
        t_critical(self.dof, level) * self.std_error
    }
}

fn t_critical(dof: usize, level: f64) -> f64 {
    let t = StudentsT::new(0.0, 1.0, dof as f64).expect("dof >= 1");
    t.inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Unfinished work at one FCFS server.
#[derive(Default)]
struct Queue {
    backlog: f64,
}

impl Queue {
    /// Advance by `gap` time units, admit a job of `service` work, and
    /// return its queueing delay.
    fn admit(&mut self, gap: f64, service: f64) -> f64 {
        let wait = (self.backlog - gap).max(0.0);
        self.backlog = wait + service;
        wait
    }
}

#[derive(Default, Clone)]
struct Tally {
    sum: f64,
    count: usize,
}

impl Tally {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.count += 1;
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }
}

fn run(config: &SimConfig, stream: u64) -> Result<SimResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);

    let d = &config.dist;
    let s = config.threshold;
    let rate = config.arrival_rate;
    let measured = config.num_jobs - config.warmup_jobs;

    let mut q1 = Queue::default();
    let mut q2 = Queue::default();
    // time since the previous arrival at each server
    let mut gap1 = 0.0;
    let mut gap2 = 0.0;
    // TAGS: server-1 delay of the last killed job
    let mut last_kill_wait1 = 0.0;
    let mut first_kill = true;

    let mut batch_sums = vec![0.0; config.batches];
    let mut batch_counts = vec![0usize; config.batches];
    let mut batch_s1 = vec![Tally::default(); config.batches];
    let mut st1 = Tally::default();
    let mut st2 = Tally::default();
    let mut overflow = 0usize;
    let mut size_sum = 0.0;
    let mut size_sq = 0.0;

    for n in 0..config.num_jobs {
        let u_gap: f64 = rng.random();
        let u_size: f64 = rng.random();
        let interarrival = -(-u_gap).ln_1p() / rate;
        let size = d.quantile(u_size)?;
        gap1 += interarrival;
        gap2 += interarrival;

        let (wait, at1, at2) = match config.policy {
            Policy::Sita => {
                if size <= s {
                    let w = q1.admit(gap1, size);
                    gap1 = 0.0;
                    (w, Some(w), None)
                } else {
                    let w = q2.admit(gap2, size);
                    gap2 = 0.0;
                    (w, None, Some(w))
                }
            }
            Policy::Tags => {
                let w1 = q1.admit(gap1, size.min(s));
                gap1 = 0.0;
                if size <= s {
                    (w1, Some(w1), None)
                } else {
                    // kill epochs are arrival + w1 + s; the s terms cancel in the gap
                    let kill_gap = if first_kill {
                        0.0
                    } else {
                        gap2 + w1 - last_kill_wait1
                    };
                    debug_assert!(
                        kill_gap >= -1e-9 * (1.0 + gap2 + w1),
                        "server 2 would start a job before its kill epoch"
                    );
                    first_kill = false;
                    let w2 = q2.admit(kill_gap.max(0.0), size);
                    last_kill_wait1 = w1;
                    gap2 = 0.0;
                    (w1 + s + w2, Some(w1), Some(w2))
                }
            }
        };

        if n < config.warmup_jobs {
            continue;
        }
        let j = n - config.warmup_jobs;
        let b = j * config.batches / measured;
        batch_sums[b] += wait;
        batch_counts[b] += 1;
        if let Some(w) = at1 {
            st1.push(w);
            batch_s1[b].push(w);
        }
        if let Some(w) = at2 {
            st2.push(w);
            if config.policy == Policy::Tags {
                overflow += 1;
            }
        }
        size_sum += size;
        size_sq += size * size;
    }

    let batch_means: Vec<f64> = batch_sums
        .iter()
        .zip(&batch_counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let total: f64 = batch_sums.iter().sum();
    let (_, batch_std) = mean_and_std(&batch_means);
    let std_error = batch_std / (config.batches as f64).sqrt();
    let dof = config.batches - 1;
    let station1_ci_halfwidth = {
        let means: Vec<f64> = batch_s1.iter().filter(|t| t.count > 0).map(Tally::mean).collect();
        if means.len() < 2 {
            0.0
        } else {
            let (_, sd) = mean_and_std(&means);
            t_critical(means.len() - 1, 0.95) * sd / (means.len() as f64).sqrt()
        }
    };
    let m = measured as f64;
    let mean_size = size_sum / m;
    let size_var = ((size_sq - m * mean_size * mean_size) / (m - 1.0).max(1.0)).max(0.0);
    let overflow_fraction = match config.policy {
        Policy::Tags => overflow as f64 / m,
        Policy::Sita => st2.count as f64 / m,
    };

    Ok(SimResult {
        mean_wait: total / m,
        ci_halfwidth: t_critical(dof, 0.95) * std_error,
        std_error,
        dof,
        station1_mean_wait: st1.mean(),
        station1_ci_halfwidth,
        station2_mean_wait: st2.mean(),
        overflow_fraction,
        jobs_measured: measured,
        mean_job_size: mean_size,
        job_size_std: size_var.sqrt(),
        unstable: config.overloaded(),
    })
}

pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    run(config, 0)
}

/// The `index`-th independent replication used by [`replicate`].
pub fn simulate_replication(config: &SimConfig, index: u64) -> Result<SimResult> {
    run(config, index)
}

/// Independent replications on ChaCha streams `0..replications`, pooled with
/// an across-replication Student-t interval. One replication is exactly
/// [`simulate`].
pub fn replicate(config: &SimConfig, replications: usize) -> Result<SimResult> {
    if replications == 0 {
        return Err(Error::Config("replications must be >= 1".into()));
    }
    if replications == 1 {
        return simulate(config);
    }
    let runs: Vec<SimResult> = (0..replications as u64)
        .into_par_iter()
        .map(|i| run(config, i))
        .collect::<Result<_>>()?;

    let n = replications as f64;
    let avg = |f: fn(&SimResult) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let means: Vec<f64> = runs.iter().map(|r| r.mean_wait).collect();
    let (mean_wait, sd) = mean_and_std(&means);
    let std_error = sd / n.sqrt();
    let dof = replications - 1;
    let s1: Vec<f64> = runs.iter().map(|r| r.station1_mean_wait).collect();
    let (station1_mean_wait, s1_sd) = mean_and_std(&s1);
    Ok(SimResult {
        mean_wait,
        ci_halfwidth: t_critical(dof, 0.95) * std_error,
        std_error,
        dof,
        station1_mean_wait,
        station1_ci_halfwidth: t_critical(dof, 0.95) * s1_sd / n.sqrt(),
        station2_mean_wait: avg(|r| r.station2_mean_wait),
        overflow_fraction: avg(|r| r.overflow_fraction),
        jobs_measured: runs.iter().map(|r| r.jobs_measured).sum(),
        mean_job_size: avg(|r| r.mean_job_size),
        job_size_std: avg(|r| r.job_size_std),
        unstable: runs.iter().any(|r| r.unstable),
    })
}
