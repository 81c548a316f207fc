//! Task Assignment by Guessing Size with two servers.
//!
//! Every job starts at server 1. A job still running at age `s` is killed and
//! joins the queue of server 2, where it restarts from scratch with its full
//! size. Server 1 sees Poisson arrivals with service `min(X, s)`. The stream
//! of killed jobs into server 2 is not Poisson; the analytic evaluator still
//! applies Pollaczek-Khinchine there, and the simulator measures the error.

use crate::distributions::BoundedPareto;
use crate::error::{Error, Result};
use crate::mg1::{pk_wait_or_unstable, ServiceMoments, StationEvaluation};
use crate::policy::{minimize_threshold, Policy, PolicyEvaluation, ThresholdSearchResult};
use crate::sita::check_rate;

/// `E[min(X, s)^k]`: the `k`-th moment of the work a job receives at server 1.
pub fn truncated_service_moments(d: &BoundedPareto, s: f64, k: f64) -> Result<f64> {
    let s = d.check_threshold(s)?;
    let below = d.partial_moment(k, 1.0, s)?;
    let killed = d.partial_moment(0.0, s, d.r())?;
    Ok(below + s.powf(k) * killed)
}

pub fn evaluate_tags(d: &BoundedPareto, arrival_rate: f64, s: f64) -> Result<PolicyEvaluation> {
    check_rate(arrival_rate)?;
    let s = d.check_threshold(s)?;

    let m1 = truncated_service_moments(d, s, 1.0)?;
    let m2 = truncated_service_moments(d, s, 2.0)?.max(m1 * m1);
    let station1 = pk_wait_or_unstable(arrival_rate, ServiceMoments::new(m1, m2)?);

    let overflow = 1.0 - d.cdf(s);
    let tail_mass = d.partial_moment(0.0, s, d.r())?;
    let station2 = if tail_mass > 0.0 {
        let t1 = d.partial_moment(1.0, s, d.r())? / tail_mass;
        let t2 = (d.partial_moment(2.0, s, d.r())? / tail_mass).max(t1 * t1);
        pk_wait_or_unstable(arrival_rate * tail_mass, ServiceMoments::new(t1, t2)?)
    } else {
        StationEvaluation::idle()
    };

    let total_wait = if station1.is_stable() && station2.is_stable() {
        station1.mean_wait + overflow * s + overflow * station2.mean_wait
    } else {
        f64::INFINITY
    };
    Ok(PolicyEvaluation {
        policy: Policy::Tags,
        threshold: s,
        station1,
        station2,
        fraction_to_2: overflow,
        total_wait,
    })
}

pub fn tags_objective(d: &BoundedPareto, arrival_rate: f64, s: f64) -> f64 {
    evaluate_tags(d, arrival_rate, s)
        .map(|ev| ev.total_wait)
        .unwrap_or(f64::INFINITY)
}

pub fn optimal_tags_threshold(
    d: &BoundedPareto,
    arrival_rate: f64,
) -> Result<ThresholdSearchResult> {
    check_rate(arrival_rate)?;
    let res = minimize_threshold(d.r(), |s| tags_objective(d, arrival_rate, s));
    if !res.feasible {
        return Err(Error::NoFeasibleThreshold { r: d.r() });
    }
    Ok(res)
}
