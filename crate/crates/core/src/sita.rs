//! Size Interval Task Assignment with two servers.
//!
//! Jobs of size `<= s` go to server 1, larger jobs to server 2. Splitting a
//! Poisson stream by an independent mark keeps both substreams Poisson, so
//! each server is an exact M/G/1 queue.

use crate::distributions::BoundedPareto;
use crate::error::{Error, Result};
use crate::mg1::{pk_wait_or_unstable, ServiceMoments, StationEvaluation};
use crate::policy::{minimize_threshold, Policy, PolicyEvaluation, ThresholdSearchResult};

pub(crate) fn check_rate(arrival_rate: f64) -> Result<()> {
    if !(arrival_rate > 0.0 && arrival_rate.is_finite()) {
        return Err(Error::Domain(format!(
            "arrival rate must be finite and > 0, got {arrival_rate}"
        )));
    }
    Ok(())
}

/// Station fed with `rate * mass` jobs/time whose sizes follow `d`
/// restricted to `[a, b]`.
fn class_station(d: &BoundedPareto, rate: f64, a: f64, b: f64) -> Result<StationEvaluation> {
    let mass = d.partial_moment(0.0, a, b)?;
    if mass <= 0.0 {
        return Ok(StationEvaluation::idle());
    }
    let m1 = d.partial_moment(1.0, a, b)? / mass;
    let m2 = (d.partial_moment(2.0, a, b)? / mass).max(m1 * m1);
    let moments = ServiceMoments::new(m1, m2)?;
    Ok(pk_wait_or_unstable(rate * mass, moments))
}

pub fn evaluate_sita(d: &BoundedPareto, arrival_rate: f64, s: f64) -> Result<PolicyEvaluation> {
    check_rate(arrival_rate)?;
    let s = d.check_threshold(s)?;
    let to_1 = d.cdf(s);
    let to_2 = 1.0 - to_1;
    let station1 = class_station(d, arrival_rate, 1.0, s)?;
    let station2 = class_station(d, arrival_rate, s, d.r())?;
    let total_wait = if station1.is_stable() && station2.is_stable() {
        to_1 * station1.mean_wait + to_2 * station2.mean_wait
    } else {
        f64::INFINITY
    };
    Ok(PolicyEvaluation {
        policy: Policy::Sita,
        threshold: s,
        station1,
        station2,
        fraction_to_2: to_2,
        total_wait,
    })
}

/// Objective used by the optimizer: mean wait, `+inf` when infeasible.
pub fn sita_objective(d: &BoundedPareto, arrival_rate: f64, s: f64) -> f64 {
    evaluate_sita(d, arrival_rate, s)
        .map(|ev| ev.total_wait)
        .unwrap_or(f64::INFINITY)
}

pub fn optimal_sita_cutoff(d: &BoundedPareto, arrival_rate: f64) -> Result<ThresholdSearchResult> {
    check_rate(arrival_rate)?;
    let res = minimize_threshold(d.r(), |s| sita_objective(d, arrival_rate, s));
    if !res.feasible {
        return Err(Error::NoFeasibleThreshold { r: d.r() });
    }
    Ok(res)
}

/// Cutoff at which both servers receive the same work,
/// `∫_1^s x f(x) dx = ∫_s^r x f(x) dx`. Equals `sqrt(r)` for `alpha = 1`.
pub fn load_balancing_cutoff(d: &BoundedPareto) -> f64 {
    let imbalance = |s: f64| {
        d.partial_moment(1.0, 1.0, s).expect("s in support")
            - d.partial_moment(1.0, s, d.r()).expect("s in support")
    };
    // bisect in log space; the imbalance is increasing in s
    let (mut lo, mut hi) = (0.0f64, d.r().ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if imbalance(mid.exp()) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp().clamp(1.0, d.r())
}
