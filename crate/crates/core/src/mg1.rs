//! Mean queueing delay of an M/G/1 FCFS station (Pollaczek-Khinchine).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First and second raw moments of a service-time distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ServiceMoments {
    m1: f64,
    m2: f64,
}

impl ServiceMoments {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        if !(m1 > 0.0 && m1.is_finite() && m2.is_finite()) {
            return Err(Error::Domain(format!(
                "service moments must be positive and finite, got m1={m1} m2={m2}"
            )));
        }
        // Jensen, with a little room for rounding in moments built from integrals
        if m2 < m1 * m1 * (1.0 - 1e-12) {
            return Err(Error::Domain(format!(
                "second moment {m2} below squared mean {}",
                m1 * m1
            )));
        }
        Ok(Self { m1, m2 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationEvaluation {
    pub arrival_rate: f64,
    pub load: f64,
    /// `+inf` when the station is unstable.
    pub mean_wait: f64,
}

impl StationEvaluation {
    /// A station that receives no traffic.
    pub fn idle() -> Self {
        Self {
            arrival_rate: 0.0,
            load: 0.0,
            mean_wait: 0.0,
        }
    }

    /// Placeholder for a station whose load is at or above 1.
    pub fn unstable(arrival_rate: f64, load: f64) -> Self {
        Self {
            arrival_rate,
            load,
            mean_wait: f64::INFINITY,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.load < 1.0
    }
}

/// `lambda E[S^2] / (2 (1 - rho))` with `rho = lambda E[S]`.
///
/// A load of exactly 1 is unstable.
pub fn pk_wait(arrival_rate: f64, moments: ServiceMoments) -> Result<StationEvaluation> {
    if !(arrival_rate >= 0.0 && arrival_rate.is_finite()) {
        return Err(Error::Domain(format!(
            "arrival rate must be finite and >= 0, got {arrival_rate}"
        )));
    }
    let load = arrival_rate * moments.m1;
    if load >= 1.0 {
        return Err(Error::Unstable { load });
    }
    Ok(StationEvaluation {
        arrival_rate,
        load,
        mean_wait: arrival_rate * moments.m2 / (2.0 * (1.0 - load)),
    })
}

/// Like [`pk_wait`] but folds instability into an infinite-wait evaluation.
pub(crate) fn pk_wait_or_unstable(arrival_rate: f64, moments: ServiceMoments) -> StationEvaluation {
    match pk_wait(arrival_rate, moments) {
        Ok(ev) => ev,
        Err(_) => StationEvaluation::unstable(arrival_rate, arrival_rate * moments.m1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sm(m1: f64, m2: f64) -> ServiceMoments {
        ServiceMoments::new(m1, m2).unwrap()
    }

    #[test]
    fn empty_system_has_no_wait() {
        let ev = pk_wait(0.0, sm(3.0, 20.0)).unwrap();
        assert_eq!(ev.mean_wait, 0.0);
        assert_eq!(ev.load, 0.0);
    }

    #[test]
    fn mm1_closed_form() {
        // exponential service rate 1: rho / (mu - lambda)
        let ev = pk_wait(0.5, sm(1.0, 2.0)).unwrap();
        assert!((ev.mean_wait - 1.0).abs() < 1e-15);
        assert_eq!(ev.load, 0.5);
    }

    #[test]
    fn md1_closed_form() {
        let ev = pk_wait(0.9, sm(1.0, 1.0)).unwrap();
        assert!((ev.mean_wait - 0.9 / (2.0 * 0.1)).abs() < 1e-12);
        assert!((ev.mean_wait - 4.5).abs() < 1e-12);
    }

    #[test]
    fn unit_load_is_unstable() {
        match pk_wait(1.0, sm(1.0, 1.0)) {
            Err(Error::Unstable { load }) => assert_eq!(load, 1.0),
            other => panic!("expected unstable, got {other:?}"),
        }
        assert!(matches!(pk_wait(2.0, sm(1.0, 1.0)), Err(Error::Unstable { .. })));
    }

    #[test]
    fn invalid_moments() {
        assert!(ServiceMoments::new(0.0, 1.0).is_err());
        assert!(ServiceMoments::new(2.0, 3.0).is_err());
        assert!(ServiceMoments::new(1.0, f64::NAN).is_err());
        assert!(pk_wait(-0.1, sm(1.0, 1.0)).is_err());
    }

    proptest! {
        #[test]
        fn increasing_in_rate(m1 in 0.1f64..10.0, cv2 in 0.0f64..50.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let m = sm(m1, m1 * m1 * (1.0 + cv2));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            let w_lo = pk_wait(lo / m1 * 0.999, m).unwrap().mean_wait;
            let w_hi = pk_wait(hi / m1 * 0.999, m).unwrap().mean_wait;
            prop_assert!(w_hi > w_lo);
        }

        #[test]
        fn increasing_in_second_moment(m1 in 0.1f64..10.0, cv2 in 0.0f64..50.0, extra in 0.01f64..10.0, rho in 0.01f64..0.99) {
            let base = sm(m1, m1 * m1 * (1.0 + cv2));
            let more = sm(m1, base.m2() * (1.0 + extra));
            let rate = rho / m1;
            prop_assert!(pk_wait(rate, more).unwrap().mean_wait > pk_wait(rate, base).unwrap().mean_wait);
        }

        #[test]
        fn doubling_second_moment_doubles_wait(m1 in 0.1f64..10.0, cv2 in 0.0f64..50.0, rho in 0.01f64..0.99) {
            let base = sm(m1, m1 * m1 * (1.0 + cv2));
            let twice = sm(m1, 2.0 * base.m2());
            let rate = rho / m1;
            let w1 = pk_wait(rate, base).unwrap().mean_wait;
            let w2 = pk_wait(rate, twice).unwrap().mean_wait;
            prop_assert!(((w2 - 2.0 * w1) / w1).abs() < 1e-14);
        }

        #[test]
        fn diverges_near_unit_load(m1 in 0.1f64..10.0, cv2 in 0.0f64..5.0, bound in 1.0f64..1e9) {
            let m = sm(m1, m1 * m1 * (1.0 + cv2));
            // choose 1 - rho small enough that the wait must exceed the bound
            let gap = (m.m2() / (2.0 * m1 * bound)).min(0.5) * 0.5;
            let rate = (1.0 - gap) / m1;
            prop_assert!(pk_wait(rate, m).unwrap().mean_wait > bound);
        }
    }
}
