//! Bounded Pareto job sizes on `[1, r]`.
//!
//! The density is `alpha x^(-alpha-1) / (1 - r^-alpha)` on the support and zero
//! elsewhere. Negative `alpha` is allowed (`alpha = -1` is the uniform
//! distribution on `[1, r]`); `alpha = 0` is rejected.
//!
//! Partial moments `∫_a^b x^k f(x) dx` are evaluated in closed form. Near
//! `k = alpha` the closed form is `0/0`, so it is rewritten through `expm1` and
//! switched to a logarithmic series once `|k - alpha|` drops below
//! [`SINGULAR_TOLERANCE`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|k - alpha|` at or below which the logarithmic branch is used.
pub const SINGULAR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedPareto {
    alpha: f64,
    r: f64,
}

impl BoundedPareto {
    pub fn new(alpha: f64, r: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "alpha must be finite and nonzero, got {alpha}"
            )));
        }
        if !r.is_finite() || r <= 1.0 {
            return Err(Error::InvalidDistribution(format!(
                "r must be finite and > 1, got {r}"
            )));
        }
        Ok(Self { alpha, r })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest job size. The smallest is always 1.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// `1 - r^-alpha`, without cancellation for small `alpha ln r`.
    fn normalizer(&self) -> f64 {
        -(-self.alpha * self.r.ln()).exp_m1()
    }

    fn density_constant(&self) -> f64 {
        self.alpha / self.normalizer()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(1.0..=self.r).contains(&x) {
            return 0.0;
        }
        self.density_constant() * x.powf(-self.alpha - 1.0)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else if x >= self.r {
            1.0
        } else {
            (-self.alpha * x.ln()).exp_m1() / (-self.alpha * self.r.ln()).exp_m1()
        }
    }

    /// Inverse CDF. Returns a size in `[1, r]`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile level {u} not in [0, 1]")));
        }
        if u == 0.0 {
            return Ok(1.0);
        }
        if u == 1.0 {
            return Ok(self.r);
        }
        let x = (-(-u * self.normalizer()).ln_1p() / self.alpha).exp();
        Ok(x.clamp(1.0, self.r))
    }

    /// `∫_a^b x^k f(x) dx` for `1 <= a <= b <= r`.
    pub fn partial_moment(&self, k: f64, a: f64, b: f64) -> Result<f64> {
        if !(a >= 1.0 && a <= b && b <= self.r) {
            return Err(Error::Domain(format!(
                "partial moment bounds [{a}, {b}] not inside [1, {}]",
                self.r
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        let d = k - self.alpha;
        let log_span = (b / a).ln();
        let c = self.density_constant();
        let scaled = d * log_span;
        let integral = if d.abs() <= SINGULAR_TOLERANCE {
            // expm1(z)/d = log_span * (1 + z/2 + z^2/6 + ...)
            c * a.powf(d) * log_span * (1.0 + scaled / 2.0 + scaled * scaled / 6.0)
        } else {
            c * a.powf(d) * scaled.exp_m1() / d
        };
        Ok(integral.max(0.0))
    }

    /// `E[X^k]`.
    pub fn moment(&self, k: f64) -> f64 {
        self.partial_moment(k, 1.0, self.r)
            .expect("full support is always a valid range")
    }

    pub fn mean(&self) -> f64 {
        self.moment(1.0)
    }

    /// Clamp `s` into the support, rejecting values clearly outside it.
    pub(crate) fn check_threshold(&self, s: f64) -> Result<f64> {
        if !(s >= 1.0 && s <= self.r) {
            return Err(Error::Domain(format!(
                "threshold {s} not in [1, {}]",
                self.r
            )));
        }
        Ok(s)
    }
}
