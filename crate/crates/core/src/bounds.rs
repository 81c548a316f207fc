//! Closed-form bounds for `alpha = 1` and a report comparing them with the
//! optimized policies.
//!
//! * TAGS lower bound `lambda r` (claimed when `lambda r < 1`)
//! * SITA upper bound `lambda (sqrt r - 1)^2 / (sqrt r (1 - 1/r)^2)`, claimed
//!   only for large `r`
//! * ratio lower bound `(sqrt r + 1)^2 / sqrt r`, independent of `lambda`,
//!   increasing and unbounded in `r`
//!
//! The report records whether each inequality holds at the computed optima.
//! Note that the TAGS bound does not hold in general: TAGS with `s = r` is a
//! single M/G/1 queue whose wait is `lambda r / (2 (1 - rho))`.

use serde::{Deserialize, Serialize};

use crate::distributions::BoundedPareto;
use crate::error::{Error, Result};
use crate::sita::optimal_sita_cutoff;
use crate::sweep::format_sig;
use crate::tags::optimal_tags_threshold;

/// Smallest `r` at which the asymptotic SITA bound is asserted.
pub const LARGE_R: f64 = 1e3;

fn check_hypothesis(arrival_rate: f64, r: f64) -> Result<()> {
    let product = arrival_rate * r;
    if product.is_nan() || product >= 1.0 {
        return Err(Error::HypothesisViolated { product });
    }
    Ok(())
}

pub fn tags_lower_bound(arrival_rate: f64, r: f64) -> Result<f64> {
    check_hypothesis(arrival_rate, r)?;
    Ok(arrival_rate * r)
}

pub fn sita_upper_bound(arrival_rate: f64, r: f64) -> Result<f64> {
    check_hypothesis(arrival_rate, r)?;
    let root = r.sqrt();
    Ok(arrival_rate * (root - 1.0).powi(2) / (root * (1.0 - 1.0 / r).powi(2)))
}

pub fn ratio_lower_bound(r: f64) -> Result<f64> {
    if r.is_nan() || r <= 1.0 {
        return Err(Error::Domain(format!("ratio bound needs r > 1, got {r}")));
    }
    let root = r.sqrt();
    Ok((root + 1.0).powi(2) / root)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub r: f64,
    pub arrival_rate: f64,
    pub tags_lower: f64,
    pub sita_upper: f64,
    pub ratio_lower: f64,
    pub tags_threshold: f64,
    pub sita_cutoff: f64,
    pub computed_tags: f64,
    pub computed_sita: f64,
    pub computed_ratio: f64,
    /// `computed_tags > tags_lower`
    pub tags_bound_holds: bool,
    /// `computed_sita <= sita_upper`
    pub sita_bound_holds: bool,
    /// Whether `r` is large enough for the SITA comparison to count.
    pub sita_bound_asserted: bool,
    /// `computed_ratio >= ratio_lower`, recorded only.
    pub ratio_bound_holds: bool,
    pub all_hold: bool,
}

/// Column order of bound-report CSV files.
pub const REPORT_COLUMNS: [&str; 15] = [
    "r",
    "lambda",
    "tags_lower_bound",
    "sita_upper_bound",
    "ratio_lower_bound",
    "s_tags",
    "s_sita",
    "w_tags",
    "w_sita",
    "ratio",
    "tags_bound_holds",
    "sita_bound_holds",
    "sita_bound_asserted",
    "ratio_bound_holds",
    "all_hold",
];

impl BoundReport {
    pub fn csv_header() -> String {
        REPORT_COLUMNS.join(",")
    }

    pub fn to_csv(&self) -> String {
        let f = format_sig;
        [
            f(self.r),
            f(self.arrival_rate),
            f(self.tags_lower),
            f(self.sita_upper),
            f(self.ratio_lower),
            f(self.tags_threshold),
            f(self.sita_cutoff),
            f(self.computed_tags),
            f(self.computed_sita),
            f(self.computed_ratio),
            self.tags_bound_holds.to_string(),
            self.sita_bound_holds.to_string(),
            self.sita_bound_asserted.to_string(),
            self.ratio_bound_holds.to_string(),
            self.all_hold.to_string(),
        ]
        .join(",")
    }
}

/// Optimize both policies for `alpha = 1` and compare against the bounds.
pub fn verify_bounds(d: &BoundedPareto, arrival_rate: f64) -> Result<BoundReport> {
    if d.alpha() != 1.0 {
        return Err(Error::Domain(format!(
            "bounds are stated for alpha = 1, got {}",
            d.alpha()
        )));
    }
    let r = d.r();
    let tags_lower = tags_lower_bound(arrival_rate, r)?;
    let sita_upper = sita_upper_bound(arrival_rate, r)?;
    let ratio_lower = ratio_lower_bound(r)?;

    let tags = optimal_tags_threshold(d, arrival_rate)?;
    let sita = optimal_sita_cutoff(d, arrival_rate)?;
    let computed_ratio = tags.optimal_value / sita.optimal_value;

    let tags_bound_holds = tags.optimal_value > tags_lower;
    let sita_bound_holds = sita.optimal_value <= sita_upper;
    let sita_bound_asserted = r >= LARGE_R;
    Ok(BoundReport {
        r,
        arrival_rate,
        tags_lower,
        sita_upper,
        ratio_lower,
        tags_threshold: tags.optimal_threshold,
        sita_cutoff: sita.optimal_threshold,
        computed_tags: tags.optimal_value,
        computed_sita: sita.optimal_value,
        computed_ratio,
        tags_bound_holds,
        sita_bound_holds,
        sita_bound_asserted,
        ratio_bound_holds: computed_ratio >= ratio_lower,
        all_hold: tags_bound_holds && (!sita_bound_asserted || sita_bound_holds),
    })
}
