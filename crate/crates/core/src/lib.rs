//! Mean waiting time of two-server SITA and TAGS routing under Bounded Pareto
//! job sizes: closed-form M/G/1 analysis, threshold optimization, the
//! `alpha = 1` bounds, and a seeded simulator to check all of it.

pub mod bounds;
pub mod distributions;
pub mod error;
pub mod mg1;
pub mod policy;
pub mod simulator;
pub mod sita;
pub mod sweep;
pub mod tags;

pub use bounds::{ratio_lower_bound, sita_upper_bound, tags_lower_bound, verify_bounds, BoundReport};
pub use distributions::BoundedPareto;
pub use error::{Error, Result};
pub use mg1::{pk_wait, ServiceMoments, StationEvaluation};
pub use policy::{Policy, PolicyEvaluation, Station, ThresholdSearchResult};
pub use simulator::{replicate, simulate, simulate_replication, SimConfig, SimResult};
pub use sita::{evaluate_sita, load_balancing_cutoff, optimal_sita_cutoff};
pub use sweep::{RatioMode, SweepMode, SweepRow, SweepSpec};
pub use tags::{evaluate_tags, optimal_tags_threshold, truncated_service_moments};
