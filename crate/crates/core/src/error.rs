use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution parameters: {0}")]
    InvalidDistribution(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("unstable station: load {load} >= 1")]
    Unstable { load: f64 },

    #[error("bound hypothesis violated: lambda * r = {product} >= 1")]
    HypothesisViolated { product: f64 },

    #[error("no feasible threshold in [1, {r}]")]
    NoFeasibleThreshold { r: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
