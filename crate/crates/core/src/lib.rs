//! Bound-state spectra of one-dimensional systems with an added Dirac delta:
//! exact eigenvalue conditions, perturbative coefficients, series identities
//! and independent numerical oracles.

pub mod dd;
pub mod models;
pub mod oracle;
pub mod perturb;
pub mod roots;
pub mod series;
pub mod specfun;
pub mod validate;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
    #[error(transparent)]
    Root(#[from] roots::RootError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error("state {ordinal} changed branch between coupling steps (at lambda = {lambda})")]
    BranchJump { ordinal: usize, lambda: f64 },
    #[error("need {needed} bound states of the required parity, found {found}")]
    InsufficientStates { needed: usize, found: usize },
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
