//! Sensitivity of node-centrality rankings to errors in observed networks.
//!
//! The crate covers the whole pipeline: graphs and their generators,
//! five centrality measures, the concordance-based sensitivity `rho`, error
//! and imputation mechanisms, the iterative and imputation estimators of
//! `rho(H, O)` from `O` alone, and a parallel experiment harness.

pub mod centrality;
pub mod cli;
pub mod config;
pub mod estimators;
pub mod evaluation;
pub mod graph;
pub mod perturb;
pub mod rng;
pub mod sensitivity;

use thiserror::Error;

pub use centrality::{CentralityError, CentralityMeasure, CentralityVector, Measure};
pub use estimators::{
    estimate_many, imputation_estimate, iterative_estimate, Estimate, EstimateError, Estimator, EstimatorConfig,
};
pub use evaluation::{
    aggregate, run_experiment, success, weighted_error, AggregateRow, ExperimentError, ExperimentRecord,
    ExperimentSpec, NetworkSource,
};
pub use graph::{Graph, GraphError, NodeId};
pub use perturb::{
    apply_error, apply_imputation, invert_error, ErrorKind, ErrorMechanism, ImputationKind, ImputationMechanism,
    PerturbError,
};
pub use rng::RngSeed;
pub use sensitivity::{classify_pairs, gamma, sensitivity, PairClassification, SensitivityError};

/// Any failure surfaced by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
}
