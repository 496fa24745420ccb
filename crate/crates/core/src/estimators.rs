//! Monte-Carlo estimators of the true sensitivity from the observed graph.
//!
//! Both estimators average `rho(O, X)` over independent draws of a random
//! graph `X` built from the observed graph `O`:
//!
//! * iterative: `X ~ phi(O)`, the assumed error mechanism applied once more;
//! * imputation: `X ~ psi(O)`, where `psi` is the imputation mechanism that
//!   inverts `phi` (see [`invert_error`]).
//!
//! Draw `j` uses the stream `seed.child(&[j])`, so the estimate for one
//! measure is the same whether it is computed alone or alongside others.
//! Draws on which the sensitivity is undefined are skipped and counted.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::centrality::{CentralityError, CentralityMeasure, CentralityVector};
use crate::graph::Graph;
use crate::perturb::{apply_error, apply_imputation, invert_error, ErrorMechanism, PerturbError};
use crate::rng::RngSeed;
use crate::sensitivity::classify_pairs;

pub const DEFAULT_INNER_SAMPLES: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("all {0} inner draws had undefined sensitivity")]
    AllUndefined(usize),
    #[error("inner sample count must be at least 1")]
    NoSamples,
    #[error("infeasible mechanism: {0}")]
    Infeasible(#[from] PerturbError),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Iterative,
    Imputation,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Iterative => "iterative",
            Estimator::Imputation => "imputation",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iterative" | "iter" => Ok(Estimator::Iterative),
            "imputation" | "imp" => Ok(Estimator::Imputation),
            other => Err(format!("unknown estimator `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Number of Monte-Carlo draws `R`.
    pub inner_samples: usize,
    pub seed: RngSeed,
    pub measure: CentralityMeasure,
}

/// A Monte-Carlo estimate with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Standard error of the mean over defined draws (0 with fewer than 2).
    pub std_error: f64,
    pub defined_draws: usize,
    pub undefined_draws: usize,
}

impl Estimate {
    fn from_samples(samples: &[f64], undefined: usize) -> Result<Self, EstimateError> {
        if samples.is_empty() {
            return Err(EstimateError::AllUndefined(undefined));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std_error = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            value: mean,
            std_error,
            defined_draws: samples.len(),
            undefined_draws: undefined,
        })
    }
}

/// `E[rho(O, phi(O))]`.
pub fn iterative_estimate(observed: &Graph, phi: &ErrorMechanism, cfg: &EstimatorConfig) -> Result<Estimate, EstimateError> {
    single(observed, phi, cfg, Estimator::Iterative)
}

/// `E[rho(O, psi(O))]` with `psi = invert_error(phi, O)`.
pub fn imputation_estimate(observed: &Graph, phi: &ErrorMechanism, cfg: &EstimatorConfig) -> Result<Estimate, EstimateError> {
    single(observed, phi, cfg, Estimator::Imputation)
}

fn single(
    observed: &Graph,
    phi: &ErrorMechanism,
    cfg: &EstimatorConfig,
    estimator: Estimator,
) -> Result<Estimate, EstimateError> {
    let base = cfg.measure.compute(observed)?;
    estimate_many(observed, &[base], &[cfg.measure], phi, estimator, cfg.inner_samples, cfg.seed)
        .pop()
        .expect("one measure in, one result out")
}

/// Runs one estimator for several measures on shared draws.
///
/// `base[i]` must be `measures[i]` evaluated on `observed`. The result has one
/// entry per measure. An infeasible mechanism fails every entry.
pub fn estimate_many(
    observed: &Graph,
    base: &[CentralityVector],
    measures: &[CentralityMeasure],
    phi: &ErrorMechanism,
    estimator: Estimator,
    inner_samples: usize,
    seed: RngSeed,
) -> Vec<Result<Estimate, EstimateError>> {
    assert_eq!(base.len(), measures.len(), "one base vector per measure");
    if inner_samples == 0 {
        return vec![Err(EstimateError::NoSamples); measures.len()];
    }
    let psi = invert_error(phi, observed);
    let mut samples: Vec<Vec<f64>> = vec![Vec::with_capacity(inner_samples); measures.len()];
    let mut undefined = vec![0usize; measures.len()];
    for j in 0..inner_samples {
        let draw_seed = seed.child(&[j as u64]);
        let drawn = match estimator {
            Estimator::Iterative => apply_error(observed, phi, draw_seed),
            Estimator::Imputation => apply_imputation(observed, &psi, draw_seed),
        };
        let drawn = match drawn {
            Ok(g) => g,
            Err(e) => return vec![Err(EstimateError::Infeasible(e)); measures.len()],
        };
        for (i, m) in measures.iter().enumerate() {
            let rho = m
                .compute(&drawn)
                .ok()
                .and_then(|c| classify_pairs(&base[i], &c).ok())
                .and_then(|pc| pc.rho().ok());
            match rho {
                Some(r) => samples[i].push(r),
                None => undefined[i] += 1,
            }
        }
    }
    samples
        .iter()
        .zip(undefined)
        .map(|(s, u)| Estimate::from_samples(s, u))
        .collect()
}
