//! Experiment spec files and the embedded presets.
//!
//! A spec file is flat TOML:
//!
//! ```toml
//! network = "er:100:0.2"          # or "ba:100:11", "edgelist:path/to/file"
//! mechanisms = ["rm_nodes:0.1", "add_edges:0.3"]
//! measures = ["bc", "cc", "dc", "ec", "pr"]
//! runs = 500
//! inner_samples = 50
//! threshold = 0.3
//! seed = 1
//! ```
//!
//! Only `network` and `mechanisms` are required. Relative edge-list paths in
//! a file resolve against the file's directory; in presets they resolve
//! against the working directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::centrality::{CentralityMeasure, Measure};
use crate::estimators::DEFAULT_INNER_SAMPLES;
use crate::evaluation::{ExperimentSpec, NetworkSource, DEFAULT_RUNS, DEFAULT_THRESHOLD};
use crate::perturb::ErrorMechanism;

pub const PRESETS: [(&str, &str); 3] = [
    ("er-paper", include_str!("../presets/er-paper.toml")),
    ("ba-paper", include_str!("../presets/ba-paper.toml")),
    ("realworld-paper", include_str!("../presets/realworld-paper.toml")),
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("spec file: {0}")]
    Parse(String),
    #[error("spec file: {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("unknown preset `{0}` (available: er-paper, ba-paper, realworld-paper)")]
    UnknownPreset(String),
    #[error("cannot read spec file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    network: String,
    mechanisms: Vec<String>,
    measures: Option<Vec<String>>,
    runs: Option<usize>,
    inner_samples: Option<usize>,
    threshold: Option<f64>,
    seed: Option<u64>,
}

/// Parses `er:N:P`, `ba:N:M` or `edgelist:PATH`.
pub fn parse_network(token: &str) -> Result<NetworkSource, ConfigError> {
    let bad = |reason: String| ConfigError::Invalid { key: "network", reason };
    let (kind, rest) = token
        .split_once(':')
        .ok_or_else(|| bad(format!("`{token}` is not of the form kind:params")))?;
    match kind {
        "er" => {
            let (n, p) = rest.split_once(':').ok_or_else(|| bad("expected er:N:P".into()))?;
            let n = n.parse().map_err(|_| bad(format!("bad node count `{n}`")))?;
            let p: f64 = p.parse().map_err(|_| bad(format!("bad probability `{p}`")))?;
            Ok(NetworkSource::ErdosRenyi { n, p })
        }
        "ba" => {
            let (n, m) = rest.split_once(':').ok_or_else(|| bad("expected ba:N:M".into()))?;
            let n = n.parse().map_err(|_| bad(format!("bad node count `{n}`")))?;
            let m = m.parse().map_err(|_| bad(format!("bad attachment count `{m}`")))?;
            Ok(NetworkSource::BarabasiAlbert { n, m })
        }
        "edgelist" if !rest.is_empty() => Ok(NetworkSource::EdgeList(PathBuf::from(rest))),
        _ => Err(bad(format!("unknown network `{token}`"))),
    }
}

pub fn parse_mechanisms<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<ErrorMechanism>, ConfigError> {
    tokens
        .iter()
        .map(|t| {
            t.as_ref().parse().map_err(|e: crate::perturb::PerturbError| ConfigError::Invalid {
                key: "mechanisms",
                reason: e.to_string(),
            })
        })
        .collect()
}

pub fn parse_measures<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<CentralityMeasure>, ConfigError> {
    tokens
        .iter()
        .map(|t| {
            t.as_ref()
                .parse::<Measure>()
                .map(CentralityMeasure::from)
                .map_err(|e| ConfigError::Invalid {
                    key: "measures",
                    reason: e.to_string(),
                })
        })
        .collect()
}

/// Parses spec text. `base_dir` anchors relative edge-list paths; `default_seed`
/// applies when the text has no `seed`.
pub fn parse_spec(text: &str, base_dir: Option<&Path>, default_seed: u64) -> Result<ExperimentSpec, ConfigError> {
    let file: SpecFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_owned()))?;
    let mut network = parse_network(&file.network)?;
    if let (NetworkSource::EdgeList(path), Some(dir)) = (&mut network, base_dir) {
        if path.is_relative() {
            *path = dir.join(&*path);
        }
    }
    let measures = match &file.measures {
        Some(tokens) => parse_measures(tokens)?,
        None => Measure::ALL.iter().map(|&m| m.into()).collect(),
    };
    Ok(ExperimentSpec {
        network,
        mechanisms: parse_mechanisms(&file.mechanisms)?,
        measures,
        runs: file.runs.unwrap_or(DEFAULT_RUNS),
        inner_samples: file.inner_samples.unwrap_or(DEFAULT_INNER_SAMPLES),
        threshold: file.threshold.unwrap_or(DEFAULT_THRESHOLD),
        master_seed: file.seed.unwrap_or(default_seed),
    })
}

pub fn load_spec(path: &Path, default_seed: u64) -> Result<ExperimentSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_spec(&text, path.parent(), default_seed)
}

pub fn preset(name: &str) -> Result<ExperimentSpec, ConfigError> {
    let text = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_owned()))?;
    parse_spec(text, None, 0)
}
