//! The `netsens` command-line front end.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on invalid input and 3 when
//! a mechanism cannot be applied to the given graph.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::centrality::{CentralityMeasure, Measure};
use crate::config::{self, ConfigError};
use crate::estimators::{estimate_many, EstimateError, Estimator, DEFAULT_INNER_SAMPLES};
use crate::evaluation::{self, ExperimentError, ExperimentSpec};
use crate::graph::{barabasi_albert, erdos_renyi, read_edge_list, write_edge_list, Graph, GraphError};
use crate::perturb::{apply_error, ErrorMechanism, PerturbError};
use crate::rng::RngSeed;
use crate::sensitivity::{classify_pairs, SensitivityError};

pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

pub const SEED_ENV: &str = "NETSENS_SEED";

#[derive(Debug, Parser)]
#[command(name = "netsens", version, about = "Sensitivity of centrality rankings to network measurement errors")]
pub struct Cli {
    /// Master seed. Falls back to NETSENS_SEED, then to the spec file, then to 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for experiments (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random graph as an edge list.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Apply one draw of an error mechanism to a graph.
    Perturb {
        /// Input edge list.
        #[arg(long, short)]
        input: PathBuf,
        /// Mechanism token, e.g. rm_edges_unif:0.1.
        #[arg(long)]
        mech: String,
        /// Output edge list (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compare the centrality rankings of two graphs.
    Sensitivity {
        a: PathBuf,
        b: PathBuf,
        /// Comma-separated measure tokens (bc, cc, dc, ec, pr).
        #[arg(long, default_value = "bc,cc,dc,ec,pr")]
        measures: String,
    },
    /// Estimate the sensitivity of an observed graph.
    Estimate {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        mech: String,
        #[arg(long, default_value = "bc,cc,dc,ec,pr")]
        measures: String,
        /// Monte-Carlo draws per estimate.
        #[arg(long, short = 'R', default_value_t = DEFAULT_INNER_SAMPLES)]
        inner_samples: usize,
    },
    /// Run a full experiment and write records.csv and aggregates.csv.
    Experiment(ExperimentArgs),
    /// Recompute aggregates from a records CSV.
    Report {
        records: PathBuf,
        /// Output file (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Model {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Barabási–Albert preferential attachment.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Spec file (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub spec: Option<PathBuf>,
    /// Embedded preset: er-paper, ba-paper or realworld-paper.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, short)]
    pub out_dir: PathBuf,
    /// Override the network, e.g. er:100:0.2 or edgelist:path.
    #[arg(long)]
    pub network: Option<String>,
    /// Override mechanisms; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub mech: Vec<String>,
    #[arg(long)]
    pub measures: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, short = 'R')]
    pub inner_samples: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<PerturbError> for CliError {
    fn from(e: PerturbError) -> Self {
        let code = match e {
            PerturbError::RemovalExceedsPopulation { .. } | PerturbError::Graph(GraphError::NotEnoughNonEdges { .. }) => {
                EXIT_INFEASIBLE
            }
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Io(e) => e.into(),
            crate::Error::Perturb(e) => e.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io(e) => e.into(),
            ExperimentError::Load(e) => (*e).into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("netsens: {}", e.message);
            e.code
        }
    }
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::invalid(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let seed = match cli.seed {
        Some(s) => Some(s),
        None => env_seed()?,
    };
    let master = RngSeed::from_master(seed.unwrap_or(0));
    match cli.command {
        Command::Generate { model } => cmd_generate(model, master),
        Command::Perturb { input, mech, out } => cmd_perturb(&input, &mech, out.as_deref(), master),
        Command::Sensitivity { a, b, measures } => cmd_sensitivity(&a, &b, &measures),
        Command::Estimate {
            input,
            mech,
            measures,
            inner_samples,
        } => cmd_estimate(&input, &mech, &measures, inner_samples, master),
        Command::Experiment(args) => cmd_experiment(args, seed, cli.workers),
        Command::Report { records, out } => cmd_report(&records, out.as_deref()),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path) -> Result<Graph, CliError> {
    let parsed = read_edge_list(path).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })?;
    if parsed.dropped.duplicates + parsed.dropped.self_loops > 0 {
        eprintln!(
            "{}: dropped {} duplicate edges and {} self-loops",
            path.display(),
            parsed.dropped.duplicates,
            parsed.dropped.self_loops
        );
    }
    Ok(parsed.graph)
}

fn mechanism(token: &str) -> Result<ErrorMechanism, CliError> {
    token
        .parse()
        .map_err(|e: PerturbError| CliError::invalid(format!("--mech: {e}")))
}

fn measures(tokens: &str) -> Result<Vec<CentralityMeasure>, CliError> {
    let list: Vec<&str> = tokens.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if list.is_empty() {
        return Err(CliError::invalid("--measures: no measure given"));
    }
    config::parse_measures(&list).map_err(|e| CliError::invalid(format!("--measures: {e}")))
}

fn cmd_generate(model: Model, seed: RngSeed) -> Result<(), CliError> {
    let (g, out) = match model {
        Model::Er { n, p, out } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::invalid(format!("--p must lie in [0, 1], got {p}")));
            }
            (erdos_renyi(n, p, seed).map_err(|e| CliError::invalid(e.to_string()))?, out)
        }
        Model::Ba { n, m, out } => {
            if m == 0 || m >= n {
                return Err(CliError::invalid(format!("--m must satisfy 1 <= m < n, got m = {m}, n = {n}")));
            }
            (barabasi_albert(n, m, seed).map_err(|e| CliError::invalid(e.to_string()))?, out)
        }
    };
    write_edge_list(&g, output(out.as_deref())?)?;
    eprintln!("nodes {} edges {}", g.node_count(), g.edge_count());
    Ok(())
}

fn cmd_perturb(input: &Path, mech: &str, out: Option<&Path>, seed: RngSeed) -> Result<(), CliError> {
    let phi = mechanism(mech)?;
    let g = load(input)?;
    let o = apply_error(&g, &phi, seed)?;
    write_edge_list(&o, output(out)?)?;
    eprintln!(
        "before: nodes {} edges {}; after: nodes {} edges {}",
        g.node_count(),
        g.edge_count(),
        o.node_count(),
        o.edge_count()
    );
    Ok(())
}

fn cmd_sensitivity(a: &Path, b: &Path, measure_tokens: &str) -> Result<(), CliError> {
    let measures = measures(measure_tokens)?;
    let (ga, gb) = (load(a)?, load(b)?);
    let mut out = output(None)?;
    writeln!(out, "centrality,compared_nodes,concordant,discordant,ties,rho")?;
    for m in &measures {
        let (ca, cb) = match (m.compute(&ga), m.compute(&gb)) {
            (Ok(ca), Ok(cb)) => (ca, cb),
            _ => {
                writeln!(out, "{},NA,NA,NA,NA,undefined", m.kind)?;
                continue;
            }
        };
        match classify_pairs(&ca, &cb) {
            Ok(pc) => {
                let rho = pc.rho().map_or_else(|_| "undefined".to_string(), |r| r.to_string());
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    m.kind, pc.compared_nodes, pc.concordant, pc.discordant, pc.ties, rho
                )?;
            }
            Err(e @ SensitivityError::TooFewCommonNodes(_)) => {
                out.flush()?;
                return Err(CliError::invalid(e.to_string()));
            }
            Err(SensitivityError::Undefined) => unreachable!("classification never reports undefined"),
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_estimate(
    input: &Path,
    mech: &str,
    measure_tokens: &str,
    inner_samples: usize,
    seed: RngSeed,
) -> Result<(), CliError> {
    let phi = mechanism(mech)?;
    let measures = measures(measure_tokens)?;
    if inner_samples == 0 {
        return Err(CliError::invalid("--inner-samples must be at least 1"));
    }
    let g = load(input)?;
    let mut out = output(None)?;
    writeln!(out, "centrality,estimator,estimate,std_error,defined_draws,undefined_draws,status")?;

    let computed: Vec<Option<_>> = measures.iter().map(|m| m.compute(&g).ok()).collect();
    let usable: Vec<CentralityMeasure> = measures
        .iter()
        .zip(&computed)
        .filter(|(_, c)| c.is_some())
        .map(|(m, _)| *m)
        .collect();
    let base: Vec<_> = computed.iter().flatten().cloned().collect();
    let mut infeasible = false;
    for (tag, est) in [(1u64, Estimator::Iterative), (2, Estimator::Imputation)] {
        let mut results = estimate_many(&g, &base, &usable, &phi, est, inner_samples, seed.child(&[tag])).into_iter();
        for (m, c) in measures.iter().zip(&computed) {
            // measures that fail on the observed graph itself are undefined
            let res = c.as_ref().and_then(|_| results.next());
            match res {
                Some(Ok(e)) => writeln!(
                    out,
                    "{},{est},{},{},{},{},ok",
                    m.kind, e.value, e.std_error, e.defined_draws, e.undefined_draws
                )?,
                Some(Err(EstimateError::Infeasible(_))) => {
                    infeasible = true;
                    writeln!(out, "{},{est},NA,NA,0,0,infeasible", m.kind)?
                }
                Some(Err(EstimateError::AllUndefined(u))) => {
                    writeln!(out, "{},{est},NA,NA,0,{u},undefined", m.kind)?
                }
                _ => writeln!(out, "{},{est},NA,NA,0,0,undefined", m.kind)?,
            }
        }
    }
    out.flush()?;
    if infeasible {
        return Err(CliError {
            code: EXIT_INFEASIBLE,
            message: format!("{phi} cannot be applied or inverted on {}", input.display()),
        });
    }
    Ok(())
}

fn experiment_spec(args: &ExperimentArgs, seed: Option<u64>) -> Result<ExperimentSpec, CliError> {
    let mut spec = match (&args.spec, &args.preset) {
        (Some(path), _) => config::load_spec(path, 0)?,
        (None, Some(name)) => config::preset(name)?,
        (None, None) => return Err(CliError::invalid("give --spec or --preset")),
    };
    if let Some(s) = seed {
        spec.master_seed = s;
    }
    if let Some(net) = &args.network {
        spec.network = config::parse_network(net).map_err(|e| CliError::invalid(format!("--network: {e}")))?;
    }
    if !args.mech.is_empty() {
        spec.mechanisms = config::parse_mechanisms(&args.mech).map_err(|e| CliError::invalid(format!("--mech: {e}")))?;
    }
    if let Some(m) = &args.measures {
        spec.measures = measures(m)?;
    }
    if let Some(r) = args.runs {
        spec.runs = r;
    }
    if let Some(r) = args.inner_samples {
        spec.inner_samples = r;
    }
    if let Some(t) = args.threshold {
        spec.threshold = t;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_experiment(args: ExperimentArgs, seed: Option<u64>, workers: usize) -> Result<(), CliError> {
    let spec = experiment_spec(&args, seed)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::invalid(format!("--workers: {e}")))?;
    let start = Instant::now();
    let records = pool.install(|| evaluation::run_experiment(&spec))?;
    let aggregates = evaluation::aggregate(&records);
    evaluation::write_records(&records, output(Some(&args.out_dir.join("records.csv")))?)?;
    evaluation::write_aggregates(&aggregates.rows, output(Some(&args.out_dir.join("aggregates.csv")))?)?;

    let excluded: usize = aggregates.rows.iter().map(|r| r.excluded_runs).sum();
    let infeasible = records.iter().filter(|r| r.flags.error_infeasible).count();
    for group in &aggregates.omitted {
        eprintln!("warning: no complete record for {group}; group omitted");
    }
    eprintln!(
        "{} records in {:.1}s; {excluded} excluded from aggregates ({infeasible} with an infeasible error draw)",
        records.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_report(records: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let file = File::open(records).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", records.display()),
    })?;
    let recs = evaluation::read_records(BufReader::new(file))?;
    let aggregates = evaluation::aggregate(&recs);
    for group in &aggregates.omitted {
        eprintln!("warning: no complete record for {group}; group omitted");
    }
    evaluation::write_aggregates(&aggregates.rows, output(out)?)?;
    Ok(())
}

/// Tokens accepted by `--measures`, for help text and tests.
pub fn measure_tokens() -> Vec<&'static str> {
    Measure::ALL.iter().map(|m| m.token()).collect()
}
