//! Command-line front end: `train`, `predict`, `cv`, `graph` and
//! `oracle-check`.
//!
//! Every subcommand writes its human-readable report to the supplied writer
//! and its artifacts to the paths given by flags. Failures map to distinct
//! exit codes through [`ErrorClass`](crate::error::ErrorClass).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dataio::{
    apply_cutpoints, drop_missing, fit_coding, load_table, make_folds, synthetic, ClassColumn, Coding, Dataset,
    Discretization, RawTable, DEFAULT_MISSING_TOKENS,
};
use crate::error::{Error, Result};
use crate::graph::GraphClass;
use crate::inference::{accuracy, build_average_graph, export_dot, rank_features, GraphSummary, Prediction, Predictor};
use crate::sampler::{
    enumerate_exact_posterior, read_trace, run_chains, total_variation, write_trace, ChainState, SampleTrace,
    SamplerConfig, DEFAULT_EXACT_LIMIT, RNG_ALGORITHM,
};
use crate::score::{score_breakdown, Hyperparams};

/// Exit code of `oracle-check` when the distance exceeds the gate.
pub const EXIT_GATE_FAILED: i32 = 1;
/// Total-variation gate used by `oracle-check`.
pub const ORACLE_TV_GATE: f64 = 0.05;
/// Default chain length for `oracle-check`.
pub const ORACLE_DEFAULT_ITERS: usize = 1_000_000;
/// Above this many features the average graph hides mostly-noise nodes by default.
pub const HIGH_DIM_AUTO_THRESHOLD: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "sbfc", version, about = "Selective Bayesian forest classifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample forests from the posterior and write the trace, rankings and a run manifest.
    Train(TrainArgs),
    /// Predict class probabilities for a test file from a saved trace.
    Predict(PredictArgs),
    /// K-fold cross-validated accuracy with per-fold discretization.
    Cv(CvArgs),
    /// Average graph of a trace as DOT and JSON.
    Graph(GraphArgs),
    /// Compare a long chain against exact enumeration on a tiny dataset.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Training data (delimited text, one record per line).
    #[arg(long)]
    pub data: PathBuf,
    /// Class column: `last`, a 0-based index, or a header name.
    #[arg(long = "class-col", default_value = "last")]
    pub class_col: ClassColumn,
    /// Field delimiter (a single byte; `\t` for tab).
    #[arg(long = "delim", default_value = ",", value_parser = parse_delimiter)]
    pub delim: u8,
    /// The file has no header line; names X1.. and Y are generated.
    #[arg(long = "no-header")]
    pub no_header: bool,
    #[arg(long, value_enum, default_value_t = Discretization::Auto)]
    pub discretize: Discretization,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Iterations per chain [default: max(10000, 10 d)].
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, default_value_t = SamplerConfig::DEFAULT_THIN)]
    pub thin: usize,
    /// Fraction of iterations discarded as burn-in.
    #[arg(long, default_value_t = SamplerConfig::DEFAULT_BURNIN)]
    pub burnin: f64,
    /// Trees proposed per Switch Trees sweep.
    #[arg(long = "switch-k", default_value_t = SamplerConfig::DEFAULT_SWITCH_K)]
    pub switch_k: usize,
    /// Dirichlet concentration.
    #[arg(long, default_value_t = Hyperparams::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent chains, run in parallel and concatenated.
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
}

impl ChainArgs {
    pub fn sampler_config(&self, d: usize) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            iterations: self.iters.unwrap_or_else(|| SamplerConfig::default_iterations(d)),
            thin: self.thin,
            burnin_fraction: self.burnin,
            switch_k: self.switch_k,
            seed: self.seed,
        };
        cfg.validate()?;
        if self.chains == 0 {
            return Err(Error::Config("--chains must be at least 1".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long = "trace-out", default_value = "trace.jsonl")]
    pub trace_out: PathBuf,
    /// Feature rankings.
    #[arg(long = "json-out", default_value = "rankings.json")]
    pub json_out: PathBuf,
    /// Run manifest: configuration, seed, dataset checksum and fitted coding.
    #[arg(long = "metrics-out", default_value = "manifest.json")]
    pub metrics_out: PathBuf,
    /// Also write the per-family score breakdown of the last sampled graph.
    #[arg(long = "score-dump")]
    pub score_dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Test file: same layout as the training file, or the feature columns only.
    #[arg(long)]
    pub test: PathBuf,
    /// Trace written by `train`.
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long, default_value_t = Hyperparams::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Probabilities CSV [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accuracy report (requires labelled test data).
    #[arg(long = "metrics-out")]
    pub metrics_out: Option<PathBuf>,
    /// Fail unless the test file carries labels.
    #[arg(long)]
    pub accuracy: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Number of folds.
    #[arg(long = "cv", default_value_t = 5)]
    pub folds: usize,
    #[arg(long = "metrics-out")]
    pub metrics_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HighDim {
    Auto,
    On,
    Off,
}

impl HighDim {
    pub fn resolve(self, d: usize) -> bool {
        match self {
            HighDim::Auto => d > HIGH_DIM_AUTO_THRESHOLD,
            HighDim::On => true,
            HighDim::Off => false,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long = "high-dim", value_enum, default_value_t = HighDim::Auto)]
    pub high_dim: HighDim,
    #[arg(long = "dot-out", default_value = "average.dot")]
    pub dot_out: PathBuf,
    #[arg(long = "json-out", default_value = "average.json")]
    pub json_out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Dataset with at most 5 features [default: bundled 2-feature data].
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long = "class-col", default_value = "last")]
    pub class_col: ClassColumn,
    #[arg(long = "delim", default_value = ",", value_parser = parse_delimiter)]
    pub delim: u8,
    #[arg(long = "no-header")]
    pub no_header: bool,
    #[arg(long, value_enum, default_value_t = Discretization::Auto)]
    pub discretize: Discretization,
    #[arg(long, default_value_t = ORACLE_DEFAULT_ITERS)]
    pub iters: usize,
    #[arg(long, default_value_t = Hyperparams::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "switch-k", default_value_t = SamplerConfig::DEFAULT_SWITCH_K)]
    pub switch_k: usize,
}

fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single byte, got {s:?}")),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Reports go to `out`, errors to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { crate::error::ErrorClass::Config.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one subcommand; `Ok` carries the exit code (non-zero only for a
/// failed oracle gate).
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Train(a) => cmd_train(a, out).map(|_| 0),
        Command::Predict(a) => cmd_predict(a, out).map(|_| 0),
        Command::Cv(a) => cmd_cv(a, out).map(|_| 0),
        Command::Graph(a) => cmd_graph(a, out).map(|_| 0),
        Command::OracleCheck(a) => cmd_oracle_check(a, out).map(|r| if r.passed { 0 } else { EXIT_GATE_FAILED }),
    }
}

fn read_raw(path: &Path, args: &DataArgs) -> Result<RawTable> {
    if !path.exists() {
        return Err(Error::Config(format!("input file {} does not exist", path.display())));
    }
    let table = load_table(path, args.delim, !args.no_header, &args.class_col)?;
    let cleaned = drop_missing(&table, &DEFAULT_MISSING_TOKENS)?;
    if cleaned.n() < table.n() {
        log::warn!("{}: dropped {} rows with missing values", path.display(), table.n() - cleaned.n());
    }
    Ok(cleaned)
}

/// Loaded and discretized training data.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub raw: RawTable,
    pub coding: Coding,
    pub data: Dataset,
}

/// Reads, cleans and discretizes a training file exactly as `train` does.
pub fn prepare_training(args: &DataArgs) -> Result<Prepared> {
    let raw = read_raw(&args.data, args)?;
    let coding = fit_coding(&raw, args.discretize)?;
    let data = apply_cutpoints(&raw, &coding)?;
    log::info!(
        "{}: n = {}, d = {}, {} classes, {:?} discretization",
        args.data.display(),
        data.n(),
        data.d(),
        data.class_arity(),
        coding.discretization
    );
    Ok(Prepared { raw, coding, data })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub rank: usize,
    pub feature: usize,
    pub name: String,
    pub relevance: f64,
}

pub fn ranked_features(trace: &SampleTrace) -> Result<Vec<RankedFeature>> {
    Ok(rank_features(trace)?
        .into_iter()
        .enumerate()
        .map(|(r, (j, relevance))| RankedFeature {
            rank: r + 1,
            feature: j,
            name: trace.feature_names.get(j).cloned().unwrap_or_else(|| format!("X{}", j + 1)),
            relevance,
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetInfo {
    pub path: String,
    pub checksum: String,
    pub n: usize,
    pub d: usize,
    pub class_column: usize,
    pub delimiter: String,
    pub header: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub rng: &'static str,
    pub alpha: f64,
    pub chains: usize,
    pub sampler: SamplerConfig,
    pub snapshots: usize,
    pub dataset: DatasetInfo,
    pub coding: Coding,
    pub outputs: Vec<String>,
}

/// Summary returned by [`cmd_train`].
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub trace: SampleTrace,
    pub rankings: Vec<RankedFeature>,
    pub manifest: Manifest,
}

pub fn cmd_train(args: &TrainArgs, out: &mut dyn Write) -> Result<TrainOutcome> {
    let prep = prepare_training(&args.data)?;
    let hp = Hyperparams::for_data(&prep.data, args.chain.alpha)?;
    let cfg = args.chain.sampler_config(prep.data.d())?;
    let trace = run_chains(&prep.data, &hp, &cfg, args.chain.chains)?;
    let rankings = ranked_features(&trace)?;

    // all files are written after sampling finishes, from this thread
    let mut w = create(&args.trace_out)?;
    write_trace(&mut w, &trace)?;
    w.flush()?;
    write_json(&args.json_out, &rankings)?;
    let mut outputs = vec![args.trace_out.display().to_string(), args.json_out.display().to_string()];
    if let Some(path) = &args.score_dump {
        let last = trace.samples.last().ok_or_else(|| Error::Inference("trace has no snapshots".into()))?;
        write_json(path, &score_breakdown(last, &prep.data, &hp))?;
        outputs.push(path.display().to_string());
    }
    let manifest = Manifest {
        command: "train",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        rng: RNG_ALGORITHM,
        alpha: hp.alpha,
        chains: args.chain.chains,
        sampler: cfg,
        snapshots: trace.len(),
        dataset: DatasetInfo {
            path: args.data.data.display().to_string(),
            checksum: prep.raw.checksum(),
            n: prep.raw.n(),
            d: prep.raw.d(),
            class_column: prep.raw.class_column,
            delimiter: (args.data.delim as char).to_string(),
            header: !args.data.no_header,
        },
        coding: prep.coding.clone(),
        outputs,
    };
    write_json(&args.metrics_out, &manifest)?;

    writeln!(out, "sampled {} iterations x {} chain(s): {} snapshots", cfg.iterations, args.chain.chains, trace.len())?;
    for r in rankings.iter().take(10) {
        writeln!(out, "{:>4}  {:<24} {:.3}", r.rank, r.name, r.relevance)?;
    }
    writeln!(out, "trace: {}", args.trace_out.display())?;
    Ok(TrainOutcome { trace, rankings, manifest })
}

fn load_trace(path: &Path) -> Result<SampleTrace> {
    if !path.exists() {
        return Err(Error::Config(format!("trace file {} does not exist", path.display())));
    }
    read_trace(BufReader::new(File::open(path)?))
}

/// One predicted test row.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedRow {
    pub row: usize,
    pub prediction: Prediction,
    pub truth: Option<u32>,
}

/// Summary returned by [`cmd_predict`].
#[derive(Debug, Clone)]
pub struct PredictOutcome {
    pub rows: Vec<PredictedRow>,
    pub accuracy: Option<f64>,
}

/// Encoded test rows plus labels when the file has a class column.
struct TestRows {
    x: Vec<Vec<u32>>,
    truth: Option<Vec<u32>>,
    rows: Vec<usize>,
}

fn encode_test(path: &Path, args: &DataArgs, coding: &Coding) -> Result<TestRows> {
    if !path.exists() {
        return Err(Error::Config(format!("test file {} does not exist", path.display())));
    }
    // Read with a placeholder class column; the width decides the layout.
    let table = load_table(path, args.delim, !args.no_header, &ClassColumn::Index(0))?;
    let labelled = if table.width() == coding.width {
        true
    } else if table.width() + 1 == coding.width {
        false
    } else {
        return Err(Error::Validation(format!(
            "test file has {} columns; training layout needs {} (labelled) or {} (features only)",
            table.width(),
            coding.width,
            coding.width - 1
        )));
    };
    let missing = |r: &Vec<String>| r.iter().any(|c| DEFAULT_MISSING_TOKENS.contains(&c.trim()));
    let mut x = Vec::new();
    let mut truth = Vec::new();
    let mut rows = Vec::new();
    let first_line = if args.no_header { 1 } else { 2 };
    for (i, r) in table.rows.iter().enumerate() {
        if missing(r) {
            log::warn!("{}: skipping row {} with missing values", path.display(), i + 1);
            continue;
        }
        let line = i + first_line;
        if labelled {
            x.push(coding.encode_record(r, line)?);
            truth.push(coding.encode_class(&r[coding.class_column]));
        } else {
            x.push(coding.encode_unlabeled(r, line)?);
        }
        rows.push(i);
    }
    if x.is_empty() {
        return Err(Error::EmptyDataset(format!("{} has no complete rows", path.display())));
    }
    Ok(TestRows { x, truth: labelled.then_some(truth), rows })
}

fn check_trace_matches(trace: &SampleTrace, coding: &Coding) -> Result<()> {
    if trace.d() != coding.d() {
        return Err(Error::Validation(format!(
            "trace has {} features but the training data has {}",
            trace.d(),
            coding.d()
        )));
    }
    if trace.feature_names != coding.feature_names() {
        return Err(Error::Validation("trace feature names differ from the training data".into()));
    }
    Ok(())
}

pub fn cmd_predict(args: &PredictArgs, out: &mut dyn Write) -> Result<PredictOutcome> {
    let trace = load_trace(&args.trace)?;
    let prep = prepare_training(&args.data)?;
    check_trace_matches(&trace, &prep.coding)?;
    let test = encode_test(&args.test, &args.data, &prep.coding)?;
    if args.accuracy && test.truth.is_none() {
        return Err(Error::Config(format!("accuracy requested but {} has no class column", args.test.display())));
    }
    let hp = Hyperparams::for_data(&prep.data, args.alpha)?;
    let predictor = Predictor::new(&trace, &prep.data, &hp)?;
    let rows: Vec<PredictedRow> = test
        .x
        .iter()
        .enumerate()
        .map(|(i, x)| PredictedRow {
            row: test.rows[i],
            prediction: predictor.predict(x),
            truth: test.truth.as_ref().map(|t| t[i]),
        })
        .collect();
    let preds: Vec<Prediction> = rows.iter().map(|r| r.prediction.clone()).collect();
    let acc = test.truth.as_ref().and_then(|t| accuracy(&preds, t));

    let class_names = prep.data.class_names();
    let label = |k: u32| class_names.get(k as usize).cloned().unwrap_or_else(|| "<unseen>".to_string());
    let mut csv_out: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(&mut *out),
    };
    let mut header = vec!["row".to_string()];
    header.extend(class_names.iter().map(|c| format!("p_{c}")));
    header.push("predicted".into());
    if test.truth.is_some() {
        header.push("actual".into());
    }
    writeln!(csv_out, "{}", header.join(","))?;
    for r in &rows {
        let mut cells = vec![r.row.to_string()];
        cells.extend(r.prediction.class_probs.iter().map(|p| format!("{p}")));
        cells.push(label(r.prediction.label as u32));
        if let Some(t) = r.truth {
            cells.push(label(t));
        }
        writeln!(csv_out, "{}", cells.join(","))?;
    }
    csv_out.flush()?;
    drop(csv_out);

    if let Some(a) = acc {
        writeln!(out, "accuracy: {a:.4} ({} rows)", rows.len())?;
        if let Some(path) = &args.metrics_out {
            write_json(path, &serde_json::json!({ "rows": rows.len(), "accuracy": a }))?;
        }
    } else if args.metrics_out.is_some() {
        return Err(Error::Config("--metrics-out needs a labelled test file".into()));
    }
    Ok(PredictOutcome { rows, accuracy: acc })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
}

/// K-fold cross-validation of a raw table; cutpoints are fitted on each
/// training fold only.
pub fn cross_validate(raw: &RawTable, mode: Discretization, chain: &ChainArgs, k: usize) -> Result<CvReport> {
    let plan = make_folds(raw.n(), k, chain.seed)?;
    let mut folds = Vec::with_capacity(k);
    for f in 0..k {
        let train_raw = raw.subset(&plan.train_indices(f));
        let test_raw = raw.subset(&plan.test_indices(f));
        let coding = fit_coding(&train_raw, mode)?;
        let train = apply_cutpoints(&train_raw, &coding)?;
        let hp = Hyperparams::for_data(&train, chain.alpha)?;
        let cfg = chain.sampler_config(train.d())?;
        let trace = run_chains(&train, &hp, &cfg, chain.chains)?;
        let predictor = Predictor::new(&trace, &train, &hp)?;
        let mut preds = Vec::with_capacity(test_raw.n());
        let mut truth = Vec::with_capacity(test_raw.n());
        for (i, r) in test_raw.rows.iter().enumerate() {
            preds.push(predictor.predict(&coding.encode_record(r, i + 1)?));
            truth.push(coding.encode_class(&r[coding.class_column]));
        }
        let acc = accuracy(&preds, &truth).unwrap_or(0.0);
        log::info!("fold {}: accuracy {acc:.4}", f + 1);
        folds.push(FoldResult { fold: f + 1, n_train: train.n(), n_test: test_raw.n(), accuracy: acc });
    }
    let mean_accuracy = folds.iter().map(|f| f.accuracy).sum::<f64>() / k as f64;
    Ok(CvReport { k, seed: chain.seed, folds, mean_accuracy })
}

pub fn cmd_cv(args: &CvArgs, out: &mut dyn Write) -> Result<CvReport> {
    let raw = read_raw(&args.data.data, &args.data)?;
    let report = cross_validate(&raw, args.data.discretize, &args.chain, args.folds)?;
    for f in &report.folds {
        writeln!(out, "fold {}: {}/{} rows, accuracy {:.4}", f.fold, f.n_train, f.n_test, f.accuracy)?;
    }
    writeln!(out, "mean accuracy: {:.4}", report.mean_accuracy)?;
    if let Some(path) = &args.metrics_out {
        write_json(path, &report)?;
    }
    Ok(report)
}

/// Summary returned by [`cmd_graph`].
#[derive(Debug, Clone)]
pub struct GraphOutcome {
    pub dot: String,
    pub summary: GraphSummary,
    pub high_dim: bool,
}

pub fn cmd_graph(args: &GraphArgs, out: &mut dyn Write) -> Result<GraphOutcome> {
    let trace = load_trace(&args.trace)?;
    let high_dim = args.high_dim.resolve(trace.d());
    let avg = build_average_graph(&trace, high_dim)?;
    let dot = export_dot(&avg, &trace.feature_names);
    let summary = GraphSummary::new(&avg, &trace.feature_names);
    let mut w = create(&args.dot_out)?;
    w.write_all(dot.as_bytes())?;
    w.flush()?;
    write_json(&args.json_out, &summary)?;
    writeln!(
        out,
        "average graph over {} snapshots: {} nodes, {} edges{}",
        trace.len(),
        summary.nodes.len(),
        summary.edges.len(),
        if high_dim { " (mostly-noise nodes hidden)" } else { "" }
    )?;
    Ok(GraphOutcome { dot, summary, high_dim })
}

/// Result of [`cmd_oracle_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub d: usize,
    pub iterations: usize,
    pub classes: usize,
    pub total_variation: f64,
    pub passed: bool,
}

/// Runs an un-thinned chain and compares its visit frequencies over graph
/// classes with the enumerated posterior.
pub fn oracle_check(
    data: &Dataset,
    hp: &Hyperparams,
    iterations: usize,
    switch_k: usize,
    seed: u64,
) -> Result<OracleReport> {
    let exact = enumerate_exact_posterior(data, hp, DEFAULT_EXACT_LIMIT)?;
    let mut state = ChainState::new(data, hp, seed);
    let mut counts: HashMap<GraphClass, u64> = HashMap::new();
    for _ in 0..iterations {
        state.step(data, hp, switch_k);
        *counts.entry(state.graph().class_key()).or_default() += 1;
    }
    let tv = total_variation(&exact, &counts);
    Ok(OracleReport {
        d: data.d(),
        iterations,
        classes: exact.classes.len(),
        total_variation: tv,
        passed: tv < ORACLE_TV_GATE,
    })
}

pub fn cmd_oracle_check(args: &OracleArgs, out: &mut dyn Write) -> Result<OracleReport> {
    let data = match &args.data {
        None => synthetic::tiny_d2(),
        Some(path) => {
            let data_args = DataArgs {
                data: path.clone(),
                class_col: args.class_col.clone(),
                delim: args.delim,
                no_header: args.no_header,
                discretize: args.discretize,
            };
            let raw = read_raw(path, &data_args)?;
            if raw.d() > DEFAULT_EXACT_LIMIT {
                return Err(Error::TooLarge { d: raw.d(), limit: DEFAULT_EXACT_LIMIT });
            }
            prepare_training(&data_args)?.data
        }
    };
    let hp = Hyperparams::for_data(&data, args.alpha)?;
    let report = oracle_check(&data, &hp, args.iters, args.switch_k, args.seed)?;
    writeln!(
        out,
        "d = {}, {} graph classes, {} iterations: TV = {:.4} (gate {ORACLE_TV_GATE}) {}",
        report.d,
        report.classes,
        report.iterations,
        report.total_variation,
        if report.passed { "PASS" } else { "FAIL" }
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delimiter_parsing() {
        assert_eq!(parse_delimiter(",").unwrap(), b',');
        assert_eq!(parse_delimiter("\\t").unwrap(), b'\t');
        assert!(parse_delimiter(";;").is_err());
    }

    #[test]
    fn high_dim_auto_switches_above_100_features() {
        assert!(!HighDim::Auto.resolve(100));
        assert!(HighDim::Auto.resolve(101));
        assert!(HighDim::On.resolve(3));
        assert!(!HighDim::Off.resolve(500));
    }

    #[test]
    fn default_iterations_follow_feature_count() {
        let chain = ChainArgs { iters: None, thin: 50, burnin: 0.2, switch_k: 10, alpha: 5.0, seed: 0, chains: 1 };
        assert_eq!(chain.sampler_config(6).unwrap().iterations, 10_000);
        assert_eq!(chain.sampler_config(500).unwrap().iterations, 10_000);
        assert_eq!(chain.sampler_config(2_000).unwrap().iterations, 20_000);
        let bad = ChainArgs { chains: 0, ..chain };
        assert!(matches!(bad.sampler_config(6), Err(Error::Config(_))));
    }

    #[test]
    fn usage_errors_exit_with_config_code() {
        let mut sink = Vec::new();
        assert_eq!(run(["sbfc", "train"], &mut sink), 2);
        assert_eq!(run(["sbfc", "frobnicate"], &mut sink), 2);
    }

    #[test]
    fn zero_iteration_oracle_fails_with_distance_reported() {
        let data = synthetic::tiny_d2();
        let hp = Hyperparams::for_data(&data, 5.0).unwrap();
        let r = oracle_check(&data, &hp, 0, 10, 1).unwrap();
        assert!(!r.passed);
        assert!((r.total_variation - 0.5).abs() < 1e-12);
    }
}
