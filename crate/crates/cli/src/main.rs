use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use glad_core::detect::DetectionResult;
use glad_core::eval::{run_experiment, DatasetSpec};
use glad_core::explain::explain_pair;
use glad_core::io::export::export_highlighted;
use glad_core::io::{self, BaseKind, ExportFormat, SyntheticConfig};
use glad_core::params::{self, DetectParams, EmbedParams};
use glad_core::pipeline::{fit_and_embed, run_pipeline};
use glad_core::{AttributeMode, EmbeddingMode, EmbeddingStore, Error};

#[derive(Parser)]
#[command(name = "glad", version, about = "Prototype-based graph-level anomaly detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic motif benchmark as a dataset JSON file.
    Synth(SynthArgs),
    /// Read a TUDataset directory into a dataset JSON file.
    Ingest(IngestArgs),
    /// Turn a class-labelled dataset into an anomaly benchmark.
    Prep(PrepArgs),
    /// Embed and detect; writes the detection result JSON.
    Detect(DetectArgs),
    /// Explain one graph against its nearest prototype.
    Explain(ExplainArgs),
    /// Repeated-seed AUC evaluation; writes the report JSON.
    Eval(EvalArgs),
}

/// Values that may come from `--config`; flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    psi: Option<usize>,
    t: Option<usize>,
    h: Option<usize>,
    mode: Option<EmbeddingMode>,
    tau: Option<f64>,
    tau_quantile: Option<f64>,
    rho: Option<f64>,
    seed: Option<u64>,
    seeds: Option<usize>,
    attr_mode: Option<AttributeMode>,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    psi: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    /// `final` or `concat`.
    #[arg(long)]
    mode: Option<EmbeddingMode>,
    /// Similarity threshold; defaults to a quantile of pairwise similarities.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    tau_quantile: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Root seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl ModelArgs {
    fn load_config(&self) -> Result<ConfigFile, Error> {
        match &self.config {
            Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
            None => Ok(ConfigFile::default()),
        }
    }

    fn resolve(&self) -> Result<(EmbedParams, DetectParams, ConfigFile), Error> {
        let file = self.load_config()?;
        let embed = EmbedParams {
            psi: self.psi.or(file.psi).unwrap_or(params::DEFAULT_PSI),
            t: self.t.or(file.t).unwrap_or(params::DEFAULT_T),
            h: self.h.or(file.h).unwrap_or(params::DEFAULT_H),
            mode: self.mode.or(file.mode).unwrap_or_default(),
            seed: self.seed.or(file.seed).unwrap_or(0),
        };
        let detect = DetectParams {
            tau: self.tau.or(file.tau),
            tau_quantile: self.tau_quantile.or(file.tau_quantile).unwrap_or(params::DEFAULT_TAU_QUANTILE),
            rho: self.rho.or(file.rho).unwrap_or(params::DEFAULT_RHO),
        };
        Ok((embed, detect, file))
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 500)]
    num_normal: usize,
    #[arg(long, default_value_t = 25)]
    num_anomalous: usize,
    /// Comma-separated subset of tree, wheel, ladder.
    #[arg(long, value_delimiter = ',', default_value = "tree,wheel,ladder")]
    base_kinds: Vec<String>,
    #[arg(long, default_value_t = 8)]
    size_min: usize,
    #[arg(long, default_value_t = 14)]
    size_max: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    name: String,
    /// Attribute source when the dataset has no attribute file:
    /// raw_attributes, one_hot_labels or degree_scalar.
    #[arg(long)]
    attr_mode: Option<AttributeMode>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PrepArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    anomalous_class: i64,
    #[arg(long)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExplainArgs {
    #[arg(long)]
    input: PathBuf,
    /// Detection result JSON produced by `detect` on the same input.
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    graph_id: usize,
    /// Fraction of lowest-scored nodes to outline.
    #[arg(long, default_value_t = params::DEFAULT_HIGHLIGHT_FRACTION)]
    highlight: f64,
    /// Writes explanation.json, anomaly.dot and prototype.dot here.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Labelled dataset JSON. Without --input or --tu-dir the synthetic
    /// benchmark (defaults) is used.
    #[arg(long, conflicts_with = "tu_dir")]
    input: Option<PathBuf>,
    #[arg(long, requires_all = ["name", "anomalous_class", "ratio"])]
    tu_dir: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    anomalous_class: Option<i64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    attr_mode: Option<AttributeMode>,
    /// Number of repetitions.
    #[arg(long)]
    seeds: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    /// Record wall-clock seconds (makes the report non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: PathBuf,
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn parse_kinds(kinds: &[String]) -> Result<Vec<BaseKind>, Error> {
    kinds
        .iter()
        .map(|k| match k.trim() {
            "tree" => Ok(BaseKind::Tree),
            "wheel" => Ok(BaseKind::Wheel),
            "ladder" => Ok(BaseKind::Ladder),
            other => Err(Error::InvalidParameter(format!("unknown base kind `{other}`"))),
        })
        .collect()
}

fn synth(a: SynthArgs) -> Result<(), Error> {
    let cfg = SyntheticConfig {
        num_normal: a.num_normal,
        num_anomalous: a.num_anomalous,
        base_kinds: parse_kinds(&a.base_kinds)?,
        base_size_range: (a.size_min, a.size_max),
        attr_noise_std: a.noise,
        seed: a.seed,
    };
    let ds = io::gen_synthetic(&cfg)?;
    io::write_dataset(&ds, &a.out)?;
    log::info!("wrote {} graphs to {}", ds.len(), a.out.display());
    Ok(())
}

fn ingest(a: IngestArgs) -> Result<(), Error> {
    let ds = io::parse_tudataset(&a.dir, &a.name, a.attr_mode)?;
    io::write_dataset(&ds, &a.out)?;
    log::info!("wrote {} graphs ({:?}, dim {}) to {}", ds.len(), ds.attribute_mode, ds.attr_dim, a.out.display());
    Ok(())
}

fn prep(a: PrepArgs) -> Result<(), Error> {
    let ds = io::read_dataset(&a.input)?;
    let out = io::prepare_glad(&ds, a.anomalous_class, a.ratio, a.seed)?;
    io::write_dataset(&out, &a.out)?;
    Ok(())
}

fn detect(a: DetectArgs) -> Result<(), Error> {
    let ds = io::read_dataset(&a.input)?;
    let (embed, det, _) = a.model.resolve()?;
    let run = run_pipeline(&ds, &embed, &det)?;
    write_json(&a.out, &run.result)?;
    log::info!("k = {} clusters, tau = {}", run.result.k(), run.result.params.tau);
    Ok(())
}

fn explain(a: ExplainArgs) -> Result<(), Error> {
    let ds = io::read_dataset(&a.input)?;
    let mut result: DetectionResult = serde_json::from_str(&fs::read_to_string(&a.result)?)?;
    if result.clusters.is_empty() {
        return Err(Error::NoClusters { first_gamma: f64::NAN, tau: result.params.tau });
    }
    let embed = result
        .params
        .embed
        .ok_or_else(|| Error::InvalidDataset("result lacks embedding parameters".into()))?;
    let (model, embeddings) = fit_and_embed(&ds, &embed)?;
    result.rehydrate(&embeddings)?;
    let store = EmbeddingStore { dataset: &ds, model: &model, h: embed.h, mode: embed.mode, embeddings };
    let ex = explain_pair(&result, &store, a.graph_id, a.highlight)?;

    fs::create_dir_all(&a.out)?;
    write_json(&a.out.join("explanation.json"), &ex)?;
    export_highlighted(
        &ds.graphs[ex.anomaly_id],
        &ex.anomaly_node_scores,
        &ex.anomaly_lowest_nodes,
        &a.out.join("anomaly.dot"),
        ExportFormat::Dot,
    )?;
    export_highlighted(
        &ds.graphs[ex.prototype_id],
        &ex.prototype_node_scores,
        &ex.prototype_lowest_nodes,
        &a.out.join("prototype.dot"),
        ExportFormat::Dot,
    )?;
    Ok(())
}

fn eval(a: EvalArgs) -> Result<(), Error> {
    let (embed, det, file) = a.model.resolve()?;
    let seeds = a.seeds.or(file.seeds).unwrap_or(5);
    let attr_mode = a.attr_mode.or(file.attr_mode);
    let spec = match (&a.input, &a.tu_dir) {
        (Some(path), _) => DatasetSpec::Json { path: path.clone() },
        (None, Some(dir)) => DatasetSpec::TuDataset {
            dir: dir.clone(),
            name: a.name.clone().unwrap_or_default(),
            attribute_mode: attr_mode,
            anomalous_class: a.anomalous_class.unwrap_or_default(),
            anomaly_ratio: a.ratio.unwrap_or_default(),
        },
        (None, None) => DatasetSpec::Synthetic(SyntheticConfig::default()),
    };
    let mut report = run_experiment(&spec, &embed, &det, embed.seed, seeds)?;
    if !a.timing {
        report.wall_clock_seconds = None;
    }
    report.write(&a.out)?;
    match (report.mean, report.std) {
        (Some(m), Some(s)) => println!("{}: AUC {m:.4} ± {s:.4} over {} seed(s)", report.dataset, report.per_seed_aucs.len()),
        _ => println!("{}: no successful run", report.dataset),
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoClusters { .. } => 3,
        Error::InvalidParameter(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Ingest(a) => ingest(a),
        Command::Prep(a) => prep(a),
        Command::Detect(a) => detect(a),
        Command::Explain(a) => explain(a),
        Command::Eval(a) => eval(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
