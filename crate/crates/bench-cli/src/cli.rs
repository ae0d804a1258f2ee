use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sktdpc::baseline::{dc_from_percent, full_matrix};
use sktdpc::dataset::{
    fifteen_blobs, generate_gaussian_blobs, load, normalize, pca_reduce, BlobSpec, LoadOptions,
    Normalization,
};
use sktdpc::{plot, Dataset};

use crate::registry::{self, Resolved};
use crate::report::{execute, to_toml, Algorithm, RunReport};

/// Problems with the invocation or its inputs; the process exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser, Debug)]
#[command(
    name = "sktdpc",
    version,
    about = "Density peaks clustering with k-d tree densities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cluster one dataset and write labels and a report.
    Cluster(ClusterArgs),
    /// Run a suite of (dataset, algorithm, parameters) cells with repeats.
    Bench(BenchArgs),
    /// Render a decision graph, sorted decision values or a 2-D scatter.
    Plot(PlotArgs),
    /// Cluster one dataset for a range of k and tabulate the indices.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Toggle {
    On,
    Off,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmArg {
    Sktdpc,
    Reference,
    Dpc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    DecisionGraph,
    Gamma,
    Scatter,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Delimited text file, registered dataset name (iris, wine, flame, ...)
    /// or generated fixture (two-blobs, fifteen-blobs).
    pub input: String,

    /// Min-max scale every feature to [0, 1] before clustering.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub normalize: Toggle,

    /// Column holding class labels (negative counts from the end) or `none`.
    /// Registered datasets default to the last column.
    #[arg(long, allow_hyphen_values = true)]
    pub label_col: Option<String>,

    /// Skip the first line of a delimited file.
    #[arg(long)]
    pub header: bool,

    /// Seed for generated fixtures.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct AlgorithmArgs {
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Sktdpc)]
    pub algorithm: AlgorithmArg,

    /// Number of nearest neighbours.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: Option<u64>,

    /// Cut-off distance for `--algorithm dpc`.
    #[arg(long)]
    pub dc: Option<f64>,

    /// Cut-off as the percentage of pairwise distances below it.
    #[arg(long, conflicts_with = "dc")]
    pub dc_percent: Option<f64>,

    /// Number of centres for `--algorithm dpc`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_centers: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub algorithm: AlgorithmArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeats: u64,
    /// Labels file: one integer per line, input order.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Suite description (TOML with `[[cell]]` entries).
    #[arg(long, conflicts_with = "preset")]
    pub suite: Option<PathBuf>,
    /// Built-in suite.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeats: u64,
    /// Seed for generated fixtures.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// 5000 points in 15 blobs, accelerated pipeline against the full matrix.
    Efficiency,
    /// Every registered dataset at its reference k.
    Datasets,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub algorithm: AlgorithmArgs,
    /// Project to two principal components before drawing a scatter.
    #[arg(long)]
    pub pca: bool,
    /// Number of ranks shown in the decision-value chart.
    #[arg(long, default_value_t = 40)]
    pub ranks: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Inclusive range `a:b` (or `a-b`, or a single value).
    #[arg(long, default_value = "2:10")]
    pub k: String,
    /// Table file (comma-separated); printed to stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Exit status for a failed run: 2 for usage and input errors, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<sktdpc::Error>() {
            if matches!(
                e,
                sktdpc::Error::Io { .. }
                    | sktdpc::Error::Parse { .. }
                    | sktdpc::Error::Empty(_)
                    | sktdpc::Error::KOutOfRange { .. }
            ) {
                return 2;
            }
        }
    }
    1
}

fn parse_label_col(raw: Option<&str>) -> Result<Option<Option<isize>>> {
    match raw {
        None => Ok(None),
        Some("none") => Ok(Some(None)),
        Some(s) => s.parse::<isize>().map(|c| Some(Some(c))).map_err(|_| {
            usage(format!(
                "--label-col expects an integer or `none`, got `{s}`"
            ))
        }),
    }
}

/// Reads a dataset from a file, the registry or a fixture generator.
pub fn resolve_dataset(
    spec: &str,
    label_col: Option<Option<isize>>,
    header: bool,
    seed: u64,
) -> Result<Dataset> {
    let path = Path::new(spec);
    if path.exists() {
        let opts = LoadOptions {
            label_column: label_col.flatten(),
            has_header: header,
            ..LoadOptions::default()
        };
        return Ok(load(path, &opts)?);
    }
    let mut data = match spec {
        "two-blobs" => generate_gaussian_blobs(&BlobSpec {
            centers: vec![vec![0.0, 0.0], vec![8.0, 8.0]],
            spreads: vec![1.0],
            points_per_cluster: 150,
            seed,
        })?,
        "fifteen-blobs" => fifteen_blobs(5000, seed)?,
        name => match registry::lookup(name) {
            Some(info) => match info.resolve() {
                Resolved::File(..) => info.load()?,
                Resolved::Missing(info, dirs) => {
                    bail!(usage(registry::missing_message(&info, &dirs)))
                }
            },
            None => bail!(usage(format!(
                "{spec}: no such file, registered dataset or fixture"
            ))),
        },
    };
    if label_col == Some(None) {
        data = data.without_labels();
    }
    Ok(data)
}

fn prepare(input: &InputArgs) -> Result<(Dataset, bool)> {
    let label_col = parse_label_col(input.label_col.as_deref())?;
    let data = resolve_dataset(&input.input, label_col, input.header, input.seed)?;
    let on = input.normalize == Toggle::On;
    let data = if on {
        normalize(&data, Normalization::MinMax)
    } else {
        data
    };
    Ok((data, on))
}

fn algorithm(args: &AlgorithmArgs, data: &Dataset) -> Result<Algorithm> {
    let need_k = || -> Result<usize> {
        let k = args.k.ok_or_else(|| usage("--k is required"))? as usize;
        if k >= data.len() {
            bail!(usage(format!(
                "--k {k} must be below the number of points ({})",
                data.len()
            )));
        }
        Ok(k)
    };
    Ok(match args.algorithm {
        AlgorithmArg::Sktdpc => Algorithm::Sktdpc { k: need_k()? },
        AlgorithmArg::Reference => Algorithm::Reference { k: need_k()? },
        AlgorithmArg::Dpc => {
            let dc = match (args.dc, args.dc_percent) {
                (Some(dc), _) => dc,
                (None, Some(p)) => dc_from_percent(&full_matrix(data), p),
                (None, None) => bail!(usage("--algorithm dpc needs --dc or --dc-percent")),
            };
            let n_centers = args
                .n_centers
                .ok_or_else(|| usage("--algorithm dpc needs --n-centers"))?
                as usize;
            Algorithm::Dpc { dc, n_centers }
        }
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_cluster(args: ClusterArgs) -> Result<()> {
    let (data, normalized) = prepare(&args.input)?;
    let algo = algorithm(&args.algorithm, &data)?;
    let exec = execute(&data, algo, args.repeats as usize, normalized)?;
    if let Some(path) = &args.output {
        let mut text = String::with_capacity(data.len() * 3);
        for l in &exec.result.labels {
            let _ = writeln!(text, "{l}");
        }
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    write_or_print(args.report.as_deref(), &to_toml(&exec.report)?)
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub dataset: String,
    #[serde(default = "default_algorithm")]
    pub algorithm: String,
    pub k: Option<usize>,
    pub dc: Option<f64>,
    pub dc_percent: Option<f64>,
    pub n_centers: Option<usize>,
    #[serde(default = "default_true")]
    pub normalize: bool,
    pub label_col: Option<isize>,
    #[serde(default)]
    pub header: bool,
}

fn default_algorithm() -> String {
    "sktdpc".into()
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default)]
    pub cell: Vec<CellSpec>,
}

impl CellSpec {
    fn sktdpc(dataset: &str, algorithm: &str, k: usize) -> Self {
        CellSpec {
            dataset: dataset.into(),
            algorithm: algorithm.into(),
            k: Some(k),
            dc: None,
            dc_percent: None,
            n_centers: None,
            normalize: true,
            label_col: None,
            header: false,
        }
    }
}

pub fn preset_suite(preset: Preset) -> Suite {
    let cell = match preset {
        Preset::Efficiency => vec![
            CellSpec::sktdpc("fifteen-blobs", "sktdpc", 7),
            CellSpec::sktdpc("fifteen-blobs", "reference", 7),
        ],
        Preset::Datasets => [
            ("flame", 3),
            ("spiral", 4),
            ("aggregation", 6),
            ("r15", 5),
            ("iris", 2),
            ("seeds", 3),
            ("wine", 6),
        ]
        .into_iter()
        .map(|(d, k)| CellSpec::sktdpc(d, "sktdpc", k))
        .collect(),
    };
    Suite { cell }
}

#[derive(Debug, Serialize)]
pub struct CellReport {
    pub cell: usize,
    pub dataset: String,
    pub algorithm: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunReport>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub repeats: usize,
    pub failed: usize,
    pub cells: Vec<CellReport>,
}

fn run_cell(spec: &CellSpec, repeats: usize, seed: u64) -> Result<RunReport> {
    let label_col = spec.label_col.map(Some);
    let data = resolve_dataset(&spec.dataset, label_col, spec.header, seed)?;
    let data = if spec.normalize {
        normalize(&data, Normalization::MinMax)
    } else {
        data
    };
    let algorithm = match spec.algorithm.as_str() {
        "sktdpc" | "reference" => {
            let k = spec.k.ok_or_else(|| usage("cell needs k"))?;
            if spec.algorithm == "sktdpc" {
                Algorithm::Sktdpc { k }
            } else {
                Algorithm::Reference { k }
            }
        }
        "dpc" => {
            let dc = match (spec.dc, spec.dc_percent) {
                (Some(dc), _) => dc,
                (None, Some(p)) => dc_from_percent(&full_matrix(&data), p),
                (None, None) => bail!(usage("dpc cell needs dc or dc_percent")),
            };
            let n_centers = spec
                .n_centers
                .ok_or_else(|| usage("dpc cell needs n_centers"))?;
            Algorithm::Dpc { dc, n_centers }
        }
        other => bail!(usage(format!("unknown algorithm `{other}`"))),
    };
    Ok(execute(&data, algorithm, repeats, spec.normalize)?.report)
}

/// Runs every cell in order; a failing cell is recorded and the suite
/// continues. Cells run one at a time so their timings do not interfere.
pub fn run_suite(suite: &Suite, repeats: usize, seed: u64) -> BenchReport {
    let cells: Vec<CellReport> = suite
        .cell
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let (status, error, run) = match run_cell(spec, repeats, seed) {
                Ok(r) => ("ok", None, Some(r)),
                Err(e) => ("error", Some(format!("{e:#}")), None),
            };
            CellReport {
                cell: i,
                dataset: spec.dataset.clone(),
                algorithm: spec.algorithm.clone(),
                status: status.into(),
                error,
                run,
            }
        })
        .collect();
    BenchReport {
        repeats,
        failed: cells.iter().filter(|c| c.status != "ok").count(),
        cells,
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let suite = match (&args.suite, args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read suite {}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(p)) => preset_suite(p),
        (None, None) => bail!(usage("bench needs --suite FILE or --preset NAME")),
    };
    let report = run_suite(&suite, args.repeats as usize, args.seed);
    write_or_print(args.report.as_deref(), &to_toml(&report)?)?;
    if report.failed > 0 {
        bail!("{} of {} cells failed", report.failed, report.cells.len());
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let (data, _) = prepare(&args.input)?;
    let algo = algorithm(&args.algorithm, &data)?;
    let result = algo.run(&data)?;
    let title = format!("{} ({})", data.name(), algo.id());
    let svg = match args.kind {
        PlotKind::DecisionGraph => plot::decision_graph(&result.profile, &result.centers, &title),
        PlotKind::Gamma => plot::gamma_chart(
            &result.profile.sorted_gamma(),
            result.m_p,
            args.ranks,
            &title,
        ),
        PlotKind::Scatter => {
            let shown = if args.pca && data.dim() != 2 {
                pca_reduce(&data, 2)?
            } else {
                data.clone()
            };
            plot::scatter(&shown, &result.labels, &result.centers, &title)?
        }
    };
    let out = args.output.unwrap_or_else(|| {
        let kind = args
            .kind
            .to_possible_value()
            .expect("plain enum")
            .get_name()
            .to_string();
        PathBuf::from(format!("{}-{kind}.svg", data.name()))
    });
    fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

pub fn parse_k_range(raw: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = raw.split([':', '-']).collect();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad k range `{raw}`: expected a:b")))
    };
    let (lo, hi) = match parts.as_slice() {
        [one] => (num(one)?, num(one)?),
        [a, b] => (num(a)?, num(b)?),
        _ => bail!(usage(format!("bad k range `{raw}`: expected a:b"))),
    };
    if lo == 0 || lo > hi {
        bail!(usage(format!("bad k range `{raw}`: need 1 <= a <= b")));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub clusters: usize,
    pub m_p: usize,
    pub metrics: Option<[f64; 5]>,
    pub evaluations: u64,
    pub ratio: f64,
}

pub fn sweep(data: &Dataset, lo: usize, hi: usize) -> Result<Vec<SweepRow>> {
    (lo..=hi)
        .map(|k| {
            let r = sktdpc::run_sktdpc(data, k)?;
            let metrics = match data.labels() {
                Some(t) => {
                    let s = sktdpc::metrics::evaluate(t, &r.labels)?;
                    Some([s.acc, s.ami, s.ari, s.nmi, s.fmi])
                }
                None => None,
            };
            Ok(SweepRow {
                k,
                clusters: r.cluster_count(),
                m_p: r.m_p,
                metrics,
                evaluations: r.counters.total_evaluations(),
                ratio: r.counters.ratio(),
            })
        })
        .collect()
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from("k,clusters,m_p,acc,ami,ari,nmi,fmi,evaluations,ratio\n");
    for r in rows {
        let m = match r.metrics {
            Some(m) => m
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>()
                .join(","),
            None => ",,,,".into(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{m},{},{:.6}",
            r.k, r.clusters, r.m_p, r.evaluations, r.ratio
        );
    }
    out
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let (lo, hi) = parse_k_range(&args.k)?;
    let (data, _) = prepare(&args.input)?;
    if hi >= data.len() {
        bail!(usage(format!(
            "k range upper end {hi} must be below {} points",
            data.len()
        )));
    }
    let rows = sweep(&data, lo, hi)?;
    write_or_print(args.output.as_deref(), &sweep_table(&rows))
}
