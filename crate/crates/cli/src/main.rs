//! `varpix`: variable-pixel scanning experiments from the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 validation error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use varpix::filters::{FilterMode, FilterSpec, Statistic};
use varpix::imageio::{read_image, read_labelmap, write_image, write_labelmap, write_pgm};
use varpix::maskkit::{builtin_masks, format_masks, load_masks, MaskSet};
use varpix::metrics::{psnr, PsnrDisplay};
use varpix::noiselab::{
    Noise, NoiseKind, NoiseSpec, DEFAULT_DENSITY, DEFAULT_SEED, DEFAULT_SIGMA, DEFAULT_VARIANCE,
};
use varpix::pipeline::{
    load_inputs, run_pipeline, write_csv, DumpOptions, PipelineConfig,
};
use varpix::scanner::{scan_image, SelectionCriterion};

#[derive(Debug)]
enum CliError {
    Config(String),
    Lib(varpix::Error),
}

impl From<varpix::Error> for CliError {
    fn from(e: varpix::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Lib(varpix::Error::Parameter(_)) => 2,
            CliError::Lib(varpix::Error::Io(_)) => 3,
            CliError::Lib(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Lib(e) => e.fmt(f),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "varpix", version, about = "Variable-shaped pixel scanning, noise and adaptive filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full experiment: scan, noise, filter and PSNR for every input image.
    Run(RunArgs),
    /// Form a square or variable-pixel image.
    Scan(ScanArgs),
    /// Add seeded noise to an image.
    Noise(NoiseArgs),
    /// Box or shape-adaptive filtering.
    Filter(FilterArgs),
    /// PSNR between a reference and a test image.
    Psnr(PsnrArgs),
    /// Write the eight built-in masks in the mask text format.
    Masks(MasksArgs),
    /// Write the synthetic fixture images as PGM files.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    MinReconError,
    MinMeanDifference,
}

impl From<CriterionArg> for SelectionCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::MinReconError => SelectionCriterion::MinReconError,
            CriterionArg::MinMeanDifference => SelectionCriterion::MinMeanDifference,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseArg {
    SaltPepper,
    Gaussian,
    Speckle,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::SaltPepper => NoiseKind::SaltPepper,
            NoiseArg::Gaussian => NoiseKind::Gaussian,
            NoiseArg::Speckle => NoiseKind::Speckle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticArg {
    Mean,
    Median,
}

impl From<StatisticArg> for Statistic {
    fn from(s: StatisticArg) -> Self {
        match s {
            StatisticArg::Mean => Statistic::Mean,
            StatisticArg::Median => Statistic::Median,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Square,
    AdaptiveLiteral,
    AdaptiveBlock,
}

impl From<ModeArg> for FilterMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Square => FilterMode::Square,
            ModeArg::AdaptiveLiteral => FilterMode::AdaptiveLiteral,
            ModeArg::AdaptiveBlock => FilterMode::AdaptiveBlock,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelModeArg {
    Literal,
    Block,
}

#[derive(Args)]
struct MaskSource {
    /// Mask file to use instead of the built-in set.
    #[arg(long)]
    masks: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "min-recon-error")]
    criterion: CriterionArg,
}

impl MaskSource {
    fn load(&self) -> CliResult<MaskSet> {
        Ok(match &self.masks {
            Some(path) => load_masks(path)?,
            None => builtin_masks(),
        })
    }
}

#[derive(Args)]
struct NoiseParams {
    /// Salt & pepper corruption probability.
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    density: f64,
    /// Gaussian standard deviation on the 0-255 scale.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Speckle variance.
    #[arg(long, default_value_t = DEFAULT_VARIANCE)]
    variance: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl NoiseParams {
    fn spec(&self, kind: NoiseKind) -> NoiseSpec {
        let noise = match kind {
            NoiseKind::SaltPepper => Noise::SaltPepper {
                density: self.density,
            },
            NoiseKind::Gaussian => Noise::Gaussian { sigma: self.sigma },
            NoiseKind::Speckle => Noise::Speckle {
                variance: self.variance,
            },
        };
        NoiseSpec::new(noise, self.seed)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Input PGM files or directories of PGM files.
    #[arg(long, short, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    masks: MaskSource,
    /// Noise models to evaluate.
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["salt-pepper", "gaussian", "speckle"])]
    noise: Vec<NoiseArg>,
    #[command(flatten)]
    params: NoiseParams,
    /// Odd kernel sizes.
    #[arg(long, value_delimiter = ',', default_values = ["5"])]
    kernel: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["mean", "median"])]
    statistic: Vec<StatisticArg>,
    /// Label semantics for the adaptive pipeline.
    #[arg(long, value_enum, default_value = "adaptive-literal")]
    mode: ModeArg,
    /// Write scanned, noisy and filtered intermediates here.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    /// Dump intermediates as lossless raw files instead of PGM.
    #[arg(long, requires = "dump_dir")]
    raw: bool,
}

#[derive(Args)]
struct ScanArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    /// Label map destination.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// 6×6 block-mean scan instead of the variable-pixel scan.
    #[arg(long)]
    square: bool,
    #[command(flatten)]
    masks: MaskSource,
    #[arg(long, value_enum, default_value = "literal")]
    label_mode: LabelModeArg,
    /// Write a lossless raw dump instead of PGM.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct NoiseArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, value_enum)]
    noise: NoiseArg,
    #[command(flatten)]
    params: NoiseParams,
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct FilterArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, default_value_t = 5)]
    kernel: usize,
    #[arg(long, value_enum, default_value = "mean")]
    statistic: StatisticArg,
    #[arg(long, value_enum, default_value = "square")]
    mode: ModeArg,
    /// Label map, required by the adaptive modes.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct PsnrArgs {
    reference: PathBuf,
    test: PathBuf,
    /// Also print the mean squared error.
    #[arg(long)]
    mse: bool,
}

#[derive(Args)]
struct MasksArgs {
    /// Destination file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    #[arg(long, short)]
    out_dir: PathBuf,
}

fn run(args: RunArgs) -> CliResult<()> {
    let mode: FilterMode = args.mode.into();
    let scope = mode.scope().ok_or_else(|| {
        CliError::Config("--mode selects the adaptive label semantics; use adaptive-literal or adaptive-block".into())
    })?;
    let mut kinds: Vec<NoiseKind> = args.noise.iter().map(|&n| n.into()).collect();
    kinds.sort();
    kinds.dedup();
    let cfg = PipelineConfig {
        masks: args.masks.load()?,
        criterion: args.masks.criterion.into(),
        noises: kinds.into_iter().map(|k| args.params.spec(k)).collect(),
        kernels: args.kernel.clone(),
        statistics: args.statistic.iter().map(|&s| s.into()).collect(),
        scope,
        dump: args.dump_dir.clone().map(|dir| DumpOptions { dir, raw: args.raw }),
    };
    cfg.validate()?;
    let images = load_inputs(&args.input)?;
    let rows = run_pipeline(&images, &cfg)?;
    match &args.csv {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            write_csv(&rows, &mut file)?;
            file.flush()?;
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn scan(args: ScanArgs) -> CliResult<()> {
    let img = read_image(&args.input)?;
    let set = if args.square { None } else { Some(args.masks.load()?) };
    let result = scan_image(&img, set.as_ref(), args.masks.criterion.into())?;
    write_image(&result.image, &args.out, args.raw)?;
    if let Some(path) = &args.labels {
        let labels = match args.label_mode {
            LabelModeArg::Literal => result.labels.clone(),
            LabelModeArg::Block => result.block_labels(),
        };
        write_labelmap(&labels, path)?;
    }
    Ok(())
}

fn noise(args: NoiseArgs) -> CliResult<()> {
    let img = read_image(&args.input)?;
    let noisy = args.params.spec(args.noise.into()).apply(&img)?;
    write_image(&noisy, &args.out, args.raw)?;
    Ok(())
}

fn filter(args: FilterArgs) -> CliResult<()> {
    let spec = FilterSpec {
        kernel: args.kernel,
        statistic: args.statistic.into(),
        mode: args.mode.into(),
    };
    spec.validate()?;
    let labels = match (&args.labels, spec.mode.scope()) {
        (Some(path), Some(_)) => Some(read_labelmap(path)?),
        (None, Some(_)) => {
            return Err(CliError::Config(format!(
                "--mode {} needs --labels",
                spec.mode.as_str()
            )))
        }
        (Some(_), None) => {
            return Err(CliError::Config("--labels is only used by the adaptive modes".into()))
        }
        (None, None) => None,
    };
    let img = read_image(&args.input)?;
    let out = spec.apply(&img, labels.as_ref())?;
    write_image(&out, &args.out, args.raw)?;
    Ok(())
}

fn psnr_cmd(args: PsnrArgs) -> CliResult<()> {
    let report = psnr(&read_image(&args.reference)?, &read_image(&args.test)?)?;
    if args.mse {
        println!("{} {}", PsnrDisplay(report.psnr_db), report.mse);
    } else {
        println!("{}", PsnrDisplay(report.psnr_db));
    }
    Ok(())
}

fn masks(args: MasksArgs) -> CliResult<()> {
    let text = format_masks(&builtin_masks());
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn fixtures(args: FixturesArgs) -> CliResult<()> {
    fs::create_dir_all(&args.out_dir)?;
    for fx in varpix::fixtures::synthetic_fixtures() {
        write_pgm(&fx.image, fixture_path(&args.out_dir, &fx.name))?;
    }
    Ok(())
}

fn fixture_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.pgm"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Scan(a) => scan(a),
        Command::Noise(a) => noise(a),
        Command::Filter(a) => filter(a),
        Command::Psnr(a) => psnr_cmd(a),
        Command::Masks(a) => masks(a),
        Command::Fixtures(a) => fixtures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("varpix: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
