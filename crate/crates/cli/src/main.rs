//! `osinfo`: informativeness of order statistics from the command line.

mod spec;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use osinfo::imaging::{
    add_noise, additive_filter, denoise, denoise_salt_pepper, quality, salt_pepper_filter, synthetic_shapes, CoeffRule,
    NoiseSpec, Padding,
};
use osinfo::measures::{self, LogBase, Measure, MeasureOptions};
use osinfo::report::format_sig9;
use osinfo::selection::{joint_select, marginal_select, sequential_select};
use osinfo::{GrayImage, LEstimator, NamedFilter, SampleModel};

#[derive(Parser, Debug)]
#[command(name = "osinfo", version, about = "Informativeness of order statistics", after_help = spec::DIST_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile r_m(i) for every index i, as CSV "i,value".
    Measures(MeasuresArgs),
    /// Marginal, joint and sequential index sets for k = 1..K.
    Select(SelectArgs),
    /// L-estimator coefficients as CSV "k,alpha".
    Coeffs(CoeffsArgs),
    /// Write a seeded synthetic test image without 0/255 pixels.
    Synth(SynthArgs),
    /// Corrupt an image with salt-and-pepper or additive noise.
    Addnoise(AddNoiseArgs),
    /// Filter an image with an L-estimator.
    Denoise(DenoiseArgs),
    /// Compare two images: mse, psnr, ssim, iqi.
    Quality(QualityArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Parent distribution spec, e.g. salt-pepper:150,0.3,0.05.
    #[arg(long)]
    dist: String,
    /// Sample size.
    #[arg(long)]
    n: usize,
    /// Measure index: 1 (entropy), 2 or 3 (mean-square gaps).
    #[arg(long, default_value_t = 1)]
    m: u8,
    /// Logarithm base for r1.
    #[arg(long, value_enum, default_value_t = Base::Two)]
    base: Base,
    /// Monte Carlo trials when no exact path applies.
    #[arg(long, default_value_t = 200_000)]
    trials: usize,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct MeasuresArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Largest subset size.
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Base {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Two => LogBase::Two,
            Base::E => LogBase::E,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    /// Inverse (rho < 0.5) or direct single-index entropy weights.
    Entropy,
    /// Conditional entropy gains of the first d sequential picks.
    Sequential,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PaddingArg {
    Reflect,
    Replicate,
}

impl From<PaddingArg> for Padding {
    fn from(p: PaddingArg) -> Self {
        match p {
            PaddingArg::Reflect => Padding::Reflect,
            PaddingArg::Replicate => Padding::Replicate,
        }
    }
}

#[derive(Args, Debug)]
struct FilterChoice {
    /// Classical filter: mean, median, min, max, midpoint or rank:r.
    #[arg(long, conflicts_with_all = ["coeffs", "noise"])]
    filter: Option<String>,
    /// Salt-and-pepper coefficient rule.
    #[arg(long, value_enum)]
    coeffs: Option<Rule>,
    /// Number of sequential picks for --coeffs sequential.
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Additive noise law; coefficients come from its r3 profile.
    #[arg(long, conflicts_with = "coeffs")]
    noise: Option<String>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    /// Window side; the filter has w*w coefficients.
    #[arg(long)]
    w: usize,
    #[command(flatten)]
    choice: FilterChoice,
    /// Salt-and-pepper rates rho,rho1 (required with --coeffs).
    #[arg(long)]
    rates: Option<String>,
    #[arg(long, value_enum, default_value_t = Base::Two)]
    base: Base,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value_t = 256)]
    width: usize,
    #[arg(long, default_value_t = 256)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output PGM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AddNoiseArgs {
    /// Input PGM.
    #[arg(long)]
    input: PathBuf,
    /// Output PGM.
    #[arg(long)]
    out: PathBuf,
    /// Salt-and-pepper rates rho,rho1.
    #[arg(long, conflicts_with = "additive", required_unless_present = "additive")]
    sp: Option<String>,
    /// Additive noise law, e.g. cauchy:0,2.
    #[arg(long)]
    additive: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Odd window side.
    #[arg(long, default_value_t = 5)]
    w: usize,
    #[command(flatten)]
    choice: FilterChoice,
    /// Salt-and-pepper rates rho,rho1; estimated from the image when omitted.
    #[arg(long)]
    rates: Option<String>,
    #[arg(long, value_enum, default_value_t = Base::Two)]
    base: Base,
    #[arg(long, value_enum, default_value_t = PaddingArg::Reflect)]
    padding: PaddingArg,
}

#[derive(Args, Debug)]
struct QualityArgs {
    /// Reference PGM.
    #[arg(long)]
    reference: PathBuf,
    /// PGM to evaluate.
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_model(args: &ModelArgs) -> Result<(SampleModel, Measure, MeasureOptions)> {
    let parent = spec::parse_parent(&args.dist)?;
    let model = SampleModel::new(args.n, parent)?;
    let measure = Measure::from_index(args.m)?;
    let opts = MeasureOptions {
        base: args.base.into(),
        mc_trials: args.trials,
        seed: args.seed,
        ..MeasureOptions::default()
    };
    Ok((model, measure, opts))
}

fn cmd_measures(args: &MeasuresArgs) -> Result<()> {
    let (model, measure, opts) = build_model(&args.model)?;
    let profile = measures::profile(&model, measure, &opts)?;
    let mut csv = String::from("i,value\n");
    for (i, v) in profile.iter().enumerate() {
        writeln!(csv, "{},{}", i + 1, format_sig9(v.value))?;
    }
    emit(&args.out, &csv)
}

fn join(indices: &[usize]) -> String {
    indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_select(args: &SelectArgs) -> Result<()> {
    let (model, measure, opts) = build_model(&args.model)?;
    if args.k == 0 {
        bail!("k must be at least 1");
    }
    let marginal = marginal_select(&model, measure, args.k, &opts)?;
    let sequential = sequential_select(&model, measure, args.k, &opts)?;
    let mut csv = String::from("approach,k,indices\n");
    for k in 1..=args.k {
        writeln!(csv, "marginal,{k},{}", join(&marginal.indices[..k]))?;
    }
    for k in 1..=args.k {
        let joint = joint_select(&model, measure, k, &opts)?;
        writeln!(csv, "joint,{k},{}", join(&joint.indices))?;
    }
    for k in 1..=args.k {
        writeln!(csv, "sequential,{k},{}", join(&sequential.indices[..k]))?;
    }
    emit(&args.out, &csv)
}

fn resolve_filter(
    choice: &FilterChoice,
    w: usize,
    rates: Option<(f64, f64)>,
    base: LogBase,
) -> Result<Option<LEstimator>> {
    if let Some(name) = &choice.filter {
        let kind: NamedFilter = name.parse()?;
        return Ok(Some(LEstimator::named(kind, w * w)?));
    }
    if let Some(noise) = &choice.noise {
        let dist = spec::parse_continuous(noise)?;
        return Ok(Some(additive_filter(w, &dist)?));
    }
    match rates {
        Some((rho, rho1)) => Ok(Some(salt_pepper_filter(w, rho, rho1, rule(choice), base)?)),
        None => Ok(None),
    }
}

fn rule(choice: &FilterChoice) -> CoeffRule {
    match choice.coeffs.unwrap_or(Rule::Entropy) {
        Rule::Entropy => CoeffRule::Entropy,
        Rule::Sequential => CoeffRule::Sequential { d: choice.d },
    }
}

fn cmd_coeffs(args: &CoeffsArgs) -> Result<()> {
    let rates = args.rates.as_deref().map(spec::parse_pair).transpose()?;
    let filter = resolve_filter(&args.choice, args.w, rates, args.base.into())?
        .context("give --filter, --noise, or --rates with --coeffs")?;
    let mut csv = String::from("k,alpha\n");
    for (k, a) in filter.alpha().iter().enumerate() {
        writeln!(csv, "{},{}", k + 1, format_sig9(*a))?;
    }
    emit(&args.out, &csv)
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    if args.width == 0 || args.height == 0 {
        bail!("image dimensions must be positive");
    }
    synthetic_shapes(args.width, args.height, args.seed).write_pgm(&args.out)?;
    Ok(())
}

fn cmd_addnoise(args: &AddNoiseArgs) -> Result<()> {
    let img = GrayImage::read_pgm(&args.input)?;
    let spec = match (&args.sp, &args.additive) {
        (Some(sp), _) => {
            let (rho, rho1) = spec::parse_pair(sp)?;
            NoiseSpec::salt_pepper(rho, rho1, args.seed)
        }
        (None, Some(law)) => NoiseSpec::additive(spec::parse_continuous(law)?, args.seed),
        (None, None) => bail!("give --sp or --additive"),
    };
    add_noise(&img, &spec)?.write_pgm(&args.out)?;
    Ok(())
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let img = GrayImage::read_pgm(&args.input)?;
    let rates = args.rates.as_deref().map(spec::parse_pair).transpose()?;
    let padding = args.padding.into();
    let base = args.base.into();
    let output = if args.choice.filter.is_some() || args.choice.noise.is_some() {
        let filter = resolve_filter(&args.choice, args.w, rates, base)?.expect("filter resolved");
        denoise(&img, &filter, args.w, padding)?
    } else {
        let run = denoise_salt_pepper(&img, args.w, rule(&args.choice), rates, base, padding)?;
        eprintln!("# estimated rates: rho={} rho1={}", format_sig9(run.rho), format_sig9(run.rho1));
        run.output
    };
    output.write_pgm(&args.out)?;
    Ok(())
}

fn cmd_quality(args: &QualityArgs) -> Result<()> {
    let reference = GrayImage::read_pgm(&args.reference)?;
    let image = GrayImage::read_pgm(&args.image)?;
    let q = quality(&image, &reference)?;
    let mut csv = String::from("metric,value\n");
    for (name, v) in [("mse", q.mse), ("psnr", q.psnr), ("ssim", q.ssim), ("iqi", q.iqi)] {
        writeln!(csv, "{name},{}", format_sig9(v))?;
    }
    emit(&args.out, &csv)
}

fn run(cli: &Cli) -> Result<()> {
    eprintln!("# config: {:?}", cli.command);
    match &cli.command {
        Command::Measures(a) => cmd_measures(a),
        Command::Select(a) => cmd_select(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Addnoise(a) => cmd_addnoise(a),
        Command::Denoise(a) => cmd_denoise(a),
        Command::Quality(a) => cmd_quality(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
