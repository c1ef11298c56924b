//! Command-line front end.
//!
//! Subcommands:
//!
//! * `analyze`    — classification report for a graphon file at a clique order
//! * `moments`    — table of theoretical limit moments (mixture regime)
//! * `sample`     — one sampled graph as an edge list
//! * `experiment` — Monte Carlo run: JSON report, per-trial CSV, optional SVG
//! * `selftest`   — oracle-backed invariant suite
//!
//! Exit codes: 0 ok, 2 usage, 3 input validation, 4 numerical inconsistency,
//! 5 selftest failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use graphon_cliques::experiments::{
    render_histogram_svg, run_experiment, write_csv, ExperimentConfig, DEFAULT_KS_THRESHOLD,
};
use graphon_cliques::limit::{
    classify_limit, is_normal_free, is_pure_normal, mixture_spectrum, moment_series,
    CLASSIFY_DEFAULT_TOL, DEFAULT_TRUNCATION,
};
use graphon_cliques::spectral::spectrum;
use graphon_cliques::{split_stream, Error as CoreError, LawKind, StepGraphon};

const EXIT_INPUT: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;
const EXIT_SELFTEST: u8 = 5;

/// Environment variable holding the default worker count for `experiment`.
const THREADS_ENV: &str = "GRAPHON_CLIQUES_THREADS";

#[derive(Parser)]
#[command(
    name = "graphon-cliques",
    about = "Clique-count fluctuations in W-random graphs over step graphons",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the limit law of the r-clique count for a graphon file.
    Analyze(AnalyzeArgs),
    /// Print theoretical limit moments up to a given order.
    Moments(MomentsArgs),
    /// Sample one graph and write its edge list.
    Sample(SampleArgs),
    /// Run a Monte Carlo experiment and write report, CSV, and optional SVG.
    Experiment(ExperimentArgs),
    /// Run the oracle-backed invariant suite.
    Selftest,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graphon file (JSON with fields "mu" and "values").
    graphon: PathBuf,
    /// Clique order.
    #[arg(short, long)]
    r: usize,
    /// Classification tolerance.
    #[arg(long, default_value_t = CLASSIFY_DEFAULT_TOL)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    graphon: PathBuf,
    /// Clique order.
    #[arg(short, long)]
    r: usize,
    /// Largest moment order to print.
    #[arg(long, default_value_t = 8)]
    max_m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    graphon: PathBuf,
    /// Vertex count.
    #[arg(short, long)]
    n: usize,
    /// Master seed.
    #[arg(short, long)]
    seed: u64,
    /// Trial index within the seed.
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Write the edge list here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    graphon: PathBuf,
    #[arg(short, long)]
    r: usize,
    #[arg(short, long)]
    n: usize,
    /// Number of Monte Carlo trials.
    #[arg(short, long)]
    trials: usize,
    #[arg(short, long)]
    seed: u64,
    /// Base path for outputs; writes <out>.json and <out>.csv.
    #[arg(long)]
    out: PathBuf,
    /// Also write an overlaid histogram to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker count (defaults to GRAPHON_CLIQUES_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Size of the limit-law comparison sample (defaults to --trials).
    #[arg(long, default_value_t = 0)]
    limit_samples: usize,
    /// Truncation order of the theoretical moment series.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: usize,
    /// Two-sample KS acceptance threshold.
    #[arg(long, default_value_t = DEFAULT_KS_THRESHOLD)]
    ks_threshold: f64,
    /// Classification tolerance.
    #[arg(long, default_value_t = CLASSIFY_DEFAULT_TOL)]
    tol: f64,
}

/// On-disk graphon document.
#[derive(Serialize, Deserialize)]
struct GraphonFile {
    mu: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    graphon: String,
    r: usize,
    t_r: f64,
    case: &'static str,
    exponent: Option<f64>,
    sigma: Option<f64>,
    sigma_hat: Option<f64>,
    coefficients: Vec<f64>,
    pair_graphon_spectrum: Vec<f64>,
    reduced_spectrum: Vec<f64>,
    kr_regular: bool,
    pure_normal: Option<bool>,
    normal_free: Option<bool>,
    /// Diagnostic only: whether the regular degree bounds the pair-graphon
    /// spectrum in absolute value.
    degree_dominates_spectrum: Option<bool>,
    near_degenerate: bool,
    degree_function: Vec<f64>,
    clique_profile: Vec<f64>,
}

enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
    Selftest,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidGraphon(m) | CoreError::InvalidInput(m) => CliError::Input(m),
            CoreError::Numerical(m) | CoreError::Overflow(m) => CliError::Numerical(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Selftest => cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(CliError::Selftest) => ExitCode::from(EXIT_SELFTEST),
    }
}

fn load_graphon(path: &Path) -> Result<StepGraphon, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: GraphonFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    Ok(StepGraphon::new(file.mu, file.values)?)
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let w = load_graphon(&args.graphon)?;
    let law = classify_limit(&w, args.r, args.tol)?;
    let kr_regular = w.is_kr_regular(args.r, args.tol)?;

    let (case, sigma, sigma_hat, coefficients) = match &law.kind {
        LawKind::Degenerate { full } => (
            if *full { "degenerate-full" } else { "degenerate-empty" },
            None,
            None,
            Vec::new(),
        ),
        LawKind::Gaussian { sigma_hat } => ("gaussian", None, Some(*sigma_hat), Vec::new()),
        LawKind::ChiSquareMix {
            sigma,
            coefficients,
        } => ("chi-square-mixture", Some(*sigma), None, coefficients.clone()),
    };
    let pair = w.vwr(args.r)?;
    let pair_spectrum = spectrum(&pair)?;
    let reduced = if kr_regular {
        mixture_spectrum(&w, args.r)?.eigenvalues().to_vec()
    } else {
        Vec::new()
    };
    let (pure_normal, normal_free, degree_dominates) = if kr_regular {
        let radius = pair_spectrum
            .eigenvalues()
            .iter()
            .fold(0.0f64, |acc, l| acc.max(l.abs()));
        (
            Some(is_pure_normal(&w, args.r, args.tol.max(1e-12))?),
            Some(is_normal_free(&w, args.r, args.tol.max(1e-12))?),
            Some(radius <= law.t_r + 1e-9),
        )
    } else {
        (None, None, None)
    };
    let near_degenerate =
        !law.is_degenerate() && (law.t_r < 1e-6 || w.min_value() > 1.0 - 1e-6);

    let report = AnalyzeReport {
        graphon: args.graphon.display().to_string(),
        r: args.r,
        t_r: law.t_r,
        case,
        exponent: law.exponent(),
        sigma,
        sigma_hat,
        coefficients,
        pair_graphon_spectrum: pair_spectrum.eigenvalues().to_vec(),
        reduced_spectrum: reduced,
        kr_regular,
        pure_normal,
        normal_free,
        degree_dominates_spectrum: degree_dominates,
        near_degenerate,
        degree_function: w.degree_function().entries().to_vec(),
        clique_profile: w.clique_profile(args.r)?.entries().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    let w = load_graphon(&args.graphon)?;
    if args.max_m < 2 {
        return Err(CliError::Usage("--max-m must be at least 2".into()));
    }
    let series = moment_series(&w, args.r, args.max_m)?;
    let mut text = String::from("m\tmoment\n");
    for m in 1..=args.max_m {
        text.push_str(&format!("{m}\t{}\n", series.moment(m)?));
    }
    emit(args.out.as_deref(), &text)
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let w = load_graphon(&args.graphon)?;
    let mut stream = split_stream(args.seed, args.index);
    let graph = graphon_cliques::sample_graph(&w, args.n, &mut stream)?;
    let mut buf = Vec::new();
    graph.write_edge_list(&mut buf)?;
    let text = String::from_utf8(buf).expect("edge list is ascii");
    emit(args.out.as_deref(), &text)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let w = load_graphon(&args.graphon)?;
    let threads = match args.threads {
        Some(k) => Some(k),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.parse().map_err(|_| {
                CliError::Usage(format!("{THREADS_ENV}={v} is not a thread count"))
            })?),
            Err(_) => None,
        },
    };
    let mut cfg = ExperimentConfig::new(w, args.r, args.n, args.trials, args.seed);
    cfg.threads = threads;
    cfg.limit_samples = args.limit_samples;
    cfg.truncation = args.truncation;
    cfg.ks_threshold = args.ks_threshold;
    cfg.tol = args.tol;
    let output = run_experiment(&cfg)?;

    let json_path = args.out.with_extension("json");
    let csv_path = args.out.with_extension("csv");
    let mut report_text = serde_json::to_string_pretty(&output.report)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    report_text.push('\n');
    fs::write(&json_path, &report_text)?;
    let mut csv = Vec::new();
    write_csv(&output.trials, &mut csv)?;
    fs::write(&csv_path, &csv)?;
    if let Some(svg_path) = &args.svg {
        let standardized: Vec<f64> =
            output.trials.iter().map(|t| t.standardized).collect();
        let svg = render_histogram_svg(&standardized, &output.limit_sample, 60);
        fs::write(svg_path, svg)?;
    }

    let mut stdout = std::io::stdout().lock();
    let r = &output.report;
    writeln!(
        stdout,
        "case: {:?}",
        match &r.law.kind {
            LawKind::Degenerate { full } =>
                if *full {
                    "degenerate-full".to_string()
                } else {
                    "degenerate-empty".to_string()
                },
            LawKind::Gaussian { sigma_hat } => format!("gaussian (sigma_hat = {sigma_hat})"),
            LawKind::ChiSquareMix {
                sigma,
                coefficients,
            } => format!(
                "chi-square-mixture (sigma = {sigma}, {} coefficients)",
                coefficients.len()
            ),
        }
    )?;
    writeln!(
        stdout,
        "t_r = {}, expected count = {}, mean count = {}",
        r.law.t_r, r.expected_count, r.mean_count
    )?;
    writeln!(
        stdout,
        "lln_ok = {}, variance = {} (theory {:?}), skewness = {}",
        r.lln_ok, r.variance, r.variance_theory, r.skewness
    )?;
    if let Some(ks) = &r.ks {
        writeln!(
            stdout,
            "ks = {} (threshold {}, ok = {})",
            ks.distance, ks.threshold, ks.ok
        )?;
    }
    if let Some(b) = r.stein_bound {
        writeln!(stdout, "normal-approximation bound = {b}")?;
    }
    writeln!(stdout, "report: {}", json_path.display())?;
    writeln!(stdout, "trials: {}", csv_path.display())?;
    Ok(())
}

fn cmd_selftest() -> Result<(), CliError> {
    let results = graphon_cliques::selftest::run_all();
    let mut all_ok = true;
    for check in &results {
        let status = if check.passed { "ok  " } else { "FAIL" };
        println!("{status} {:<28} {}", check.name, check.detail);
        all_ok &= check.passed;
    }
    if all_ok {
        println!("selftest: {} checks passed", results.len());
        Ok(())
    } else {
        Err(CliError::Selftest)
    }
}
