use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fgft::experiment::{self, ExperimentConfig, ModelKind, Preset};
use fgft::graph::{degree_permutation, laplacian};
use fgft::io::{self, fmt_real};
use fgft::jacobi::{factorize_to_tolerance, full_jacobi, truncated_jacobi, DEFAULT_TOLERANCE};
use fgft::par::Execution;
use fgft::spectral::{err1_baseline, err2_baseline, global_error, orient_columns};
use fgft::FgftError;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fgft",
    version,
    about = "Approximate fast graph Fourier transforms via truncated Jacobi"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random graph and write it as an edge list plus JSON sidecar
    Generate(GenerateArgs),
    /// Factorize a graph Laplacian into Givens rotations
    Factorize(FactorizeArgs),
    /// Apply a factored transform (or its inverse) to a signal
    Apply(ApplyArgs),
    /// Exact eigendecomposition of a graph Laplacian
    Eig(EigArgs),
    /// Per-mode errors of a factored transform against the exact basis
    Analyze(AnalyzeArgs),
    /// Multi-draw error surfaces with median aggregation
    Experiment(ExperimentArgs),
    /// Run a named figure preset (fig2a … fig5f)
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// erdos_renyi | sbm | sensor
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (Erdős–Rényi)
    #[arg(long)]
    p: Option<f64>,
    /// Community count (SBM)
    #[arg(long)]
    m: Option<usize>,
    /// Target average degree (SBM, or Erdős–Rényi when --p is absent)
    #[arg(long)]
    c: Option<f64>,
    /// Inter/intra probability ratio (SBM)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Distance threshold (sensor)
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FactorizeArgs {
    graph: PathBuf,
    /// Rotation budget
    #[arg(long = "J", visible_alias = "j", required_unless_present = "converge")]
    budget: Option<usize>,
    /// Run until the off-diagonal mass falls below --tol instead of a fixed budget
    #[arg(long, conflicts_with = "budget")]
    converge: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ApplyArgs {
    transform: PathBuf,
    signal: PathBuf,
    /// Synthesize a vertex signal from spectral coefficients
    #[arg(long)]
    inverse: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    graph: PathBuf,
    transform: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    draws: Option<usize>,
    /// Comma-separated rotation budgets, starting at 0
    #[arg(long, value_delimiter = ',')]
    j_grid: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    preset: String,
    #[arg(long, default_value_t = experiment::DEFAULT_DRAWS)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code(err: &FgftError) -> u8 {
    match err {
        FgftError::NotConverged { .. } => EXIT_NUMERICAL,
        FgftError::Io { .. } | FgftError::Parse { .. } | FgftError::Json(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn emit(out: Option<&Path>, text: &str) -> fgft::Result<()> {
    match out {
        Some(path) => io::write_text(path, text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| FgftError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
    }
}

fn apply_model_args(cfg: &mut ExperimentConfig, args: &ModelArgs) {
    if let Some(n) = args.n {
        cfg.n = n;
    }
    cfg.p = args.p.or(cfg.p);
    cfg.m = args.m.or(cfg.m);
    cfg.c = args.c.or(cfg.c);
    cfg.epsilon = args.epsilon.or(cfg.epsilon);
    cfg.tau = args.tau.or(cfg.tau);
}

fn model_kind(args: &ModelArgs) -> fgft::Result<ModelKind> {
    args.model
        .as_deref()
        .ok_or_else(|| FgftError::InvalidArgument("--model is required".into()))?
        .parse()
}

fn generate(args: GenerateArgs) -> fgft::Result<()> {
    let mut cfg = ExperimentConfig::new(model_kind(&args.model)?);
    apply_model_args(&mut cfg, &args.model);
    let g = cfg
        .graph_model()?
        .generate(cfg.n, fgft::RngSpec::new(args.seed, args.stream))?;
    io::write_graph(&g, &args.out)?;
    eprintln!(
        "wrote {} ({} vertices, {} edges, {} components)",
        args.out.display(),
        g.n(),
        g.edge_count(),
        g.component_count()
    );
    Ok(())
}

fn factorize(args: FactorizeArgs) -> fgft::Result<()> {
    let l = laplacian(&io::read_graph(&args.graph)?);
    let t = match args.budget {
        Some(j) => truncated_jacobi(&l, j),
        None => factorize_to_tolerance(&l, args.tol)?,
    };
    io::write_text(&args.out, &io::format_transform(&t))?;
    eprintln!(
        "{} rotations, residual {}",
        t.j_actual(),
        fmt_real(t.approx_laplacian_residual(&l)?)
    );
    Ok(())
}

fn apply(args: ApplyArgs) -> fgft::Result<()> {
    let t = io::parse_transform(&io::read_text(&args.transform)?)?;
    let x = io::parse_signal(&io::read_text(&args.signal)?)?;
    let y = if args.inverse {
        t.synthesize(&x)?
    } else {
        t.analyze(&x)?
    };
    emit(args.out.as_deref(), &io::format_signal(&y))
}

fn eig(args: EigArgs) -> fgft::Result<()> {
    let l = laplacian(&io::read_graph(&args.graph)?);
    let e = full_jacobi(&l, args.tol)?;
    emit(args.out.as_deref(), &io::format_eigen_csv(&e))
}

fn analyze(args: AnalyzeArgs) -> fgft::Result<()> {
    let g = io::read_graph(&args.graph)?;
    let l = laplacian(&g);
    let t = io::parse_transform(&io::read_text(&args.transform)?)?;
    if t.n() != g.n() {
        return Err(FgftError::DimensionMismatch {
            expected: g.n(),
            got: t.n(),
        });
    }
    let exact = full_jacobi(&l, DEFAULT_TOLERANCE)?;
    let u_hat = orient_columns(exact.eigenvectors(), &t.to_dense());
    let (e1, e2) = experiment::mode_errors(&exact, &l, &u_hat)?;
    let sigma = degree_permutation(&g);
    let mut out = String::from("k,lambda,lambda_hat,err1_sq,err2_sq,err1_baseline_sq,err2_baseline_sq\n");
    for k in 0..g.n() {
        let b1 = err1_baseline(&exact, &sigma, k)?.powi(2);
        let b2 = err2_baseline(&l, exact.eigenvalues(), &sigma, k)?.powi(2);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            k + 1,
            fmt_real(exact.eigenvalues()[k]),
            fmt_real(t.lambda_hat()[k]),
            fmt_real(e1[k]),
            fmt_real(e2[k]),
            fmt_real(b1),
            fmt_real(b2)
        ));
    }
    emit(args.out.as_deref(), &out)?;
    eprintln!("global error {}", fmt_real(global_error(&exact, &u_hat)?));
    Ok(())
}

fn run_experiment(args: ExperimentArgs) -> fgft::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::new(model_kind(&args.model)?),
    };
    if args.model.model.is_some() {
        cfg.model = model_kind(&args.model)?;
    }
    apply_model_args(&mut cfg, &args.model);
    if let Some(d) = args.draws {
        cfg.draws = d;
    }
    if let Some(grid) = args.j_grid {
        cfg.j_grid = Some(grid);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    let out = args
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("fgft-experiment"));
    let result = experiment::run_experiment(&cfg)?;
    experiment::write_result(&result, &out, args.gnuplot)?;
    eprintln!("wrote {} ({} draws)", out.display(), result.draws.len());
    Ok(())
}

fn reproduce(args: ReproduceArgs) -> fgft::Result<()> {
    let preset = Preset::parse(&args.preset)?;
    experiment::reproduce(&preset, args.draws, args.seed, &args.out, Execution::default())?;
    eprintln!("wrote {} ({})", args.out.display(), preset.name);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Factorize(a) => factorize(a),
        Command::Apply(a) => apply(a),
        Command::Eig(a) => eig(a),
        Command::Analyze(a) => analyze(a),
        Command::Experiment(a) => run_experiment(a),
        Command::Reproduce(a) => reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fgft: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
