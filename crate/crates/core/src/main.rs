use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polynewton::exit;
use polynewton::io::parse_problem;
use polynewton::registry::{build_problem, list_text, parse_assignments, RegistryError};
use polynewton::report::{run_schemes, verify_problem};
use polynewton::{ProblemSpec, Scheme, SolverConfig};

#[derive(Parser)]
#[command(
    name = "polynewton",
    version,
    about = "Newton solvers for polynomial-only algebraic systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in problem generators and their parameters.
    List,
    /// Solve a problem with one or both schemes and report convergence.
    Run(RunArgs),
    /// Check the homogeneity identity and the analytic Jacobian at random points.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in problem name (see `list`).
    problem: Option<String>,
    /// Generator parameters as key=value.
    params: Vec<String>,
    /// Read the problem from a JSON file instead.
    #[arg(long, conflicts_with = "problem")]
    file: Option<PathBuf>,
    /// Seed for generators that take one (overrides seed=...).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Standard,
    FunctionFree,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "both")]
    scheme: SchemeArg,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Residual ∞-norm tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Relative step tolerance.
    #[arg(long, default_value_t = 1e-12)]
    step_tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    /// Refactor the Jacobian every this many steps (1 = full Newton).
    #[arg(long, default_value_t = 1)]
    refresh: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: VerifyFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        let code = match e {
            RegistryError::UnknownProblem { .. } => exit::UNKNOWN_PROBLEM,
            RegistryError::BadParam(_) => exit::BAD_PARAM,
        };
        Failure::new(code, e.to_string())
    }
}

fn load_problem(args: &ProblemArgs) -> Result<ProblemSpec, Failure> {
    if let Some(path) = &args.file {
        if !args.params.is_empty() {
            return Err(Failure::new(
                exit::BAD_PARAM,
                "generator parameters cannot be combined with --file",
            ));
        }
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(exit::READ_FAILURE, format!("cannot read {}: {e}", path.display())))?;
        return parse_problem(&text)
            .map_err(|e| Failure::new(exit::INVALID_PROBLEM_FILE, format!("{}: {e}", path.display())));
    }
    let Some(name) = &args.problem else {
        return Err(Failure::new(exit::USAGE, "expected a problem name or --file"));
    };
    let assignments = parse_assignments(&args.params)?;
    Ok(build_problem(name, &assignments, args.seed)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(exit::WRITE_FAILURE, format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(exit::WRITE_FAILURE, format!("cannot write stdout: {e}"))),
    }
}

fn cmd_run(args: &RunArgs) -> Result<i32, Failure> {
    let spec = load_problem(&args.problem)?;
    let schemes: &[Scheme] = match args.scheme {
        SchemeArg::Standard => &[Scheme::Standard],
        SchemeArg::FunctionFree => &[Scheme::FunctionFree],
        SchemeArg::Both => &[Scheme::Standard, Scheme::FunctionFree],
    };
    let config = SolverConfig {
        residual_tol: args.tol,
        step_tol: args.step_tol,
        max_iters: args.max_iters,
        jacobian_refresh: args.refresh,
        ..SolverConfig::default()
    };
    let report = run_schemes(&spec, schemes, &config).map_err(|e| Failure::new(exit::BAD_PARAM, e.to_string()))?;
    let text = match args.format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(&text, args.out.as_deref())?;
    Ok(if report.all_converged() {
        exit::SUCCESS
    } else {
        exit::NOT_CONVERGED
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    if args.samples == 0 {
        return Err(Failure::new(exit::BAD_PARAM, "--samples must be at least 1"));
    }
    let spec = load_problem(&args.problem)?;
    let seed = args.problem.seed.unwrap_or(0);
    let report = verify_problem(&spec, args.samples, seed).map_err(|e| Failure::new(exit::BAD_PARAM, e.to_string()))?;
    let text = match args.format {
        VerifyFormat::Text => report.to_text(),
        VerifyFormat::Json => serde_json::to_string_pretty(&report).expect("verify report serializes") + "\n",
    };
    emit(&text, args.out.as_deref())?;
    Ok(if report.passed {
        exit::SUCCESS
    } else {
        exit::NOT_CONVERGED
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => emit(&list_text(), None).map(|()| exit::SUCCESS),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
    };
    let code = result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        f.code
    });
    ExitCode::from(code as u8)
}
