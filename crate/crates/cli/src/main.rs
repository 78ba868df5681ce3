use std::fs;
use std::io::Write;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diagint_cli::report::error_report;
use diagint_cli::{commands, CliError, Command, Overrides, ProblemSpec};

/// Integral representations of power-series diagonals.
#[derive(Parser, Debug)]
#[command(name = "diagint", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Complete the directions, substitute, verify and report the reduced integrand.
    Reduce(Opts),
    /// Compare the series, the original integral and the reduced integral at t.
    Evaluate(Opts),
    /// Newton polytope of the denominator and its transformed images.
    Polytope(Opts),
    /// Dominance certificate for a contour (given or searched).
    CheckRho(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// Problem spec file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Comma-separated parameters, e.g. 0.01,0.002 or 0.1+0.05i.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Comma-separated log-radii, or "auto".
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    /// File with an n x n completion matrix, one row per line.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Quadrature tolerance on the N vs N/2 estimate.
    #[arg(long)]
    tol: Option<f64>,
    /// Largest node count per dimension.
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write polytope vertices here (reduce and polytope only).
    #[arg(long = "plot-data")]
    plot_data: Option<PathBuf>,
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::validation("io.read", format!("cannot read {what} {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::validation("io.write", format!("cannot write {}: {e}", path.display())))
}

fn emit(opts: &Opts, json: &str) -> Result<(), CliError> {
    match &opts.json {
        Some(path) => write(path, json),
        None => std::io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| CliError::validation("io.write", e.to_string())),
    }
}

fn execute(command: Command, opts: &Opts) -> Result<u8, CliError> {
    if opts.plot_data.is_some() && !matches!(command, Command::Reduce | Command::Polytope) {
        return Err(CliError::validation(
            "cli.plot_data",
            format!("--plot-data is not produced by {}", command.name()),
        ));
    }
    let text = read(&opts.spec, "spec file")?;
    let overrides = Overrides {
        t: opts.t.clone(),
        rho: opts.rho.clone(),
        matrix: opts.matrix.as_deref().map(|p| read(p, "matrix file")).transpose()?,
        tol: opts.tol,
        n_max: opts.n_max,
    };
    let spec = ProblemSpec::from_toml(&text, &overrides)?;
    let out = commands::run(command, &spec)?;
    emit(opts, &out.json)?;
    if let (Some(path), Some(data)) = (&opts.plot_data, &out.plot_data) {
        write(path, data)?;
    }
    Ok(commands::exit_code(&out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::Reduce(o) => (Command::Reduce, o),
        Cmd::Evaluate(o) => (Command::Evaluate, o),
        Cmd::Polytope(o) => (Command::Polytope, o),
        Cmd::CheckRho(o) => (Command::CheckRho, o),
    };
    // panics become structured errors below
    panic::set_hook(Box::new(|_| {}));
    let result = panic::catch_unwind(|| execute(command, opts)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(CliError::validation("internal.panic", msg))
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("diagint {}: {e}", command.name());
            let _ = emit(opts, &error_report(command.name(), &e));
            ExitCode::from(e.exit_code())
        }
    }
}
