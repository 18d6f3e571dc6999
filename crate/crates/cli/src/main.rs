use avgauss::rules::RuleKind;
use avgauss_cli::commands::{
    build_measure, figure, parse_rule, quad, solve, table, CliError, CliResult, MeasureKind,
    Method, SolveOptions,
};
use avgauss_cli::problems::ProblemId;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Gauss, anti-Gauss and weighted averaged Gauss rules, and Nyström solvers
/// built on them.
#[derive(Parser)]
#[command(name = "avgauss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nodes and weights of a rule, or its error on I1, I2 or I3.
    Quad {
        #[arg(long, default_value = "jacobi")]
        measure: MeasureKind,
        /// Jacobi alpha, or the Laguerre parameter.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_rule, default_value = "gauss")]
        rule: RuleKind,
        #[arg(long)]
        problem: Option<ProblemId>,
        #[arg(long, default_value_t = 17)]
        digits: usize,
    },
    /// Rerun the experiment behind result table 1 to 9.
    Table {
        #[arg(long)]
        id: u8,
        #[arg(long, default_value_t = 17)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve EX1, EX2 or EX3 and report the weighted uniform error.
    Solve {
        #[arg(long)]
        problem: ProblemId,
        #[arg(long)]
        m: usize,
        /// G, antigauss, gstar, averaged, hat1, hat2, iter1, iter2 or iter3.
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Number of interior points of the error grid.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Use the previous b in the second half-step.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 17)]
        digits: usize,
    },
    /// Signed errors of the Gauss, anti-Gauss and G* interpolants on a grid.
    Figure {
        #[arg(long)]
        problem: ProblemId,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 17)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(csv: &str, out: Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Quad {
            measure,
            alpha,
            beta,
            m,
            rule,
            problem,
            digits,
        } => {
            let mu = build_measure(measure, alpha, beta)?;
            print!("{}", quad(mu, m, rule, problem, digits)?);
        }
        Command::Table { id, digits, out } => {
            let (t, csv) = table(id, digits)?;
            eprintln!(
                "table {}: {} (tolerance {:?}, gamma {}, delta {})",
                t.id, t.title, t.tolerance, t.gamma, t.delta
            );
            emit(&csv, out)?;
        }
        Command::Solve {
            problem,
            m,
            method,
            tol,
            max_iter,
            gamma,
            delta,
            grid,
            parallel,
            digits,
        } => {
            let report = solve(&SolveOptions {
                problem,
                m,
                method,
                tolerance: tol,
                max_iter,
                gamma,
                delta,
                grid,
                parallel,
                digits,
            })?;
            print!("{}", report.csv);
            if !report.converged {
                return Err(CliError::NotConverged(format!(
                    "{} stopped after {} iterations",
                    method.name(),
                    report.iterations.unwrap_or(0)
                )));
            }
        }
        Command::Figure {
            problem,
            m,
            points,
            digits,
            out,
        } => emit(&figure(problem, m, points, digits)?, out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("avgauss: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
