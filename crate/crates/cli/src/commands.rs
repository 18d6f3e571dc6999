//! The `quad`, `table`, `solve` and `figure` subcommands.

use crate::problems::{integral_problem, ProblemId};
use crate::tables::{equation, figure_errors, format_real, run_table, Context, Table};
use avgauss::error::Error;
use avgauss::iterative::{
    build_block_system, interpolant_from_blocks, iterate, IterationConfig, Scheme,
};
use avgauss::linalg::condition_inf;
use avgauss::measures::Measure;
use avgauss::nystrom::{
    assemble, condition_infinity, interpolant_antigauss, interpolant_averaged, interpolant_gauss,
    interpolant_gstar, interpolant_hat1, interpolant_hat2, FredholmProblem, SpaceWeight,
};
use avgauss::rules::{
    antigauss_rule, gauss_rule, gstar_rule, rule, weighted_averaged_rule, QuadratureRule, RuleKind,
    WeightedMethod,
};
use std::fmt;
use std::str::FromStr;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
    Io(std::io::Error),
    /// Output is still produced; only the exit status differs.
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
            CliError::NotConverged(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Numeric(e) => write!(f, "numeric failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::NotConverged(s) => write!(f, "not converged: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(s) => CliError::Usage(s),
            e => CliError::Numeric(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Jacobi,
    Laguerre,
    Hermite,
}

impl FromStr for MeasureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "jacobi" => Ok(MeasureKind::Jacobi),
            "laguerre" => Ok(MeasureKind::Laguerre),
            "hermite" => Ok(MeasureKind::Hermite),
            _ => Err(format!(
                "unknown measure '{s}' (expected jacobi, laguerre or hermite)"
            )),
        }
    }
}

/// `alpha` is the Laguerre parameter for the Laguerre measure.
pub fn build_measure(kind: MeasureKind, alpha: f64, beta: f64) -> CliResult<Measure> {
    Ok(match kind {
        MeasureKind::Jacobi => Measure::jacobi(alpha, beta)?,
        MeasureKind::Laguerre => Measure::laguerre(alpha)?,
        MeasureKind::Hermite => Measure::hermite(),
    })
}

/// Parses the `--rule` names, with `wavg` for the weighted averaged rule.
pub fn parse_rule(s: &str) -> Result<RuleKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "gauss" => Ok(RuleKind::Gauss),
        "antigauss" => Ok(RuleKind::AntiGauss),
        "gstar" => Ok(RuleKind::GStar),
        "averaged" => Ok(RuleKind::Averaged),
        "wavg" => Ok(RuleKind::WeightedAveraged),
        _ => Err(format!(
            "unknown rule '{s}' (expected gauss, antigauss, gstar, averaged or wavg)"
        )),
    }
}

fn warn_out_of_domain(r: &QuadratureRule) {
    if r.out_of_domain {
        eprintln!(
            "warning: {} rule has nodes outside the support of the measure",
            r.kind
        );
    }
}

pub fn quad(
    measure: Measure,
    m: usize,
    kind: RuleKind,
    problem: Option<ProblemId>,
    digits: usize,
) -> CliResult<String> {
    let r = rule(kind, &measure, m)?;
    warn_out_of_domain(&r);
    let Some(id) = problem else {
        let mut out = String::from("node,weight\n");
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            out.push_str(&format!(
                "{},{}\n",
                format_real(*x, digits),
                format_real(*w, digits)
            ));
        }
        return Ok(out);
    };
    let p = integral_problem(id)
        .ok_or_else(|| CliError::Usage(format!("{id} is an integral equation; use `solve`")))?;
    if p.measure != measure {
        return Err(CliError::Usage(format!(
            "{id} is defined for {:?}, not {:?}",
            p.measure, measure
        )));
    }
    let value = r.apply(&*p.integrand)?;
    let reference = p.reference_value()?;
    Ok(format!(
        "problem,rule,m,value,reference,error\n{id},{kind},{m},{},{},{}\n",
        format_real(value, digits),
        format_real(reference, digits),
        format_real(reference - value, digits)
    ))
}

pub fn table(id: u8, digits: usize) -> CliResult<(Table, String)> {
    if !(1..=9).contains(&id) {
        return Err(CliError::Usage(format!(
            "unknown table id {id} (expected 1 to 9)"
        )));
    }
    let t = run_table(&mut Context::new(), id)?;
    let csv = t.to_csv(digits);
    Ok((t, csv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gauss,
    AntiGauss,
    GStar,
    Averaged,
    Hat1,
    Hat2,
    Iter(Scheme),
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "g" | "gauss" => Method::Gauss,
            "antigauss" => Method::AntiGauss,
            "gstar" => Method::GStar,
            "averaged" => Method::Averaged,
            "hat1" => Method::Hat1,
            "hat2" => Method::Hat2,
            "iter1" => Method::Iter(Scheme::Iter1),
            "iter2" => Method::Iter(Scheme::Iter2),
            "iter3" => Method::Iter(Scheme::Iter3),
            _ => {
                return Err(format!(
                    "unknown method '{s}' (expected G, antigauss, gstar, averaged, hat1, hat2, iter1, iter2 or iter3)"
                ))
            }
        })
    }
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Gauss => "G",
            Method::AntiGauss => "antigauss",
            Method::GStar => "gstar",
            Method::Averaged => "averaged",
            Method::Hat1 => "hat1",
            Method::Hat2 => "hat2",
            Method::Iter(s) => s.name(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub problem: ProblemId,
    pub m: usize,
    pub method: Method,
    pub tolerance: f64,
    pub max_iter: usize,
    pub gamma: f64,
    pub delta: f64,
    pub grid: usize,
    pub parallel: bool,
    pub digits: usize,
}

fn condition_of(p: &FredholmProblem, rules: &[QuadratureRule]) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for r in rules {
        worst = worst.max(condition_infinity(&assemble(p, r)?)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub csv: String,
    pub converged: bool,
    pub iterations: Option<usize>,
}

/// Solves one equation and reports error, iterations and `∞`-condition number.
/// For two-system methods the larger condition number is reported.
pub fn solve(opts: &SolveOptions) -> CliResult<SolveReport> {
    let id = opts.problem;
    let base =
        equation(id).map_err(|_| CliError::Usage(format!("{id} is an integral; use `quad`")))?;
    let weight = if opts.gamma == 0.0 && opts.delta == 0.0 {
        SpaceWeight::Unit
    } else {
        SpaceWeight::Jacobi {
            gamma: opts.gamma,
            delta: opts.delta,
        }
    };
    let p = base.with_weight(weight)?;
    let (m, mu) = (opts.m, p.measure);
    let mut ctx = Context::new();
    let mut iterations = None;
    let mut converged = true;
    let (interp, cond) = match opts.method {
        Method::Gauss => (
            interpolant_gauss(&p, m)?,
            condition_of(&p, &[gauss_rule(&mu, m)?])?,
        ),
        Method::AntiGauss => (
            interpolant_antigauss(&p, m)?,
            condition_of(&p, &[antigauss_rule(&mu, m)?])?,
        ),
        Method::GStar => (
            interpolant_gstar(&p, m)?,
            condition_of(&p, &[gstar_rule(&mu, m)?])?,
        ),
        Method::Averaged => (
            interpolant_averaged(&p, m)?,
            condition_of(&p, &[gauss_rule(&mu, m)?, antigauss_rule(&mu, m)?])?,
        ),
        Method::Hat1 => (
            interpolant_hat1(&p, m)?,
            condition_of(
                &p,
                &[weighted_averaged_rule(&mu, m, WeightedMethod::Split)?],
            )?,
        ),
        Method::Hat2 => (
            interpolant_hat2(&p, m)?,
            condition_of(&p, &[gauss_rule(&mu, m)?, gstar_rule(&mu, m)?])?,
        ),
        Method::Iter(scheme) => {
            let system = build_block_system(&p, m)?;
            let config = IterationConfig::new(scheme)
                .tolerance(opts.tolerance)
                .max_iter(opts.max_iter)
                .parallel(opts.parallel);
            let result = iterate(&system, &config)?;
            iterations = Some(result.iterations);
            converged = result.converged();
            let cond = condition_inf(&system.full_matrix())?;
            (
                interpolant_from_blocks(&p, &system, &result, scheme.label()),
                cond,
            )
        }
    };
    let error = ctx.error_on(&interp, id, opts.grid)?;
    let d = opts.digits;
    let out = format!(
        "problem,m,method,gamma,delta,error,iterations,condition\n{id},{m},{},{},{},{},{},{}\n",
        opts.method.name(),
        opts.gamma,
        opts.delta,
        format_real(error, d),
        iterations.map_or(String::new(), |n| n.to_string()),
        format_real(cond, d)
    );
    Ok(SolveReport {
        csv: out,
        converged,
        iterations,
    })
}

pub fn figure(problem: ProblemId, m: usize, points: usize, digits: usize) -> CliResult<String> {
    if problem.is_integral() {
        return Err(CliError::Usage(format!(
            "{problem} is not an integral equation"
        )));
    }
    Ok(figure_errors(problem, m, points)?.to_csv(digits))
}
