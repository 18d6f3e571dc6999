//! Reruns of the experiments behind the nine result tables.

use crate::problems::{
    equation_problem, integral_problem, IntegralProblem, ProblemId, REFERENCE_ORDER,
};
use avgauss::error::{Error, Result};
use avgauss::iterative::{
    build_block_system, interpolant_from_blocks, iterate, IterationConfig, Scheme,
};
use avgauss::nystrom::{
    interpolant_antigauss, interpolant_averaged, interpolant_gauss, interpolant_gstar,
    interpolant_hat1, interpolant_hat2, open_grid, uniform_error_on_grid, FredholmProblem,
    NystromInterpolant, SpaceWeight, ERROR_GRID,
};
use avgauss::rules::{rule, RuleKind};
use std::collections::hash_map::Entry;
use std::collections::HashMap;

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub id: u8,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub problem: ProblemId,
    pub tolerance: Option<f64>,
    pub gamma: f64,
    pub delta: f64,
}

impl Table {
    fn new(id: u8, title: &str, problem: ProblemId, columns: &[&str]) -> Self {
        Self {
            id,
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            problem,
            tolerance: None,
            gamma: 0.0,
            delta: 0.0,
        }
    }

    /// Value in the row whose first cell is `m`.
    pub fn get(&self, m: usize, column: &str) -> Option<Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .find(|r| r.first() == Some(&Cell::Count(m)))
            .map(|r| r[j])
    }

    pub fn real(&self, m: usize, column: &str) -> Option<f64> {
        match self.get(m, column)? {
            Cell::Real(v) => Some(v),
            Cell::Count(n) => Some(n as f64),
        }
    }

    pub fn count(&self, m: usize, column: &str) -> Option<usize> {
        match self.get(m, column)? {
            Cell::Count(n) => Some(n),
            Cell::Real(_) => None,
        }
    }

    /// Comma-separated rendering; reals use `digits` significant digits.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match *c {
                    Cell::Count(n) => n.to_string(),
                    Cell::Real(v) => format_real(v, digits),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with `digits` significant digits and a two-digit
/// signed exponent, e.g. `-7.93e-02`.
pub fn format_real(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{:.*e}", digits.max(1) - 1, v);
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub const TABLE_IDS: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Reference solutions computed once and reused across rows and tables.
#[derive(Default)]
pub struct Context {
    integrals: HashMap<ProblemId, f64>,
    solutions: HashMap<(ProblemId, usize), Vec<f64>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn integral_reference(&mut self, p: &IntegralProblem) -> Result<f64> {
        if let Some(&v) = self.integrals.get(&p.id) {
            return Ok(v);
        }
        let v = p.reference_value()?;
        self.integrals.insert(p.id, v);
        Ok(v)
    }

    /// Unweighted true or reference solution on `open_grid(points)`.
    pub fn solution_reference(&mut self, id: ProblemId, points: usize) -> Result<&[f64]> {
        let values = match self.solutions.entry((id, points)) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(reference_on_grid(id, points)?),
        };
        Ok(values)
    }

    /// Weighted uniform error on `open_grid(points)`.
    pub fn error_on(
        &mut self,
        interp: &NystromInterpolant,
        id: ProblemId,
        points: usize,
    ) -> Result<f64> {
        let grid = open_grid(points);
        let reference = self.solution_reference(id, points)?;
        uniform_error_on_grid(interp, &grid, reference)
    }

    /// Weighted uniform error on the standard grid.
    pub fn error(&mut self, interp: &NystromInterpolant, id: ProblemId) -> Result<f64> {
        self.error_on(interp, id, ERROR_GRID)
    }
}

fn reference_on_grid(id: ProblemId, points: usize) -> Result<Vec<f64>> {
    let p = equation(id)?;
    let grid = open_grid(points);
    match &p.exact {
        Some(f) => Ok(grid.iter().map(|&y| f(y)).collect()),
        None => {
            let reference = interpolant_gauss(&p, REFERENCE_ORDER)?;
            grid.iter()
                .map(|&y| reference.evaluate(y).map(|v| v.value))
                .collect()
        }
    }
}

fn integral(id: ProblemId) -> Result<IntegralProblem> {
    integral_problem(id).ok_or_else(|| Error::InvalidParameter(format!("{id} is not an integral")))
}

pub(crate) fn equation(id: ProblemId) -> Result<FredholmProblem> {
    equation_problem(id).ok_or_else(|| Error::InvalidParameter(format!("{id} is not an equation")))
}

const QUAD_KINDS: [RuleKind; 5] = [
    RuleKind::Gauss,
    RuleKind::AntiGauss,
    RuleKind::GStar,
    RuleKind::Averaged,
    RuleKind::WeightedAveraged,
];

fn quadrature_table(ctx: &mut Context, id: u8, problem: ProblemId, ms: &[usize]) -> Result<Table> {
    let p = integral(problem)?;
    let exact = ctx.integral_reference(&p)?;
    let mut t = Table::new(
        id,
        &format!("Quadrature errors for {problem}"),
        problem,
        &["m", "I-G", "I-antigauss", "I-gstar", "I-averaged", "I-wavg"],
    );
    for &m in ms {
        let mut row = vec![Cell::Count(m)];
        for kind in QUAD_KINDS {
            let q = rule(kind, &p.measure, m)?.apply(&*p.integrand)?;
            row.push(Cell::Real(exact - q));
        }
        t.rows.push(row);
    }
    Ok(t)
}

fn estimate_table(id: u8, ms: &[usize]) -> Result<Table> {
    let p = integral(ProblemId::I1)?;
    let mut t = Table::new(
        id,
        "Error estimates for the Gauss rule on I1",
        ProblemId::I1,
        &["m", "averaged-G", "wavg-G"],
    );
    for &m in ms {
        let g = rule(RuleKind::Gauss, &p.measure, m)?.apply(&*p.integrand)?;
        let a = rule(RuleKind::Averaged, &p.measure, m)?.apply(&*p.integrand)?;
        let w = rule(RuleKind::WeightedAveraged, &p.measure, m)?.apply(&*p.integrand)?;
        t.rows
            .push(vec![Cell::Count(m), Cell::Real(a - g), Cell::Real(w - g)]);
    }
    Ok(t)
}

fn direct_table(ctx: &mut Context, id: u8, ms: &[usize]) -> Result<Table> {
    let pid = ProblemId::Ex1;
    let p = equation(pid)?;
    let mut t = Table::new(
        id,
        "Nystrom errors for EX1",
        pid,
        &["m", "R_G", "R_antigauss", "R_gstar", "R_A", "R1", "R2"],
    );
    for &m in ms {
        let interps = [
            interpolant_gauss(&p, m)?,
            interpolant_antigauss(&p, m)?,
            interpolant_gstar(&p, m)?,
            interpolant_averaged(&p, m)?,
            interpolant_hat1(&p, m)?,
            interpolant_hat2(&p, m)?,
        ];
        let mut row = vec![Cell::Count(m)];
        for i in &interps {
            row.push(Cell::Real(ctx.error(i, pid)?));
        }
        t.rows.push(row);
    }
    Ok(t)
}

/// Settings of one iterative table.
#[derive(Debug, Clone, Copy)]
pub struct IterativeSpec {
    pub problem: ProblemId,
    pub ms: &'static [usize],
    pub tolerance: f64,
    pub weight: SpaceWeight,
    pub with_hat2: bool,
}

/// Configuration used for table reproduction: cap 100, no divergence guard.
pub fn table_config(scheme: Scheme, tolerance: f64) -> IterationConfig {
    IterationConfig::new(scheme)
        .tolerance(tolerance)
        .max_iter(100)
        .divergence_factor(None)
}

pub fn iterative_table(ctx: &mut Context, id: u8, spec: &IterativeSpec) -> Result<Table> {
    let p = equation(spec.problem)?.with_weight(spec.weight)?;
    let mut cols = vec!["m", "R1"];
    if spec.with_hat2 {
        cols.push("R2");
    }
    cols.extend(["R3", "N3", "R4", "N4", "R5", "N5"]);
    let mut t = Table::new(
        id,
        &format!("Iterative solvers for {}", spec.problem),
        spec.problem,
        &cols,
    );
    t.tolerance = Some(spec.tolerance);
    if let SpaceWeight::Jacobi { gamma, delta } = spec.weight {
        t.gamma = gamma;
        t.delta = delta;
    }
    for &m in spec.ms {
        let mut row = vec![Cell::Count(m)];
        row.push(Cell::Real(
            ctx.error(&interpolant_hat1(&p, m)?, spec.problem)?,
        ));
        if spec.with_hat2 {
            row.push(Cell::Real(
                ctx.error(&interpolant_hat2(&p, m)?, spec.problem)?,
            ));
        }
        let system = build_block_system(&p, m)?;
        for scheme in Scheme::ALL {
            let result = iterate(&system, &table_config(scheme, spec.tolerance))?;
            let interp = interpolant_from_blocks(&p, &system, &result, scheme.label());
            row.push(Cell::Real(ctx.error(&interp, spec.problem)?));
            row.push(Cell::Count(result.iterations));
        }
        t.rows.push(row);
    }
    Ok(t)
}

pub const EX2_WEIGHT: SpaceWeight = SpaceWeight::Jacobi {
    gamma: 1.24,
    delta: 1.24,
};

pub fn iterative_spec(id: u8) -> Option<IterativeSpec> {
    let spec = match id {
        6 => IterativeSpec {
            problem: ProblemId::Ex1,
            ms: &[2, 4, 6, 8, 10],
            tolerance: 1e-15,
            weight: SpaceWeight::Unit,
            with_hat2: false,
        },
        7 => IterativeSpec {
            problem: ProblemId::Ex2,
            ms: &[2, 4, 8, 16, 32, 64, 128, 256],
            tolerance: 1e-15,
            weight: SpaceWeight::Unit,
            with_hat2: true,
        },
        8 => IterativeSpec {
            problem: ProblemId::Ex3,
            ms: &[2, 4, 8, 16, 32, 64],
            tolerance: 1e-12,
            weight: SpaceWeight::Unit,
            with_hat2: false,
        },
        9 => IterativeSpec {
            problem: ProblemId::Ex2,
            ms: &[32, 64, 128, 256],
            tolerance: 1e-15,
            weight: EX2_WEIGHT,
            with_hat2: true,
        },
        _ => return None,
    };
    Some(spec)
}

/// Runs table `id` (1 to 9).
pub fn run_table(ctx: &mut Context, id: u8) -> Result<Table> {
    match id {
        1 => quadrature_table(ctx, 1, ProblemId::I1, &[2, 3, 4, 5, 6]),
        2 => estimate_table(2, &[2, 3, 4, 5, 6]),
        3 => quadrature_table(ctx, 3, ProblemId::I2, &[8, 16, 32, 64, 128]),
        4 => quadrature_table(ctx, 4, ProblemId::I3, &[2, 4, 6, 8]),
        5 => direct_table(ctx, 5, &[2, 4, 6, 8, 10]),
        6..=9 => iterative_table(ctx, id, &iterative_spec(id).expect("iterative id")),
        _ => Err(Error::InvalidParameter(format!(
            "unknown table id {id} (expected 1 to 9)"
        ))),
    }
}

/// Signed errors `f - f_m` of the Gauss, anti-Gauss and `G*` interpolants on
/// an equispaced grid of `points` interior points.
pub fn figure_errors(problem: ProblemId, m: usize, points: usize) -> Result<Table> {
    let p = equation(problem)?;
    let interps = [
        interpolant_gauss(&p, m)?,
        interpolant_antigauss(&p, m)?,
        interpolant_gstar(&p, m)?,
    ];
    let reference: Box<dyn Fn(f64) -> Result<f64>> = match &p.exact {
        Some(f) => {
            let f = f.clone();
            Box::new(move |y| Ok(f(y)))
        }
        None => {
            let r = interpolant_gauss(&p, REFERENCE_ORDER)?;
            Box::new(move |y| r.evaluate(y).map(|v| v.value))
        }
    };
    let mut t = Table::new(
        0,
        &format!("Signed interpolant errors for {problem}, m = {m}"),
        problem,
        &["y", "f-f_G", "f-f_antigauss", "f-f_gstar"],
    );
    for y in open_grid(points) {
        let f = reference(y)?;
        let mut row = vec![Cell::Real(y)];
        for i in &interps {
            row.push(Cell::Real(f - i.evaluate(y)?.value));
        }
        t.rows.push(row);
    }
    Ok(t)
}
