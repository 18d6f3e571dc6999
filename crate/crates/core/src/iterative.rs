//! Block iterations for the weighted averaged Nyström system.
//!
//! Ordering the `2m+1` nodes as Gauss nodes first and `G*` nodes second gives
//!
//! ```text
//! [ I + Φ11    Φ12   ] [b]   [g ]
//! [   Φ21    I + Φ22 ] [c] = [g*]
//! ```
//!
//! which is the `Â_{2m+1}` collocation system up to a permutation.

use crate::error::{Error, Result};
use crate::linalg::{norm2, Lu, Matrix};
use crate::measures::{theta_pair, ThetaPair};
use crate::nystrom::{
    coupling_block, weight_values, weighted_rhs, Component, FredholmProblem, InterpolantLabel,
    NystromInterpolant,
};
use crate::rules::{gauss_rule, gstar_rule};

/// The four blocks plus what is needed to start and to interpolate.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub m: usize,
    pub theta: ThetaPair,
    pub phi11: Matrix,
    pub phi12: Matrix,
    pub phi21: Matrix,
    pub phi22: Matrix,
    pub g_gauss: Vec<f64>,
    pub g_star: Vec<f64>,
    pub gauss_nodes: Vec<f64>,
    pub gauss_weights: Vec<f64>,
    pub gauss_u: Vec<f64>,
    pub star_nodes: Vec<f64>,
    pub star_weights: Vec<f64>,
    pub star_u: Vec<f64>,
    /// `I + D* Φ* D*⁻¹`, the plain `G*_{m+1}` system.
    pub star_system: Matrix,
    /// `I + D Φ D⁻¹` of the plain `G_m` system.
    pub gauss_system: Matrix,
}

impl BlockSystem {
    /// The full `(2m+1)`-order matrix in Gauss-then-`G*` ordering.
    pub fn full_matrix(&self) -> Matrix {
        let m = self.m;
        let n = 2 * m + 1;
        Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            d + match (i < m, j < m) {
                (true, true) => self.phi11[(i, j)],
                (true, false) => self.phi12[(i, j - m)],
                (false, true) => self.phi21[(i - m, j)],
                (false, false) => self.phi22[(i - m, j - m)],
            }
        })
    }

    pub fn full_rhs(&self) -> Vec<f64> {
        [self.g_gauss.as_slice(), self.g_star.as_slice()].concat()
    }
}

pub fn build_block_system(problem: &FredholmProblem, m: usize) -> Result<BlockSystem> {
    let g = gauss_rule(&problem.measure, m)?;
    let s = gstar_rule(&problem.measure, m)?;
    let theta = theta_pair(&problem.measure, m)?;
    let gu = weight_values(problem, &g.nodes)?;
    let su = weight_values(problem, &s.nodes)?;
    let gauss = (g.nodes.as_slice(), g.weights.as_slice(), gu.as_slice());
    let star = (s.nodes.as_slice(), s.weights.as_slice(), su.as_slice());
    let phi11 = coupling_block(problem, (&g.nodes, &gu), gauss, theta.theta1)?;
    let phi12 = coupling_block(problem, (&g.nodes, &gu), star, theta.theta2)?;
    let phi21 = coupling_block(problem, (&s.nodes, &su), gauss, theta.theta1)?;
    let plain_star = coupling_block(problem, (&s.nodes, &su), star, 1.0)?;
    let plain_gauss = coupling_block(problem, (&g.nodes, &gu), gauss, 1.0)?;
    let n = plain_star.rows();
    let phi22 = Matrix::from_fn(n, n, |i, j| theta.theta2 * plain_star[(i, j)]);
    Ok(BlockSystem {
        m,
        theta,
        phi11,
        phi12,
        phi21,
        phi22,
        g_gauss: weighted_rhs(problem, &g.nodes, &gu)?,
        g_star: weighted_rhs(problem, &s.nodes, &su)?,
        gauss_nodes: g.nodes,
        gauss_weights: g.weights,
        gauss_u: gu,
        star_nodes: s.nodes,
        star_weights: s.weights,
        star_u: su,
        star_system: plain_star.plus_identity(),
        gauss_system: plain_gauss.plus_identity(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Both diagonal blocks factored.
    Iter1,
    /// Only `I + Φ11` factored.
    Iter2,
    /// No factorization.
    Iter3,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Iter1, Scheme::Iter2, Scheme::Iter3];

    pub fn label(&self) -> InterpolantLabel {
        match self {
            Scheme::Iter1 => InterpolantLabel::Hat3,
            Scheme::Iter2 => InterpolantLabel::Hat4,
            Scheme::Iter3 => InterpolantLabel::Hat5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Iter1 => "iter1",
            Scheme::Iter2 => "iter2",
            Scheme::Iter3 => "iter3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub scheme: Scheme,
    /// Stop once both `‖Δb‖₂` and `‖Δc‖₂` fall below this.
    pub tolerance: f64,
    pub max_iter: usize,
    /// Use `b^(k)` instead of `b^(k+1)` in the second block row.
    pub parallel: bool,
    /// Abort when an update exceeds this multiple of the first update.
    pub divergence_factor: Option<f64>,
    pub initial_b: InitialB,
}

/// Starting vector `b⁰`; only the Richardson scheme reads it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialB {
    /// Solution of the plain `G_m` Nyström system.
    #[default]
    Gauss,
    /// The right-hand side `g` at the Gauss nodes.
    Rhs,
}

impl IterationConfig {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            tolerance: 1e-15,
            max_iter: 100,
            parallel: false,
            divergence_factor: Some(1e6),
            initial_b: InitialB::Gauss,
        }
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn max_iter(mut self, k: usize) -> Self {
        self.max_iter = k;
        self
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn initial_b(mut self, b: InitialB) -> Self {
        self.initial_b = b;
        self
    }

    pub fn divergence_factor(mut self, f: Option<f64>) -> Self {
        self.divergence_factor = f;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationResult {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// Completed `(b, c)` update pairs.
    pub iterations: usize,
    pub termination: Termination,
    /// `(‖Δb‖₂, ‖Δc‖₂)` per step.
    pub history: Vec<(f64, f64)>,
}

impl IterationResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    norm2(&sub(a, b))
}

/// Runs one of the block schemes. `c⁰` solves the plain `G*_{m+1}` system.
pub fn iterate(system: &BlockSystem, config: &IterationConfig) -> Result<IterationResult> {
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            config.tolerance
        )));
    }
    let lu11 = match config.scheme {
        Scheme::Iter1 | Scheme::Iter2 => Some(Lu::factor(&system.phi11.plus_identity())?),
        Scheme::Iter3 => None,
    };
    let lu22 = match config.scheme {
        Scheme::Iter1 => Some(Lu::factor(&system.phi22.plus_identity())?),
        _ => None,
    };
    let mut c = Lu::factor(&system.star_system)?.solve(&system.g_star)?;
    let mut b = match config.initial_b {
        InitialB::Rhs => system.g_gauss.clone(),
        InitialB::Gauss => Lu::factor(&system.gauss_system)?.solve(&system.g_gauss)?,
    };
    let mut history = Vec::new();
    let mut termination = Termination::MaxIter;
    let mut first_update = None;

    for _ in 0..config.max_iter {
        let b_new = match &lu11 {
            Some(lu) => lu.solve(&sub(&system.g_gauss, &system.phi12.mul_vec(&c)))?,
            None => {
                let p = system.phi11.mul_vec(&b);
                let q = system.phi12.mul_vec(&c);
                system
                    .g_gauss
                    .iter()
                    .zip(p)
                    .zip(q)
                    .map(|((g, p), q)| g - p - q)
                    .collect()
            }
        };
        let b_used = if config.parallel { &b } else { &b_new };
        let r = sub(&system.g_star, &system.phi21.mul_vec(b_used));
        let c_new = match &lu22 {
            Some(lu) => lu.solve(&r)?,
            None => sub(&r, &system.phi22.mul_vec(&c)),
        };
        let db = diff_norm(&b_new, &b);
        let dc = diff_norm(&c_new, &c);
        history.push((db, dc));
        b = b_new;
        c = c_new;
        if db < config.tolerance && dc < config.tolerance {
            termination = Termination::Converged;
            break;
        }
        let step = db.max(dc);
        if !step.is_finite() {
            termination = Termination::Diverged;
            break;
        }
        let first = *first_update.get_or_insert(step);
        if let Some(f) = config.divergence_factor {
            if step > f * first {
                termination = Termination::Diverged;
                break;
            }
        }
    }
    Ok(IterationResult {
        b,
        c,
        iterations: history.len(),
        termination,
        history,
    })
}

/// Interpolant built from an iteration result.
pub fn interpolant_from_blocks(
    problem: &FredholmProblem,
    system: &BlockSystem,
    result: &IterationResult,
    label: InterpolantLabel,
) -> NystromInterpolant {
    NystromInterpolant {
        label,
        components: vec![
            Component {
                nodes: system.gauss_nodes.clone(),
                weights: system.gauss_weights.clone(),
                u_values: system.gauss_u.clone(),
                coeffs: result.b.clone(),
                mixing: system.theta.theta1,
            },
            Component {
                nodes: system.star_nodes.clone(),
                weights: system.star_weights.clone(),
                u_values: system.star_u.clone(),
                coeffs: result.c.clone(),
                mixing: system.theta.theta2,
            },
        ],
        mixing: Some(system.theta),
        problem: problem.clone(),
    }
}

/// Interpolant of the iterated solution together with the iteration record.
#[derive(Debug, Clone)]
pub struct IterativeSolution {
    pub interpolant: NystromInterpolant,
    pub result: IterationResult,
}

/// Builds the block system, iterates, and returns the interpolant even when
/// the iteration stopped without converging.
pub fn interpolant_iterative(
    problem: &FredholmProblem,
    m: usize,
    config: &IterationConfig,
) -> Result<IterativeSolution> {
    let system = build_block_system(problem, m)?;
    let result = iterate(&system, config)?;
    let interpolant = interpolant_from_blocks(problem, &system, &result, config.scheme.label());
    Ok(IterativeSolution {
        interpolant,
        result,
    })
}
