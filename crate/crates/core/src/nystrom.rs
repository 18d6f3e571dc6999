//! Weighted Nyström discretization of `f(y) + ∫ k(x,y) f(x) dμ(x) = g(y)`.
//!
//! The equation is posed in a weighted space `C_u`: unknowns are the weighted
//! values `a_j = (f u)(x_j)`, so the collocation system reads
//!
//! ```text
//! Σ_j [δ_ij + λ_j u(x_i)/u(x_j) k(x_j, x_i)] a_j = (g u)(x_i)
//! ```
//!
//! and the interpolant is
//! `(f u)(y) = (g u)(y) - u(y) Σ_j λ_j/u(x_j) k(x_j, y) a_j`.

use crate::error::{Error, Result};
use crate::linalg::{condition_inf, Lu, Matrix};
use crate::measures::{theta_pair, Measure, ThetaPair};
use crate::rules::{
    antigauss_rule, gauss_rule, gstar_rule, weighted_averaged_rule, QuadratureRule, WeightedMethod,
};
use std::fmt;
use std::sync::Arc;

pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Weight `u` of the solution space `C_u`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SpaceWeight {
    #[default]
    Unit,
    /// `u(x) = (1-x)^gamma (1+x)^delta` on `[-1, 1]`.
    Jacobi { gamma: f64, delta: f64 },
}

impl SpaceWeight {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SpaceWeight::Unit => 1.0,
            SpaceWeight::Jacobi { gamma, delta } => (1.0 - x).powf(gamma) * (1.0 + x).powf(delta),
        }
    }

    /// A Jacobi-type weight needs `γ, δ ≥ 0`, a Jacobi measure, and
    /// `γ < α + 1`, `δ < β + 1`.
    pub fn validate_for(&self, measure: &Measure) -> Result<()> {
        let SpaceWeight::Jacobi { gamma, delta } = *self else {
            return Ok(());
        };
        if !(gamma >= 0.0 && delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "space weight exponents must be nonnegative, got gamma = {gamma}, delta = {delta}"
            )));
        }
        match *measure {
            Measure::Jacobi { alpha, beta } if gamma < alpha + 1.0 && delta < beta + 1.0 => Ok(()),
            Measure::Jacobi { alpha, beta } => Err(Error::InvalidParameter(format!(
                "space weight requires gamma < {} and delta < {}, got {gamma}, {delta}",
                alpha + 1.0,
                beta + 1.0
            ))),
            _ => Err(Error::InvalidParameter(
                "Jacobi-type space weight needs a Jacobi measure".into(),
            )),
        }
    }
}

/// A second-kind Fredholm equation with its measure and solution space.
#[derive(Clone)]
pub struct FredholmProblem {
    /// `k(x, y)`, with `x` the integration variable.
    pub kernel: KernelFn,
    pub rhs: ScalarFn,
    pub measure: Measure,
    pub weight: SpaceWeight,
    pub exact: Option<ScalarFn>,
}

impl fmt::Debug for FredholmProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FredholmProblem")
            .field("measure", &self.measure)
            .field("weight", &self.weight)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl FredholmProblem {
    pub fn new<K, G>(kernel: K, rhs: G, measure: Measure) -> Self
    where
        K: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kernel: Arc::new(kernel),
            rhs: Arc::new(rhs),
            measure,
            weight: SpaceWeight::Unit,
            exact: None,
        }
    }

    pub fn with_weight(mut self, weight: SpaceWeight) -> Result<Self> {
        weight.validate_for(&self.measure)?;
        self.weight = weight;
        Ok(self)
    }

    pub fn with_exact<F: Fn(f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.exact = Some(Arc::new(f));
        self
    }

    pub fn u(&self, x: f64) -> f64 {
        self.weight.eval(x)
    }
}

/// Collocation system `(I + D Φ D⁻¹) a = g` for one node set.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: Matrix,
    pub rhs_vector: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `u` at the nodes
    pub u_values: Vec<f64>,
}

fn finite(x: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { x, value })
    }
}

pub(crate) fn weight_values(problem: &FredholmProblem, nodes: &[f64]) -> Result<Vec<f64>> {
    nodes
        .iter()
        .map(|&x| {
            let u = problem.u(x);
            if u == 0.0 || !u.is_finite() {
                Err(Error::WeightVanishes(x))
            } else {
                Ok(u)
            }
        })
        .collect()
}

/// Coupling block `λ_j u(y_i)/u(x_j) k(x_j, y_i)` between two node sets.
pub(crate) fn coupling_block(
    problem: &FredholmProblem,
    rows: (&[f64], &[f64]),
    cols: (&[f64], &[f64], &[f64]),
    scale: f64,
) -> Result<Matrix> {
    let (ys, uy) = rows;
    let (xs, ws, ux) = cols;
    let mut m = Matrix::zeros(ys.len(), xs.len());
    for (i, (&y, &u_i)) in ys.iter().zip(uy).enumerate() {
        for (j, ((&x, &w), &u_j)) in xs.iter().zip(ws).zip(ux).enumerate() {
            let k = finite(x, (problem.kernel)(x, y))?;
            m[(i, j)] = scale * w * (u_i / u_j) * k;
        }
    }
    Ok(m)
}

pub(crate) fn weighted_rhs(
    problem: &FredholmProblem,
    nodes: &[f64],
    u: &[f64],
) -> Result<Vec<f64>> {
    nodes
        .iter()
        .zip(u)
        .map(|(&x, &ux)| finite(x, (problem.rhs)(x)).map(|g| g * ux))
        .collect()
}

pub(crate) fn assemble_nodes(
    problem: &FredholmProblem,
    nodes: &[f64],
    weights: &[f64],
) -> Result<AssembledSystem> {
    let u_values = weight_values(problem, nodes)?;
    let phi = coupling_block(
        problem,
        (nodes, &u_values),
        (nodes, weights, &u_values),
        1.0,
    )?;
    Ok(AssembledSystem {
        matrix: phi.plus_identity(),
        rhs_vector: weighted_rhs(problem, nodes, &u_values)?,
        nodes: nodes.to_vec(),
        weights: weights.to_vec(),
        u_values,
    })
}

/// Builds the weighted collocation system of `rule`.
pub fn assemble(problem: &FredholmProblem, rule: &QuadratureRule) -> Result<AssembledSystem> {
    assemble_nodes(problem, &rule.nodes, &rule.weights)
}

/// LU with partial pivoting.
pub fn solve_direct(system: &AssembledSystem) -> Result<Vec<f64>> {
    Lu::factor(&system.matrix)?.solve(&system.rhs_vector)
}

/// `‖A‖_∞ ‖A⁻¹‖_∞` of the assembled matrix.
pub fn condition_infinity(system: &AssembledSystem) -> Result<f64> {
    condition_inf(&system.matrix)
}

/// Which discretization produced an interpolant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolantLabel {
    /// Gauss rule `G_m`
    Gauss,
    AntiGauss,
    GStar,
    /// Mean of the Gauss and anti-Gauss interpolants
    Averaged,
    /// Weighted averaged rule `Â_{2m+1}`, direct solve
    Hat1,
    /// Convex combination of the `G_m` and `G*_{m+1}` interpolants
    Hat2,
    /// Block iteration with two LU factorizations
    Hat3,
    /// Block iteration with one LU factorization
    Hat4,
    /// Richardson-type block iteration
    Hat5,
}

impl InterpolantLabel {
    pub fn name(&self) -> &'static str {
        match self {
            InterpolantLabel::Gauss => "G",
            InterpolantLabel::AntiGauss => "antigauss",
            InterpolantLabel::GStar => "gstar",
            InterpolantLabel::Averaged => "averaged",
            InterpolantLabel::Hat1 => "hat1",
            InterpolantLabel::Hat2 => "hat2",
            InterpolantLabel::Hat3 => "hat3",
            InterpolantLabel::Hat4 => "hat4",
            InterpolantLabel::Hat5 => "hat5",
        }
    }
}

/// Nodes, weights and solved weighted values of one discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub u_values: Vec<f64>,
    pub coeffs: Vec<f64>,
    /// Factor applied to this component in the combined interpolant.
    pub mixing: f64,
}

/// Weighted and plain value of an interpolant at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolantValue {
    /// `(f u)(y)`
    pub weighted: f64,
    /// `f(y)`; infinite where `u(y) = 0`.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct NystromInterpolant {
    pub label: InterpolantLabel,
    pub components: Vec<Component>,
    pub mixing: Option<ThetaPair>,
    pub problem: FredholmProblem,
}

impl NystromInterpolant {
    pub(crate) fn single(
        label: InterpolantLabel,
        problem: &FredholmProblem,
        system: AssembledSystem,
        coeffs: Vec<f64>,
    ) -> Self {
        Self {
            label,
            components: vec![Component {
                nodes: system.nodes,
                weights: system.weights,
                u_values: system.u_values,
                coeffs,
                mixing: 1.0,
            }],
            mixing: None,
            problem: problem.clone(),
        }
    }

    /// `(f u)(y)` and `f(y)` at a point of the domain.
    pub fn evaluate(&self, y: f64) -> Result<InterpolantValue> {
        if !self.problem.measure.domain().contains(y) {
            return Err(Error::OutOfDomain(y));
        }
        let uy = self.problem.u(y);
        let mut sum = 0.0;
        for c in &self.components {
            let mut s = 0.0;
            for (((&x, &w), &ux), &a) in c
                .nodes
                .iter()
                .zip(&c.weights)
                .zip(&c.u_values)
                .zip(&c.coeffs)
            {
                s += w / ux * (self.problem.kernel)(x, y) * a;
            }
            sum += c.mixing * s;
        }
        let weighted = ((self.problem.rhs)(y) - sum) * uy;
        Ok(InterpolantValue {
            weighted,
            value: weighted / uy,
        })
    }

    /// Total number of quadrature nodes across components.
    pub fn node_count(&self) -> usize {
        self.components.iter().map(|c| c.nodes.len()).sum()
    }
}

fn from_rule(
    problem: &FredholmProblem,
    rule: &QuadratureRule,
    label: InterpolantLabel,
) -> Result<NystromInterpolant> {
    let system = assemble(problem, rule)?;
    let coeffs = solve_direct(&system)?;
    Ok(NystromInterpolant::single(label, problem, system, coeffs))
}

pub fn interpolant_gauss(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    from_rule(
        problem,
        &gauss_rule(&problem.measure, m)?,
        InterpolantLabel::Gauss,
    )
}

pub fn interpolant_antigauss(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    from_rule(
        problem,
        &antigauss_rule(&problem.measure, m)?,
        InterpolantLabel::AntiGauss,
    )
}

pub fn interpolant_gstar(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    from_rule(
        problem,
        &gstar_rule(&problem.measure, m)?,
        InterpolantLabel::GStar,
    )
}

/// Direct solve of the order `2m+1` weighted averaged system.
pub fn interpolant_hat1(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    let rule = weighted_averaged_rule(&problem.measure, m, WeightedMethod::Split)?;
    from_rule(problem, &rule, InterpolantLabel::Hat1)
}

fn combine(
    label: InterpolantLabel,
    problem: &FredholmProblem,
    parts: [(NystromInterpolant, f64); 2],
    mixing: Option<ThetaPair>,
) -> NystromInterpolant {
    let components = parts
        .into_iter()
        .map(|(interp, mix)| {
            let mut c = interp
                .components
                .into_iter()
                .next()
                .expect("single component");
            c.mixing = mix;
            c
        })
        .collect();
    NystromInterpolant {
        label,
        components,
        mixing,
        problem: problem.clone(),
    }
}

/// `½ (f_m u) + ½ (f̃_{m+1} u)`, the mean of the Gauss and anti-Gauss interpolants.
pub fn interpolant_averaged(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    let g = interpolant_gauss(problem, m)?;
    let a = interpolant_antigauss(problem, m)?;
    Ok(combine(
        InterpolantLabel::Averaged,
        problem,
        [(g, 0.5), (a, 0.5)],
        None,
    ))
}

/// `θ₁ (f_m u) + θ₂ (f*_{m+1} u)` from two independent solves.
pub fn interpolant_hat2(problem: &FredholmProblem, m: usize) -> Result<NystromInterpolant> {
    let theta = theta_pair(&problem.measure, m)?;
    let g = interpolant_gauss(problem, m)?;
    let s = interpolant_gstar(problem, m)?;
    Ok(combine(
        InterpolantLabel::Hat2,
        problem,
        [(g, theta.theta1), (s, theta.theta2)],
        Some(theta),
    ))
}

/// Equispaced interior points of `(-1, 1)`, endpoints excluded.
pub fn open_grid(n: usize) -> Vec<f64> {
    let h = 2.0 / (n as f64 + 1.0);
    (1..=n).map(|i| -1.0 + h * i as f64).collect()
}

/// Default size of the uniform-error grid.
pub const ERROR_GRID: usize = 1000;

/// `max |(f_interp - f_ref)(y) u(y)|` over `grid_size` equispaced points of `(-1, 1)`.
pub fn uniform_error<R: Fn(f64) -> f64>(
    interp: &NystromInterpolant,
    reference: R,
    grid_size: usize,
) -> Result<f64> {
    if !interp.problem.measure.domain().is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let grid = open_grid(grid_size);
    let values: Vec<f64> = grid.iter().map(|&y| reference(y)).collect();
    uniform_error_on_grid(interp, &grid, &values)
}

/// `max |(f_interp - f_ref)(y) u(y)|` with the reference already tabulated on `grid`.
pub fn uniform_error_on_grid(
    interp: &NystromInterpolant,
    grid: &[f64],
    reference: &[f64],
) -> Result<f64> {
    if grid.len() != reference.len() {
        return Err(Error::Dimension(format!(
            "{} grid points but {} reference values",
            grid.len(),
            reference.len()
        )));
    }
    let mut err: f64 = 0.0;
    for (&y, &r) in grid.iter().zip(reference) {
        let v = interp.evaluate(y)?;
        let diff = (v.weighted - r * interp.problem.u(y)).abs();
        if diff.is_nan() {
            return Err(Error::NonFinite { x: y, value: diff });
        }
        err = err.max(diff);
    }
    Ok(err)
}
