//! Gauss, anti-Gauss, `G*`, averaged and weighted averaged quadrature rules.

use crate::error::{Error, Result};
use crate::measures::{recurrence_table, theta_from_table, Measure, RecurrenceTable, ThetaPair};
use crate::symtrid::{
    build_antigauss_matrix, build_gauss_matrix, build_gstar_matrix, build_hat_matrix,
    eigen_first_components, SymTridiagonal,
};
use std::fmt;

/// Which construction produced a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Gauss,
    AntiGauss,
    GStar,
    Averaged,
    WeightedAveraged,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::Gauss,
        RuleKind::AntiGauss,
        RuleKind::GStar,
        RuleKind::Averaged,
        RuleKind::WeightedAveraged,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RuleKind::Gauss => "gauss",
            RuleKind::AntiGauss => "antigauss",
            RuleKind::GStar => "gstar",
            RuleKind::Averaged => "averaged",
            RuleKind::WeightedAveraged => "weighted-averaged",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the weighted averaged rule is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightedMethod {
    /// `θ₁·G_m + θ₂·G*_{m+1}`, two eigenproblems of order `m` and `m+1`.
    #[default]
    Split,
    /// Spectrum of the order `2m+1` matrix `Ĵ_{2m+1}`.
    Eigen,
}

/// Nodes (ascending) and weights of a quadrature rule for a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub measure: Measure,
    /// Order of the underlying Gauss rule.
    pub m: usize,
    /// Set when some node lies outside the support of the measure.
    pub out_of_domain: bool,
}

impl QuadratureRule {
    fn new(kind: RuleKind, nodes: Vec<f64>, weights: Vec<f64>, measure: Measure, m: usize) -> Self {
        let domain = measure.domain();
        let out_of_domain = nodes.iter().any(|&x| !domain.contains(x));
        Self {
            kind,
            nodes,
            weights,
            measure,
            m,
            out_of_domain,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ λ_k f(x_k)`; fails on the first non-finite integrand value.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { x, value: v });
            }
            sum += w * v;
        }
        Ok(sum)
    }

    /// Total weight, which equals `β_0` for every rule here.
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Free-function form of [`QuadratureRule::apply`].
pub fn apply<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> Result<f64> {
    rule.apply(f)
}

fn spectrum_rule(
    kind: RuleKind,
    t: &SymTridiagonal,
    beta0: f64,
    measure: &Measure,
    m: usize,
) -> Result<QuadratureRule> {
    let ev = eigen_first_components(t)?;
    let weights = ev.firstcomp2.iter().map(|v| beta0 * v).collect();
    Ok(QuadratureRule::new(kind, ev.values, weights, *measure, m))
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "rule order m must be at least 1".into(),
        ));
    }
    Ok(())
}

pub fn gauss_rule(measure: &Measure, m: usize) -> Result<QuadratureRule> {
    check_m(m)?;
    let table = recurrence_table(measure, m)?;
    gauss_from_table(&table, measure, m)
}

pub(crate) fn gauss_from_table(
    table: &RecurrenceTable,
    measure: &Measure,
    m: usize,
) -> Result<QuadratureRule> {
    let t = build_gauss_matrix(table, m)?;
    spectrum_rule(RuleKind::Gauss, &t, table.beta0, measure, m)
}

/// `(m+1)`-point anti-Gauss rule. Nodes may fall outside the support.
pub fn antigauss_rule(measure: &Measure, m: usize) -> Result<QuadratureRule> {
    check_m(m)?;
    let table = recurrence_table(measure, m + 1)?;
    let t = build_antigauss_matrix(&table, m)?;
    spectrum_rule(RuleKind::AntiGauss, &t, table.beta0, measure, m)
}

/// `(m+1)`-point rule of the matrix `J*_{m+1}`.
pub fn gstar_rule(measure: &Measure, m: usize) -> Result<QuadratureRule> {
    check_m(m)?;
    let table = recurrence_table(measure, m + 2)?;
    gstar_from_table(&table, measure, m)
}

pub(crate) fn gstar_from_table(
    table: &RecurrenceTable,
    measure: &Measure,
    m: usize,
) -> Result<QuadratureRule> {
    let t = build_gstar_matrix(table, m)?;
    spectrum_rule(RuleKind::GStar, &t, table.beta0, measure, m)
}

/// Relative gap below which two merged nodes count as coincident.
const COINCIDENCE_TOL: f64 = 1e-13;

fn merge(
    kind: RuleKind,
    a: &QuadratureRule,
    wa: f64,
    b: &QuadratureRule,
    wb: f64,
    measure: &Measure,
    m: usize,
) -> Result<QuadratureRule> {
    let mut pairs: Vec<(f64, f64)> = a
        .nodes
        .iter()
        .zip(&a.weights)
        .map(|(&x, &w)| (x, wa * w))
        .chain(b.nodes.iter().zip(&b.weights).map(|(&x, &w)| (x, wb * w)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    for w in pairs.windows(2) {
        let scale = w[0].0.abs().max(w[1].0.abs()).max(1.0);
        if w[1].0 - w[0].0 <= COINCIDENCE_TOL * scale {
            return Err(Error::NodeCoincidence(w[0].0));
        }
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule::new(kind, nodes, weights, *measure, m))
}

/// `(G_m + G̃_{m+1}) / 2`, with `2m+1` nodes.
pub fn averaged_rule(measure: &Measure, m: usize) -> Result<QuadratureRule> {
    let g = gauss_rule(measure, m)?;
    let a = antigauss_rule(measure, m)?;
    merge(RuleKind::Averaged, &g, 0.5, &a, 0.5, measure, m)
}

/// Weighted averaged rule `Â_{2m+1}`.
pub fn weighted_averaged_rule(
    measure: &Measure,
    m: usize,
    method: WeightedMethod,
) -> Result<QuadratureRule> {
    check_m(m)?;
    let table = recurrence_table(measure, m + 2)?;
    match method {
        WeightedMethod::Split => {
            let theta = theta_from_table(&table, m);
            let g = gauss_from_table(&table, measure, m)?;
            let s = gstar_from_table(&table, measure, m)?;
            merge(
                RuleKind::WeightedAveraged,
                &g,
                theta.theta1,
                &s,
                theta.theta2,
                measure,
                m,
            )
        }
        WeightedMethod::Eigen => {
            let t = build_hat_matrix(&table, m)?;
            spectrum_rule(RuleKind::WeightedAveraged, &t, table.beta0, measure, m)
        }
    }
}

/// Builds any of the five rules by kind (weighted averaged by splitting).
pub fn rule(kind: RuleKind, measure: &Measure, m: usize) -> Result<QuadratureRule> {
    match kind {
        RuleKind::Gauss => gauss_rule(measure, m),
        RuleKind::AntiGauss => antigauss_rule(measure, m),
        RuleKind::GStar => gstar_rule(measure, m),
        RuleKind::Averaged => averaged_rule(measure, m),
        RuleKind::WeightedAveraged => weighted_averaged_rule(measure, m, WeightedMethod::Split),
    }
}

/// Refined rule used to estimate the Gauss error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinedRule {
    Averaged,
    WeightedAveraged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub gauss_value: f64,
    pub refined_value: f64,
    /// `refined - gauss`, an estimate of `I(f) - G_m(f)`.
    pub estimate: f64,
}

pub fn error_estimate<F: Fn(f64) -> f64>(
    measure: &Measure,
    m: usize,
    f: F,
    refined: RefinedRule,
) -> Result<ErrorEstimate> {
    check_m(m)?;
    let table = recurrence_table(measure, m + 2)?;
    let g = gauss_from_table(&table, measure, m)?;
    let gauss_value = g.apply(&f)?;
    let estimate = match refined {
        RefinedRule::Averaged => {
            let a = antigauss_rule(measure, m)?;
            0.5 * (a.apply(&f)? - gauss_value)
        }
        RefinedRule::WeightedAveraged => {
            let ThetaPair { theta2, .. } = theta_from_table(&table, m);
            let s = gstar_from_table(&table, measure, m)?;
            theta2 * (s.apply(&f)? - gauss_value)
        }
    };
    Ok(ErrorEstimate {
        gauss_value,
        refined_value: gauss_value + estimate,
        estimate,
    })
}

/// `G*_{m+1}` weights from the closed form
/// `λ*_k = (β_m+β_{m+1})/β_m · ‖p_m‖² / (p_m(x*_k) · p*'_{m+1}(x*_k))`
/// with `‖p_m‖² = β_0 β_1 ⋯ β_m`.
pub fn gstar_weights_formula(measure: &Measure, m: usize) -> Result<Vec<f64>> {
    check_m(m)?;
    let table = recurrence_table(measure, m + 2)?;
    let nodes = gstar_from_table(&table, measure, m)?.nodes;
    let bm = table.beta_k(m);
    let bm1 = table.beta_k(m + 1);
    let norm2: f64 = (0..=m).map(|k| table.beta_k(k)).product();
    let factor = (bm + bm1) / bm * norm2;
    nodes
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let pm = table.monic_values(x, m)[m];
            let dstar: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &xj)| x - xj)
                .product();
            let denom = pm * dstar;
            if denom == 0.0 || !denom.is_finite() {
                return Err(Error::NumericFailure(format!(
                    "vanishing derivative of q_2m+1 at x = {x}"
                )));
            }
            Ok(factor / denom)
        })
        .collect()
}

/// Markov–Stieltjes bracket at one `G*_{m+1}` node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesBound {
    pub node: f64,
    /// `Σ_{i<k} λ*_i`
    pub lower: f64,
    /// `∫_{-∞}^{x*_k} dμ`
    pub cumulative: f64,
    /// `Σ_{i≤k} λ*_i`
    pub upper: f64,
    pub holds: bool,
}

/// Checks `Σ_{i<k} λ*_i ≤ μ((-∞, x*_k]) ≤ Σ_{i≤k} λ*_i` at every `G*_{m+1}` node,
/// with the cumulative measure supplied by the caller.
pub fn markov_stieltjes_check<C: Fn(f64) -> f64>(
    measure: &Measure,
    m: usize,
    cumulative: C,
) -> Result<Vec<StieltjesBound>> {
    let rule = gstar_rule(measure, m)?;
    let mut lower = 0.0;
    let mut out = Vec::with_capacity(rule.len());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let upper = lower + w;
        let c = cumulative(x);
        // slack for the rounding in the partial sums
        let slack = 8.0 * f64::EPSILON * upper.abs().max(c.abs());
        out.push(StieltjesBound {
            node: x,
            lower,
            cumulative: c,
            upper,
            holds: lower <= c + slack && c <= upper + slack,
        });
        lower = upper;
    }
    Ok(out)
}
