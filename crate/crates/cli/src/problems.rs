//! The six experiments: three integrals and three integral equations.

use avgauss::error::Result;
use avgauss::measures::Measure;
use avgauss::nystrom::{FredholmProblem, ScalarFn};
use avgauss::rules::gauss_rule;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    I1,
    I2,
    I3,
    Ex1,
    Ex2,
    Ex3,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::I1,
        ProblemId::I2,
        ProblemId::I3,
        ProblemId::Ex1,
        ProblemId::Ex2,
        ProblemId::Ex3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::I1 => "I1",
            ProblemId::I2 => "I2",
            ProblemId::I3 => "I3",
            ProblemId::Ex1 => "EX1",
            ProblemId::Ex2 => "EX2",
            ProblemId::Ex3 => "EX3",
        }
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, ProblemId::I1 | ProblemId::I2 | ProblemId::I3)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown problem '{s}' (expected I1, I2, I3, EX1, EX2 or EX3)"))
    }
}

/// How the true value of an integral is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralReference {
    Exact(f64),
    /// Gauss rule with this many nodes.
    Gauss(usize),
}

#[derive(Clone)]
pub struct IntegralProblem {
    pub id: ProblemId,
    pub measure: Measure,
    pub integrand: ScalarFn,
    pub reference: IntegralReference,
}

impl fmt::Debug for IntegralProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegralProblem")
            .field("id", &self.id)
            .field("measure", &self.measure)
            .field("reference", &self.reference)
            .finish_non_exhaustive()
    }
}

impl IntegralProblem {
    pub fn reference_value(&self) -> Result<f64> {
        match self.reference {
            IntegralReference::Exact(v) => Ok(v),
            IntegralReference::Gauss(n) => gauss_rule(&self.measure, n)?.apply(&*self.integrand),
        }
    }
}

/// Gauss–Nyström order used when an equation has no closed-form solution.
pub const REFERENCE_ORDER: usize = 512;

/// `I1`, `I2` or `I3`; `None` for the integral equations.
pub fn integral_problem(id: ProblemId) -> Option<IntegralProblem> {
    let (measure, integrand, reference): (Measure, ScalarFn, _) = match id {
        ProblemId::I1 => {
            let e = std::f64::consts::E;
            (
                Measure::legendre(),
                Arc::new(|x: f64| x * x.exp() * (x + 1.0).cos()),
                IntegralReference::Exact((1.0 + e * e * 2f64.cos()) / (2.0 * e)),
            )
        }
        ProblemId::I2 => (
            Measure::Laguerre { alpha: 0.5 },
            Arc::new(|x: f64| 1.0 / ((x - 2.0).powi(2) + 4.0)),
            IntegralReference::Gauss(1024),
        ),
        ProblemId::I3 => (
            Measure::hermite(),
            Arc::new(f64::cosh),
            IntegralReference::Gauss(512),
        ),
        _ => return None,
    };
    Some(IntegralProblem {
        id,
        measure,
        integrand,
        reference,
    })
}

/// `EX1`, `EX2` or `EX3` with `u ≡ 1`; `None` for the integrals.
pub fn equation_problem(id: ProblemId) -> Option<FredholmProblem> {
    let p = match id {
        ProblemId::Ex1 => {
            let c = (8.0 * 2f64.cos() - 4.0 * 4f64.cos() - 4.0 * 2f64.sin() + 4f64.sin()) / 32.0;
            FredholmProblem::new(
                |x: f64, y: f64| 0.5 * x * y.exp() * (x + y).sin(),
                move |y: f64| c * y.exp() * y.cos() + (3.0 * y).cos(),
                Measure::legendre(),
            )
            .with_exact(|y: f64| (3.0 * y).cos())
        }
        ProblemId::Ex2 => FredholmProblem::new(
            |x: f64, y: f64| (x + y).exp() / (1.0 + x * x + 3.0 * y * y),
            |y: f64| (y + 1.0).abs().powf(1.5),
            Measure::Jacobi {
                alpha: 0.25,
                beta: 0.25,
            },
        ),
        ProblemId::Ex3 => FredholmProblem::new(
            |x: f64, y: f64| (y + 3.0) * (3.0 + x).cos().abs().powf(2.5),
            |y: f64| (1.0 + y * y).ln(),
            Measure::Jacobi {
                alpha: -0.25,
                beta: 0.8,
            },
        ),
        _ => return None,
    };
    Some(p)
}
