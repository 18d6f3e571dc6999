//! Classical measures and their three-term recurrence coefficients.
//!
//! The monic orthogonal polynomials of a measure `dμ` satisfy
//!
//! ```text
//! p_{k+1}(x) = (x - α_k) p_k(x) - β_k p_{k-1}(x),   p_{-1} = 0, p_0 = 1,
//! ```
//!
//! with `β_0 = ∫ dμ`. Every coefficient here comes from a closed form evaluated
//! independently per index, so long tables carry no accumulated error.

use crate::error::{Error, Result};
use libm::tgamma as gamma;

/// Support of a measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[-1, 1]`
    Interval,
    /// `[0, ∞)`
    HalfLine,
    /// `ℝ`
    RealLine,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::Interval => (-1.0..=1.0).contains(&x),
            Domain::HalfLine => x >= 0.0,
            Domain::RealLine => x.is_finite(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Interval)
    }
}

/// A weight function family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    /// `(1-x)^alpha (1+x)^beta dx` on `[-1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
    /// `x^alpha e^{-x} dx` on `[0, ∞)`.
    Laguerre { alpha: f64 },
    /// `e^{-x^2} dx` on `ℝ`.
    Hermite,
}

impl Measure {
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let m = Measure::Jacobi { alpha, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        let m = Measure::Laguerre { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn hermite() -> Self {
        Measure::Hermite
    }

    /// Legendre measure `dx` on `[-1, 1]`.
    pub fn legendre() -> Self {
        Measure::Jacobi {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    /// Chebyshev measure of the first kind, `(1-x^2)^{-1/2} dx`.
    pub fn chebyshev() -> Self {
        Measure::Jacobi {
            alpha: -0.5,
            beta: -0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| p.is_finite() && p > -1.0;
        match *self {
            Measure::Jacobi { alpha, beta } => {
                if !ok(alpha) || !ok(beta) {
                    return Err(Error::InvalidParameter(format!(
                        "Jacobi parameters must exceed -1, got alpha = {alpha}, beta = {beta}"
                    )));
                }
            }
            Measure::Laguerre { alpha } => {
                if !ok(alpha) {
                    return Err(Error::InvalidParameter(format!(
                        "Laguerre parameter must exceed -1, got alpha = {alpha}"
                    )));
                }
            }
            Measure::Hermite => {}
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        match self {
            Measure::Jacobi { .. } => Domain::Interval,
            Measure::Laguerre { .. } => Domain::HalfLine,
            Measure::Hermite => Domain::RealLine,
        }
    }

    /// Whether the measure is even about the origin.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            Measure::Jacobi { alpha, beta } => alpha == beta,
            Measure::Laguerre { .. } => false,
            Measure::Hermite => true,
        }
    }

    /// Density of the measure with respect to `dx`.
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Measure::Jacobi { alpha, beta } => (1.0 - x).powf(alpha) * (1.0 + x).powf(beta),
            Measure::Laguerre { alpha } => x.powf(alpha) * (-x).exp(),
            Measure::Hermite => (-x * x).exp(),
        }
    }

    /// Total mass `β_0 = ∫ dμ`.
    pub fn beta0(&self) -> f64 {
        match *self {
            Measure::Jacobi { alpha, beta } => {
                2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
                    / gamma(alpha + beta + 2.0)
            }
            Measure::Laguerre { alpha } => gamma(alpha + 1.0),
            Measure::Hermite => std::f64::consts::PI.sqrt(),
        }
    }

    /// `α_k` for `k ≥ 0`.
    pub fn alpha(&self, k: usize) -> f64 {
        let kf = k as f64;
        match *self {
            Measure::Jacobi { alpha: a, beta: b } => {
                if a == b {
                    return 0.0;
                }
                if k == 0 {
                    // (b^2 - a^2) / ((a+b)(a+b+2)) with the factor a+b cancelled
                    return (b - a) / (a + b + 2.0);
                }
                let s = 2.0 * kf + a + b;
                (b * b - a * a) / (s * (s + 2.0))
            }
            Measure::Laguerre { alpha } => 2.0 * kf + alpha + 1.0,
            Measure::Hermite => 0.0,
        }
    }

    /// `β_k` for `k ≥ 1`; `k = 0` returns the total mass.
    pub fn beta(&self, k: usize) -> f64 {
        if k == 0 {
            return self.beta0();
        }
        let kf = k as f64;
        match *self {
            Measure::Jacobi { alpha: a, beta: b } => {
                if k == 1 {
                    // the factor (1+a+b) cancels between numerator and denominator
                    let s = 2.0 + a + b;
                    return 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
                }
                let s = 2.0 * kf + a + b;
                4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s * s - 1.0))
            }
            Measure::Laguerre { alpha } => kf * (kf + alpha),
            Measure::Hermite => kf / 2.0,
        }
    }
}

/// First `n` recurrence coefficients of a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    /// `α_0 … α_{n-1}`
    pub alpha: Vec<f64>,
    /// `β_1 … β_{n-1}`
    pub beta: Vec<f64>,
    /// `β_0 = ⟨p_0, p_0⟩`
    pub beta0: f64,
}

impl RecurrenceTable {
    /// Order `n` of the table.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `β_k` with the usual indexing (`k ≥ 1`), or `β_0` for `k = 0`.
    pub fn beta_k(&self, k: usize) -> f64 {
        if k == 0 {
            self.beta0
        } else {
            self.beta[k - 1]
        }
    }

    /// Evaluates `p_0(x) … p_n(x)` by the recurrence, for `n < len()`.
    pub fn monic_values(&self, x: f64, n: usize) -> Vec<f64> {
        let mut p = Vec::with_capacity(n + 1);
        p.push(1.0);
        let mut prev = 0.0;
        for k in 0..n {
            let bk = if k == 0 { 0.0 } else { self.beta[k - 1] };
            let next = (x - self.alpha[k]) * p[k] - bk * prev;
            prev = p[k];
            p.push(next);
        }
        p
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.len() < required {
            return Err(Error::InsufficientTable {
                required,
                available: self.len(),
            });
        }
        Ok(())
    }
}

/// First `n ≥ 1` recurrence coefficients of `measure`.
pub fn recurrence_table(measure: &Measure, n: usize) -> Result<RecurrenceTable> {
    measure.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "table order must be at least 1".into(),
        ));
    }
    Ok(RecurrenceTable {
        alpha: (0..n).map(|k| measure.alpha(k)).collect(),
        beta: (1..n).map(|k| measure.beta(k)).collect(),
        beta0: measure.beta0(),
    })
}

/// Mixing coefficients of the weighted averaged rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPair {
    /// Weight of the Gauss rule, `β_{m+1} / (β_m + β_{m+1})`.
    pub theta1: f64,
    /// Weight of the `G*` rule, `β_m / (β_m + β_{m+1})`.
    pub theta2: f64,
}

pub fn theta_pair(measure: &Measure, m: usize) -> Result<ThetaPair> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let table = recurrence_table(measure, m + 2)?;
    Ok(theta_from_table(&table, m))
}

pub(crate) fn theta_from_table(table: &RecurrenceTable, m: usize) -> ThetaPair {
    let bm = table.beta_k(m);
    let bm1 = table.beta_k(m + 1);
    ThetaPair {
        theta1: bm1 / (bm + bm1),
        theta2: bm / (bm + bm1),
    }
}
