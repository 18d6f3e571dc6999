//! Symmetric tridiagonal (Jacobi) matrices and the Golub–Welsch eigen kernel.
//!
//! Each quadrature rule in this crate is the spectrum of a Jacobi matrix: the
//! nodes are its eigenvalues and the weights are `β_0` times the squared first
//! components of the normalized eigenvectors. Only those first components are
//! tracked, so a rule of order `n` costs `O(n^2)`.

use crate::error::{Error, Result};
use crate::measures::RecurrenceTable;

/// Symmetric tridiagonal matrix stored by its diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// Sub/super-diagonal, one shorter than `diag`.
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "tridiagonal with {} diagonal and {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }
}

/// Eigenvalues in ascending order with the squared first eigenvector components.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFirstComponents {
    pub values: Vec<f64>,
    pub firstcomp2: Vec<f64>,
}

/// `J_m`: diagonal `α_0…α_{m-1}`, off-diagonal `√β_1…√β_{m-1}`.
pub fn build_gauss_matrix(table: &RecurrenceTable, m: usize) -> Result<SymTridiagonal> {
    check_order(m)?;
    table.require(m)?;
    let diag = table.alpha[..m].to_vec();
    let offdiag = table.beta[..m - 1].iter().map(|b| b.sqrt()).collect();
    SymTridiagonal::new(diag, offdiag)
}

/// `J̃_{m+1}`: `J_m` bordered by `√(2β_m)` and `α_m`.
pub fn build_antigauss_matrix(table: &RecurrenceTable, m: usize) -> Result<SymTridiagonal> {
    bordered(table, m, 2.0 * table_beta(table, m, m + 1)?)
}

/// `J*_{m+1}`: `J_m` bordered by `√(β_m + β_{m+1})` and `α_m`.
pub fn build_gstar_matrix(table: &RecurrenceTable, m: usize) -> Result<SymTridiagonal> {
    check_order(m)?;
    table.require(m + 2)?;
    bordered(table, m, table.beta_k(m) + table.beta_k(m + 1))
}

/// `Ĵ_{2m+1}`: `J_m`, then `α_m` coupled by `√β_m` and `√β_{m+1}`, then `J_m` reversed.
pub fn build_hat_matrix(table: &RecurrenceTable, m: usize) -> Result<SymTridiagonal> {
    check_order(m)?;
    table.require(m + 2)?;
    let mut diag = Vec::with_capacity(2 * m + 1);
    diag.extend_from_slice(&table.alpha[..=m]);
    diag.extend(table.alpha[..m].iter().rev());

    let sq: Vec<f64> = table.beta[..m - 1].iter().map(|b| b.sqrt()).collect();
    let mut offdiag = Vec::with_capacity(2 * m);
    offdiag.extend_from_slice(&sq);
    offdiag.push(table.beta_k(m).sqrt());
    offdiag.push(table.beta_k(m + 1).sqrt());
    offdiag.extend(sq.iter().rev());
    SymTridiagonal::new(diag, offdiag)
}

fn check_order(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "rule order m must be at least 1".into(),
        ));
    }
    Ok(())
}

fn table_beta(table: &RecurrenceTable, k: usize, required: usize) -> Result<f64> {
    check_order(k)?;
    table.require(required)?;
    Ok(table.beta_k(k))
}

fn bordered(table: &RecurrenceTable, m: usize, last_offdiag_sq: f64) -> Result<SymTridiagonal> {
    let mut t = build_gauss_matrix(table, m)?;
    table.require(m + 1)?;
    t.diag.push(table.alpha[m]);
    t.offdiag.push(last_offdiag_sq.sqrt());
    Ok(t)
}

/// Maximum implicit QL sweeps spent on a single eigenvalue.
pub const MAX_SWEEPS: usize = 50;

/// Eigenvalues and squared first eigenvector components by implicit-shift QL.
///
/// Rotations are accumulated only into the first row of the eigenvector
/// matrix. Output is sorted ascending with the components permuted alongside.
pub fn eigen_first_components(t: &SymTridiagonal) -> Result<EigenFirstComponents> {
    let n = t.order();
    if n == 0 || t.offdiag.len() + 1 != n {
        return Err(Error::Dimension("malformed tridiagonal matrix".into()));
    }
    let mut d = t.diag.clone();
    // e[i] couples d[i] and d[i+1]; e[n-1] is scratch
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NumericFailure(format!(
                    "QL iteration did not converge for eigenvalue {l} of {n}"
                )));
            }
            // Wilkinson-type shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(EigenFirstComponents {
        values: order.iter().map(|&i| d[i]).collect(),
        firstcomp2: order.iter().map(|&i| z[i] * z[i]).collect(),
    })
}
