//! Losses, smooth objectives in the `X` variable, and the duality-gap
//! certificate for the KL restriction.
//!
//! The primal problem in the symmetric KL case is
//!
//! ```text
//! minimize  sum_ij A_ij (log A_ij - X_ij) + exp(X_ij) - A_ij
//! subject to X >= 0 (PSD)
//! ```
//!
//! Its Lagrangian dual evaluates to
//!
//! ```text
//! g(Y) = sum_ij A_ij log A_ij + Y_ij - (A_ij + Y_ij) log(A_ij + Y_ij)
//! ```
//!
//! over `Y >= 0` (PSD): minimizing the Lagrangian over X gives
//! `X = ln(A + Y)` entrywise and substituting back produces the constant
//! `sum A log A - A` that makes the gap vanish exactly at the optimum.
//! At any primal iterate, `Y = (exp_H(X) - A)` projected onto the PSD cone
//! is dual feasible, so `primal - dual` is a computable optimality bound.
//!
//! Conventions: `0 * log 0 = 0` everywhere; a log of a negative argument
//! is a hard error, never a NaN.

use crate::eigen::psd_project;
use crate::error::{Error, Result};
use crate::matrix::{hadamard_exp, DenseMatrix, SymMatrix};

/// Which loss a high-level solve should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Mse,
    Kl,
}

impl std::str::FromStr for LossKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(LossKind::Mse),
            "kl" => Ok(LossKind::Kl),
            other => Err(Error::invalid(format!(
                "unknown loss {other:?}, expected \"kl\" or \"mse\""
            ))),
        }
    }
}

/// Dual feasible point plus the primal/dual values it certifies.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub y: SymMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
}

/// Squared Frobenius distance `sum_ij (A_ij - Y_ij)^2`.
pub fn mse_loss(a: &DenseMatrix, y: &DenseMatrix) -> Result<f64> {
    if !a.same_shape(y) {
        return Err(Error::invalid(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(a.values()
        .iter()
        .zip(y.values())
        .map(|(x, z)| (x - z) * (x - z))
        .sum())
}

pub fn mse_loss_sym(a: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    mse_loss(&a.to_dense(), &y.to_dense())
}

/// Generalized KL divergence `sum_ij A_ij log(A_ij / Y_ij) + Y_ij - A_ij`
/// with the `0 log 0 = 0` convention.
pub fn kl_loss(a: &DenseMatrix, y: &DenseMatrix) -> Result<f64> {
    if !a.same_shape(y) {
        return Err(Error::invalid(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let mut total = 0.0;
    for (&aij, &yij) in a.values().iter().zip(y.values()) {
        if aij < 0.0 {
            return Err(Error::invalid(format!(
                "KL loss requires A >= 0, found {aij}"
            )));
        }
        if aij > 0.0 {
            if yij <= 0.0 {
                return Err(Error::Domain(format!(
                    "KL loss undefined: A entry {aij} > 0 but Y entry {yij} <= 0"
                )));
            }
            total += aij * (aij / yij).ln() + yij - aij;
        } else {
            total += yij;
        }
    }
    Ok(total)
}

pub fn kl_loss_sym(a: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    kl_loss(&a.to_dense(), &y.to_dense())
}

/// KL objective in the `X` variable and its gradient:
/// value `sum A_ij (log A_ij - X_ij) + exp(X_ij) - A_ij`,
/// gradient `exp_H(X) - A`.
pub fn kl_objective_grad(a: &SymMatrix, x: &SymMatrix) -> Result<(f64, SymMatrix)> {
    if a.n() != x.n() {
        return Err(Error::invalid("A and X dimensions differ"));
    }
    let ex = hadamard_exp(x)?;
    let mut value = 0.0;
    for ((&aij, &xij), &eij) in a.values().iter().zip(x.values()).zip(ex.values()) {
        if aij < 0.0 {
            return Err(Error::invalid(format!(
                "KL objective requires A >= 0, found {aij}"
            )));
        }
        if aij > 0.0 {
            value += aij * (aij.ln() - xij) + eij - aij;
        } else {
            value += eij;
        }
    }
    let grad = ex.sub(a)?;
    Ok((value, grad))
}

/// Squared-loss objective in the `X` variable and its gradient:
/// value `sum (exp(X_ij) - A_ij)^2`,
/// gradient `2 (exp(X_ij) - A_ij) exp(X_ij)` entrywise.
pub fn mse_objective_grad(a: &SymMatrix, x: &SymMatrix) -> Result<(f64, SymMatrix)> {
    if a.n() != x.n() {
        return Err(Error::invalid("A and X dimensions differ"));
    }
    let ex = hadamard_exp(x)?;
    let mut value = 0.0;
    let n = a.n();
    let mut grad = vec![0.0; n * n];
    for (k, (&aij, &eij)) in a.values().iter().zip(ex.values()).enumerate() {
        let r = eij - aij;
        value += r * r;
        grad[k] = 2.0 * r * eij;
    }
    Ok((value, SymMatrix::from_flat(n, grad)?))
}

/// Dual objective of the KL restriction:
/// `sum_ij A_ij log A_ij + Y_ij - (A_ij + Y_ij) log(A_ij + Y_ij)`.
///
/// Requires `A + Y >= 0` entrywise (the log domain); `0 log 0 = 0`.
pub fn dual_objective(a: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    if a.n() != y.n() {
        return Err(Error::invalid("A and Y dimensions differ"));
    }
    let mut total = 0.0;
    for (&aij, &yij) in a.values().iter().zip(y.values()) {
        let s = aij + yij;
        if s < 0.0 {
            return Err(Error::Domain(format!(
                "dual objective undefined: A_ij + Y_ij = {s} < 0"
            )));
        }
        let alog = if aij > 0.0 { aij * aij.ln() } else { 0.0 };
        let slog = if s > 0.0 { s * s.ln() } else { 0.0 };
        total += alog + yij - slog;
    }
    Ok(total)
}

/// Duality-gap certificate at a primal point `X`: projects
/// `exp_H(X) - A` onto the PSD cone to get a dual feasible `Y`, then
/// reports primal value, dual value, and their difference.
pub fn duality_gap(a: &SymMatrix, x: &SymMatrix) -> Result<DualCertificate> {
    let ex = hadamard_exp(x)?;
    let y = psd_project(&ex.sub(a)?)?;
    let (primal_value, _) = kl_objective_grad(a, x)?;
    let dual_value = dual_objective(a, &y)?;
    Ok(DualCertificate {
        y,
        primal_value,
        dual_value,
        gap: primal_value - dual_value,
    })
}
