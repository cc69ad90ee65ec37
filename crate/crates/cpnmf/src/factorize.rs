//! Completely positive factorization of `exp_H(X)` for PSD `X`.
//!
//! The construction follows the eigenstructure of `X = sum_i lambda_i
//! x_i x_i^T`: writing `v_i = sqrt(lambda_i) x_i`, the entrywise
//! exponential splits into a Hadamard product of rank-one exponentials,
//!
//! ```text
//! exp_H(X) = exp_H(v_1 v_1^T) o exp_H(v_2 v_2^T) o ...
//! ```
//!
//! and each rank-one factor decomposes with only nonnegative pieces:
//! with `M = max_i |v_i|`, `y = M 1 + v >= 0` and `z = exp_H(-M v) > 0`,
//!
//! ```text
//! exp_H(v v^T) = exp(-M^2) exp_H(y y^T) o z z^T.
//! ```
//!
//! `exp_H(y y^T)` has the everywhere-nonnegative Taylor series
//! `sum_i (y y^T)^{o i} / i!`, whose truncation yields explicit
//! nonnegative columns `y^{o i} / sqrt(i!)`. Folding `z` and the scale
//! into those columns and merging directions through the Hadamard chain
//! rule gives `exp_H(X) = U U^T` with `U >= 0`.
//!
//! The alternative `rank_two` mode replaces each `exp_H(v v^T)` by its
//! best rank-two approximation: a doubly nonnegative matrix of rank at
//! most two is always completely positive and factors exactly into at
//! most two nonnegative columns, so when the approximation stays
//! nonnegative the result has at most `2^r` columns.

use crate::eigen::{psd_project, sym_eig};
use crate::error::{Error, Result};
use crate::matrix::{hadamard_combine, hadamard_exp, FactorMatrix, SymMatrix};

/// Pieces of the rank-one decomposition
/// `exp_H(v v^T) = scale * exp_H(y y^T) o z z^T`.
#[derive(Debug, Clone)]
pub struct RankOneExpFactors {
    /// The rank-one direction `sqrt(lambda) x`.
    pub v: Vec<f64>,
    /// `max_i |v_i|`.
    pub m: f64,
    /// `M 1 + v`, entrywise nonnegative.
    pub y: Vec<f64>,
    /// `exp_H(-M v)`, entrywise positive.
    pub z: Vec<f64>,
    /// `exp(-M^2)` in (0, 1].
    pub scale: f64,
}

/// Which column construction `factorize_hadamard_exp` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizeMode {
    /// Truncated Taylor columns per eigen-direction.
    Taylor,
    /// Rank-two approximation per eigen-direction (at most `2^r` columns),
    /// which fails if an approximation has negative entries.
    RankTwo,
}

/// Options for [`factorize_hadamard_exp`].
#[derive(Debug, Clone)]
pub struct FactorizeOptions {
    /// Taylor truncation degree (columns `0..=degree` per direction).
    pub taylor_degree: usize,
    pub mode: FactorizeMode,
    /// Columns are dropped smallest-norm-first while the dropped mass
    /// stays below `prune_tol * ||exp_H(X)||_F`.
    pub prune_tol: f64,
    /// Eigenvalues of `X` below `eig_cutoff * lambda_max` are treated as
    /// zero; the retained count is the `r` reported in the result.
    pub eig_cutoff: f64,
    /// Hard cap on the returned column count; the largest-norm columns
    /// are kept.
    pub max_cols: usize,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        FactorizeOptions {
            taylor_degree: 12,
            mode: FactorizeMode::Taylor,
            prune_tol: 1e-10,
            eig_cutoff: 1e-10,
            max_cols: 4096,
        }
    }
}

impl FactorizeOptions {
    fn validate(&self) -> Result<()> {
        if self.taylor_degree == 0 {
            return Err(Error::invalid("taylor_degree must be >= 1"));
        }
        if self.prune_tol < 0.0 || self.eig_cutoff < 0.0 {
            return Err(Error::invalid("tolerances must be nonnegative"));
        }
        if self.max_cols == 0 {
            return Err(Error::invalid("max_cols must be >= 1"));
        }
        Ok(())
    }
}

/// Result of factorizing `exp_H(X)`.
#[derive(Debug, Clone)]
pub struct HadamardExpFactorization {
    pub u: FactorMatrix,
    /// Relative reconstruction error `||exp_H(X) - U U^T||_F / ||exp_H(X)||_F`.
    pub residual: f64,
    /// Number of eigen-directions retained.
    pub factors_used: usize,
    /// Set when the `max_cols` cap truncated the column set.
    pub truncated: bool,
}

/// Caratheodory bound on the cp-rank of a rank-`r` completely positive
/// matrix: `r(r+1)/2 - 1` for `r >= 2`. The formula degenerates below
/// rank two (it would give 0 at `r = 1`, impossible for a nonzero
/// matrix), so `r` itself is returned there.
pub fn cp_rank_bound(r: i64) -> Result<i64> {
    if r < 0 {
        return Err(Error::invalid(format!("rank must be nonnegative, got {r}")));
    }
    if r <= 1 {
        return Ok(r);
    }
    Ok(r * (r + 1) / 2 - 1)
}

/// Decompose `exp_H(v v^T)` into nonnegative pieces:
/// `exp(v_i v_j) = scale * exp(y_i y_j) * z_i z_j` with
/// `M = max |v_i|`, `y = M 1 + v`, `z = exp_H(-M v)`, `scale = exp(-M^2)`.
pub fn decompose_rank_one_exp(v: &[f64]) -> Result<RankOneExpFactors> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("vector entries must be finite"));
    }
    let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let y: Vec<f64> = v.iter().map(|&x| m + x).collect();
    let z: Vec<f64> = v.iter().map(|&x| (-m * x).exp()).collect();
    let scale = (-m * m).exp();
    Ok(RankOneExpFactors {
        v: v.to_vec(),
        m,
        y,
        z,
        scale,
    })
}

/// Nonnegative Taylor columns for `exp_H(y y^T)`: column `i` is
/// `y^{o i} / sqrt(i!)` for `i = 0..=degree`, so that
/// `(U U^T)_{jl} = sum_i (y_j y_l)^i / i!`, the truncated exponential
/// series. Requires `y >= 0`.
pub fn taylor_factor(y: &[f64], degree: usize) -> Result<FactorMatrix> {
    if degree == 0 {
        return Err(Error::invalid("taylor degree must be >= 1"));
    }
    if y.iter().any(|&v| !v.is_finite() || v < 0.0) {
        return Err(Error::invalid("taylor_factor requires y >= 0"));
    }
    let y_max = y.iter().fold(0.0f64, |acc, &v| acc.max(v));
    if y_max > 1.0 && degree as f64 * y_max.ln() > 700.0 {
        return Err(Error::Range(format!(
            "y^{degree} overflows for max entry {y_max:.3e}; reduce the degree or rescale"
        )));
    }
    let n = y.len();
    let mut columns = Vec::with_capacity(degree + 1);
    let mut factorial = 1.0f64;
    let mut powers: Vec<f64> = vec![1.0; n];
    columns.push(powers.clone()); // i = 0: all-ones column
    for i in 1..=degree {
        factorial *= i as f64;
        for (p, &yv) in powers.iter_mut().zip(y) {
            *p *= yv;
        }
        let inv_sqrt_fact = 1.0 / factorial.sqrt();
        columns.push(powers.iter().map(|&p| p * inv_sqrt_fact).collect());
    }
    FactorMatrix::from_columns(n, &columns)
}

/// Exact nonnegative factorization of a doubly nonnegative matrix of rank
/// at most two.
///
/// The Gram rows `g_i in R^2` built from the top-two eigenpairs satisfy
/// `<g_i, g_j> = S_ij >= 0`, so they span a planar cone of angle at most
/// a quarter turn; rotating that cone into the nonnegative quadrant gives
/// `U >= 0` with `U U^T = S` unchanged.
pub fn cp_factor_rank_two(s: &SymMatrix) -> Result<FactorMatrix> {
    let n = s.n();
    let max_abs = s.max_abs_entry();
    if s.values().iter().any(|&v| v < -1e-12 * max_abs.max(1.0)) {
        return Err(Error::Infeasible(
            "matrix has negative entries: Gram rows spread over more than a quarter turn".into(),
        ));
    }
    let eig = sym_eig(s)?;
    let lam = eig.eigenvalues();
    let l1 = lam[0].max(0.0);
    if l1 <= 0.0 {
        // numerically zero matrix
        return FactorMatrix::new(n, 1, vec![0.0; n]);
    }
    if lam[0] < -1e-8 * max_abs {
        return Err(Error::invalid("matrix is not positive semidefinite"));
    }
    if n > 2 && lam[2] > 1e-8 * l1 {
        return Err(Error::invalid(format!(
            "numerical rank exceeds 2 (third eigenvalue {:.3e} vs top {:.3e})",
            lam[2], l1
        )));
    }
    if n >= 1 && *lam.last().unwrap() < -1e-8 * l1 {
        return Err(Error::invalid("matrix is not positive semidefinite"));
    }

    let l2 = if n > 1 { lam[1].max(0.0) } else { 0.0 };
    let x1 = eig.eigenvector(0);

    if l2 <= 1e-14 * l1 {
        // rank one: S = v v^T with v of uniform sign
        let mut v: Vec<f64> = x1.iter().map(|&x| l1.sqrt() * x).collect();
        let flip = v
            .iter()
            .fold(0.0f64, |acc, &x| if x.abs() > acc.abs() { x } else { acc });
        if flip < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        return FactorMatrix::from_clipped(n, 1, v, 1e-7 * l1.sqrt().max(1.0));
    }

    let x2 = eig.eigenvector(1);
    let g: Vec<[f64; 2]> = (0..n)
        .map(|i| [l1.sqrt() * x1[i], l2.sqrt() * x2[i]])
        .collect();

    // reference direction: the largest-norm row is certainly in the cone
    let reference = g
        .iter()
        .max_by(|a, b| {
            let na = a[0] * a[0] + a[1] * a[1];
            let nb = b[0] * b[0] + b[1] * b[1];
            na.partial_cmp(&nb).expect("finite norms")
        })
        .copied()
        .expect("n >= 1");
    let ref_angle = reference[1].atan2(reference[0]);

    let row_scale = (l1.sqrt()).max(1.0);
    let mut delta_min = 0.0f64;
    let mut delta_max = 0.0f64;
    for gi in &g {
        let norm = (gi[0] * gi[0] + gi[1] * gi[1]).sqrt();
        if norm <= 1e-14 * row_scale {
            continue; // zero rows lie in every cone
        }
        let angle = gi[1].atan2(gi[0]) - ref_angle;
        // wrap to (-pi, pi]
        let angle = if angle > std::f64::consts::PI {
            angle - 2.0 * std::f64::consts::PI
        } else if angle <= -std::f64::consts::PI {
            angle + 2.0 * std::f64::consts::PI
        } else {
            angle
        };
        delta_min = delta_min.min(angle);
        delta_max = delta_max.max(angle);
    }
    let spread = delta_max - delta_min;
    if spread > std::f64::consts::FRAC_PI_2 + 1e-7 {
        return Err(Error::Infeasible(format!(
            "Gram-row cone spans {spread:.6} rad, more than a quarter turn"
        )));
    }

    // rotate the minimal ray onto the +x axis
    let rot = -(ref_angle + delta_min);
    let (sin_r, cos_r) = rot.sin_cos();
    let mut values = Vec::with_capacity(n * 2);
    for gi in &g {
        values.push(cos_r * gi[0] - sin_r * gi[1]);
        values.push(sin_r * gi[0] + cos_r * gi[1]);
    }
    FactorMatrix::from_clipped(n, 2, values, 1e-7 * row_scale)
}

/// Factor `exp_H(X)` into `U U^T` with `U >= 0`.
///
/// The input is PSD-projected first, then split into eigen-directions;
/// each retained direction contributes a standalone nonnegative factor
/// (Taylor columns or a rank-two factor, scaled by `sqrt(scale)` and
/// `z`), and the factors are merged with the Hadamard chain rule. Columns
/// are pruned by norm against `prune_tol` and capped at `max_cols`.
pub fn factorize_hadamard_exp(
    x: &SymMatrix,
    opts: &FactorizeOptions,
) -> Result<HadamardExpFactorization> {
    opts.validate()?;
    let n = x.n();
    if n == 0 {
        return Err(Error::invalid("cannot factorize a 0x0 matrix"));
    }
    let x = psd_project(x)?;
    let target = hadamard_exp(&x)?;
    let target_norm = target.frob_norm();

    let eig = sym_eig(&x)?;
    let lam_max = eig.eigenvalues()[0].max(0.0);
    let retained: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues()[i] > opts.eig_cutoff * lam_max && eig.eigenvalues()[i] > 0.0)
        .collect();
    let factors_used = retained.len();

    if retained.is_empty() {
        // exp_H(0) = 1 1^T
        let u = FactorMatrix::new(n, 1, vec![1.0; n])?;
        let residual = target.sub(&u.gram())?.frob_norm() / target_norm;
        return Ok(HadamardExpFactorization {
            u,
            residual,
            factors_used: 0,
            truncated: false,
        });
    }

    let mut truncated = false;
    let mut combined: Option<FactorMatrix> = None;
    // each combine may prune; split the budget so the total stays under
    // prune_tol * ||exp_H(X)||
    let stage_budget = opts.prune_tol * target_norm / factors_used as f64;

    for &idx in &retained {
        let lam = eig.eigenvalues()[idx];
        let v: Vec<f64> = eig
            .eigenvector(idx)
            .iter()
            .map(|&e| lam.sqrt() * e)
            .collect();
        let direction_factor = match opts.mode {
            FactorizeMode::Taylor => {
                let parts = decompose_rank_one_exp(&v)?;
                let base = taylor_factor(&parts.y, opts.taylor_degree)?;
                // fold sqrt(scale) and the z vector into the columns so
                // this direction stands alone as a nonnegative factor
                let sqrt_scale = parts.scale.sqrt();
                let n_cols = base.cols();
                let mut values = Vec::with_capacity(n * n_cols);
                for i in 0..n {
                    let zi = parts.z[i] * sqrt_scale;
                    for j in 0..n_cols {
                        values.push(base.get(i, j) * zi);
                    }
                }
                FactorMatrix::new(n, n_cols, values)?
            }
            FactorizeMode::RankTwo => rank_two_direction_factor(&v, idx)?,
        };

        let merged = match combined {
            None => direction_factor,
            Some(prev) => hadamard_combine(&prev, &direction_factor)?,
        };
        let (pruned, capped) = prune_columns(&merged, stage_budget, opts.max_cols)?;
        truncated |= capped;
        combined = Some(pruned);
    }

    let u = combined.expect("at least one retained direction");
    let residual = target.sub(&u.gram())?.frob_norm() / target_norm;
    Ok(HadamardExpFactorization {
        u,
        residual,
        factors_used,
        truncated,
    })
}

/// Rank-two replacement for one `exp_H(v v^T)` factor: the eigenvalues of
/// a rank-one exponential decay exponentially fast, so its top-two
/// eigenpair approximation is usually accurate, and when it stays
/// nonnegative it factors exactly into two nonnegative columns. Errors
/// when the approximation leaves the nonnegative orthant.
fn rank_two_direction_factor(v: &[f64], idx: usize) -> Result<FactorMatrix> {
    let n = v.len();
    let e = SymMatrix::from_fn_sym(n, |i, j| (v[i] * v[j]).exp())?;
    let eig = sym_eig(&e)?;
    let top2 = {
        let l1 = eig.eigenvalues()[0].max(0.0);
        let l2 = if n > 1 { eig.eigenvalues()[1].max(0.0) } else { 0.0 };
        let x1 = eig.eigenvector(0);
        let x2 = if n > 1 { eig.eigenvector(1) } else { vec![0.0; n] };
        SymMatrix::from_fn_sym(n, |i, j| l1 * x1[i] * x1[j] + l2 * x2[i] * x2[j])?
    };
    let min_entry = top2.values().iter().cloned().fold(f64::INFINITY, f64::min);
    if min_entry < -1e-10 * top2.max_abs_entry().max(1.0) {
        return Err(Error::ModeFailure(format!(
            "rank-two approximation of eigen-direction {idx} has negative entries \
             (min {min_entry:.3e}); use taylor mode"
        )));
    }
    cp_factor_rank_two(&top2.map(|v| v.max(0.0))).map_err(|e| match e {
        Error::Infeasible(msg) => Error::ModeFailure(format!(
            "rank-two factorization of eigen-direction {idx} failed: {msg}"
        )),
        other => other,
    })
}

/// Drop the smallest-norm columns while the dropped squared-norm mass
/// stays below `budget`, then cap at `max_cols` keeping the largest-norm
/// columns. Surviving columns keep their original order; ties break
/// toward lower column indices.
fn prune_columns(u: &FactorMatrix, budget: f64, max_cols: usize) -> Result<(FactorMatrix, bool)> {
    let n = u.rows();
    let cols = u.cols();
    let mut norms: Vec<(f64, usize)> = (0..cols)
        .map(|j| {
            let sq: f64 = (0..n).map(|i| u.get(i, j) * u.get(i, j)).sum();
            (sq, j)
        })
        .collect();
    // ascending by norm; ties drop the higher index first (keep lower)
    norms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(b.1.cmp(&a.1)));

    let mut dropped = vec![false; cols];
    let mut mass = 0.0;
    let mut kept = cols;
    for &(sq, j) in &norms {
        if kept <= 1 {
            break; // a factor must keep at least one column
        }
        if mass + sq <= budget {
            mass += sq;
            dropped[j] = true;
            kept -= 1;
        } else {
            break;
        }
    }

    let mut capped = false;
    if kept > max_cols {
        capped = true;
        // drop smallest-norm survivors until at the cap
        for &(_, j) in &norms {
            if kept <= max_cols {
                break;
            }
            if !dropped[j] {
                dropped[j] = true;
                kept -= 1;
            }
        }
    }

    let columns: Vec<Vec<f64>> = (0..cols)
        .filter(|&j| !dropped[j])
        .map(|j| u.column(j))
        .collect();
    Ok((FactorMatrix::from_columns(n, &columns)?, capped))
}
