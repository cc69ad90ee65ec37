//! Symmetric eigendecomposition and cone projection.
//!
//! The eigensolver is a cyclic Jacobi iteration: sweeps of plane rotations
//! over the upper triangle until the off-diagonal Frobenius norm drops
//! below `1e-12 * ||S||_F`, capped at 100 sweeps. Jacobi is slower than
//! tridiagonalization-based methods but is self-contained, deterministic,
//! and accurate at the dense sizes this crate targets (n up to a few
//! hundred).

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SymMatrix};

/// Maximum Jacobi sweeps before the iteration is declared non-convergent.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal norm tolerance, relative to the input Frobenius norm.
pub const OFF_DIAG_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix: `S = X diag(lambda) X^T`
/// with eigenvalues sorted descending and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DenseMatrix, // columns are eigenvectors
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        &self.eigenvectors
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The i-th eigenvector as a plain vector.
    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        (0..self.n()).map(|r| self.eigenvectors.get(r, i)).collect()
    }

    /// Reassemble `sum_i f(lambda_i) x_i x_i^T`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n();
        let mut values = vec![0.0; n * n];
        for k in 0..n {
            let lam = f(self.eigenvalues[k]);
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let xi = self.eigenvectors.get(i, k);
                if xi == 0.0 {
                    continue;
                }
                for j in i..n {
                    values[i * n + j] += lam * xi * self.eigenvectors.get(j, k);
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                values[i * n + j] = values[j * n + i];
            }
        }
        // built symmetric, entries finite whenever f(lambda) is
        SymMatrix::from_flat(n, values).expect("reconstruction is symmetric by construction")
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition by cyclic Jacobi rotations.
///
/// Errors on dimension 0 and when the sweep cap is exhausted before the
/// off-diagonal norm reaches tolerance.
pub fn sym_eig(s: &SymMatrix) -> Result<EigenDecomposition> {
    let n = s.n();
    if n == 0 {
        return Err(Error::invalid("cannot eigendecompose a 0x0 matrix"));
    }

    let norm = s.frob_norm();
    let mut a: Vec<f64> = s.values().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let threshold = OFF_DIAG_TOL * norm;
    let mut converged = norm == 0.0 || n == 1;
    if !converged {
        for _sweep in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += 2.0 * a[p * n + q] * a[p * n + q];
                }
            }
            if off.sqrt() <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, n, p, q);
                }
            }
        }
        if !converged {
            // final check after the last sweep
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += 2.0 * a[p * n + q] * a[p * n + q];
                }
            }
            if off.sqrt() <= threshold {
                converged = true;
            }
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "jacobi iteration did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable descending sort; ties keep the lower original index first
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    // tangent of the rotation angle, smaller root for stability
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for i in 0..n {
        if i != p && i != q {
            let aip = a[i * n + p];
            let aiq = a[i * n + q];
            let new_p = c * aip - s * aiq;
            let new_q = s * aip + c * aiq;
            a[i * n + p] = new_p;
            a[p * n + i] = new_p;
            a[i * n + q] = new_q;
            a[q * n + i] = new_q;
        }
    }
    for i in 0..n {
        let vip = v[i * n + p];
        let viq = v[i * n + q];
        v[i * n + p] = c * vip - s * viq;
        v[i * n + q] = s * vip + c * viq;
    }
}

/// Frobenius-nearest positive semidefinite matrix: eigendecompose and zero
/// out the negative eigenvalues.
pub fn psd_project(s: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eig(s)?;
    if eig.eigenvalues().iter().all(|&l| l >= 0.0) {
        // already PSD; keep the input bit-for-bit
        return Ok(s.clone());
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}

/// Smallest eigenvalue, for feasibility checks.
pub fn min_eigenvalue(s: &SymMatrix) -> Result<f64> {
    let eig = sym_eig(s)?;
    Ok(*eig
        .eigenvalues()
        .last()
        .expect("dimension checked by sym_eig"))
}
