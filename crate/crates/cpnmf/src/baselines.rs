//! Classical nonconvex NMF baselines: multiplicative updates and
//! alternating least squares. Both factor rectangular `A ~ U V^T` with a
//! fixed target rank, seeded initialization, and guarded denominators;
//! they are the comparison points for the convex machinery, not its
//! replacement.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, FactorMatrix};
use crate::objectives::mse_loss;
use crate::rng::{derive, SplitMix64};

/// Options shared by both baselines.
#[derive(Debug, Clone)]
pub struct BaselineOptions {
    /// Target rank.
    pub k: usize,
    /// Full update iterations.
    pub iters: usize,
    pub seed: u64,
    /// Denominator floor for the multiplicative updates and ridge for the
    /// ALS normal equations.
    pub eps_guard: f64,
}

impl Default for BaselineOptions {
    fn default() -> Self {
        BaselineOptions {
            k: 1,
            iters: 500,
            seed: 0,
            eps_guard: 1e-12,
        }
    }
}

impl BaselineOptions {
    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.iters == 0 {
            return Err(Error::invalid("k and iters must be >= 1"));
        }
        if !(self.eps_guard > 0.0) {
            return Err(Error::invalid("eps_guard must be positive"));
        }
        Ok(())
    }
}

fn require_nonneg(a: &DenseMatrix) -> Result<()> {
    if a.values().iter().any(|&v| v < 0.0) {
        return Err(Error::invalid("baseline input must be nonnegative"));
    }
    Ok(())
}

/// Seeded uniform initialization in (0.1, 1.1): entries bounded away from
/// zero so the multiplicative updates cannot lock onto the boundary.
/// Draw order is U row-major then V row-major.
pub fn init_factors(m: usize, n: usize, k: usize, seed: u64) -> (FactorMatrix, FactorMatrix) {
    let mut rng = SplitMix64::new(derive(seed, &[3]));
    let u: Vec<f64> = (0..m * k).map(|_| rng.uniform(0.1, 1.1)).collect();
    let v: Vec<f64> = (0..n * k).map(|_| rng.uniform(0.1, 1.1)).collect();
    (
        FactorMatrix::new(m, k, u).expect("uniform draws are positive"),
        FactorMatrix::new(n, k, v).expect("uniform draws are positive"),
    )
}

fn reconstruction_loss(a: &DenseMatrix, u: &FactorMatrix, v: &FactorMatrix) -> Result<f64> {
    mse_loss(a, &u.mul_transpose(v)?)
}

/// Multiplicative updates for the squared loss:
/// `U <- U o (A V) / (U V^T V + eps)`, then
/// `V <- V o (A^T U) / (V U^T U + eps)`.
///
/// Each full iteration does not increase the loss; the returned trace
/// starts at the initial loss and records one value per iteration.
pub fn multiplicative_update(
    a: &DenseMatrix,
    opts: &BaselineOptions,
) -> Result<(FactorMatrix, FactorMatrix, Vec<f64>)> {
    let (u0, v0) = init_factors(a.rows(), a.cols(), opts.k, opts.seed);
    multiplicative_update_from(a, &u0, &v0, opts)
}

/// Multiplicative updates from explicit starting factors (the seeded
/// entry point above is the usual front door; this one exists so scaling
/// protocols can control the initialization).
pub fn multiplicative_update_from(
    a: &DenseMatrix,
    u0: &FactorMatrix,
    v0: &FactorMatrix,
    opts: &BaselineOptions,
) -> Result<(FactorMatrix, FactorMatrix, Vec<f64>)> {
    opts.validate()?;
    require_nonneg(a)?;
    let (m, n, k) = (a.rows(), a.cols(), opts.k);
    if u0.rows() != m || v0.rows() != n || u0.cols() != k || v0.cols() != k {
        return Err(Error::invalid("starting factor shapes do not match"));
    }
    let eps = opts.eps_guard;

    let mut u = u0.to_dense();
    let mut v = v0.to_dense();
    let mut trace = Vec::with_capacity(opts.iters + 1);
    trace.push(mse_loss(a, &u.matmul(&v.transpose())?)?);

    for _ in 0..opts.iters {
        // U update: numerator A V, denominator U (V^T V)
        let vtv = v.transpose().matmul(&v)?;
        let av = a.matmul(&v)?;
        let uvtv = u.matmul(&vtv)?;
        for i in 0..m {
            for j in 0..k {
                let scale = av.get(i, j) / (uvtv.get(i, j) + eps);
                u.set(i, j, u.get(i, j) * scale);
            }
        }
        // V update with the fresh U
        let utu = u.transpose().matmul(&u)?;
        let atu = a.transpose().matmul(&u)?;
        let vutu = v.matmul(&utu)?;
        for i in 0..n {
            for j in 0..k {
                let scale = atu.get(i, j) / (vutu.get(i, j) + eps);
                v.set(i, j, v.get(i, j) * scale);
            }
        }
        trace.push(mse_loss(a, &u.matmul(&v.transpose())?)?);
    }

    let u = FactorMatrix::new(m, k, u.values().to_vec())?;
    let v = FactorMatrix::new(n, k, v.values().to_vec())?;
    Ok((u, v, trace))
}

/// Alternating least squares with nonnegativity by clipping: each half
/// step solves the unconstrained normal equations (with a small ridge)
/// exactly, then clips negatives to zero. Clipping breaks monotonicity,
/// so the trace is reported but only the final loss is meaningful.
pub fn als_nmf(
    a: &DenseMatrix,
    opts: &BaselineOptions,
) -> Result<(FactorMatrix, FactorMatrix, Vec<f64>)> {
    let (u0, v0) = init_factors(a.rows(), a.cols(), opts.k, opts.seed);
    als_nmf_from(a, &u0, &v0, opts)
}

/// ALS from explicit starting factors.
pub fn als_nmf_from(
    a: &DenseMatrix,
    u0: &FactorMatrix,
    v0: &FactorMatrix,
    opts: &BaselineOptions,
) -> Result<(FactorMatrix, FactorMatrix, Vec<f64>)> {
    opts.validate()?;
    require_nonneg(a)?;
    let (m, n, k) = (a.rows(), a.cols(), opts.k);
    if u0.rows() != m || v0.rows() != n || u0.cols() != k || v0.cols() != k {
        return Err(Error::invalid("starting factor shapes do not match"));
    }
    const RIDGE: f64 = 1e-10;

    let mut u = u0.clone();
    let mut v = v0.clone();
    let mut trace = Vec::with_capacity(opts.iters + 1);
    trace.push(reconstruction_loss(a, &u, &v)?);

    for _ in 0..opts.iters {
        // U = clip( A V (V^T V + ridge I)^{-1} )
        let vd = v.to_dense();
        let gram_v = vd.transpose().matmul(&vd)?;
        let av = a.matmul(&vd)?;
        u = solve_and_clip(&av, &gram_v, RIDGE, m, k)?;

        let ud = u.to_dense();
        let gram_u = ud.transpose().matmul(&ud)?;
        let atu = a.transpose().matmul(&ud)?;
        v = solve_and_clip(&atu, &gram_u, RIDGE, n, k)?;

        trace.push(reconstruction_loss(a, &u, &v)?);
    }
    Ok((u, v, trace))
}

/// Solve `X (G + ridge I) = B` row-wise by Cholesky and clip the result
/// at zero. `G` is a k x k Gram matrix, so the ridge makes it positive
/// definite and the factorization cannot fail.
fn solve_and_clip(
    b: &DenseMatrix,
    gram: &DenseMatrix,
    ridge: f64,
    rows: usize,
    k: usize,
) -> Result<FactorMatrix> {
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = gram.get(i, j) + if i == j { ridge } else { 0.0 };
        }
    }
    let chol = cholesky(&g, k)?;
    let mut out = vec![0.0; rows * k];
    let mut rhs = vec![0.0; k];
    for r in 0..rows {
        for j in 0..k {
            rhs[j] = b.get(r, j);
        }
        let x = chol_solve(&chol, &rhs, k);
        for j in 0..k {
            out[r * k + j] = x[j].max(0.0);
        }
    }
    FactorMatrix::new(rows, k, out)
}

/// Lower-triangular Cholesky factor of a positive definite k x k matrix.
fn cholesky(g: &[f64], k: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = g[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Numeric(
                        "ridge-regularized Gram matrix is not positive definite".into(),
                    ));
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    Ok(l)
}

fn chol_solve(l: &[f64], b: &[f64], k: usize) -> Vec<f64> {
    let mut y = vec![0.0; k];
    for i in 0..k {
        let mut s = b[i];
        for p in 0..i {
            s -= l[i * k + p] * y[p];
        }
        y[i] = s / l[i * k + i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for p in (i + 1)..k {
            s -= l[p * k + i] * x[p];
        }
        x[i] = s / l[i * k + i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rank_one_instance(m: usize, n: usize, seed: u64) -> DenseMatrix {
        let mut rng = SplitMix64::new(seed);
        let u: Vec<f64> = (0..m).map(|_| rng.uniform(0.5, 2.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.uniform(0.5, 2.0)).collect();
        DenseMatrix::from_fn(m, n, |i, j| u[i] * v[j])
    }

    #[test]
    fn mu_recovers_rank_one() {
        let a = rank_one_instance(4, 3, 1);
        let opts = BaselineOptions {
            k: 1,
            ..Default::default()
        };
        let (_, _, trace) = multiplicative_update(&a, &opts).unwrap();
        let rel = trace.last().unwrap() / a.frob_norm().powi(2);
        assert!(rel <= 1e-4, "relative loss {rel}");
    }

    #[test]
    fn mu_loss_is_monotone() {
        let mut rng = SplitMix64::new(2);
        for trial in 0..10 {
            let a = DenseMatrix::from_fn(5, 4, |_, _| rng.uniform(0.0, 2.0));
            let opts = BaselineOptions {
                k: 2,
                iters: 100,
                seed: trial,
                ..Default::default()
            };
            let (_, _, trace) = multiplicative_update(&a, &opts).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "loss increased: {} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn mu_zero_input_decays() {
        let a = DenseMatrix::zeros(3, 3);
        let opts = BaselineOptions {
            k: 2,
            iters: 50,
            ..Default::default()
        };
        let (u, v, trace) = multiplicative_update(&a, &opts).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-10);
        }
        // factors decay toward zero
        let max_u = u.values().iter().fold(0.0f64, |m, &x| m.max(x));
        let max_v = v.values().iter().fold(0.0f64, |m, &x| m.max(x));
        assert!(max_u < 0.1 && max_v < 0.1);
    }

    #[test]
    fn mu_is_deterministic() {
        let a = rank_one_instance(4, 4, 5);
        let opts = BaselineOptions {
            k: 2,
            iters: 50,
            seed: 9,
            ..Default::default()
        };
        let (u1, v1, _) = multiplicative_update(&a, &opts).unwrap();
        let (u2, v2, _) = multiplicative_update(&a, &opts).unwrap();
        assert_eq!(u1.values(), u2.values());
        assert_eq!(v1.values(), v2.values());
    }

    #[test]
    fn als_recovers_rank_one() {
        let a = rank_one_instance(4, 3, 7);
        let opts = BaselineOptions {
            k: 1,
            ..Default::default()
        };
        let (_, _, trace) = als_nmf(&a, &opts).unwrap();
        let rel = trace.last().unwrap() / a.frob_norm().powi(2);
        assert!(rel <= 1e-4, "relative loss {rel}");
    }

    #[test]
    fn als_full_rank_reaches_exact_fit() {
        // k = min(m, n) makes an exact fit feasible (A = A I). Clipped ALS
        // can still stall at a clipping fixed point on some starts, so
        // this pins a start where the unconstrained path stays
        // nonnegative and the solve goes all the way down.
        let mut rng = SplitMix64::new(1);
        let a = DenseMatrix::from_fn(5, 4, |_, _| rng.uniform(0.1, 2.0));
        let opts = BaselineOptions {
            k: 4,
            seed: 101,
            ..Default::default()
        };
        let (_, _, trace) = als_nmf(&a, &opts).unwrap();
        let rel = trace.last().unwrap() / a.frob_norm().powi(2);
        assert!(rel <= 1e-6, "relative loss {rel}");
    }

    #[test]
    fn als_outputs_nonnegative_and_deterministic() {
        let mut rng = SplitMix64::new(13);
        let a = DenseMatrix::from_fn(4, 4, |_, _| rng.uniform(0.0, 1.5));
        let opts = BaselineOptions {
            k: 2,
            iters: 100,
            seed: 3,
            ..Default::default()
        };
        let (u1, v1, _) = als_nmf(&a, &opts).unwrap();
        let (u2, v2, _) = als_nmf(&a, &opts).unwrap();
        assert!(u1.values().iter().all(|&x| x >= 0.0));
        assert!(v1.values().iter().all(|&x| x >= 0.0));
        assert_eq!(u1.values(), u2.values());
        assert_eq!(v1.values(), v2.values());
    }

    /// Scale consistency: on c*A with initial factors scaled by sqrt(c),
    /// the final loss is c^2 times the unscaled loss.
    #[test]
    fn baselines_are_scale_consistent() {
        let a = rank_one_instance(4, 3, 17);
        let c = 3.7;
        let scaled_a = DenseMatrix::from_fn(4, 3, |i, j| c * a.get(i, j));
        let opts = BaselineOptions {
            k: 2,
            iters: 200,
            seed: 21,
            ..Default::default()
        };
        let (u0, v0) = init_factors(4, 3, 2, opts.seed);
        let scale_factor = |f: &FactorMatrix| {
            FactorMatrix::new(
                f.rows(),
                f.cols(),
                f.values().iter().map(|&x| c.sqrt() * x).collect(),
            )
            .unwrap()
        };
        let (su0, sv0) = (scale_factor(&u0), scale_factor(&v0));

        let (_, _, t1) = multiplicative_update_from(&a, &u0, &v0, &opts).unwrap();
        let (_, _, t2) = multiplicative_update_from(&scaled_a, &su0, &sv0, &opts).unwrap();
        let (l1, l2) = (t1.last().unwrap(), t2.last().unwrap());
        assert!(
            (l2 - c * c * l1).abs() <= 1e-6 * (c * c * l1).max(1e-12),
            "mu: {l2} vs c^2 * {l1}"
        );

        let (_, _, t1) = als_nmf_from(&a, &u0, &v0, &opts).unwrap();
        let (_, _, t2) = als_nmf_from(&scaled_a, &su0, &sv0, &opts).unwrap();
        let (l1, l2) = (t1.last().unwrap(), t2.last().unwrap());
        assert!(
            (l2 - c * c * l1).abs() <= 1e-6 * (c * c * l1).max(1e-12),
            "als: {l2} vs c^2 * {l1}"
        );
    }

    #[test]
    fn factors_stay_nonnegative_throughout() {
        // run the updates step by step and check after every iteration
        let mut rng = SplitMix64::new(23);
        let a = DenseMatrix::from_fn(4, 3, |_, _| rng.uniform(0.0, 2.0));
        for iters in 1..=5 {
            let opts = BaselineOptions {
                k: 2,
                iters,
                seed: 1,
                ..Default::default()
            };
            let (u, v, _) = multiplicative_update(&a, &opts).unwrap();
            assert!(u.values().iter().all(|&x| x >= 0.0));
            assert!(v.values().iter().all(|&x| x >= 0.0));
            let (u, v, _) = als_nmf(&a, &opts).unwrap();
            assert!(u.values().iter().all(|&x| x >= 0.0));
            assert!(v.values().iter().all(|&x| x >= 0.0));
        }
    }
}
