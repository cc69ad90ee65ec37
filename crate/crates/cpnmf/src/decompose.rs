//! End-to-end problem assemblies: symmetric convex NMF under KL and
//! squared loss, sparse doubly-nonnegative decomposition, recursive
//! decomposition, and the nonsymmetric block embedding.
//!
//! Each solve wires an objective, a constraint set, and a starting point
//! into [`projected_gradient_minimize`] and then extracts an explicit
//! nonnegative factor from the solution.

use crate::eigen::{psd_project, sym_eig};
use crate::error::{Error, Result};
use crate::factorize::{
    cp_factor_rank_two, factorize_hadamard_exp, FactorizeOptions,
};
use crate::matrix::{hadamard_exp, DenseMatrix, FactorMatrix, SymMatrix};
use crate::objectives::{
    dual_objective, duality_gap, kl_loss, kl_loss_sym, kl_objective_grad, mse_loss_sym,
    mse_objective_grad, DualCertificate, LossKind,
};
use crate::solver::{
    projected_gradient_minimize, Constraint, ConstraintSet, EntrywiseBound, SolveReport,
    SolverOptions,
};

/// Log-domain floor substituted for zero entries when a nonnegative
/// matrix is mapped through the entrywise log.
pub const LOG_FLOOR: f64 = 1e-8;

/// Result of a symmetric solve.
#[derive(Debug, Clone)]
pub struct SymNmfResult {
    /// The PSD (or doubly nonnegative) solution in the `X` variable.
    pub x: SymMatrix,
    /// Explicit nonnegative factor extracted from the solution.
    pub u: FactorMatrix,
    /// Duality-gap certificate, present only on the KL path.
    pub certificate: Option<DualCertificate>,
    pub report: SolveReport,
    /// Relative reconstruction error of `u` against its factorization
    /// target (`exp_H(X)` on the exponential paths, `X` itself on the
    /// sparse path).
    pub factor_residual: f64,
}

/// Weights of the sparse doubly-nonnegative program
/// `min ||A - X||^2 + gamma * sum(X) + nu * tr(X)` over `X >= 0`, `X` PSD.
#[derive(Debug, Clone, Copy)]
pub struct SparseLowRankConfig {
    /// Entrywise-l1 weight (on the feasible set `|X| = sum(X)`).
    pub gamma: f64,
    /// Trace weight, the rank surrogate.
    pub nu: f64,
}

impl SparseLowRankConfig {
    fn validate(&self) -> Result<()> {
        if self.gamma < 0.0 || self.nu < 0.0 {
            return Err(Error::invalid("gamma and nu must be nonnegative"));
        }
        Ok(())
    }
}

/// Configuration of the recursive peel-off decomposition.
#[derive(Debug, Clone, Copy)]
pub struct RecursiveConfig {
    pub rounds: usize,
    /// Log-domain floor for zero residual entries.
    pub floor_eps: f64,
}

impl Default for RecursiveConfig {
    fn default() -> Self {
        RecursiveConfig {
            rounds: 1,
            floor_eps: LOG_FLOOR,
        }
    }
}

/// Result of [`recursive_decompose`]: concatenated factors plus the
/// per-round total-loss trace (the early-termination report).
#[derive(Debug, Clone)]
pub struct RecursiveResult {
    /// Column-concatenation `[U_1 ... U_R]` of the accepted rounds.
    pub factors: FactorMatrix,
    /// `loss(A, sum_{j<=k} U_j U_j^T)` after each accepted round;
    /// non-increasing by construction.
    pub round_losses: Vec<f64>,
    /// Rounds actually accepted (early termination stops short when a
    /// round no longer improves the fit).
    pub rounds_run: usize,
}

/// Configuration of the nonsymmetric embedding.
#[derive(Debug, Clone, Copy)]
pub struct NonsymConfig {
    /// Trace-surrogate weight controlling the rank of the solution.
    pub gamma: f64,
    pub loss: LossKind,
}

/// Result of a nonsymmetric solve: `A ~ P Q^T`.
#[derive(Debug, Clone)]
pub struct NonsymResult {
    pub p: FactorMatrix,
    pub q: FactorMatrix,
    /// Solve report in the `(m+n) x (m+n)` embedding variable `W`.
    pub report: SolveReport,
    /// Relative factorization residual of `[P; Q]` against `exp_H(W)`.
    pub factor_residual: f64,
}

fn require_nonneg(a: &SymMatrix, what: &str) -> Result<()> {
    if a.values().iter().any(|&v| v < 0.0) {
        return Err(Error::invalid(format!("{what} must be entrywise nonnegative")));
    }
    Ok(())
}

/// Default starting point: the PSD projection of the entrywise log of
/// `max(A, floor)`, i.e. near the exact-fit point of the exponential
/// change of variables.
fn default_start(a: &SymMatrix, floor: f64) -> Result<SymMatrix> {
    psd_project(&a.map(|v| v.max(floor).ln()))
}

fn scaled(opts: &SolverOptions, a_norm: f64) -> SolverOptions {
    SolverOptions {
        tol_scale: a_norm.max(1.0),
        ..opts.clone()
    }
}

/// Solve the KL restriction `min sum A_ij(log A_ij - X_ij) + exp(X_ij) -
/// A_ij` over PSD `X`, with the duality gap as the stopping criterion,
/// then factor `exp_H(X)` into `U U^T`.
pub fn symmetric_nmf_kl(
    a: &SymMatrix,
    opts: &SolverOptions,
    fopts: &FactorizeOptions,
) -> Result<SymNmfResult> {
    require_nonneg(a, "KL input")?;
    let objective = |x: &SymMatrix| kl_objective_grad(a, x);
    let certificate = |x: &SymMatrix| duality_gap(a, x);
    let constraints = ConstraintSet::new(vec![Constraint::PsdCone])?;
    let x0 = default_start(a, LOG_FLOOR)?;
    let opts = scaled(opts, a.frob_norm());
    let report =
        projected_gradient_minimize(&objective, &constraints, &x0, &opts, Some(&certificate))?;

    let fact = factorize_hadamard_exp(&report.final_point, fopts)?;
    let certificate = match duality_gap(a, &report.final_point) {
        Ok(cert) => Some(cert),
        Err(Error::Domain(_)) => None, // dual point outside the log domain
        Err(e) => return Err(e),
    };
    Ok(SymNmfResult {
        x: report.final_point.clone(),
        u: fact.u,
        certificate,
        report,
        factor_residual: fact.residual,
    })
}

/// Solve the squared-loss restriction `min sum (exp(X_ij) - A_ij)^2` over
/// `X` PSD intersected with the convexity box `exp(X_ij) >= A_ij / 2`
/// (no bound where `A_ij = 0`), then factor `exp_H(X)`.
pub fn symmetric_nmf_mse(
    a: &SymMatrix,
    opts: &SolverOptions,
    fopts: &FactorizeOptions,
) -> Result<SymNmfResult> {
    require_nonneg(a, "MSE input")?;
    let n = a.n();
    let objective = |x: &SymMatrix| mse_objective_grad(a, x);
    let mut lower = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            let aij = a.get(i, j);
            if aij > 0.0 {
                lower[i * n + j] = (aij / 2.0).ln();
            }
        }
    }
    // PSD last: on an inconsistent intersection, Dykstra's iterates settle
    // in the final set, and the exponential paths need PSD iterates
    let constraints = ConstraintSet::new(vec![
        Constraint::LowerBound(EntrywiseBound::new(n, lower)?),
        Constraint::PsdCone,
    ])?;
    let x0 = default_start(a, LOG_FLOOR)?;
    let opts = scaled(opts, a.frob_norm());
    let report = projected_gradient_minimize(&objective, &constraints, &x0, &opts, None)?;

    let fact = factorize_hadamard_exp(&report.final_point, fopts)?;
    Ok(SymNmfResult {
        x: report.final_point.clone(),
        u: fact.u,
        certificate: None,
        report,
        factor_residual: fact.residual,
    })
}

/// Solve `min ||A - X||^2 + gamma * sum(X) + nu * tr(X)` over the doubly
/// nonnegative cone (`X >= 0` entrywise and PSD), the right surrogate
/// when `A` is sparse and the exponential change of variables is not
/// appropriate. The factor comes from eigen-structure: an exact
/// rank-two nonnegative factorization when the numerical rank allows it,
/// otherwise clipped eigencolumns with the clipping residual reported.
pub fn sparse_lowrank(
    a: &SymMatrix,
    cfg: &SparseLowRankConfig,
    opts: &SolverOptions,
) -> Result<SymNmfResult> {
    cfg.validate()?;
    let n = a.n();
    let gamma = cfg.gamma;
    let nu = cfg.nu;
    let objective = move |x: &SymMatrix| -> Result<(f64, SymMatrix)> {
        let r = x.sub(a)?;
        let value = r.frob_norm().powi(2) + gamma * x.sum_entries() + nu * x.trace();
        let grad = SymMatrix::from_fn_sym(x.n(), |i, j| {
            2.0 * r.get(i, j) + gamma + if i == j { nu } else { 0.0 }
        })?;
        Ok((value, grad))
    };
    let constraints = ConstraintSet::new(vec![Constraint::Nonnegative, Constraint::PsdCone])?;
    let opts = scaled(opts, a.frob_norm());
    let report = projected_gradient_minimize(&objective, &constraints, a, &opts, None)?;

    let x = &report.final_point;
    let (u, factor_residual) = extract_dnn_factor(x)?;
    Ok(SymNmfResult {
        x: x.clone(),
        u,
        certificate: None,
        report,
        factor_residual,
    })
}

/// Factor a doubly nonnegative solution directly: exact rank-two
/// factorization when at most two eigenvalues survive the cutoff,
/// otherwise clipped scaled eigenvectors.
fn extract_dnn_factor(x: &SymMatrix) -> Result<(FactorMatrix, f64)> {
    let n = x.n();
    let eig = sym_eig(x)?;
    let lam_max = eig.eigenvalues()[0].max(0.0);
    let cutoff = FactorizeOptions::default().eig_cutoff;
    let retained: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues()[i] > cutoff * lam_max && eig.eigenvalues()[i] > 0.0)
        .collect();
    let x_norm = x.frob_norm().max(f64::MIN_POSITIVE);

    if retained.is_empty() {
        let u = FactorMatrix::new(n, 1, vec![0.0; n])?;
        return Ok((u, x.frob_norm() / x_norm));
    }

    if retained.len() <= 2 {
        // clean feasibility slack before the exact rank-two factorization
        let clean = x.map(|v| v.max(0.0));
        let u = cp_factor_rank_two(&clean)?;
        let residual = x.sub(&u.gram())?.frob_norm() / x_norm;
        return Ok((u, residual));
    }

    let columns: Vec<Vec<f64>> = retained
        .iter()
        .map(|&i| {
            let lam = eig.eigenvalues()[i];
            let mut col: Vec<f64> = eig
                .eigenvector(i)
                .iter()
                .map(|&e| lam.sqrt() * e)
                .collect();
            // flip so the dominant entry is positive, then clip
            let dominant = col
                .iter()
                .fold(0.0f64, |acc, &v| if v.abs() > acc.abs() { v } else { acc });
            if dominant < 0.0 {
                for v in &mut col {
                    *v = -*v;
                }
            }
            for v in &mut col {
                *v = v.max(0.0);
            }
            col
        })
        .collect();
    let u = FactorMatrix::from_columns(n, &columns)?;
    let residual = x.sub(&u.gram())?.frob_norm() / x_norm;
    Ok((u, residual))
}

/// Total loss of the running reconstruction, with `+inf` standing in for
/// an out-of-domain KL evaluation (a zero reconstruction entry under a
/// positive data entry).
fn total_loss(a: &SymMatrix, gram: &SymMatrix, loss: LossKind) -> Result<f64> {
    match loss {
        LossKind::Mse => mse_loss_sym(a, gram),
        LossKind::Kl => match kl_loss_sym(a, gram) {
            Ok(v) => Ok(v),
            Err(Error::Domain(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        },
    }
}

/// Recursive peel-off decomposition: at round `k` solve the chosen
/// symmetric problem against the residual `A_k` with the extra entrywise
/// bound `exp(X_ij) <= max((A_k)_ij, floor_eps)`, subtract the fitted
/// `U_k U_k^T`, clip the residual at zero, and continue. A round that no
/// longer improves `loss(A, sum U_j U_j^T)` is discarded and ends the
/// recursion, so the reported loss trace is non-increasing.
pub fn recursive_decompose(
    a: &SymMatrix,
    loss: LossKind,
    rcfg: &RecursiveConfig,
    opts: &SolverOptions,
    fopts: &FactorizeOptions,
) -> Result<RecursiveResult> {
    require_nonneg(a, "recursive input")?;
    if rcfg.rounds == 0 {
        return Err(Error::invalid("rounds must be >= 1"));
    }
    if !(rcfg.floor_eps > 0.0) {
        return Err(Error::invalid("floor_eps must be positive"));
    }
    let n = a.n();
    let opts = scaled(opts, a.frob_norm());

    let mut residual = a.clone();
    let mut factors: Option<FactorMatrix> = None;
    let mut running_gram = SymMatrix::zeros(n);
    let mut round_losses = Vec::new();
    let mut best_loss = total_loss(a, &running_gram, loss)?;

    for _round in 0..rcfg.rounds {
        // A PSD matrix with diagonal at most d cannot have entries below
        // -d, so bounds deeper than the diagonal budget are unenforceable
        // and only push the box far from the cone. The floor is raised to
        // the reachable level; the requested floor still applies when the
        // caller sets it higher.
        let diag_cap = (0..n)
            .map(|i| residual.get(i, i).max(rcfg.floor_eps).ln())
            .fold(f64::NEG_INFINITY, f64::max)
            .max(1.0);
        let floor_eff = rcfg.floor_eps.max((-diag_cap).exp());
        let upper_values: Vec<f64> = residual
            .values()
            .iter()
            .map(|&v| v.max(floor_eff).ln())
            .collect();
        let upper = Constraint::UpperBound(EntrywiseBound::new(n, upper_values)?);

        // the peel-off box is often inconsistent with the PSD cone (zero
        // residual entries demand deeply negative X entries a PSD matrix
        // with a bounded diagonal cannot have); keeping PSD last makes
        // the compromise point PSD, which is what the factorizer needs
        let constraints = match loss {
            LossKind::Kl => ConstraintSet::new(vec![upper, Constraint::PsdCone])?,
            LossKind::Mse => {
                let mut lower = vec![f64::NEG_INFINITY; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let rij = residual.get(i, j);
                        if rij > 0.0 {
                            lower[i * n + j] = (rij / 2.0).ln();
                        }
                    }
                }
                ConstraintSet::new(vec![
                    Constraint::LowerBound(EntrywiseBound::new(n, lower)?),
                    upper,
                    Constraint::PsdCone,
                ])?
            }
        };

        let objective = |x: &SymMatrix| match loss {
            LossKind::Kl => kl_objective_grad(&residual, x),
            LossKind::Mse => mse_objective_grad(&residual, x),
        };
        let x0 = default_start(&residual, rcfg.floor_eps)?;
        let report = projected_gradient_minimize(&objective, &constraints, &x0, &opts, None)?;

        let fact = factorize_hadamard_exp(&report.final_point, fopts)?;
        let round_gram = fact.u.gram();
        let candidate_gram = running_gram.add(&round_gram)?;
        let candidate_loss = total_loss(a, &candidate_gram, loss)?;
        if !(best_loss - candidate_loss > 1e-12) {
            break; // no improvement: discard this round's factor
        }
        best_loss = candidate_loss;
        round_losses.push(candidate_loss);
        running_gram = candidate_gram;
        factors = Some(match factors {
            None => fact.u,
            Some(prev) => prev.concat_columns(&fact.u)?,
        });
        // clip so the residual stays entrywise nonnegative
        residual = residual.sub(&round_gram)?.map(|v| v.max(0.0));
    }

    let rounds_run = round_losses.len();
    let factors = match factors {
        Some(f) => f,
        // nothing improved on the empty reconstruction (e.g. A = 0)
        None => FactorMatrix::new(n, 1, vec![0.0; n])?,
    };
    Ok(RecursiveResult {
        factors,
        round_losses,
        rounds_run,
    })
}

/// Objective of the nonsymmetric embedding in the symmetric variable
/// `W in S^{m+n}`: the loss is evaluated once on the upper-right block
/// `B_ij = exp(W_{i, m+j})` and its gradient is halved into both
/// triangles; the trace penalty acts on the diagonal of `exp_H(W)`.
pub(crate) fn nonsym_objective_grad(
    a: &DenseMatrix,
    gamma: f64,
    loss: LossKind,
    w: &SymMatrix,
) -> Result<(f64, SymMatrix)> {
    let m = a.rows();
    let n = a.cols();
    if w.n() != m + n {
        return Err(Error::invalid("embedding dimension must be rows + cols"));
    }
    let e = hadamard_exp(w)?;
    let block = DenseMatrix::from_fn(m, n, |i, j| e.get(i, m + j));

    let (loss_val, dblock) = match loss {
        LossKind::Mse => {
            let mut d = DenseMatrix::zeros(m, n);
            let mut val = 0.0;
            for i in 0..m {
                for j in 0..n {
                    let r = block.get(i, j) - a.get(i, j);
                    val += r * r;
                    d.set(i, j, 2.0 * r);
                }
            }
            (val, d)
        }
        LossKind::Kl => {
            let val = kl_loss(a, &block)?;
            let mut d = DenseMatrix::zeros(m, n);
            for i in 0..m {
                for j in 0..n {
                    d.set(i, j, 1.0 - a.get(i, j) / block.get(i, j));
                }
            }
            (val, d)
        }
    };

    let mut trace_term = 0.0;
    for i in 0..(m + n) {
        trace_term += e.get(i, i);
    }
    let value = loss_val + gamma * trace_term;

    let grad = SymMatrix::from_fn_sym(m + n, |i, j| {
        if i == j {
            gamma * e.get(i, i)
        } else if i < m && j >= m {
            // chain rule through the entrywise exponential, halved
            // because the block appears in both triangles of W
            0.5 * dblock.get(i, j - m) * block.get(i, j - m)
        } else {
            0.0
        }
    })?;
    Ok((value, grad))
}

/// Nonsymmetric NMF through the completely positive block embedding:
/// optimize over PSD `W in S^{m+n}` the loss on the off-diagonal block of
/// `exp_H(W)` plus `gamma` times its total diagonal (the trace-norm
/// surrogate bounding the rank, hence the cp-rank, of the block), then
/// factor `exp_H(W) = U U^T` and split `U` row-wise into `P` and `Q` so
/// that `A ~ P Q^T`.
pub fn nonsymmetric_nmf(
    a: &DenseMatrix,
    cfg: &NonsymConfig,
    opts: &SolverOptions,
    fopts: &FactorizeOptions,
) -> Result<NonsymResult> {
    if a.values().iter().any(|&v| v < 0.0) {
        return Err(Error::invalid("nonsymmetric input must be nonnegative"));
    }
    if cfg.gamma < 0.0 {
        return Err(Error::invalid("gamma must be nonnegative"));
    }
    let m = a.rows();
    let n = a.cols();
    if m == 0 || n == 0 {
        return Err(Error::invalid("input matrix must be non-empty"));
    }

    let objective = |w: &SymMatrix| nonsym_objective_grad(a, cfg.gamma, cfg.loss, w);
    let constraints = ConstraintSet::new(vec![Constraint::PsdCone])?;

    // start near the exact-fit point of the block: log of the data in the
    // off-diagonal block, zeros on the diagonal blocks, PSD-projected
    let w0 = {
        let mut vals = vec![0.0; (m + n) * (m + n)];
        for i in 0..m {
            for j in 0..n {
                let lij = a.get(i, j).max(LOG_FLOOR).ln();
                vals[i * (m + n) + (m + j)] = lij;
                vals[(m + j) * (m + n) + i] = lij;
            }
        }
        psd_project(&SymMatrix::from_flat(m + n, vals)?)?
    };

    let opts = scaled(opts, a.frob_norm());
    let report = projected_gradient_minimize(&objective, &constraints, &w0, &opts, None)?;

    let fact = factorize_hadamard_exp(&report.final_point, fopts)?;
    let p = fact.u.row_slice(0, m)?;
    let q = fact.u.row_slice(m, m + n)?;
    Ok(NonsymResult {
        p,
        q,
        report,
        factor_residual: fact.residual,
    })
}

/// Re-export for the dual-objective docs: the certificate's dual value at
/// `Y = 0` is exactly zero, which is the easy sanity anchor.
#[allow(dead_code)]
fn _dual_anchor(a: &SymMatrix) -> Result<f64> {
    dual_objective(a, &SymMatrix::zeros(a.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_psd(n: usize, k: usize, scale: f64, rng: &mut SplitMix64) -> SymMatrix {
        let g = DenseMatrix::from_fn(n, k, |_, _| rng.uniform(-scale, scale));
        SymMatrix::from_dense(&g.matmul(&g.transpose()).unwrap()).unwrap()
    }

    #[test]
    fn kl_known_solution_instance() {
        let mut rng = SplitMix64::new(606);
        let x_star = random_psd(6, 3, 0.5, &mut rng);
        let a = hadamard_exp(&x_star).unwrap();
        let result =
            symmetric_nmf_kl(&a, &SolverOptions::default(), &FactorizeOptions::default()).unwrap();
        let scale = a.frob_norm().max(1.0);
        assert!(result.report.converged);
        assert!(result.report.final_value <= 1e-6 * scale);
        let cert = result.certificate.as_ref().unwrap();
        assert!(cert.gap <= 1e-6 * scale);
        assert!(result.u.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn kl_all_ones_is_exact_at_zero() {
        let a = SymMatrix::from_fn_sym(4, |_, _| 1.0).unwrap();
        let result =
            symmetric_nmf_kl(&a, &SolverOptions::default(), &FactorizeOptions::default()).unwrap();
        assert!(result.report.final_value.abs() < 1e-10);
        assert!(result.x.frob_norm() < 1e-8);
    }

    #[test]
    fn kl_zero_input_is_certified_at_zero() {
        // For A = 0 the objective sum exp(X_ij) over PSD X is minimized at
        // X = 0: the gradient there is the all-ones matrix, which is PSD,
        // so Y = 1 1^T is dual feasible and its certificate closes the gap
        // exactly. The default start already sits there.
        let a = SymMatrix::zeros(3);
        let opts = SolverOptions {
            max_iter: 60,
            record_history: true,
            ..Default::default()
        };
        let result = symmetric_nmf_kl(&a, &opts, &FactorizeOptions::default()).unwrap();
        let hist = result.report.value_history.as_ref().unwrap();
        assert!(hist.iter().all(|v| v.is_finite()));
        for w in hist.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!((result.report.final_value - 9.0).abs() < 1e-9);
        let cert = result.certificate.as_ref().unwrap();
        assert!(cert.gap.abs() <= 1e-9);
    }

    #[test]
    fn mse_known_solution_instance() {
        let mut rng = SplitMix64::new(707);
        let x_star = random_psd(5, 3, 0.5, &mut rng);
        let a = hadamard_exp(&x_star).unwrap();
        let result =
            symmetric_nmf_mse(&a, &SolverOptions::default(), &FactorizeOptions::default())
                .unwrap();
        assert!(result.report.final_value <= 1e-8 * a.frob_norm().powi(2));
    }

    #[test]
    fn mse_all_ones() {
        let a = SymMatrix::from_fn_sym(3, |_, _| 1.0).unwrap();
        let result =
            symmetric_nmf_mse(&a, &SolverOptions::default(), &FactorizeOptions::default())
                .unwrap();
        assert!(result.report.final_value.abs() < 1e-10);
        assert!(result.x.frob_norm() < 1e-6);
    }

    #[test]
    fn mse_feasibility_postcondition() {
        let mut rng = SplitMix64::new(808);
        let a = SymMatrix::from_fn_sym(5, |_, _| rng.uniform(0.0, 2.0)).unwrap();
        let opts = SolverOptions {
            max_iter: 300,
            ..Default::default()
        };
        let result = symmetric_nmf_mse(&a, &opts, &FactorizeOptions::default()).unwrap();
        let ex = hadamard_exp(&result.x).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let aij = a.get(i, j);
                if aij > 0.0 {
                    assert!(ex.get(i, j) >= aij / 2.0 - 1e-8);
                }
            }
        }
    }

    #[test]
    fn sparse_unpenalized_recovers_dnn_input() {
        let mut rng = SplitMix64::new(909);
        let g = FactorMatrix::new(5, 2, (0..10).map(|_| rng.next_f64()).collect()).unwrap();
        let a = g.gram(); // completely positive, hence doubly nonnegative
        let cfg = SparseLowRankConfig {
            gamma: 0.0,
            nu: 0.0,
        };
        let result = sparse_lowrank(&a, &cfg, &SolverOptions::default()).unwrap();
        assert!(result.x.dist(&a) <= 1e-6 * a.frob_norm().max(1.0));
    }

    #[test]
    fn sparse_large_trace_penalty_kills_solution() {
        let mut rng = SplitMix64::new(111);
        let g = FactorMatrix::new(4, 2, (0..8).map(|_| rng.next_f64()).collect()).unwrap();
        let a = g.gram();
        let eig = sym_eig(&a).unwrap();
        let nu = 2.5 * eig.eigenvalues()[0];
        let result = sparse_lowrank(
            &a,
            &SparseLowRankConfig { gamma: 0.0, nu },
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(result.x.frob_norm() <= 1e-5 * a.frob_norm().max(1.0));
    }

    #[test]
    fn sparse_large_l1_penalty_kills_solution() {
        let mut rng = SplitMix64::new(222);
        let g = FactorMatrix::new(4, 2, (0..8).map(|_| rng.next_f64()).collect()).unwrap();
        let a = g.gram();
        let gamma = 2.5 * a.max_abs_entry();
        let result = sparse_lowrank(
            &a,
            &SparseLowRankConfig { gamma, nu: 0.0 },
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(result.x.frob_norm() <= 1e-5 * a.frob_norm().max(1.0));
    }

    #[test]
    fn sparse_l1_path_is_monotone() {
        let mut rng = SplitMix64::new(333);
        let g = FactorMatrix::new(5, 3, (0..15).map(|_| rng.next_f64()).collect()).unwrap();
        let a = g.gram();
        let mut last_sum = f64::INFINITY;
        for gamma in [0.0, 0.5, 2.0] {
            let result = sparse_lowrank(
                &a,
                &SparseLowRankConfig { gamma, nu: 0.0 },
                &SolverOptions::default(),
            )
            .unwrap();
            let s = result.x.sum_entries();
            assert!(s <= last_sum + 1e-6, "sum(X) must not grow with gamma");
            last_sum = s;
        }
    }

    #[test]
    fn recursive_single_round_matches_bounded_solve() {
        let mut rng = SplitMix64::new(444);
        let x_star = random_psd(4, 2, 0.4, &mut rng);
        let a = hadamard_exp(&x_star).unwrap();
        let rcfg = RecursiveConfig {
            rounds: 1,
            floor_eps: LOG_FLOOR,
        };
        let result = recursive_decompose(
            &a,
            LossKind::Mse,
            &rcfg,
            &SolverOptions::default(),
            &FactorizeOptions::default(),
        )
        .unwrap();
        assert_eq!(result.rounds_run, 1);
        assert!(result.round_losses[0] >= 0.0);
        // the factorization respects the bound up to factorization error:
        // U U^T <= A + slack
        let gram = result.factors.gram();
        for i in 0..4 {
            for j in 0..4 {
                assert!(gram.get(i, j) <= a.get(i, j) + 0.05 * a.max_abs_entry());
            }
        }
    }

    #[test]
    fn recursive_two_component_instance() {
        // two uniform components on disjoint supports
        let mut u = vec![0.0; 6];
        let mut w = vec![0.0; 6];
        for i in 0..3 {
            u[i] = 2.0;
            w[3 + i] = 1.8;
        }
        let a = SymMatrix::from_fn_sym(6, |i, j| u[i] * u[j] + w[i] * w[j]).unwrap();
        let result = recursive_decompose(
            &a,
            LossKind::Mse,
            &RecursiveConfig {
                rounds: 2,
                floor_eps: LOG_FLOOR,
            },
            &SolverOptions::default(),
            &FactorizeOptions::default(),
        )
        .unwrap();
        for pair in result.round_losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
        let final_loss = *result.round_losses.last().unwrap();
        assert!(
            final_loss <= 0.05 * a.frob_norm().powi(2),
            "final loss {} vs budget {}",
            final_loss,
            0.05 * a.frob_norm().powi(2)
        );
    }

    #[test]
    fn recursive_residuals_stay_nonnegative() {
        // nonnegativity is enforced by clipping; exercise a couple of
        // rounds and confirm the concatenated factors stay nonnegative
        let mut rng = SplitMix64::new(555);
        let g = FactorMatrix::new(5, 2, (0..10).map(|_| rng.uniform(0.5, 1.5)).collect()).unwrap();
        let a = g.gram();
        let result = recursive_decompose(
            &a,
            LossKind::Kl,
            &RecursiveConfig {
                rounds: 3,
                floor_eps: LOG_FLOOR,
            },
            &SolverOptions {
                max_iter: 300,
                ..Default::default()
            },
            &FactorizeOptions::default(),
        )
        .unwrap();
        assert!(result.factors.values().iter().all(|&v| v >= 0.0));
        for pair in result.round_losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }

    #[test]
    fn nonsym_rank_one_instance() {
        let mut rng = SplitMix64::new(666);
        let p: Vec<f64> = (0..3).map(|_| rng.uniform(0.5, 1.5)).collect();
        let q: Vec<f64> = (0..4).map(|_| rng.uniform(0.5, 1.5)).collect();
        let a = DenseMatrix::from_fn(3, 4, |i, j| p[i] * q[j]);
        let cfg = NonsymConfig {
            gamma: 1e-3,
            loss: LossKind::Mse,
        };
        let result = nonsymmetric_nmf(
            &a,
            &cfg,
            &SolverOptions::default(),
            &FactorizeOptions::default(),
        )
        .unwrap();
        let recon = result.p.mul_transpose(&result.q).unwrap();
        let rel = a.sub(&recon).unwrap().frob_norm() / a.frob_norm();
        assert!(rel <= 0.1, "relative error {rel}");
    }

    #[test]
    fn nonsym_block_symmetry_for_symmetric_input() {
        let mut rng = SplitMix64::new(777);
        let base = SymMatrix::from_fn_sym(3, |_, _| rng.uniform(0.5, 2.0)).unwrap();
        let a = base.to_dense();
        let cfg = NonsymConfig {
            gamma: 1e-3,
            loss: LossKind::Mse,
        };
        let result = nonsymmetric_nmf(
            &a,
            &cfg,
            &SolverOptions::default(),
            &FactorizeOptions::default(),
        )
        .unwrap();
        let e = hadamard_exp(&result.report.final_point).unwrap();
        // swapping the two blocks must leave exp_H(W) unchanged
        let m = 3;
        let mut max_diff = 0.0f64;
        for i in 0..2 * m {
            for j in 0..2 * m {
                let si = (i + m) % (2 * m);
                let sj = (j + m) % (2 * m);
                max_diff = max_diff.max((e.get(i, j) - e.get(si, sj)).abs());
            }
        }
        assert!(max_diff <= 1e-6, "block swap changed exp_H(W) by {max_diff}");
    }

    #[test]
    fn nonsym_gamma_shrinks_diagonal() {
        let mut rng = SplitMix64::new(888);
        let a = DenseMatrix::from_fn(3, 3, |_, _| rng.uniform(0.5, 2.0));
        let diag_sum = |gamma: f64| -> f64 {
            let result = nonsymmetric_nmf(
                &a,
                &NonsymConfig {
                    gamma,
                    loss: LossKind::Mse,
                },
                &SolverOptions {
                    max_iter: 400,
                    ..Default::default()
                },
                &FactorizeOptions::default(),
            )
            .unwrap();
            let e = hadamard_exp(&result.report.final_point).unwrap();
            e.trace()
        };
        let small = diag_sum(1e-3);
        let large = diag_sum(2.0 * a.values().iter().fold(0.0f64, |m, &v| m.max(v)));
        assert!(large <= small + 1e-9, "diagonal must shrink with gamma");
    }

    #[test]
    fn nonsym_objective_reduces_to_block_loss_at_gamma_zero() {
        let mut rng = SplitMix64::new(999);
        let base = SymMatrix::from_fn_sym(3, |_, _| rng.uniform(0.5, 2.0)).unwrap();
        let a = base.to_dense();
        let w = {
            let mut vals = vec![0.0; 36];
            let g = random_psd(6, 3, 0.4, &mut rng);
            vals.copy_from_slice(g.values());
            SymMatrix::from_flat(6, vals).unwrap()
        };
        let (val, _) = nonsym_objective_grad(&a, 0.0, LossKind::Mse, &w).unwrap();
        let e = hadamard_exp(&w).unwrap();
        let block = DenseMatrix::from_fn(3, 3, |i, j| e.get(i, 3 + j));
        let direct = crate::objectives::mse_loss(&a, &block).unwrap();
        assert!((val - direct).abs() <= 1e-12 * direct.max(1.0));
    }
}
