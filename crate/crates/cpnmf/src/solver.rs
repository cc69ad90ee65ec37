//! Projected gradient minimization over an intersection of convex sets.
//!
//! The update is `x_{k+1} = p_C(x_k - t grad f(x_k))` with Armijo
//! backtracking on `t`. Projection onto a single set uses that set's exact
//! projector; intersections go through Dykstra's algorithm, which (unlike
//! plain alternating projection) converges to the exact Frobenius-nearest
//! point of the intersection.
//!
//! When the intersection is empty, Dykstra's iterates still converge: the
//! end-of-cycle point tends to the point of the *last* set closest to the
//! other sets (Bauschke & Borwein). The recursive decomposition relies on
//! this: its entrywise box can be inconsistent with the PSD cone, and the
//! compromise point is exactly the useful output there.

use crate::eigen::psd_project;
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::objectives::DualCertificate;

/// Armijo sufficient-decrease constant.
const ARMIJO_SIGMA: f64 = 1e-4;

/// Entrywise bound matrix; entries may be `+inf` / `-inf` sentinels where
/// no bound applies, but never NaN. Must be symmetric so that clipping a
/// symmetric matrix stays symmetric.
#[derive(Debug, Clone)]
pub struct EntrywiseBound {
    n: usize,
    values: Vec<f64>,
}

impl EntrywiseBound {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::invalid("bound matrix has wrong size"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("bound entries must not be NaN"));
        }
        for i in 0..n {
            for j in 0..i {
                if values[i * n + j] != values[j * n + i] {
                    return Err(Error::invalid("bound matrix must be symmetric"));
                }
            }
        }
        Ok(EntrywiseBound { n, values })
    }

    /// Uniform bound `c` everywhere.
    pub fn constant(n: usize, c: f64) -> Self {
        EntrywiseBound {
            n,
            values: vec![c; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// One convex set with an exact Frobenius projector.
#[derive(Debug, Clone)]
pub enum Constraint {
    /// `X >= 0` in the semidefinite order.
    PsdCone,
    /// `X_ij >= L_ij` entrywise.
    LowerBound(EntrywiseBound),
    /// `X_ij <= B_ij` entrywise.
    UpperBound(EntrywiseBound),
    /// `X_ij >= 0` entrywise.
    Nonnegative,
}

impl Constraint {
    /// Exact projection onto this set.
    pub fn project(&self, x: &SymMatrix) -> Result<SymMatrix> {
        match self {
            Constraint::PsdCone => psd_project(x),
            Constraint::Nonnegative => Ok(x.map(|v| v.max(0.0))),
            Constraint::LowerBound(l) => {
                check_dim(l.n(), x.n())?;
                let n = x.n();
                SymMatrix::from_fn_sym(n, |i, j| x.get(i, j).max(l.get(i, j)))
            }
            Constraint::UpperBound(b) => {
                check_dim(b.n(), x.n())?;
                let n = x.n();
                SymMatrix::from_fn_sym(n, |i, j| x.get(i, j).min(b.get(i, j)))
            }
        }
    }

    /// How far `x` is from satisfying this constraint (Frobenius-ish
    /// violation measure used by feasibility checks).
    pub fn violation(&self, x: &SymMatrix) -> Result<f64> {
        match self {
            Constraint::PsdCone => {
                let lmin = crate::eigen::min_eigenvalue(x)?;
                Ok((-lmin).max(0.0))
            }
            Constraint::Nonnegative => Ok(x
                .values()
                .iter()
                .fold(0.0f64, |m, &v| m.max((-v).max(0.0)))),
            Constraint::LowerBound(l) => {
                check_dim(l.n(), x.n())?;
                let mut m = 0.0f64;
                for i in 0..x.n() {
                    for j in 0..x.n() {
                        m = m.max(l.get(i, j) - x.get(i, j));
                    }
                }
                Ok(m.max(0.0))
            }
            Constraint::UpperBound(b) => {
                check_dim(b.n(), x.n())?;
                let mut m = 0.0f64;
                for i in 0..x.n() {
                    for j in 0..x.n() {
                        m = m.max(x.get(i, j) - b.get(i, j));
                    }
                }
                Ok(m.max(0.0))
            }
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::invalid(format!(
            "constraint dimension {expected} does not match matrix dimension {got}"
        )))
    } else {
        Ok(())
    }
}

/// Ordered, non-empty list of constraints. The intersection is projected
/// with Dykstra's algorithm; order matters only in the inconsistent case,
/// where iterates settle in the last set.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::invalid("constraint set must be non-empty"));
        }
        Ok(ConstraintSet { constraints })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn max_violation(&self, x: &SymMatrix) -> Result<f64> {
        let mut m = 0.0f64;
        for c in &self.constraints {
            m = m.max(c.violation(x)?);
        }
        Ok(m)
    }
}

/// Options for [`projected_gradient_minimize`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Iteration budget.
    pub max_iter: usize,
    /// Convergence tolerance: on the duality gap when a certificate is
    /// supplied, otherwise on the projected-gradient-mapping Frobenius
    /// norm. Compared against `tol * tol_scale`.
    pub tol: f64,
    /// Problem scale for the tolerance, typically `max(1, ||A||_F)`;
    /// the solver itself is data-agnostic so the driver supplies it.
    pub tol_scale: f64,
    /// Initial line-search step.
    pub init_step: f64,
    /// Backtracking shrink factor in (0, 1).
    pub ls_shrink: f64,
    /// Maximum backtracking trials per iteration.
    pub ls_max: usize,
    /// Convergence-check cadence (gap or gradient mapping), in iterations.
    pub gap_check_every: usize,
    /// Record value/gap histories in the report.
    pub record_history: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iter: 2000,
            tol: 1e-6,
            tol_scale: 1.0,
            init_step: 1.0,
            ls_shrink: 0.5,
            ls_max: 40,
            gap_check_every: 10,
            record_history: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == usize::MAX {
            return Err(Error::invalid("max_iter too large"));
        }
        if !(self.tol > 0.0) || !(self.tol_scale > 0.0) {
            return Err(Error::invalid("tol and tol_scale must be positive"));
        }
        if !(self.init_step > 0.0) {
            return Err(Error::invalid("init_step must be positive"));
        }
        if !(self.ls_shrink > 0.0 && self.ls_shrink < 1.0) {
            return Err(Error::invalid("ls_shrink must lie in (0, 1)"));
        }
        if self.ls_max == 0 || self.gap_check_every == 0 {
            return Err(Error::invalid(
                "ls_max and gap_check_every must be positive",
            ));
        }
        Ok(())
    }
}

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    MaxIter,
    LineSearchFailure,
}

/// Outcome of a projected-gradient run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub final_point: SymMatrix,
    pub final_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub value_history: Option<Vec<f64>>,
    pub gap_history: Option<Vec<f64>>,
}

/// Dykstra's projection onto the intersection of `constraints`.
///
/// A single constraint short-circuits to its exact projector. Otherwise
/// cycles of corrected projections run until the end-of-cycle point moves
/// less than `tol`, erroring (with the last iterate attached) after
/// `max_cycles`.
pub fn dykstra_project(
    x: &SymMatrix,
    constraints: &ConstraintSet,
    tol: f64,
    max_cycles: usize,
) -> Result<SymMatrix> {
    let sets = constraints.constraints();
    if sets.len() == 1 {
        return sets[0].project(x);
    }
    let n = x.n();
    let mut current = x.clone();
    let mut increments = vec![SymMatrix::zeros(n); sets.len()];
    let mut change = f64::INFINITY;
    for _cycle in 0..max_cycles {
        let cycle_start = current.clone();
        for (set, inc) in sets.iter().zip(increments.iter_mut()) {
            let shifted = current.add(inc)?;
            let projected = set.project(&shifted)?;
            *inc = shifted.sub(&projected)?;
            current = projected;
        }
        change = current.dist(&cycle_start);
        if change <= tol {
            return Ok(current);
        }
    }
    Err(Error::DykstraStalled {
        cycles: max_cycles,
        change,
        last: Box::new(current),
    })
}

/// Projection used inside the solver loop: exact for one constraint,
/// Dykstra for intersections with a tolerance tied to the solve tolerance
/// (`inner_tol`), so loose solves do not pay for needlessly tight
/// projections.
///
/// Consistent intersections converge fast and hit the tolerance.
/// Inconsistent ones (which the recursive path produces) converge slowly
/// toward a compromise point in the last set; a stall with a small
/// remaining cycle change is accepted as a usable quasi-projection, since
/// exact joint feasibility does not exist there.
fn solver_project(
    x: &SymMatrix,
    constraints: &ConstraintSet,
    inner_tol: f64,
) -> Result<SymMatrix> {
    let scale = x.frob_norm().max(1.0);
    match dykstra_project(x, constraints, inner_tol, 500) {
        Ok(p) => Ok(p),
        Err(Error::DykstraStalled { change, last, .. })
            if change <= (1e-5 * scale).max(inner_tol) =>
        {
            Ok(*last)
        }
        Err(e) => Err(e),
    }
}

/// Objective callable: value and gradient at a point.
pub type ObjectiveFn<'a> = dyn Fn(&SymMatrix) -> Result<(f64, SymMatrix)> + 'a;

/// Certificate callable: duality gap information at a feasible point.
pub type CertificateFn<'a> = dyn Fn(&SymMatrix) -> Result<DualCertificate> + 'a;

/// Minimize `objective` over the intersection described by `constraints`
/// starting from `x0`.
///
/// Descent direction is the negative gradient; steps are accepted when the
/// objective decreases by at least `1e-4 * t * ||grad||^2`. Convergence is
/// declared on the duality gap when `certificate` is supplied, else on the
/// unit-step projected-gradient mapping `||x - p_C(x - grad)||_F`; both
/// are compared against `tol * tol_scale` every `gap_check_every`
/// iterations. A line search that exhausts `ls_max` trials ends the solve
/// with [`StopReason::LineSearchFailure`] rather than an error.
///
/// Objective failures (domain/range) at *trial* points are treated as
/// rejections and shrink the step; a failure at the initial point is
/// propagated, and a non-finite accepted value is a numeric error.
pub fn projected_gradient_minimize(
    objective: &ObjectiveFn<'_>,
    constraints: &ConstraintSet,
    x0: &SymMatrix,
    opts: &SolverOptions,
    certificate: Option<&CertificateFn<'_>>,
) -> Result<SolveReport> {
    opts.validate()?;

    // projections two orders tighter than the stopping threshold, never
    // looser than the 1e-8 feasibility slack at the default tolerance
    let inner_tol = (1e-2 * opts.tol * opts.tol_scale).max(1e-10 * opts.tol_scale);

    let mut x = solver_project(x0, constraints, inner_tol)?;
    let (mut fval, mut grad) = objective(&x)?;
    if !fval.is_finite() {
        return Err(Error::Numeric(format!(
            "objective is not finite at the initial point ({fval})"
        )));
    }

    let mut value_history = opts.record_history.then(|| vec![fval]);
    let mut gap_history = opts.record_history.then(Vec::new);

    let mut converged = false;
    let mut stop_reason = StopReason::MaxIter;
    let mut iterations = 0;
    let mut step = opts.init_step;

    let check_convergence = |x: &SymMatrix,
                                 grad: &SymMatrix,
                                 gap_history: &mut Option<Vec<f64>>|
     -> Result<bool> {
        if let Some(cert_fn) = certificate {
            let gap = match cert_fn(x) {
                Ok(cert) => cert.gap,
                // dual point outside the log domain: no bound available
                // at this iterate, keep going
                Err(Error::Domain(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            if let Some(h) = gap_history.as_mut() {
                h.push(gap);
            }
            Ok(gap <= opts.tol * opts.tol_scale)
        } else {
            match solver_project(&x.sub(grad)?, constraints, inner_tol) {
                Ok(mapped) => Ok(x.dist(&mapped) <= opts.tol * opts.tol_scale),
                // cannot evaluate the mapping: do not declare convergence
                Err(Error::DykstraStalled { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
    };

    if opts.max_iter > 0 && check_convergence(&x, &grad, &mut gap_history)? {
        converged = true;
        stop_reason = StopReason::Tolerance;
    }

    while !converged && iterations < opts.max_iter {
        iterations += 1;

        // backtracking line search along the projected arc
        let grad_sq = grad.frob_norm().powi(2);
        let mut t = step;
        let mut accepted = None;
        for _ in 0..opts.ls_max {
            let trial_point = match solver_project(&x.sub(&grad.scale(t))?, constraints, inner_tol)
            {
                Ok(p) => p,
                Err(Error::DykstraStalled { .. }) => {
                    t *= opts.ls_shrink;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match objective(&trial_point) {
                Ok((f_new, g_new)) if f_new.is_finite() => {
                    if f_new <= fval - ARMIJO_SIGMA * t * grad_sq {
                        accepted = Some((trial_point, f_new, g_new, t));
                        break;
                    }
                }
                // out-of-domain or non-finite trial: reject and shrink
                Ok(_) | Err(Error::Domain(_)) | Err(Error::Range(_)) => {}
                Err(e) => return Err(e),
            }
            t *= opts.ls_shrink;
        }

        match accepted {
            Some((x_new, f_new, g_new, t_used)) => {
                x = x_new;
                fval = f_new;
                grad = g_new;
                // let the step grow back so one bad iteration does not
                // pin every later one to a tiny step
                step = (t_used / opts.ls_shrink).min(opts.init_step);
                if let Some(h) = value_history.as_mut() {
                    h.push(fval);
                }
            }
            None => {
                stop_reason = StopReason::LineSearchFailure;
                // the iterate may still be optimal: one final check
                if check_convergence(&x, &grad, &mut gap_history)? {
                    converged = true;
                    stop_reason = StopReason::Tolerance;
                }
                break;
            }
        }

        if iterations % opts.gap_check_every == 0 || iterations == opts.max_iter {
            if check_convergence(&x, &grad, &mut gap_history)? {
                converged = true;
                stop_reason = StopReason::Tolerance;
            }
        }
    }

    Ok(SolveReport {
        final_point: x,
        final_value: fval,
        iterations,
        converged,
        stop_reason,
        value_history,
        gap_history,
    })
}
