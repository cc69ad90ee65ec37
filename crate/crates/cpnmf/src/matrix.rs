//! Dense matrix types: symmetric matrices, rectangular matrices, and
//! entrywise-nonnegative factor matrices, plus the Hadamard (entrywise)
//! operations the factorization machinery is built on.
//!
//! Everything is stored dense and row-major; the problems this crate
//! targets are small-to-medium dense instances. Values are immutable
//! after construction, so matrices are safe to share across threads.

use crate::error::{Error, Result};

/// Relative asymmetry tolerated by [`SymMatrix`] constructors before the
/// input is rejected instead of silently symmetrized.
const SYM_TOL: f64 = 1e-8;

/// Guard on Hadamard-exponential arguments: `exp(700)` is still finite in
/// f64, `exp(710)` is not.
const EXP_ARG_LIMIT: f64 = 700.0;

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

/// Dense rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {}x{}={} values, got {}",
                rows,
                cols,
                rows * cols,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.cols + j] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn same_shape(&self, other: &DenseMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "matmul shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.values[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn frob_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if !self.same_shape(other) {
            return Err(Error::invalid("shape mismatch in subtraction"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            values,
        })
    }

    /// Exact (bitwise) symmetry test; used by the writer to pick the
    /// `symmetric` storage layout.
    pub fn is_symmetric_exact(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.get(i, j).to_bits() != self.get(j, i).to_bits() {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// SymMatrix
// ---------------------------------------------------------------------------

/// Dense real symmetric matrix.
///
/// Construction symmetrizes the input by `(S + S^T)/2` and rejects
/// asymmetry beyond `1e-8` relative, so file-format round-off is tolerated
/// without hiding genuine shape bugs. Entries must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    values: Vec<f64>, // row-major n*n, kept exactly symmetric
}

impl SymMatrix {
    /// Build from a flat row-major buffer, symmetrizing by averaging.
    pub fn from_flat(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {}x{}={} values, got {}",
                n,
                n,
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("symmetric matrix entries must be finite"));
        }
        let mut max_abs = 0.0f64;
        let mut max_asym = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                let a = values[i * n + j];
                let b = values[j * n + i];
                max_abs = max_abs.max(a.abs()).max(b.abs());
                max_asym = max_asym.max((a - b).abs());
            }
            max_abs = max_abs.max(values[i * n + i].abs());
        }
        if max_asym > SYM_TOL * max_abs.max(1.0) {
            return Err(Error::invalid(format!(
                "matrix is not symmetric: max |S_ij - S_ji| = {max_asym:.3e}"
            )));
        }
        let mut values = values;
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (values[i * n + j] + values[j * n + i]);
                values[i * n + j] = avg;
                values[j * n + i] = avg;
            }
        }
        Ok(SymMatrix { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::invalid("rows must form a square matrix"));
            }
            values.extend_from_slice(r);
        }
        SymMatrix::from_flat(n, values)
    }

    /// Build from `f(i, j)` evaluated on the upper triangle and mirrored,
    /// so the result is symmetric by construction.
    pub fn from_fn_sym(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::Numeric(format!(
                        "non-finite entry at ({i}, {j}) while building symmetric matrix"
                    )));
                }
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Ok(SymMatrix { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("diagonal entries must be finite"));
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.values[i * n + i] = d[i];
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Set entry `(i, j)` and its mirror.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
        self.values[j * self.n + i] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn frob_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn sum_entries(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// Entrywise map; symmetry is preserved because the same function is
    /// applied to mirrored entries.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> Result<SymMatrix> {
        if self.n != other.n {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(SymMatrix { n: self.n, values })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.n,
            cols: self.n,
            values: self.values.clone(),
        }
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::invalid(format!(
                "matrix is {}x{}, expected square",
                m.rows, m.cols
            )));
        }
        SymMatrix::from_flat(m.rows, m.values.clone())
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn dist(&self, other: &SymMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

// ---------------------------------------------------------------------------
// FactorMatrix
// ---------------------------------------------------------------------------

/// Entrywise-nonnegative n x k factor, the `U` in `A ~ U U^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>, // row-major
}

impl FactorMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::invalid("factor matrix must have at least 1 column"));
        }
        if values.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {}x{}={} values, got {}",
                rows,
                cols,
                rows * cols,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                "factor matrix entries must be finite and nonnegative",
            ));
        }
        Ok(FactorMatrix { rows, cols, values })
    }

    /// Build from possibly slightly-negative numeric output, clipping
    /// entries in `[-clip_tol, 0)` to zero. Entries below `-clip_tol`
    /// still reject.
    pub fn from_clipped(rows: usize, cols: usize, values: Vec<f64>, clip_tol: f64) -> Result<Self> {
        let mut values = values;
        for v in &mut values {
            if *v < 0.0 && *v >= -clip_tol {
                *v = 0.0;
            }
        }
        FactorMatrix::new(rows, cols, values)
    }

    /// Single-column factor from a nonnegative vector.
    pub fn from_column(v: &[f64]) -> Result<Self> {
        FactorMatrix::new(v.len(), 1, v.to_vec())
    }

    /// Assemble from columns (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::invalid("factor matrix must have at least 1 column"));
        }
        let mut values = vec![0.0; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::invalid("column length mismatch"));
            }
            for i in 0..rows {
                values[i * cols + j] = col[i];
            }
        }
        FactorMatrix::new(rows, cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Gram product `U U^T` as a symmetric matrix.
    pub fn gram(&self) -> SymMatrix {
        let n = self.rows;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..self.cols {
                    s += self.get(i, k) * self.get(j, k);
                }
                values[i * n + j] = s;
                values[j * n + i] = s;
            }
        }
        SymMatrix { n, values }
    }

    /// `self * other^T` for rectangular reconstruction `A ~ P Q^T`.
    pub fn mul_transpose(&self, other: &FactorMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols {
            return Err(Error::invalid("factor column counts differ"));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let mut s = 0.0;
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(j, k);
                }
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    /// Concatenate columns of `self` and `other` (row counts must match).
    pub fn concat_columns(&self, other: &FactorMatrix) -> Result<FactorMatrix> {
        if self.rows != other.rows {
            return Err(Error::invalid("row count mismatch in column concat"));
        }
        let cols = self.cols + other.cols;
        let mut values = vec![0.0; self.rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                values[i * cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                values[i * cols + self.cols + j] = other.get(i, j);
            }
        }
        FactorMatrix::new(self.rows, cols, values)
    }

    /// Extract a row range as a new factor (used to split the nonsymmetric
    /// embedding into P and Q).
    pub fn row_slice(&self, start: usize, end: usize) -> Result<FactorMatrix> {
        if start >= end || end > self.rows {
            return Err(Error::invalid("row slice out of range"));
        }
        let rows = end - start;
        let values = self.values[start * self.cols..end * self.cols].to_vec();
        FactorMatrix::new(rows, self.cols, values)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            values: self.values.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Hadamard operations
// ---------------------------------------------------------------------------

/// Entrywise exponential `exp_H(X)`, the change of variables that maps the
/// PSD cone into the completely positive cone.
///
/// Arguments are range-guarded: any `|X_ij| > 700` is rejected before
/// `exp` can overflow.
pub fn hadamard_exp(x: &SymMatrix) -> Result<SymMatrix> {
    if x.max_abs_entry() > EXP_ARG_LIMIT {
        return Err(Error::Range(format!(
            "entry magnitude {:.3e} exceeds the exp range guard ({EXP_ARG_LIMIT})",
            x.max_abs_entry()
        )));
    }
    Ok(x.map(f64::exp))
}

/// Entrywise natural log of a strictly positive symmetric matrix.
pub fn hadamard_ln(x: &SymMatrix) -> Result<SymMatrix> {
    if x.values().iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain(
            "entrywise log requires strictly positive entries".into(),
        ));
    }
    Ok(x.map(f64::ln))
}

/// Combine two nonnegative factors so that the Gram matrices multiply
/// entrywise: `(U U^T) o (V V^T) = W W^T` where `W = hadamard_combine(U, V)`.
///
/// Column `(i, j)` of the result is `u_i o v_j`; columns are ordered with
/// the `U` index outermost: `(u_1 o v_1, u_1 o v_2, ..., u_k o v_l)`.
pub fn hadamard_combine(u: &FactorMatrix, v: &FactorMatrix) -> Result<FactorMatrix> {
    if u.rows() != v.rows() {
        return Err(Error::invalid(format!(
            "row count mismatch: {} vs {}",
            u.rows(),
            v.rows()
        )));
    }
    let n = u.rows();
    let cols = u.cols() * v.cols();
    let mut values = vec![0.0; n * cols];
    for r in 0..n {
        for i in 0..u.cols() {
            let ui = u.get(r, i);
            for j in 0..v.cols() {
                values[r * cols + i * v.cols() + j] = ui * v.get(r, j);
            }
        }
    }
    FactorMatrix::new(n, cols, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_symmetrizes_small_asymmetry() {
        let m = SymMatrix::from_flat(2, vec![1.0, 2.0 + 1e-10, 2.0, 3.0]).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn constructor_rejects_large_asymmetry() {
        let err = SymMatrix::from_flat(2, vec![1.0, 2.0, 5.0, 3.0]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn constructor_rejects_nan() {
        let err = SymMatrix::from_flat(2, vec![1.0, f64::NAN, f64::NAN, 3.0]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hadamard_exp_of_zero_is_ones() {
        let x = SymMatrix::zeros(3);
        let e = hadamard_exp(&x).unwrap();
        assert!(e.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn hadamard_exp_diagonal() {
        let x = SymMatrix::diag(&[1.0, 1.0]).unwrap();
        let e = hadamard_exp(&x).unwrap();
        let ee = std::f64::consts::E;
        assert!((e.get(0, 0) - ee).abs() < 1e-15);
        assert!((e.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((e.get(1, 1) - ee).abs() < 1e-15);
    }

    #[test]
    fn hadamard_exp_inverts_ln() {
        let a = SymMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 3.0]]).unwrap();
        let x = hadamard_ln(&a).unwrap();
        let back = hadamard_exp(&x).unwrap();
        assert!(back.dist(&a) < 1e-14);
    }

    #[test]
    fn hadamard_exp_range_guard() {
        let x = SymMatrix::diag(&[701.0]).unwrap();
        assert!(matches!(hadamard_exp(&x), Err(Error::Range(_))));
    }

    #[test]
    fn combine_ones_is_neutral() {
        let u = FactorMatrix::new(3, 1, vec![1.0; 3]).unwrap();
        let w = hadamard_combine(&u, &u).unwrap();
        assert_eq!(w.cols(), 1);
        assert!(w.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn combine_column_ordering() {
        // u has 2 cols, v has 3: expect 6 columns ordered u1v1, u1v2, u1v3, u2v1, ...
        let u = FactorMatrix::new(1, 2, vec![2.0, 3.0]).unwrap();
        let v = FactorMatrix::new(1, 3, vec![5.0, 7.0, 11.0]).unwrap();
        let w = hadamard_combine(&u, &v).unwrap();
        assert_eq!(w.cols(), 6);
        assert_eq!(w.values(), &[10.0, 14.0, 22.0, 15.0, 21.0, 33.0]);
    }

    #[test]
    fn combine_row_mismatch_rejected() {
        let u = FactorMatrix::new(2, 1, vec![1.0, 1.0]).unwrap();
        let v = FactorMatrix::new(3, 1, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            hadamard_combine(&u, &v),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn combine_gram_identity_random() {
        // (U U^T) o (V V^T) == W W^T for random nonnegative inputs
        let mut rng = crate::rng::SplitMix64::new(11);
        for _ in 0..20 {
            let u = FactorMatrix::new(4, 2, (0..8).map(|_| rng.next_f64()).collect()).unwrap();
            let v = FactorMatrix::new(4, 2, (0..8).map(|_| rng.next_f64()).collect()).unwrap();
            let w = hadamard_combine(&u, &v).unwrap();
            let gu = u.gram();
            let gv = v.gram();
            let gw = w.gram();
            let had = gu.zip_with(&gv, |a, b| a * b).unwrap();
            let scale = had.frob_norm().max(1e-30);
            assert!(gw.dist(&had) / scale < 1e-10);
        }
    }

    #[test]
    fn factor_rejects_negative_entries() {
        assert!(FactorMatrix::new(1, 1, vec![-0.5]).is_err());
        assert!(FactorMatrix::from_clipped(1, 1, vec![-1e-15], 1e-12).is_ok());
        assert!(FactorMatrix::from_clipped(1, 1, vec![-1e-3], 1e-12).is_err());
    }

    #[test]
    fn gram_and_mul_transpose_agree() {
        let u = FactorMatrix::new(3, 2, vec![1.0, 2.0, 0.5, 0.0, 3.0, 1.0]).unwrap();
        let g = u.gram();
        let d = u.mul_transpose(&u).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.get(i, j) - d.get(i, j)).abs() < 1e-15);
            }
        }
    }
}
