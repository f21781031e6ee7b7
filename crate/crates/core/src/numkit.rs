//! Minimal dense real linear algebra: symmetric eigenvalues via cyclic
//! Jacobi rotations, LU solves with partial pivoting, matrix products.
//!
//! Only what the trajectory-matrix route and the Newton refinement need;
//! no complex arithmetic, no sparse formats, no nonsymmetric eigensolvers.

use crate::error::{Error, Result};
use crate::real::{fp, Real};

/// Sweep budget for the Jacobi eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 64;

/// Relative pivot floor below which elimination reports a singular matrix.
const PIVOT_FLOOR: f64 = 1e-13;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> Matrix<F> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Square diagonal matrix from its diagonal entries.
    pub fn from_diag(diag: &[F]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds an `rows x cols` matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from nested row slices; rows must have equal length.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major view of the entries.
    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == F::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.set(i, j, out.get(i, j) + a * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// Entrywise difference `self - rhs`.
    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |acc, v| acc.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest magnitude among off-diagonal entries of a square matrix,
    /// accumulated as a Frobenius norm.
    fn off_diag_frobenius(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let v = self.get(i, j);
                    acc = acc + v * v;
                }
            }
        }
        acc.sqrt()
    }
}

/// Eigenvalues of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct EigenResult<F: Real = f64> {
    /// Eigenvalues sorted in descending order.
    pub values: Vec<F>,
    /// Number of Jacobi sweeps performed.
    pub iterations: usize,
}

/// Computes all eigenvalues of a symmetric matrix with cyclic Jacobi
/// rotations.
///
/// The input must be square and symmetric to within `tol * max |entry|`.
/// Iteration stops once the off-diagonal Frobenius norm drops below
/// `tol` times the Frobenius norm of the input; the sweep budget is
/// [`MAX_JACOBI_SWEEPS`]. Eigenvalues come back sorted descending, and the
/// computation is deterministic for identical input.
pub fn sym_eigenvalues<F: Real>(m: &Matrix<F>, tol: F) -> Result<EigenResult<F>> {
    if !m.is_square() || m.rows == 0 {
        return Err(Error::InvalidInput(format!(
            "eigensolver needs a nonempty square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if !(tol > F::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if !m.all_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.rows;
    let scale = m.max_abs();
    for i in 0..n {
        for j in (i + 1)..n {
            if (m.get(i, j) - m.get(j, i)).abs() > tol * scale {
                return Err(Error::InvalidInput(format!(
                    "matrix asymmetric beyond tolerance at ({i},{j})"
                )));
            }
        }
    }

    // Work on the symmetrized copy so the tolerated asymmetry cannot bias
    // the rotations.
    let mut a = Matrix::from_fn(n, n, |i, j| (m.get(i, j) + m.get(j, i)) / fp::<F>(2.0));
    let threshold = tol * a.frobenius();
    let half = fp::<F>(0.5);

    let mut sweeps = 0usize;
    while a.off_diag_frobenius() > threshold {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NonConvergence(format!(
                "Jacobi eigensolver: off-diagonal norm {:e} above threshold {:e} after {} sweeps",
                a.off_diag_frobenius().to_f64().unwrap_or(f64::NAN),
                threshold.to_f64().unwrap_or(f64::NAN),
                MAX_JACOBI_SWEEPS
            )));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == F::zero() {
                    continue;
                }
                let tau = half * (a.get(q, q) - a.get(p, p)) / apq;
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    F::one() / (tau - (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = t * c;
                // A <- J^T A J with the rotation in the (p, q) plane.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, F::zero());
                a.set(q, p, F::zero());
            }
        }
        sweeps += 1;
    }

    let mut values: Vec<F> = (0..n).map(|i| a.get(i, i)).collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(EigenResult {
        values,
        iterations: sweeps,
    })
}

/// LU decomposition with partial pivoting; `lu` is overwritten in place and
/// `perm` records row swaps as they are applied to any right-hand side.
fn lu_factor<F: Real>(lu: &mut Matrix<F>, perm: &mut Vec<usize>) -> Result<F> {
    let n = lu.rows;
    let floor = fp::<F>(PIVOT_FLOOR) * lu.max_abs();
    let mut sign = F::one();
    perm.clear();
    perm.extend(0..n);
    for k in 0..n {
        let mut piv = k;
        let mut best = lu.get(k, k).abs();
        for r in (k + 1)..n {
            let v = lu.get(r, k).abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if !(best > floor) {
            return Err(Error::Singular(format!(
                "pivot {:e} at column {k} below floor {:e}",
                best.to_f64().unwrap_or(f64::NAN),
                floor.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(piv, j));
                lu.set(piv, j, tmp);
            }
            perm.swap(k, piv);
            sign = -sign;
        }
        let d = lu.get(k, k);
        for r in (k + 1)..n {
            let f = lu.get(r, k) / d;
            lu.set(r, k, f);
            for j in (k + 1)..n {
                lu.set(r, j, lu.get(r, j) - f * lu.get(k, j));
            }
        }
    }
    Ok(sign)
}

/// Solves `a * X = b` by LU decomposition with partial pivoting.
///
/// `b` may have any number of columns. Pivots smaller than
/// `1e-13 * max |a|` abort with a singular-matrix error.
pub fn solve_linear<F: Real>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    if !a.is_square() || a.rows == 0 {
        return Err(Error::InvalidInput(format!(
            "solve needs a nonempty square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if b.rows != a.rows {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} rows, expected {}",
            b.rows, a.rows
        )));
    }
    if !a.all_finite() || !b.all_finite() {
        return Err(Error::InvalidInput("non-finite entries".into()));
    }
    let n = a.rows;
    let m = b.cols;
    let mut lu = a.clone();
    let mut perm = Vec::new();
    lu_factor(&mut lu, &mut perm)?;

    let mut x = Matrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            x.set(i, j, b.get(perm[i], j));
        }
    }
    // Forward substitution with the unit-lower factor.
    for k in 0..n {
        for r in (k + 1)..n {
            let f = lu.get(r, k);
            for j in 0..m {
                x.set(r, j, x.get(r, j) - f * x.get(k, j));
            }
        }
    }
    // Back substitution with the upper factor.
    for k in (0..n).rev() {
        let d = lu.get(k, k);
        for j in 0..m {
            let mut v = x.get(k, j);
            for c in (k + 1)..n {
                v = v - lu.get(k, c) * x.get(c, j);
            }
            x.set(k, j, v / d);
        }
    }
    Ok(x)
}

/// Determinant via LU decomposition; exactly singular input gives zero.
pub fn determinant<F: Real>(a: &Matrix<F>) -> Result<F> {
    if !a.is_square() || a.rows == 0 {
        return Err(Error::InvalidInput(format!(
            "determinant needs a nonempty square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let mut lu = a.clone();
    let mut perm = Vec::new();
    match lu_factor(&mut lu, &mut perm) {
        Ok(sign) => {
            let mut det = sign;
            for k in 0..lu.rows {
                det = det * lu.get(k, k);
            }
            Ok(det)
        }
        Err(Error::Singular(_)) => Ok(F::zero()),
        Err(e) => Err(e),
    }
}

/// Trace of a square matrix.
pub fn trace<F: Real>(a: &Matrix<F>) -> F {
    let mut t = F::zero();
    for i in 0..a.rows.min(a.cols) {
        t = t + a.get(i, i);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eigen_one_by_one_is_identity() {
        let m = Matrix::from_rows(&[vec![3.25]]).unwrap();
        let r = sym_eigenvalues(&m, 1e-12).unwrap();
        assert_eq!(r.values, vec![3.25]);
    }

    #[test]
    fn eigen_exchange_matrix() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = sym_eigenvalues(&m, 1e-12).unwrap();
        assert_close(r.values[0], 1.0, 1e-15);
        assert_close(r.values[1], -1.0, 1e-15);
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        assert!(matches!(
            sym_eigenvalues(&m, 1e-12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn eigen_rejects_rectangular() {
        let m = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(
            sym_eigenvalues(&m, 1e-12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn eigen_sum_matches_trace_on_random_symmetric() {
        let mut rng = SplitMix64::new(0x5eed_1234);
        for n in 1..=10usize {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rng.next_f64() * 2.0 - 1.0;
                    m.set(i, j, v);
                    m.set(j, i, v);
                }
            }
            let r = sym_eigenvalues(&m, 1e-12).unwrap();
            let sum: f64 = r.values.iter().sum();
            let tr = trace(&m);
            assert!(
                (sum - tr).abs() <= 1e-12 * tr.abs().max(1.0),
                "n={n}: eigenvalue sum {sum} vs trace {tr}"
            );
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let a = Matrix::identity(3);
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_diagonal() {
        let a = Matrix::from_diag(&[1.0, 2.0]);
        let b = Matrix::from_rows(&[vec![2.0], vec![2.0]]).unwrap();
        let x = solve_linear(&a, &b).unwrap();
        assert_close(x.get(0, 0), 2.0, 0.0);
        assert_close(x.get(1, 0), 1.0, 0.0);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let b = Matrix::identity(2);
        assert!(matches!(solve_linear(&a, &b), Err(Error::Singular(_))));
    }

    #[test]
    fn solve_residual_on_random_systems() {
        let mut rng = SplitMix64::new(0xabcd_ef01);
        for n in 1..=8usize {
            let a = Matrix::from_fn(n, n, |_, _| rng.next_f64() * 2.0 - 1.0);
            let b = Matrix::from_fn(n, 1, |_, _| rng.next_f64() * 2.0 - 1.0);
            let x = solve_linear(&a, &b).unwrap();
            let r = b.sub(&a.mul(&x));
            let bound = 1e-10 * a.frobenius() * x.frobenius().max(1.0);
            assert!(
                r.max_abs() <= bound,
                "n={n}: residual {} above {}",
                r.max_abs(),
                bound
            );
        }
    }

    #[test]
    fn determinant_of_permuted_diagonal() {
        let a = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert_close(determinant(&a).unwrap(), -6.0, 1e-15);
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_close(determinant(&b).unwrap(), 0.0, 1e-12);
    }
}
