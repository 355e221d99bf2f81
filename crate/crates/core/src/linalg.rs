//! Small dense matrices with LU and Cholesky solves.
//!
//! The collocation systems in this crate are tiny (N <= a few dozen), so a
//! plain row-major matrix with partial-pivoting LU is all that is needed.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("matrix is not positive definite (failed at pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has length {len}")]
    DimensionMismatch { rows: usize, cols: usize, len: usize },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F> {
    data: Vec<F>,
    rows: usize,
    cols: usize,
}

impl<F: Real> DenseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: vec![F::zero(); rows * cols],
            rows,
            cols,
        }
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { data, rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                len: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> F {
        let mut best = F::zero();
        for j in 0..self.cols {
            let mut sum = F::zero();
            for i in 0..self.rows {
                sum += self[(i, j)].abs();
            }
            if sum > best {
                best = sum;
            }
        }
        best
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<LuFactor<F>, LinalgError> {
        LuFactor::new(self)
    }

    /// Cholesky factorization of a symmetric positive definite matrix.
    pub fn cholesky(&self) -> Result<CholeskyFactor<F>, LinalgError> {
        CholeskyFactor::new(self)
    }
}

impl<F> std::ops::Index<(usize, usize)> for DenseMatrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for DenseMatrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// LU decomposition with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct LuFactor<F> {
    lu: DenseMatrix<F>,
    perm: Vec<usize>,
}

impl<F: Real> LuFactor<F> {
    fn new(a: &DenseMatrix<F>) -> Result<Self, LinalgError> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[(col, col)].abs();
            for r in col + 1..n {
                let v = lu[(r, col)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val == F::zero() || !pivot_val.is_finite() {
                return Err(LinalgError::Singular { pivot: col });
            }
            if pivot_row != col {
                perm.swap(col, pivot_row);
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
            }
            let inv = F::one() / lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] * inv;
                lu[(r, col)] = factor;
                for j in col + 1..n {
                    let sub = factor * lu[(col, j)];
                    lu[(r, j)] = lu[(r, j)] - sub;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, LinalgError> {
        let n = self.lu.nrows();
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                rows: n,
                cols: n,
                len: b.len(),
            });
        }
        let mut x: Vec<F> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor<F> {
    lower: DenseMatrix<F>,
}

impl<F: Real> CholeskyFactor<F> {
    fn new(a: &DenseMatrix<F>) -> Result<Self, LinalgError> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "Cholesky requires a square matrix");
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[(i, j)];
                for k in 0..j {
                    sum = sum - l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(sum > F::zero()) || !sum.is_finite() {
                        return Err(LinalgError::NotPositiveDefinite { pivot: i });
                    }
                    l[(i, j)] = sum.sqrt();
                } else {
                    l[(i, j)] = sum / l[(j, j)];
                }
            }
        }
        Ok(Self { lower: l })
    }

    pub fn lower(&self) -> &DenseMatrix<F> {
        &self.lower
    }

    /// Solves `A x = b` using the factorization.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, LinalgError> {
        let n = self.lower.nrows();
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                rows: n,
                cols: n,
                len: b.len(),
            });
        }
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc = acc - self.lower[(i, j)] * y[j];
            }
            y[i] = acc / self.lower[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc = acc - self.lower[(j, i)] * y[j];
            }
            y[i] = acc / self.lower[(i, i)];
        }
        Ok(y)
    }
}

/// 1-norm condition number computed as `||A||_1 * ||A^-1||_1`, with the
/// inverse applied column by column through the supplied solver. Exact (not
/// an estimate) at O(n^3) cost, which is fine at the sizes used here.
pub fn condition_one_norm<F: Real>(
    a: &DenseMatrix<F>,
    solve: impl Fn(&[F]) -> Result<Vec<F>, LinalgError>,
) -> Result<F, LinalgError> {
    let n = a.nrows();
    let mut inv_norm = F::zero();
    let mut unit = vec![F::zero(); n];
    for j in 0..n {
        unit[j] = F::one();
        let col = solve(&unit)?;
        unit[j] = F::zero();
        let sum = col.iter().fold(F::zero(), |acc, &v| acc + v.abs());
        if sum > inv_norm {
            inv_norm = sum;
        }
    }
    Ok(a.norm_one() * inv_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = DenseMatrix::<f64>::from_fn(3, 3, |i, j| {
            [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]][i][j]
        });
        let b = [1.0, 2.0, 3.0];
        let x = a.lu().unwrap().solve(&b).unwrap();
        let back = a.mul_vec(&x).unwrap();
        for (got, want) in back.iter().zip(b) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_rejects_singular() {
        let a = DenseMatrix::<f64>::from_fn(2, 2, |i, j| [[1.0, 2.0], [2.0, 4.0]][i][j]);
        assert!(matches!(a.lu(), Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn lu_pivots_on_zero_diagonal() {
        let a = DenseMatrix::<f64>::from_fn(2, 2, |i, j| [[0.0, 1.0], [1.0, 0.0]][i][j]);
        let x = a.lu().unwrap().solve(&[3.0, 4.0]).unwrap();
        assert_eq!(x, vec![4.0, 3.0]);
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = DenseMatrix::<f64>::from_fn(3, 3, |i, j| {
            [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]][i][j]
        });
        let b = [1.0, -2.0, 0.5];
        let x = a.cholesky().unwrap().solve(&b).unwrap();
        let back = a.mul_vec(&x).unwrap();
        for (got, want) in back.iter().zip(b) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = DenseMatrix::<f64>::from_fn(2, 2, |i, j| [[1.0, 2.0], [2.0, 1.0]][i][j]);
        assert!(matches!(
            a.cholesky(),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn condition_of_identity_is_one() {
        let a = DenseMatrix::<f64>::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.0 });
        let lu = a.lu().unwrap();
        let cond = condition_one_norm(&a, |b| lu.solve(b)).unwrap();
        assert!((cond - 1.0).abs() < 1e-14);
    }

    #[test]
    fn condition_detects_scaling() {
        let a = DenseMatrix::<f64>::from_fn(2, 2, |i, j| if i == j { [1e6, 1e-6][i] } else { 0.0 });
        let lu = a.lu().unwrap();
        let cond = condition_one_norm(&a, |b| lu.solve(b)).unwrap();
        assert!((cond - 1e12).abs() / 1e12 < 1e-12);
    }
}
