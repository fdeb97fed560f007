//! Dense linear algebra for the equilibrium systems.

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `matrix · x = rhs` with a square `matrix` (n×n) and `rhs` (n×k).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: DenseMatrix,
    pub rhs: DenseMatrix,
}

/// Pivots below this fraction of the largest matrix entry count as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Accepted solutions satisfy `‖Ax − b‖∞ ≤ RESIDUAL_TOLERANCE · (1 + ‖b‖∞)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Gaussian elimination with partial pivoting.
pub fn solve_dense(sys: &LinearSystem) -> Result<DenseMatrix> {
    let n = sys.matrix.rows();
    if sys.matrix.cols() != n || sys.rhs.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{}, rhs {}x{}",
            sys.matrix.rows(),
            sys.matrix.cols(),
            sys.rhs.rows(),
            sys.rhs.cols()
        )));
    }
    let k = sys.rhs.cols();
    let mut a = sys.matrix.clone();
    let mut b = sys.rhs.clone();
    let threshold = PIVOT_TOLERANCE * a.max_abs();

    for col in 0..n {
        let (pivot_row, pivot) =
            (col..n)
                .map(|r| (r, a[(r, col)].abs()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(pivot > threshold) {
            return Err(Error::SingularSystem(format!(
                "no pivot above {threshold:e} in column {col}"
            )));
        }
        a.swap_rows(col, pivot_row);
        b.swap_rows(col, pivot_row);
        let diag = a[(col, col)];
        for r in col + 1..n {
            let factor = a[(r, col)] / diag;
            if factor == 0.0 {
                continue;
            }
            a[(r, col)] = 0.0;
            for c in col + 1..n {
                a[(r, c)] -= factor * a[(col, c)];
            }
            for c in 0..k {
                b[(r, c)] -= factor * b[(col, c)];
            }
        }
    }

    let mut x = DenseMatrix::zeros(n, k);
    for c in 0..k {
        for r in (0..n).rev() {
            let mut acc = b[(r, c)];
            for j in r + 1..n {
                acc -= a[(r, j)] * x[(j, c)];
            }
            x[(r, c)] = acc / a[(r, r)];
        }
    }

    let residual = residual_norm(sys, &x)?;
    let bound = RESIDUAL_TOLERANCE * (1.0 + sys.rhs.max_abs());
    if !(residual <= bound) {
        return Err(Error::SingularSystem(format!(
            "ill-conditioned: residual {residual:e} exceeds {bound:e}"
        )));
    }
    Ok(x)
}

/// `‖A·x − b‖∞`.
pub fn residual_norm(sys: &LinearSystem, x: &DenseMatrix) -> Result<f64> {
    let ax = sys.matrix.mul(x)?;
    let mut worst: f64 = 0.0;
    for i in 0..ax.rows() {
        for j in 0..ax.cols() {
            worst = worst.max((ax[(i, j)] - sys.rhs[(i, j)]).abs());
        }
    }
    Ok(worst)
}
