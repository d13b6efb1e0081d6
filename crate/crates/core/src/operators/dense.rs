use super::LinearOperator;
use crate::error::{Error, Result};

/// Default cap on `rows · cols` for [`materialize`].
pub const DEFAULT_MATERIALIZE_CAP: usize = 1 << 24;

/// Row-major dense matrix. Mostly a test oracle, but it is also a
/// perfectly good (small) operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("dense matrix needs positive dimensions"));
        }
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::invalid(format!(
                "{rows}x{cols} matrix given {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.get(r, c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (out, b) in data[r * other.cols..(r + 1) * other.cols].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        DenseMatrix::new(self.rows, other.cols, data)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }
}

impl LinearOperator for DenseMatrix {
    fn in_dim(&self) -> usize {
        self.cols
    }

    fn out_dim(&self) -> usize {
        self.rows
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *out = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        x.fill(0.0);
        for (r, &yr) in y.iter().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for (out, a) in x.iter_mut().zip(row) {
                *out += a * yr;
            }
        }
    }
}

/// Dense matrix whose column `j` is `op.forward(e_j)`.
pub fn materialize(op: &dyn LinearOperator) -> Result<DenseMatrix> {
    materialize_with_cap(op, DEFAULT_MATERIALIZE_CAP)
}

pub fn materialize_with_cap(op: &dyn LinearOperator, cap: usize) -> Result<DenseMatrix> {
    let (rows, cols) = (op.out_dim(), op.in_dim());
    match rows.checked_mul(cols) {
        Some(n) if n <= cap => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "materializing a {rows}x{cols} operator exceeds the cap of {cap} entries"
            )))
        }
    }
    let mut data = vec![0.0; rows * cols];
    let mut basis = vec![0.0; cols];
    let mut column = vec![0.0; rows];
    for j in 0..cols {
        basis[j] = 1.0;
        op.forward_into(&basis, &mut column);
        basis[j] = 0.0;
        for (r, v) in column.iter().enumerate() {
            data[r * cols + j] = *v;
        }
    }
    DenseMatrix::new(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{BlurOperator, Boundary, HaarSynthesis, Identity};

    #[test]
    fn identity_materializes_to_identity() {
        assert_eq!(materialize(&Identity::new(3)).unwrap(), DenseMatrix::identity(3));
    }

    #[test]
    fn unit_blur_materializes_to_identity() {
        let op = BlurOperator::new(3, 3, 1, Boundary::ZeroPad).unwrap();
        assert_eq!(materialize(&op).unwrap(), DenseMatrix::identity(9));
    }

    #[test]
    fn haar_synthesis_matrix_is_orthogonal() {
        let w = materialize(&HaarSynthesis::new(4, 4, 1).unwrap()).unwrap();
        let wtw = w.transpose().matmul(&w).unwrap();
        assert!(wtw.max_abs_diff(&DenseMatrix::identity(16)) < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let err = materialize_with_cap(&Identity::new(10), 99).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
        assert!(materialize_with_cap(&Identity::new(10), 100).is_ok());
    }

    #[test]
    fn dense_forward_and_adjoint_match_transpose() {
        let m = DenseMatrix::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.forward(&[1.0, 0.0, -1.0]).unwrap(), vec![-2.0, -2.0]);
        assert_eq!(m.adjoint(&[1.0, 1.0]).unwrap(), vec![5.0, 7.0, 9.0]);
        assert_eq!(materialize(&m).unwrap(), m);
        assert!(DenseMatrix::new(2, 2, vec![1.0]).is_err());
    }
}
