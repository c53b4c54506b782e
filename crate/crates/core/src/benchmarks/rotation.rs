use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Orthogonality tolerance on `max |RᵀR - I|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// A D×D orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix(DMatrix<f64>);

impl RotationMatrix {
    /// Wraps `m`, rejecting non-square or non-orthogonal input.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
                context: "rotation matrix columns",
            });
        }
        let r = Self(m);
        let err = r.orthogonality_error();
        if !(err < ORTHOGONALITY_TOL) {
            return Err(Error::config(
                "rotation",
                format!("matrix is not orthogonal (max |RᵀR - I| = {err:e})"),
            ));
        }
        Ok(r)
    }

    pub fn identity(dimension: usize) -> Self {
        Self(DMatrix::identity(dimension, dimension))
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dimension();
        let gram = self.0.transpose() * &self.0;
        (gram - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// `out = R · v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.dimension();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = (0..n).map(|j| self.0[(i, j)] * v[j]).sum();
        }
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)]).collect()).collect()
    }
}

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with
/// the signs of `diag(R)` folded into `Q` so the factorization is unique.
pub fn random_rotation(dimension: usize, rng: &mut RngStream) -> RotationMatrix {
    assert!(dimension >= 1, "rotation dimension must be positive");
    let g = DMatrix::from_fn(dimension, dimension, |_, _| rng.gaussian());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dimension {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    RotationMatrix(q)
}
