//! Dense complex matrix helpers shared by the operator modules.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of `a - b`. Shapes must agree.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "matrix shapes differ");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `max |A* A - I|`, the isometry defect of `A`.
pub fn isometry_defect(a: &CMatrix) -> f64 {
    max_diff(&(a.adjoint() * a), &identity(a.ncols()))
}

/// `max |A - A*|` for a square matrix.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_diff(a, &a.adjoint())
}

/// Smallest eigenvalue of the Hermitian part `(A + A*)/2`.
pub fn min_hermitian_eigenvalue(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    let h = (a + a.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `exp(2πi k / n)`, reduced before evaluating for accuracy.
pub fn root_of_unity(k: u64, n: u64) -> C64 {
    if n <= 1 {
        return ONE;
    }
    let k = k % n;
    if k == 0 {
        return ONE;
    }
    // Exact values at the quarter turns.
    if 4 * k == n {
        return C64::new(0.0, 1.0);
    }
    if 2 * k == n {
        return C64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * n {
        return C64::new(0.0, -1.0);
    }
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex matrix in the JSON layout `{"rows","cols","entries":[[re,im],...]}`,
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl DenseMatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        if self.entries.len() != self.rows * self.cols {
            return Err(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            ));
        }
        Ok(CMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.entries.iter().map(|[re, im]| C64::new(*re, *im)),
        ))
    }
}
