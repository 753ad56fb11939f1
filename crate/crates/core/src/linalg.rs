//! Small dense complex linear-algebra helpers shared by the other modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Real eigenvalues of a Hermitian matrix, in ascending order.
///
/// 1x1 and 2x2 inputs take a closed-form path; they dominate the optimizer's
/// inner loop.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let r = (half * half + b.norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(|a, b| a.total_cmp(b));
            v
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix: `(eigenvalues, eigenvectors as columns)`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `exp(i H)` for Hermitian `H`, through its spectral decomposition.
pub fn unitary_exp(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let dim = h.nrows();
    let mut scaled = vecs.clone();
    for (j, lambda) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, *lambda);
        for i in 0..dim {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * vecs.adjoint()
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
