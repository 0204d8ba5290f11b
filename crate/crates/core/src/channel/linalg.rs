//! Small dense complex linear algebra on top of `nalgebra`.
//!
//! Superoperators use column stacking: `vec(rho)[a + d*b] = rho[(a, b)]`, so
//! `vec(A rho B) = (B^T kron A) vec(rho)` and a unitary acts as `conj(U) kron U`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// Build a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |r, k| c(entries[r * cols + k], 0.0))
}

pub fn pauli_x() -> ComplexMatrix {
    from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    from_rows(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    from_real_rows(2, 2, &[s, s, s, -s])
}

/// Standard CNOT with the first tensor factor as control.
pub fn cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = c(1.0, 0.0);
    m[(2, 3)] = c(1.0, 0.0);
    m[(3, 2)] = c(1.0, 0.0);
    m
}

pub fn swap() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 2)] = c(1.0, 0.0);
    m[(2, 1)] = c(1.0, 0.0);
    m[(3, 3)] = c(1.0, 0.0);
    m
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitary_defect(u: &ComplexMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

pub fn is_unitary(u: &ComplexMatrix) -> bool {
    u.is_square() && unitary_defect(u) <= UNITARY_TOL
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let max_asymmetry = hermitian_defect(h);
    if max_asymmetry > HERMITIAN_TOL {
        return Err(Error::NonHermitian { max_asymmetry });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and the unitary
/// whose columns are the eigenvectors.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Apply a scalar function to a Hermitian matrix through its spectrum.
pub fn hermitian_function(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(h)?;
    let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| f(v)),
    ));
    Ok(&vecs * diag * vecs.adjoint())
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn hermitian_exponential(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    hermitian_function(h, |e| C64::from_polar(1.0, -e * t))
}

/// Principal square root of a positive semidefinite matrix; tiny negative
/// eigenvalues are treated as zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_function(m, |e| c(e.max(0.0).sqrt(), 0.0))
}

/// Rotate the global phase so the first entry (row-major) with modulus above
/// `1e-12` is real and positive.
pub fn strip_global_phase(m: &ComplexMatrix) -> ComplexMatrix {
    for r in 0..m.nrows() {
        for k in 0..m.ncols() {
            let z = m[(r, k)];
            if z.norm() > 1e-12 {
                let phase = z.conj() / z.norm();
                return m * phase;
            }
        }
    }
    m.clone()
}

/// Distance between two operators after global-phase normalization.
pub fn phase_insensitive_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs_diff(&strip_global_phase(a), &strip_global_phase(b))
}

pub fn unitary_superoperator(u: &ComplexMatrix) -> ComplexMatrix {
    kron(&u.map(|z| z.conj()), u)
}

pub fn vectorize(m: &ComplexMatrix) -> ComplexMatrix {
    // nalgebra storage is column-major, which is exactly column stacking.
    ComplexMatrix::from_column_slice(m.len(), 1, m.as_slice())
}

pub fn unvectorize(v: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    assert_eq!(v.len(), dim * dim);
    ComplexMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// Apply a column-stacking superoperator to an operator.
pub fn apply_superoperator(s: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    unvectorize(&(s * vectorize(rho)), rho.nrows())
}
