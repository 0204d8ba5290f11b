//! Random states and unitaries for tests and sanity searches.

use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{c, ComplexMatrix, C64};

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= ph;
        }
    }
    q
}

/// Haar-random pure state as a column vector.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let v = ginibre(dim, 1, rng);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Random full-rank density matrix from the Hilbert-Schmidt ensemble.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}
