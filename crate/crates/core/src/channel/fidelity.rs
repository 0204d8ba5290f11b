use rand::Rng;

use super::linalg::{c, eigh, kron, psd_sqrt, ComplexMatrix, C64};
use super::random::random_pure_state;
use super::{DensityMatrix, KrausChannel};
use crate::{Error, Result};

const PURITY_TOL: f64 = 1e-10;

/// `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, clamped to `[0, 1]`.
///
/// If either argument is pure, `|psi><psi|`, the closed form
/// `sqrt(<psi|other|psi>)` is used instead of matrix square roots.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(matrix_fidelity(&rho.to_matrix(), &sigma.to_matrix())?.clamp(0.0, 1.0))
}

fn purity(m: &ComplexMatrix) -> f64 {
    (m * m).trace().re
}

fn dominant_vector(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(m)?;
    let (idx, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok(vecs.columns(idx, 1).into_owned())
}

fn pure_overlap(psi: &ComplexMatrix, other: &ComplexMatrix) -> f64 {
    (psi.adjoint() * other * psi)[(0, 0)].re.max(0.0).sqrt()
}

fn matrix_fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if (purity(rho) - 1.0).abs() < PURITY_TOL {
        return Ok(pure_overlap(&dominant_vector(rho)?, sigma));
    }
    if (purity(sigma) - 1.0).abs() < PURITY_TOL {
        return Ok(pure_overlap(&dominant_vector(sigma)?, rho));
    }
    let s = psd_sqrt(rho)?;
    let inner = &s * sigma * &s;
    let (vals, _) = eigh(&inner)?;
    Ok(vals.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// The six single-qubit Pauli eigenstates: `+z, -z, +x, -x, +y, -y`.
pub fn pauli_eigenstates() -> [ComplexMatrix; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let col = |a: C64, b: C64| ComplexMatrix::from_column_slice(2, 1, &[a, b]);
    [
        col(c(1.0, 0.0), c(0.0, 0.0)),
        col(c(0.0, 0.0), c(1.0, 0.0)),
        col(c(s, 0.0), c(s, 0.0)),
        col(c(s, 0.0), c(-s, 0.0)),
        col(c(s, 0.0), c(0.0, s)),
        col(c(s, 0.0), c(0.0, -s)),
    ]
}

/// All `6^n` tensor products of Pauli eigenstates, as column vectors.
pub fn product_test_states(n_qubits: usize) -> Vec<ComplexMatrix> {
    let singles = pauli_eigenstates();
    let mut states = vec![ComplexMatrix::from_element(1, 1, c(1.0, 0.0))];
    for _ in 0..n_qubits {
        states = states
            .iter()
            .flat_map(|a| singles.iter().map(move |b| kron(a, b)))
            .collect();
    }
    states
}

fn output_fidelity(approx: &KrausChannel, exact: &ComplexMatrix, psi: &ComplexMatrix) -> f64 {
    let out = approx.apply(&(psi * psi.adjoint()));
    let ideal = exact * psi;
    pure_overlap(&ideal, &out).min(1.0)
}

/// One minus the worst-case output fidelity over product Pauli-eigenstate
/// inputs. Restricting the inputs makes this an upper bound on the true
/// worst-case fidelity, hence a lower bound on the worst-case infidelity.
pub fn gate_infidelity(approx: &KrausChannel, exact: &ComplexMatrix) -> f64 {
    assert_eq!(approx.dim(), exact.nrows(), "channel and gate dimensions differ");
    let n = approx.arity();
    let worst = product_test_states(n)
        .iter()
        .map(|psi| output_fidelity(approx, exact, psi))
        .fold(1.0, f64::min);
    (1.0 - worst).max(0.0)
}

/// Infidelity minimized over the product test states plus `samples` Haar
/// random pure inputs.
pub fn haar_gate_infidelity(
    approx: &KrausChannel,
    exact: &ComplexMatrix,
    samples: usize,
    rng: &mut impl Rng,
) -> f64 {
    let mut worst = 1.0 - gate_infidelity(approx, exact);
    for _ in 0..samples {
        let psi = random_pure_state(approx.dim(), rng);
        worst = worst.min(output_fidelity(approx, exact, &psi));
    }
    (1.0 - worst).max(0.0)
}
