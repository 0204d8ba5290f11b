//! Floating-gate CNOT.
//!
//! Energies are in units of `J12 gamma_x^2`, so a point is fixed by the Zeeman
//! ratio `R = E_z / (J12 gamma_x^2)` and the anisotropy `g = gamma_y / gamma_x`:
//!
//! ```text
//! H  = R (Z1 + Z2) + (X1 + g Y1)(X2 + g Y2)
//! H' = R (Z1 + Z2) + ((1 + g^2)/2)(X1 X2 + Y1 Y2)
//! ```
//!
//! `H'` keeps only the flip-flop part that survives a large Zeeman splitting.
//! Both `sqrt(XX)` sequences are exact for `H'`; evaluating them with `H`
//! yields a unitary that misses `sqrt(XX)` by a small amount.

use std::f64::consts::PI;

use crate::channel::linalg::{
    c, hadamard, hermitian_exponential, identity, kron, pauli_x, pauli_y, pauli_z, ComplexMatrix,
};
use crate::channel::KrausChannel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Two evolution factors with Zeeman echoes.
    V1,
    /// Four half-length evolution factors.
    V2,
}

/// Which Hamiltonian drives the evolution factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Full,
    FlipFlop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatingGateParams {
    pub r: f64,
    pub gamma_ratio: f64,
    pub variant: Variant,
}

impl FloatingGateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::InvalidParameter {
                name: "R",
                value: self.r,
                reason: "Zeeman ratio must be positive and finite",
            });
        }
        if !(self.gamma_ratio >= 0.0) || !self.gamma_ratio.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma_ratio",
                value: self.gamma_ratio,
                reason: "anisotropy ratio must be non-negative and finite",
            });
        }
        Ok(())
    }

    /// `pi / (4 J12 (gamma_x^2 + gamma_y^2))` in the normalized units.
    pub fn application_time(&self) -> f64 {
        PI / (4.0 * (1.0 + self.gamma_ratio * self.gamma_ratio))
    }
}

/// Spin-orbit strengths and crystal angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoiInput {
    pub alpha_r: f64,
    pub alpha_d: f64,
    pub angle: f64,
}

/// Effective spin-orbit vector `(gamma_x, gamma_y, gamma_z)`.
pub fn soi_vector(s: &SoiInput) -> (f64, f64, f64) {
    (
        s.alpha_d * (2.0 * s.angle).cos(),
        -s.alpha_r - s.alpha_d * (2.0 * s.angle).sin(),
        0.0,
    )
}

fn zeeman(r: f64) -> ComplexMatrix {
    (kron(&pauli_z(), &identity(2)) + kron(&identity(2), &pauli_z())) * c(r, 0.0)
}

/// Full and flip-flop Hamiltonians `(H, H')`.
pub fn floating_hamiltonians(params: &FloatingGateParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    params.validate()?;
    let g = params.gamma_ratio;
    let a = pauli_x() + pauli_y() * c(g, 0.0);
    let h = zeeman(params.r) + kron(&a, &a);
    let flip_flop = (kron(&pauli_x(), &pauli_x()) + kron(&pauli_y(), &pauli_y()))
        * c((1.0 + g * g) / 2.0, 0.0);
    let h_prime = zeeman(params.r) + flip_flop;
    Ok((h, h_prime))
}

/// One factor of a `sqrt(XX)` sequence, in time order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceStep {
    /// `exp(-i H duration)`.
    Evolve { duration: f64 },
    /// `exp(+i R (Z1 + Z2) duration)`, undoing the Zeeman phase.
    ZeemanEcho { duration: f64 },
    /// `X` on the first qubit, the second qubit, or both.
    Flip { first: bool, second: bool },
}

/// The sequence of factors for a variant, in time order.
pub fn floating_sequence(params: &FloatingGateParams) -> Vec<SequenceStep> {
    let t = params.application_time();
    use SequenceStep::*;
    match params.variant {
        Variant::V1 => vec![
            Flip { first: true, second: false },
            Evolve { duration: t },
            ZeemanEcho { duration: t },
            Flip { first: true, second: false },
            Evolve { duration: t },
            ZeemanEcho { duration: t },
        ],
        Variant::V2 => vec![
            Evolve { duration: t / 2.0 },
            Flip { first: true, second: true },
            Evolve { duration: t / 2.0 },
            Flip { first: false, second: true },
            Evolve { duration: t / 2.0 },
            Flip { first: true, second: true },
            Evolve { duration: t / 2.0 },
            Flip { first: false, second: true },
        ],
    }
}

/// `sqrt(XX)` sequence driven by the chosen Hamiltonian.
pub fn floating_sqrt_xx_with(params: &FloatingGateParams, coupling: Coupling) -> Result<ComplexMatrix> {
    let (h, h_prime) = floating_hamiltonians(params)?;
    let drive = match coupling {
        Coupling::Full => h,
        Coupling::FlipFlop => h_prime,
    };
    let x1 = kron(&pauli_x(), &identity(2));
    let x2 = kron(&identity(2), &pauli_x());
    let mut u = identity(4);
    for step in floating_sequence(params) {
        let factor = match step {
            SequenceStep::Evolve { duration } => hermitian_exponential(&drive, duration)?,
            SequenceStep::ZeemanEcho { duration } => {
                hermitian_exponential(&zeeman(params.r), -duration)?
            }
            SequenceStep::Flip { first, second } => match (first, second) {
                (true, true) => &x1 * &x2,
                (true, false) => x1.clone(),
                (false, true) => x2.clone(),
                (false, false) => identity(4),
            },
        };
        u = factor * u;
    }
    Ok(u)
}

/// `sqrt(XX)` sequence evaluated with the full Hamiltonian.
pub fn floating_sqrt_xx(params: &FloatingGateParams) -> Result<ComplexMatrix> {
    floating_sqrt_xx_with(params, Coupling::Full)
}

/// `(sqrt(Z) kron sqrt(X)) H1 sqrt(XX) H1` with the quarter-turn roots
/// `exp(+i pi/4 Z)` and `exp(+i pi/4 X)`.
pub fn floating_cnot_unitary(params: &FloatingGateParams, coupling: Coupling) -> Result<ComplexMatrix> {
    let sxx = floating_sqrt_xx_with(params, coupling)?;
    let root_z = hermitian_exponential(&pauli_z(), -PI / 4.0)?;
    let root_x = hermitian_exponential(&pauli_x(), -PI / 4.0)?;
    let h1 = kron(&hadamard(), &identity(2));
    Ok(kron(&root_z, &root_x) * &h1 * sxx * &h1)
}

pub fn floating_cnot(params: &FloatingGateParams) -> Result<KrausChannel> {
    KrausChannel::unitary(floating_cnot_unitary(params, Coupling::Full)?)
}
