//! Exchange-pulse CNOT.
//!
//! An integrated Heisenberg pulse `exp(-i (pi/8) s.s)` is a `sqrt(SWAP)`. Two
//! of them around a `Z` on the control and followed by opposite quarter-turn
//! `Z` rotations give a controlled phase; Hadamards on the target turn it into
//! a CNOT.
//!
//! The open-system pulse is `V(t) = exp(-(t-1) K3) U_s (1 - K2)` with `t` in
//! units of the pulse time. `K3 = -L` where `L` is the two-spin Lindbladian
//!
//! ```text
//! L(rho) = (Gamma/2) sum_k sum_a (s_a^k rho s_a^k - rho) - i [(Delta/2)(Z1 + Z2), rho]
//! ```
//!
//! (isotropic relaxation at rate `Gamma` per spin with a Zeeman phase shift
//! `Delta`). `K2` is the interaction-picture average of `K3` over the pulse,
//! scaled by [`K2_PULSE_WEIGHT`].

use std::f64::consts::PI;

use crate::channel::linalg::{
    c, eigh, hadamard, hermitian_exponential, hermitian_function, identity, kron, pauli_x,
    pauli_y, pauli_z, unitary_superoperator, ComplexMatrix, C64,
};
use crate::channel::{kraus_from_superoperator, KrausChannel, CP_TOL};
use crate::{Error, Result};

/// Weight of the pulse-averaged `K3` in the initial-slip correction `K2`.
///
/// Calibrated once so the maximum channel infidelity over the default sweep
/// domain is about `2e-2`; the relaxation-only channel is not tuned.
pub const K2_PULSE_WEIGHT: f64 = 1.0 / 6.0;

/// Parameters of the noisy exchange pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdivParams {
    /// Total time in units of the pulse duration, `t >= 1`.
    pub t: f64,
    /// Relaxation rate per pulse duration.
    pub gamma: f64,
    /// Phase shift per pulse duration.
    pub delta: f64,
    pub include_k2: bool,
}

impl LdivParams {
    pub fn ideal() -> Self {
        Self {
            t: 1.0,
            gamma: 0.0,
            delta: 0.0,
            include_k2: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t >= 1.0) || !self.t.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t",
                value: self.t,
                reason: "total time must be finite and at least one pulse duration",
            });
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                reason: "relaxation rate must be finite and non-negative",
            });
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: self.delta,
                reason: "phase shift must be finite",
            });
        }
        Ok(())
    }
}

/// `s.s = XX + YY + ZZ`.
pub(crate) fn spin_dot() -> ComplexMatrix {
    kron(&pauli_x(), &pauli_x()) + kron(&pauli_y(), &pauli_y()) + kron(&pauli_z(), &pauli_z())
}

fn exchange_generator() -> ComplexMatrix {
    spin_dot() * c(PI / 8.0, 0.0)
}

/// `exp(-i (pi/8) s.s)`; squares to SWAP exactly.
pub fn sqrt_swap() -> ComplexMatrix {
    hermitian_exponential(&exchange_generator(), 1.0).expect("generator is Hermitian")
}

fn z_quarter(sign: f64) -> ComplexMatrix {
    // exp(-i sign (pi/4) Z)
    hermitian_exponential(&pauli_z(), sign * PI / 4.0).expect("Pauli is Hermitian")
}

fn target_hadamard() -> ComplexMatrix {
    kron(&identity(2), &hadamard())
}

fn phase_correction() -> ComplexMatrix {
    kron(&z_quarter(1.0), &z_quarter(-1.0))
}

fn control_z() -> ComplexMatrix {
    kron(&pauli_z(), &identity(2))
}

/// The noiseless exchange CNOT, control on the first factor.
pub fn ldiv_ideal_cnot() -> ComplexMatrix {
    let sq = sqrt_swap();
    let h = target_hadamard();
    &h * phase_correction() * &sq * control_z() * &sq * &h
}

/// Column-stacking superoperator of `rho -> A rho B`.
fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kron(&b.transpose(), a)
}

/// Superoperators that make up one noisy exchange pulse.
#[derive(Debug, Clone)]
pub struct ExchangeSuperoperators {
    /// Unitary `sqrt(SWAP)` evolution `conj(U) kron U`.
    pub pulse: ComplexMatrix,
    /// Generator of the free evolution after the pulse.
    pub k3: ComplexMatrix,
    /// Initial-slip correction (already weighted).
    pub k2: ComplexMatrix,
}

fn dissipator(gamma: f64) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(16, 16);
    let one = identity(2);
    for p in [pauli_x(), pauli_y(), pauli_z()] {
        for op in [kron(&p, &one), kron(&one, &p)] {
            d += sandwich(&op, &op) - identity(16);
        }
    }
    d * c(gamma / 2.0, 0.0)
}

/// Hermitian `Hs` with `-i [H, rho] = -i Hs vec(rho)`.
fn commutator_generator(h: &ComplexMatrix) -> ComplexMatrix {
    let one = identity(h.nrows());
    sandwich(h, &one) - sandwich(&one, h)
}

fn zeeman_shift(delta: f64) -> ComplexMatrix {
    (kron(&pauli_z(), &identity(2)) + kron(&identity(2), &pauli_z())) * c(delta / 2.0, 0.0)
}

fn phi(alpha: f64) -> C64 {
    if alpha.abs() < 1e-12 {
        c(1.0, 0.0)
    } else {
        (C64::from_polar(1.0, alpha) - 1.0) / c(0.0, alpha)
    }
}

/// `weight * int_0^1 U(s)^-1 K3 U(s) ds` with `U(s)` the partial pulse
/// superoperator, evaluated exactly in the pulse eigenbasis.
fn pulse_average(k3: &ComplexMatrix, weight: f64) -> Result<ComplexMatrix> {
    let (omega, w) = eigh(&exchange_generator())?;
    let t = kron(&w.map(|z| z.conj()), &w);
    let m = t.adjoint() * k3 * &t;
    let nu: Vec<f64> = (0..16).map(|p| omega[p % 4] - omega[p / 4]).collect();
    let weighted = ComplexMatrix::from_fn(16, 16, |p, q| m[(p, q)] * phi(nu[p] - nu[q]));
    Ok(&t * weighted * t.adjoint() * c(weight, 0.0))
}

pub fn exchange_superoperators(params: &LdivParams) -> Result<ExchangeSuperoperators> {
    params.validate()?;
    let lindblad = dissipator(params.gamma)
        - commutator_generator(&zeeman_shift(params.delta)) * c(0.0, 1.0);
    let k3 = -lindblad;
    let k2 = pulse_average(&k3, K2_PULSE_WEIGHT)?;
    Ok(ExchangeSuperoperators {
        pulse: unitary_superoperator(&sqrt_swap()),
        k3,
        k2,
    })
}

/// `exp(-(t-1) K3) U_s (1 - K2)`, dropping `(1 - K2)` when requested.
pub fn exchange_pulse_superoperator(params: &LdivParams) -> Result<ComplexMatrix> {
    let ops = exchange_superoperators(params)?;
    let idle = params.t - 1.0;
    // The dissipator and the Zeeman commutator commute, so the free
    // evolution factorizes into two Hermitian exponentials.
    let decay = hermitian_function(&dissipator(params.gamma), |l| c((idle * l).exp(), 0.0))?;
    let rotate = hermitian_exponential(&commutator_generator(&zeeman_shift(params.delta)), idle)?;
    let mut v = decay * rotate * &ops.pulse;
    if params.include_k2 {
        v = v * (identity(16) - &ops.k2);
    }
    Ok(v)
}

/// Exchange CNOT with both pulses replaced by the open-system channel.
pub fn ldiv_noisy_cnot(params: &LdivParams) -> Result<KrausChannel> {
    let v = exchange_pulse_superoperator(params)?;
    let h = unitary_superoperator(&target_hadamard());
    let s = &h
        * unitary_superoperator(&phase_correction())
        * &v
        * unitary_superoperator(&control_z())
        * &v
        * &h;
    kraus_from_superoperator(&s, CP_TOL)
}
