//! CNOT constructions for spin qubits.
//!
//! - [`exchange`]: the exchange-pulse CNOT built from two `sqrt(SWAP)` pulses,
//!   and its open-system channel with relaxation `Gamma` and phase shift `Delta`.
//! - [`floating`]: the floating-gate CNOT built from a `sqrt(XX)` sequence of
//!   an anisotropic spin-orbit coupling.

pub mod exchange;
pub mod floating;

pub use exchange::{
    exchange_pulse_superoperator, exchange_superoperators, ldiv_ideal_cnot, ldiv_noisy_cnot,
    sqrt_swap, ExchangeSuperoperators, LdivParams, K2_PULSE_WEIGHT,
};
pub use floating::{
    floating_cnot, floating_cnot_unitary, floating_hamiltonians, floating_sequence,
    floating_sqrt_xx, floating_sqrt_xx_with, soi_vector, Coupling, FloatingGateParams,
    SequenceStep, SoiInput, Variant,
};

use crate::channel::linalg::cnot;
use crate::channel::{gate_infidelity, KrausChannel};
use crate::Result;

/// A CNOT implementation selectable from configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    Ideal,
    Floating(FloatingGateParams),
    Ldiv(LdivParams),
}

impl GateSpec {
    pub fn channel(&self) -> Result<KrausChannel> {
        match self {
            GateSpec::Ideal => KrausChannel::unitary(cnot()),
            GateSpec::Floating(p) => floating_cnot(p),
            GateSpec::Ldiv(p) => ldiv_noisy_cnot(p),
        }
    }

    /// Short name used in output files.
    pub fn tag(&self) -> &'static str {
        match self {
            GateSpec::Ideal => "ideal",
            GateSpec::Floating(p) => match p.variant {
                Variant::V1 => "v1",
                Variant::V2 => "v2",
            },
            GateSpec::Ldiv(p) if p.include_k2 => "ldiv",
            GateSpec::Ldiv(_) => "ldiv_no_k2",
        }
    }

    /// The two swept parameters as `(name, value)` pairs.
    pub fn parameters(&self) -> [(&'static str, f64); 2] {
        match self {
            GateSpec::Ideal => [("none", 0.0), ("none", 0.0)],
            GateSpec::Floating(p) => [("R", p.r), ("gamma_ratio", p.gamma_ratio)],
            GateSpec::Ldiv(p) => [("t", p.t), ("Gamma", p.gamma)],
        }
    }

    pub fn infidelity(&self) -> Result<f64> {
        Ok(gate_infidelity(&self.channel()?, &cnot()))
    }
}
