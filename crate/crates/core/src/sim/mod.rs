//! Schedule execution.
//!
//! Two backends share one execution plan ([`plan::plan`]):
//!
//! - [`run_exact`] keeps one unnormalized density matrix per distinct outcome
//!   key and enumerates measurement branches, giving exact distributions.
//! - [`run_trajectories`] samples pure-state trajectories. Trajectories that
//!   share a history are advanced together and split only where their random
//!   draws diverge; each trajectory draws from its own ChaCha8 stream, so the
//!   result equals independent per-trajectory simulation
//!   ([`run_trajectories_naive`]).

mod distribution;
mod exact;
pub mod plan;
mod trajectory;

pub use distribution::SyndromeDistribution;
pub use exact::{run_exact, run_exact_inspect, run_exact_schedule, DEFAULT_MAX_WIDTH, PRUNE_EPS};
pub use trajectory::{run_trajectories, run_trajectories_naive, trajectory_rng};

use crate::channel::linalg::{hadamard, pauli_x, pauli_y, pauli_z};
use crate::channel::{CompiledChannel, KrausChannel};
use crate::code::{build_encoded_schedule, ExtractionSchedule, Gate1, Scenario, Serialization};
use crate::noise::{noise_channel, NoiseKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    ExactDm,
    Trajectory,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::ExactDm => "exact",
            Backend::Trajectory => "trajectory",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub cnot: KrausChannel,
    pub p_init: f64,
    pub backend: Backend,
    pub n_samples: u64,
    pub seed: u64,
    pub serialization: Serialization,
    /// Encoded logical state, 0 or 1.
    pub encoded: u8,
    /// Largest register the dense backend accepts.
    pub max_width: usize,
}

impl RunConfig {
    pub fn new(scenario: Scenario, cnot: KrausChannel) -> Self {
        Self {
            scenario,
            cnot,
            p_init: 0.0,
            backend: Backend::ExactDm,
            n_samples: 0,
            seed: 0,
            serialization: Serialization::Concurrent,
            encoded: 0,
            max_width: DEFAULT_MAX_WIDTH,
        }
    }

    pub fn schedule(&self) -> ExtractionSchedule {
        build_encoded_schedule(self.scenario, self.serialization, self.encoded)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cnot.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "CNOT channel must act on two qubits, got dimension {}",
                self.cnot.dim()
            )));
        }
        if !(0.0..=1.0).contains(&self.p_init) {
            return Err(Error::InvalidParameter {
                name: "p_init",
                value: self.p_init,
                reason: "probability must lie in [0, 1]",
            });
        }
        if self.encoded > 1 {
            return Err(Error::InvalidParameter {
                name: "encoded",
                value: self.encoded as f64,
                reason: "encoded state must be 0 or 1",
            });
        }
        if self.backend == Backend::Trajectory && self.n_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "n_samples",
                value: 0.0,
                reason: "trajectory backend needs at least one sample",
            });
        }
        Ok(())
    }
}

/// Dispatch on `cfg.backend`.
pub fn run(cfg: &RunConfig) -> Result<SyndromeDistribution> {
    match cfg.backend {
        Backend::ExactDm => run_exact(cfg),
        Backend::Trajectory => run_trajectories(cfg),
    }
}

pub(crate) struct Kernels {
    h: CompiledChannel,
    x: CompiledChannel,
    y: CompiledChannel,
    z: CompiledChannel,
    pub cnot: CompiledChannel,
    pub depolarize: Option<CompiledChannel>,
}

impl Kernels {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let u = |m| -> Result<CompiledChannel> { Ok(CompiledChannel::new(&KrausChannel::unitary(m)?)) };
        let depolarize = if cfg.p_init > 0.0 {
            Some(CompiledChannel::new(&noise_channel(NoiseKind::Depolarizing(
                cfg.p_init,
            ))?))
        } else {
            None
        };
        Ok(Self {
            h: u(hadamard())?,
            x: u(pauli_x())?,
            y: u(pauli_y())?,
            z: u(pauli_z())?,
            cnot: CompiledChannel::new(&cfg.cnot),
            depolarize,
        })
    }

    pub fn gate(&self, g: Gate1) -> &CompiledChannel {
        match g {
            Gate1::H => &self.h,
            Gate1::X => &self.x,
            Gate1::Y => &self.y,
            Gate1::Z => &self.z,
        }
    }
}
