//! Benchmarks for approximate CNOT gates inside the 17-qubit surface code.
//!
//! The crate builds spin-qubit CNOT channels (exchange-based and floating-gate
//! constructions), scores them by worst-case gate infidelity, and measures how
//! they perform when used to extract syndromes of the surface-17 code. Code
//! performance is the logical-error probability `p_code` of an optimal
//! lookup-table decoder.
//!
//! Module map:
//!
//! - [`channel`]: complex linear algebra, Kraus channels, density matrices,
//!   state vectors, and fidelity measures.
//! - [`noise`]: bit-flip, phase-flip and depolarizing channels.
//! - [`gates`]: the ideal and approximate CNOT constructions.
//! - [`code`]: Pauli algebra, the surface-17 code, and syndrome extraction
//!   schedules.
//! - [`sim`]: exact density-matrix and trajectory execution of schedules.
//! - [`decoder`]: lookup-table decoding and the `p_code` benchmark.
//! - [`sweep`]: sweep configuration, presets and CSV/JSON output.

pub mod channel;
pub mod code;
pub mod decoder;
pub mod error;
pub mod gates;
pub mod noise;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::channel::{
        gate_infidelity, state_fidelity, ComplexMatrix, DensityMatrix, KrausChannel, StateVector,
        C64,
    };
    pub use crate::code::{build_schedule, CodeSpec, PauliString, Scenario, Serialization};
    pub use crate::decoder::{build_table, logical_error_probability, BenchmarkRecord};
    pub use crate::gates::{FloatingGateParams, GateSpec, LdivParams, Variant};
    pub use crate::noise::{noise_channel, NoiseKind};
    pub use crate::sim::{run, Backend, RunConfig, SyndromeDistribution};
    pub use crate::{Error, Result};
}
