//! Surface-17 code: Pauli algebra, stabilizers and extraction schedules.

mod pauli;
pub mod schedule;
pub mod spec;

pub use pauli::PauliString;
pub use schedule::{
    build_encoded_schedule, build_schedule, ExtractionSchedule, Gate1, Op, Scenario,
    Serialization, KEY_BITS, LOGICAL_BIT,
};
pub use spec::{CodeSpec, Stabilizer, StabilizerType};
