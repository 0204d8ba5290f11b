use thiserror::Error;

/// Errors raised by channel construction, simulation and benchmarking.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {max_asymmetry:e}")]
    NonHermitian { max_asymmetry: f64 },

    #[error("matrix is not unitary: max |U^dagger U - I| = {defect:e}")]
    NonUnitary { defect: f64 },

    #[error("map is not completely positive: Choi eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    NotCompletelyPositive { eigenvalue: f64, tolerance: f64 },

    #[error("map is not trace preserving: max |sum K^dagger K - I| = {defect:e}")]
    NotTracePreserving { defect: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit {0} targeted more than once")]
    TargetCollision(usize),

    #[error("qubit {0} is not part of the register")]
    TargetOutOfRange(usize),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("all Kraus branches vanish on this state (total weight {total:e})")]
    BranchNormVanished { total: f64 },

    #[error(
        "dense evolution needs {peak} simultaneous qubits (limit {limit}); use the trajectory backend"
    )]
    WidthOverflow { peak: usize, limit: usize },

    #[error("error {0} acts on an ancilla qubit")]
    SupportOnAncilla(String),

    #[error("errors {0} and {1} share a syndrome but their product is not a stabilizer")]
    CodeSpecCorrupted(String, String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid point {point}: {source}")]
    AtGridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
