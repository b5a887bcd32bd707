use thiserror::Error;

/// Errors raised by the simulator, the search drivers and the arbiter.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..={max}", max = crate::qsim::MAX_QUBITS)]
    Size(u32),

    #[error("dimension mismatch: state has {state} qubits, problem has {problem}")]
    Shape { state: u32, problem: u32 },

    #[error("index {index} outside search space of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("search problem has no solutions")]
    NoSolution,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("exclusion violation: writer {writer} entered the critical section while {holder:?} held the grant")]
    ExclusionViolation { writer: usize, holder: Option<usize> },

    #[error("malformed trace at time {time}: {reason}")]
    Trace { time: u64, reason: String },

    #[error("stress run did not terminate within {0:?}")]
    Timeout(std::time::Duration),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
