//! Grover search on a dense state-vector simulator, alongside a
//! marking-register search whose writers compete for shared ANS/COUNT
//! registers through a mutual-exclusion arbiter.
//!
//! - [`qsim`]: state vectors, phase oracle, diffusion, measurement.
//! - [`grover`]: iteration schedule and single-shot Grover runs.
//! - [`marksearch`]: marking pass, writer spawning, full, early-stop,
//!   fault-injected and multi-threaded searches.
//! - [`arbiter`]: central controller, token ring, registers, traces and
//!   trace verification.
//! - [`ledger`]: paper-model step counts next to actual operation counts.
//! - [`cli`]: the `qsearch` command-line front end.

pub mod arbiter;
pub mod cli;
pub mod error;
pub mod grover;
pub mod ledger;
pub mod marksearch;
pub mod qsim;

pub use arbiter::{
    ccc_arbitrate, token_ring_arbitrate, verify_trace, write_and_increment, AnsMode, AnsStore, Ccc,
    CountRegister, Grant, SelectionPolicy, SharedArbiter, TraceEvent, TraceKind, VerificationReport,
};
pub use error::{Error, Result};
pub use grover::{optimal_iterations, run_grover, GroverResult, Iterations};
pub use ledger::{actual_cost, compare_models, paper_step_count, ComparisonRow, RunKind, StepLedger};
pub use marksearch::{
    early_stop_search, mark_solutions, run_modified_search, run_stress_search, spawn_writers, Arbitration,
    EarlyStopResult, FaultConfig, MarkRegister, ModifiedResult, RerunStrategy, SearchOptions, WriteRequest,
};
pub use qsim::{uniform_superposition, QState, SearchProblem};
