//! Baseline Grover search: schedule, run, measure once.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{StepLedger, AMPLITUDE_OPS_PER_LAYER};
use crate::qsim::{QState, SearchProblem};

/// ⌊(π/4)·√(N/M)⌋ Grover iterations, raised to 1 when the floor is 0 and
/// M < N. Returns 0 when M = N since the uniform state is already all solutions.
pub fn optimal_iterations(size: u64, m: u64) -> Result<u64> {
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::Domain(format!("N = {size} is not 2^n with n >= 1")));
    }
    if m == 0 {
        return Err(Error::NoSolution);
    }
    if m > size {
        return Err(Error::Domain(format!("M = {m} exceeds N = {size}")));
    }
    if m == size {
        return Ok(0);
    }
    let k = (FRAC_PI_4 * (size as f64 / m as f64).sqrt()).floor() as u64;
    Ok(k.max(1))
}

/// Closed-form success probability sin²((2k+1)θ), θ = arcsin √(M/N), after
/// `k` iterations from the uniform state.
pub fn closed_form_success(size: u64, m: u64, k: u64) -> f64 {
    let theta = (m as f64 / size as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Iterations {
    Auto,
    Fixed(u64),
}

impl FromStr for Iterations {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Iterations::Auto);
        }
        s.parse().map(Iterations::Fixed).map_err(|_| format!("expected `auto` or a count, got `{s}`"))
    }
}

impl fmt::Display for Iterations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Iterations::Auto => f.write_str("auto"),
            Iterations::Fixed(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverResult {
    pub sampled_index: usize,
    pub is_solution: bool,
    pub success_probability: f64,
    pub iterations_used: u64,
    pub ledger: StepLedger,
}

/// Prepares the uniform state, applies the Grover iteration and measures once.
pub fn run_grover<R: Rng + ?Sized>(
    problem: &SearchProblem,
    iterations: Iterations,
    rng: &mut R,
) -> Result<GroverResult> {
    let size = problem.size() as u64;
    let k = match iterations {
        Iterations::Auto => optimal_iterations(size, problem.solution_count() as u64)?,
        Iterations::Fixed(k) => k,
    };

    let mut ledger = StepLedger::new();
    let mut state = QState::uniform(problem.qubits())?;
    ledger.charge_amplitude_ops(size * AMPLITUDE_OPS_PER_LAYER);
    for _ in 0..k {
        state.grover_iteration(problem)?;
        ledger.charge_grover_iteration();
        ledger.charge_paper_steps(1);
        ledger.charge_amplitude_ops(size * AMPLITUDE_OPS_PER_LAYER);
    }

    let success_probability = state.success_probability(problem)?;
    let sampled_index = state.measure(rng);
    Ok(GroverResult {
        sampled_index,
        is_solution: problem.is_solution(sampled_index),
        success_probability,
        iterations_used: k,
        ledger,
    })
}
