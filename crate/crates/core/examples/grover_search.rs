//! Amplitude amplification on a 10-qubit register: success probability per
//! iteration, then a few sampled runs at the optimal count.
//!
//!     cargo run --example grover_search

use qsearch::grover::closed_form_success;
use qsearch::{optimal_iterations, run_grover, Iterations, QState, SearchProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsearch::Result<()> {
    let problem = SearchProblem::new(10, [137, 600, 901])?;
    let (size, m) = (problem.size() as u64, problem.solution_count() as u64);
    let best = optimal_iterations(size, m)?;
    println!("N = {size}, M = {m}, optimal iterations = {best}");

    let mut state = QState::uniform(problem.qubits())?;
    println!("{:>4} {:>12} {:>12}", "k", "simulated", "closed form");
    for k in 0..=2 * best {
        if k > 0 {
            state.grover_iteration(&problem)?;
        }
        if k % 3 == 0 || k == best {
            let p = state.success_probability(&problem)?;
            let marker = if k == best { "  <- optimal" } else { "" };
            println!("{k:>4} {p:>12.6} {:>12.6}{marker}", closed_form_success(size, m, k));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let r = run_grover(&problem, Iterations::Auto, &mut rng)?;
        println!(
            "sampled {:>4}  solution: {:<5}  p = {:.4}  amplitude ops = {}",
            r.sampled_index, r.is_solution, r.success_probability, r.ledger.amplitude_ops
        );
    }
    Ok(())
}
