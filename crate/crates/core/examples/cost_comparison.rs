//! Paper-model step counts next to Grover iteration counts as N grows.
//!
//!     cargo run --example cost_comparison

use qsearch::ledger::write_comparison_table;
use qsearch::{compare_models, ComparisonRow};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rows: Vec<ComparisonRow> = Vec::new();
    for n in [4u32, 8, 12, 16, 20, 24] {
        for m in [1u64, 16] {
            rows.push(compare_models(1 << n, m)?);
        }
    }
    write_comparison_table(&rows, std::io::stdout().lock())?;

    // where does the marking search stop beating sqrt-scaling?
    let crossover = (1..=30u32).find(|&n| {
        let row = compare_models(1 << n, 1).unwrap();
        row.grover_iters.unwrap() > row.paper_steps_full
    });
    println!("\nM = 1: Grover needs more iterations than n + 1 paper steps from n = {crossover:?}");
    Ok(())
}
