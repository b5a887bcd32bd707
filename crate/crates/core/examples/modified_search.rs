//! The marking-register search: mark every solution, let the marked writers
//! compete for ANS/COUNT, and read back all answers.
//!
//!     cargo run --example modified_search

use qsearch::{early_stop_search, run_modified_search, AnsMode, SearchOptions, SearchProblem, SelectionPolicy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsearch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let problem = SearchProblem::from_predicate(8, |x| x % 37 == 5)?;
    println!("N = {}, solutions = {:?}", problem.size(), problem.solutions());

    for mode in [AnsMode::Array, AnsMode::Single] {
        let options = SearchOptions { ans_mode: mode, ..SearchOptions::with_policy(SelectionPolicy::AscendingIndex) };
        let r = run_modified_search(&problem, &options, &mut rng)?;
        println!("\n{mode:?} ANS");
        println!("  answers     {:?}", r.answers);
        println!("  COUNT       {}", r.count);
        match mode {
            AnsMode::Array => println!("  ANS cells   {:?}", r.ans.contents()),
            // a single register only keeps the last write
            AnsMode::Single => println!("  ANS         {:?}", r.ans.single()),
        }
        println!("  ledger      {:?}", r.ledger);
        println!("  trace ok    {}", r.verify(&problem)?.all_ok());
    }

    let first = early_stop_search(&problem, SelectionPolicy::DescendingIndex)?;
    println!("\nearly stop (descending): first answer {} after {} paper steps", first.index, first.ledger.paper_steps);
    Ok(())
}
