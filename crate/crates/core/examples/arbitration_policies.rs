//! Same problem, every arbitration scheme. The answer *set* never changes;
//! only the write order does.
//!
//!     cargo run --example arbitration_policies

use qsearch::marksearch::shuffle_submissions;
use qsearch::{
    ccc_arbitrate, mark_solutions, run_modified_search, spawn_writers, token_ring_arbitrate, Arbitration,
    SearchOptions, SearchProblem, SelectionPolicy, StepLedger,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsearch::Result<()> {
    let problem = SearchProblem::new(5, [3, 8, 14, 21, 30])?;

    // raw arbiter orders over a shuffled submission
    let mut requests = spawn_writers(&mark_solutions(&problem, &mut StepLedger::new()));
    shuffle_submissions(&mut requests, 11);
    let submitted: Vec<usize> = requests.iter().map(|r| r.index).collect();
    println!("submitted in order {submitted:?}");
    for policy in SelectionPolicy::all(99) {
        println!("  {:<12} -> {:?}", policy.to_string(), ccc_arbitrate(&requests, policy)?);
    }
    println!("  {:<12} -> {:?}", "ring@16", token_ring_arbitrate(&requests, 16, problem.size())?);

    // full searches, with cost
    println!();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut schemes: Vec<Arbitration> = SelectionPolicy::all(99).into_iter().map(Arbitration::from).collect();
    schemes.push(Arbitration::TokenRing { start: 16 });
    for arbitration in schemes {
        let options = SearchOptions { arbitration, shuffle_submit: Some(11), ..Default::default() };
        let r = run_modified_search(&problem, &options, &mut rng)?;
        println!(
            "{:<40} answers {:?}  grants {}  hops {}",
            format!("{arbitration:?}"),
            r.answers,
            r.ledger.grants_issued,
            r.ledger.token_hops
        );
    }
    Ok(())
}
