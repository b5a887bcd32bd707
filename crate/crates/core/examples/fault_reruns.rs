//! Seeded writer failures with bounded reruns. Compares rerunning only the
//! failed writers against restarting the whole arbitration phase.
//!
//!     cargo run --example fault_reruns

use qsearch::{run_modified_search, FaultConfig, RerunStrategy, SearchOptions, SearchProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsearch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let problem = SearchProblem::random(9, 40, &mut rng)?;

    for rerun in [RerunStrategy::FailedOnly, RerunStrategy::FullRestart] {
        for p in [0.1, 0.3, 0.6] {
            let options = SearchOptions { faults: FaultConfig::new(p, 25)?, rerun, ..Default::default() };
            let r = run_modified_search(&problem, &options, &mut ChaCha8Rng::seed_from_u64(42))?;
            let report = r.verify(&problem)?;
            println!(
                "{rerun:?} p={p:.1}: passes {:>2}, grants {:>3}, completed {}, count {}, paper steps {}, trace ok {}",
                r.attempts,
                r.ledger.grants_issued,
                r.completed,
                r.count,
                r.ledger.paper_steps,
                report.all_ok()
            );
        }
    }

    // every writer fails its first attempt, then succeeds
    let options = SearchOptions { faults: FaultConfig::first_attempts(1.0, 1, 3)?, ..Default::default() };
    let small = SearchProblem::new(3, [1, 6])?;
    let r = run_modified_search(&small, &options, &mut rng)?;
    println!("\nfirst attempt always fails: passes {}, answers {:?}", r.attempts, r.answers);
    for event in &r.trace {
        println!("  {event}");
    }

    // too few reruns to get through
    let options = SearchOptions { faults: FaultConfig::new(0.9, 1)?, ..Default::default() };
    let r = run_modified_search(&problem, &options, &mut ChaCha8Rng::seed_from_u64(5))?;
    println!("\np=0.9 with one rerun: completed {}, {} writers never wrote", r.completed, r.unwritten.len());
    Ok(())
}
