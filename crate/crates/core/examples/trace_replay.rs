//! Export a run's trace, read it back, and verify it. Then tamper with it and
//! watch the verifier object.
//!
//!     cargo run --example trace_replay

use qsearch::arbiter::{read_trace, write_trace};
use qsearch::{run_modified_search, verify_trace, SearchOptions, SearchProblem, TraceKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::new(4, [2, 7, 11])?;
    let r = run_modified_search(&problem, &SearchOptions::default(), &mut ChaCha8Rng::seed_from_u64(0))?;

    let mut text = Vec::new();
    write_trace(&r.trace, &mut text)?;
    print!("{}", String::from_utf8_lossy(&text));

    let replayed = read_trace(&text[..])?;
    assert_eq!(replayed, r.trace);
    let report = verify_trace(&replayed, problem.solutions(), 3)?;
    println!("\nreplayed: {report:?}");

    // move the second writer's grant ahead of the first writer's release
    let mut tampered = replayed.clone();
    let release = tampered.iter().position(|e| e.kind == TraceKind::Release).unwrap();
    let second_grant = tampered.iter().enumerate().skip(release).find(|(_, e)| e.kind == TraceKind::Grant).unwrap().0;
    let event = tampered.remove(second_grant);
    tampered.insert(release - 1, event);
    for (t, e) in tampered.iter_mut().enumerate() {
        e.time = t as u64;
    }
    match verify_trace(&tampered, problem.solutions(), 3) {
        Ok(report) => println!("tampered: mutual exclusion ok = {}", report.mutual_exclusion_ok),
        Err(e) => println!("tampered: rejected ({e})"),
    }
    Ok(())
}
