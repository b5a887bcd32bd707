//! One OS thread per writer, all contending for the shared registers.
//! Repeats the run many times and checks every trace.
//!
//!     cargo run --release --example stress_exclusion

use std::time::{Duration, Instant};

use qsearch::{run_stress_search, AnsMode, SearchOptions, SearchProblem, SelectionPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RUNS: u64 = 200;

fn main() -> qsearch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let started = Instant::now();
    let (mut worst_wait, mut clean) = (0, 0);
    for run in 0..RUNS {
        let m = rng.gen_range(1..=64);
        let problem = SearchProblem::random(8, m, &mut rng)?;
        let options = SearchOptions {
            ans_mode: AnsMode::Array,
            shuffle_submit: Some(run),
            ..SearchOptions::with_policy(SelectionPolicy::all(run)[(run % 4) as usize])
        };
        let r = run_stress_search(&problem, &options, run, Duration::from_secs(10))?;
        let report = r.verify(&problem)?;
        worst_wait = worst_wait.max(report.max_wait_position);
        clean += u64::from(report.all_ok() && r.count == m as u64);
    }
    println!("{clean}/{RUNS} runs clean, worst wait position {worst_wait}, {:?}", started.elapsed());
    Ok(())
}
