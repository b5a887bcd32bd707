//! Acceptance criteria. Each test prints one `[PASS]` or `[FAIL]` line.
//! Run with `cargo test -p qsearch --test acceptance -- --nocapture --test-threads=1`.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use qsearch::grover::closed_form_success;
use qsearch::ledger::{write_comparison_csv, MARKING_PASS_NOTE};
use qsearch::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: &str, title: &str, ok: bool, detail: String) {
    println!("[{}] {id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} {title}: {detail}");
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

#[test]
fn ac1_grover_correctness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in 2..=12u32 {
        let size = 1u64 << n;
        for m in [1u64, 2, 4].into_iter().filter(|&m| m <= size) {
            let problem = SearchProblem::random(n, m as usize, &mut rng).unwrap();
            let k = optimal_iterations(size, m).unwrap();
            let mut s = QState::uniform(n).unwrap();
            for _ in 0..k {
                s.grover_iteration(&problem).unwrap();
            }
            let p = s.success_probability(&problem).unwrap();
            worst = worst.max((p - closed_form_success(size, m, k)).abs());
        }
    }
    let problem = SearchProblem::new(2, [1]).unwrap();
    let r = run_grover(&problem, Iterations::Auto, &mut rng).unwrap();
    let n4_err = (r.success_probability - 1.0).abs();
    let elapsed = started.elapsed();
    verdict(
        "AC1",
        "Grover correctness",
        worst <= 1e-9 && n4_err <= 1e-12 && elapsed < Duration::from_secs(10),
        format!("max |sim - closed form| = {worst:.2e} (<= 1e-9), N=4 M=1 error = {n4_err:.2e} (<= 1e-12), {elapsed:?}"),
    );
}

#[test]
fn ac2_iteration_count() {
    let k1 = optimal_iterations(1024, 1).unwrap();
    let k4 = optimal_iterations(1024, 4).unwrap();
    let ratios: Vec<f64> = (16..=20u32)
        .map(|n| {
            optimal_iterations(1 << n, 1).unwrap() as f64 / (std::f64::consts::FRAC_PI_4 * 2f64.powf(n as f64 / 2.0))
        })
        .collect();
    let in_band = ratios.iter().all(|r| (0.95..=1.0).contains(r));
    verdict(
        "AC2",
        "iteration count O(sqrt(N/M))",
        k1 == 25 && k4 == 12 && in_band,
        format!("k(1024,1) = {k1}, k(1024,4) = {k4}, ratios n=16..20 = {ratios:.4?}"),
    );
}

#[test]
fn ac3_step_count_reproduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut runs, mut matches) = (0, 0);
    for n in 3..=16u32 {
        for m in [0u64, 1, 2, 4, 8] {
            let problem = SearchProblem::random(n, m as usize, &mut rng).unwrap();
            let full = run_modified_search(&problem, &SearchOptions::default(), &mut rng).unwrap();
            let early_options = SearchOptions { early_stop: true, ..Default::default() };
            let early = run_modified_search(&problem, &early_options, &mut rng).unwrap();
            runs += 2;
            matches += usize::from(full.ledger.paper_steps == u64::from(n) + m);
            matches += usize::from(early.ledger.paper_steps == u64::from(n) + m.min(1));
            if m > 0 {
                runs += 1;
                let e = early_stop_search(&problem, SelectionPolicy::AscendingIndex).unwrap();
                matches += usize::from(e.ledger.paper_steps == u64::from(n) + 1);
            }
        }
    }
    verdict("AC3", "paper-model step counts", matches == runs, format!("{matches}/{runs} live runs exact"));
}

#[test]
fn ac4_modified_search_exactness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut checks, mut failures) = (0, 0);
    for case in 0..1000u64 {
        let n = rng.gen_range(1..=12u32);
        let m = rng.gen_range(0..=32usize.min(1 << n));
        let problem = SearchProblem::random(n, m, &mut rng).unwrap();
        let mut arbitrations: Vec<Arbitration> = SelectionPolicy::all(case).into_iter().map(Arbitration::from).collect();
        arbitrations.push(Arbitration::TokenRing { start: rng.gen_range(0..problem.size()) });
        for arbitration in arbitrations {
            for shuffle_submit in [None, Some(case)] {
                let options = SearchOptions { arbitration, shuffle_submit, ..Default::default() };
                let r = run_modified_search(&problem, &options, &mut rng).unwrap();
                checks += 1;
                let mut ok = sorted(&r.answers) == problem.solutions();
                if arbitration == Arbitration::Central(SelectionPolicy::AscendingIndex) {
                    ok &= r.answers.windows(2).all(|w| w[0] < w[1]);
                }
                failures += usize::from(!ok);
            }
        }
    }
    let elapsed = started.elapsed();
    verdict(
        "AC4",
        "modified-search exactness",
        failures == 0 && elapsed < Duration::from_secs(30),
        format!("{failures} failures in {checks} runs over 1000 problems, {elapsed:?}"),
    );
}

#[test]
fn ac5_stress_concurrency() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let timeout = Duration::from_secs(10);
    let (mut exclusion, mut timeouts, mut wait_breaches, mut wrong_sets, mut max_m) = (0, 0, 0, 0, 0);
    for run in 0..1000u64 {
        let n = rng.gen_range(6..=9u32);
        let m = rng.gen_range(1..=64usize);
        max_m = max_m.max(m);
        let problem = SearchProblem::random(n, m, &mut rng).unwrap();
        let policy = SelectionPolicy::all(run)[(run % 4) as usize];
        let options = SearchOptions {
            ans_mode: if run % 2 == 0 { AnsMode::Array } else { AnsMode::Single },
            shuffle_submit: Some(run),
            ..SearchOptions::with_policy(policy)
        };
        match run_stress_search(&problem, &options, run, timeout) {
            Err(Error::Timeout(_)) => timeouts += 1,
            Err(Error::ExclusionViolation { .. }) => exclusion += 1,
            Err(e) => panic!("run {run}: {e}"),
            Ok(r) => {
                let report = r.verify(&problem).unwrap();
                exclusion += usize::from(!report.mutual_exclusion_ok);
                timeouts += usize::from(!report.deadlock_ok);
                wait_breaches += usize::from(!report.starvation_ok || report.max_wait_position + 1 > m as u64);
                wrong_sets += usize::from(sorted(&r.answers) != problem.solutions() || r.count != m as u64);
                if options.ans_mode == AnsMode::Array {
                    wrong_sets += usize::from(r.ans.contents() != r.answers);
                }
            }
        }
    }
    verdict(
        "AC5",
        "stress-mode concurrency",
        exclusion == 0 && timeouts == 0 && wait_breaches == 0 && wrong_sets == 0,
        format!(
            "1000 threaded runs (M up to {max_m}): exclusion violations {exclusion}, non-terminating {timeouts}, \
             wait-bound breaches {wait_breaches}, wrong answer sets {wrong_sets}"
        ),
    );
}

#[test]
fn ac6_fault_injection() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let faults = FaultConfig::new(0.2, 20).unwrap();
    let (mut completed, mut exact, mut reruns_seen) = (0, 0, 0);
    for seed in 0..500u64 {
        let n = rng.gen_range(3..=10u32);
        let m = rng.gen_range(0..=32usize.min(1 << n));
        let problem = SearchProblem::random(n, m, &mut rng).unwrap();
        let options = SearchOptions { faults, ..SearchOptions::with_policy(SelectionPolicy::all(seed)[(seed % 4) as usize]) };
        let r = run_modified_search(&problem, &options, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        reruns_seen += usize::from(r.attempts > 1);
        if r.completed {
            completed += 1;
            exact += usize::from(sorted(&r.answers) == problem.solutions() && r.verify(&problem).unwrap().all_ok());
        }
    }
    verdict(
        "AC6",
        "fault-injection correctness",
        completed == 500 && exact == completed,
        format!("completed {completed}/500, exact {exact}/{completed}, runs needing reruns {reruns_seen}"),
    );
}

#[test]
fn ac7_brute_force_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut diffusions: HashMap<u32, common::Mat> = HashMap::new();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8u32);
        let size = 1usize << n;
        let m = rng.gen_range(0..=size.min(16));
        let problem = SearchProblem::random(n, m, &mut rng).unwrap();
        let d = diffusions.entry(n).or_insert_with(|| common::diffusion(n));
        let o = common::oracle(n, problem.solutions());

        let mut zero = vec![num_complex::Complex64::new(0.0, 0.0); size];
        zero[0] = num_complex::Complex64::new(1.0, 0.0);
        let mut dense = common::matvec(&common::hadamard(n), &zero);
        let mut fast = QState::uniform(n).unwrap();
        worst = worst.max(common::max_deviation(fast.amplitudes(), &dense));
        let k = optimal_iterations(size as u64, m.max(1) as u64).unwrap() + 2;
        for _ in 0..k {
            fast.grover_iteration(&problem).unwrap();
            dense = common::matvec(d, &common::matvec(&o, &dense));
            worst = worst.max(common::max_deviation(fast.amplitudes(), &dense));
        }
    }
    verdict(
        "AC7",
        "brute-force equivalence",
        worst <= 1e-10,
        format!("max amplitude deviation over 100 problems (n <= 8) = {worst:.2e} (<= 1e-10)"),
    );
}

#[test]
fn ac8_honest_accounting() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut runs, mut honest) = (0, 0);
    for i in 0..200u64 {
        let n = rng.gen_range(1..=12u32);
        let m = rng.gen_range(0..=16usize.min(1 << n));
        let problem = SearchProblem::random(n, m, &mut rng).unwrap();
        let size = problem.size() as u64;
        let options = SearchOptions {
            arbitration: if i % 3 == 0 {
                Arbitration::TokenRing { start: 0 }
            } else {
                Arbitration::Central(SelectionPolicy::Random(i))
            },
            faults: FaultConfig::new(0.3, 30).unwrap(),
            early_stop: i % 5 == 0,
            ..Default::default()
        };
        let ledgers = [
            run_modified_search(&problem, &options, &mut rng).unwrap().ledger,
            run_stress_search(&problem, &SearchOptions::default(), i, Duration::from_secs(10)).unwrap().ledger,
        ];
        for ledger in ledgers {
            runs += 1;
            honest += usize::from(ledger.predicate_evals == size);
        }
        if m > 0 {
            runs += 1;
            honest += usize::from(early_stop_search(&problem, SelectionPolicy::Fifo).unwrap().ledger.predicate_evals == size);
        }
    }

    let rows: Vec<ComparisonRow> = [0u64, 1, 4].iter().map(|&m| compare_models(1024, m).unwrap()).collect();
    let mut csv = Vec::new();
    write_comparison_csv(&rows, &mut csv).unwrap();
    let golden = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/compare_n10.csv")).unwrap();
    let footnoted = rows.iter().all(|r| r.marking_pass_paper_units == 0 && r.note == MARKING_PASS_NOTE)
        && String::from_utf8_lossy(&csv).lines().last() == Some(&format!("# {MARKING_PASS_NOTE}")[..]);

    let mut out = Vec::new();
    let code = qsearch::cli::run_command(
        ["qsearch", "compare", "--n", "10", "--m", "0,1,4"],
        &mut &b""[..],
        &mut out,
        &mut Vec::new(),
    );
    verdict(
        "AC8",
        "honest accounting",
        honest == runs && footnoted && csv == golden && code == 0 && out == golden,
        format!(
            "predicate_evals = N in {honest}/{runs} ledgers; compare footnote present: {footnoted}; \
             golden match (library, cli): ({}, {})",
            csv == golden,
            out == golden
        ),
    );
}
