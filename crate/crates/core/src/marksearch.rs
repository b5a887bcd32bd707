//! Marking-register search.
//!
//! After the usual preparation, the oracle marks `T[x]` for every solution `x`.
//! Each mark spawns a writer `P(j)` that competes for the ANS/COUNT critical
//! section; once every writer has been granted and written, ANS holds all M
//! solutions. The marking pass is evaluated classically over `[0, N)`, so a run
//! always performs N predicate evaluations even though the paper-model ledger
//! charges it nothing.

use std::sync::mpsc;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arbiter::{
    token_ring_arbitrate, write_and_increment, AnsMode, AnsStore, Ccc, CountRegister, Grant, SelectionPolicy,
    SharedArbiter, TraceEvent, TraceKind, Tracer, VerificationReport,
};
use crate::error::{Error, Result};
use crate::ledger::StepLedger;
use crate::qsim::SearchProblem;

/// The T register: one mark per index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkRegister {
    marks: Vec<bool>,
}

impl MarkRegister {
    pub fn new(size: usize) -> Self {
        Self { marks: vec![false; size] }
    }

    pub fn size(&self) -> usize {
        self.marks.len()
    }

    pub fn is_marked(&self, j: usize) -> bool {
        self.marks.get(j).copied().unwrap_or(false)
    }

    pub fn marked(&self) -> impl Iterator<Item = usize> + '_ {
        self.marks.iter().enumerate().filter(|(_, &m)| m).map(|(j, _)| j)
    }

    pub fn marked_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m).count()
    }
}

/// A pending write by process `P(index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteRequest {
    pub index: usize,
    pub submit_order: u64,
    /// Zero on the first attempt, incremented on each rerun.
    pub attempt: u32,
}

/// Evaluates the predicate on every index and marks the solutions.
/// Charges N predicate evaluations and no paper-model steps.
pub fn mark_solutions(problem: &SearchProblem, ledger: &mut StepLedger) -> MarkRegister {
    let mut register = MarkRegister::new(problem.size());
    for (x, mark) in register.marks.iter_mut().enumerate() {
        *mark = problem.is_solution(x);
    }
    ledger.charge_predicate_evals(problem.size() as u64);
    register
}

/// One writer per mark, submitted in ascending index order.
pub fn spawn_writers(marks: &MarkRegister) -> Vec<WriteRequest> {
    marks
        .marked()
        .enumerate()
        .map(|(order, index)| WriteRequest { index, submit_order: order as u64, attempt: 0 })
        .collect()
}

/// Permutes the submission order of `requests` with a seeded shuffle, so that
/// FIFO arbitration differs from ascending-index arbitration.
pub fn shuffle_submissions(requests: &mut [WriteRequest], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    requests.shuffle(&mut rng);
    for (order, r) in requests.iter_mut().enumerate() {
        r.submit_order = order as u64;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arbitration {
    Central(SelectionPolicy),
    /// Token circulating over all N positions from `start`.
    TokenRing { start: usize },
}

impl From<SelectionPolicy> for Arbitration {
    fn from(policy: SelectionPolicy) -> Self {
        Arbitration::Central(policy)
    }
}

/// Seeded process failures. A failing attempt is granted, then aborts before
/// writing anything.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultConfig {
    /// Failure probability per write attempt.
    pub probability: f64,
    /// Passes allowed after the first.
    pub max_reruns: u32,
    /// Faults strike only attempts numbered below this; `None` means every attempt.
    pub faulty_attempts: Option<u32>,
}

impl Default for FaultConfig {
    fn default() -> Self {
        Self::none()
    }
}

impl FaultConfig {
    pub fn none() -> Self {
        Self { probability: 0.0, max_reruns: 0, faulty_attempts: None }
    }

    pub fn new(probability: f64, max_reruns: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::Domain(format!("fault probability {probability} outside [0, 1]")));
        }
        Ok(Self { probability, max_reruns, faulty_attempts: None })
    }

    /// Faults only on the first `attempts` attempts of each writer.
    pub fn first_attempts(probability: f64, attempts: u32, max_reruns: u32) -> Result<Self> {
        Ok(Self { faulty_attempts: Some(attempts), ..Self::new(probability, max_reruns)? })
    }

    fn strikes<R: Rng + ?Sized>(&self, attempt: u32, rng: &mut R) -> bool {
        if self.probability <= 0.0 || self.faulty_attempts.is_some_and(|k| attempt >= k) {
            return false;
        }
        rng.gen_bool(self.probability)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RerunStrategy {
    /// Respawn only the writers that failed.
    #[default]
    FailedOnly,
    /// Clear ANS and COUNT and respawn every writer.
    FullRestart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub arbitration: Arbitration,
    pub ans_mode: AnsMode,
    pub faults: FaultConfig,
    pub rerun: RerunStrategy,
    /// Seed for permuting writer submission order.
    pub shuffle_submit: Option<u64>,
    /// Halt after the first completed write; remaining writers are cancelled.
    pub early_stop: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            arbitration: Arbitration::Central(SelectionPolicy::AscendingIndex),
            ans_mode: AnsMode::Array,
            faults: FaultConfig::none(),
            rerun: RerunStrategy::FailedOnly,
            shuffle_submit: None,
            early_stop: false,
        }
    }
}

impl SearchOptions {
    pub fn with_policy(policy: SelectionPolicy) -> Self {
        Self { arbitration: Arbitration::Central(policy), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedResult {
    /// Indices in the order they were written.
    pub answers: Vec<usize>,
    /// Final COUNT.
    pub count: u64,
    pub ans: AnsStore,
    pub trace: Vec<TraceEvent>,
    pub ledger: StepLedger,
    /// Passes executed, including the first.
    pub attempts: u32,
    /// False when some writer was still failing after the last allowed rerun.
    pub completed: bool,
    pub unwritten: Vec<usize>,
}

impl ModifiedResult {
    pub fn verify(&self, problem: &SearchProblem) -> Result<VerificationReport> {
        crate::arbiter::verify_trace(&self.trace, problem.solutions(), problem.solution_count() as u64)
    }
}

struct Run {
    tracer: Tracer,
    ledger: StepLedger,
    ans: AnsStore,
    count: CountRegister,
    answers: Vec<usize>,
}

impl Run {
    /// Runs one granted writer. Returns false if the attempt failed.
    fn serve<R: Rng + ?Sized>(&mut self, grant: &Grant, request: &WriteRequest, faults: &FaultConfig, rng: &mut R) -> Result<bool> {
        let j = grant.index();
        self.tracer.log(TraceKind::Grant, j);
        self.ledger.charge_grant();
        if faults.strikes(request.attempt, rng) {
            self.tracer.log(TraceKind::Fail, j);
            return Ok(false);
        }
        self.tracer.log(TraceKind::WriteStart, j);
        write_and_increment(grant, &mut self.ans, &mut self.count)?;
        self.tracer.log(TraceKind::WriteEnd, j);
        self.tracer.log(TraceKind::Release, j);
        self.answers.push(j);
        self.ledger.charge_paper_steps(1);
        Ok(true)
    }

    fn cancel_waiting(&mut self, indices: Vec<usize>) {
        for j in indices {
            self.tracer.log(TraceKind::Fail, j);
        }
    }
}

/// Deterministic event-sequential run of the full marking-register search.
///
/// Each pass floods the arbiter with every pending request, then serves grants
/// one at a time. Writers that fail are respawned on the next pass until none
/// remain or `faults.max_reruns` passes have been added.
pub fn run_modified_search<R: Rng + ?Sized>(
    problem: &SearchProblem,
    options: &SearchOptions,
    rng: &mut R,
) -> Result<ModifiedResult> {
    let size = problem.size();
    let mut run = Run {
        tracer: Tracer::new(),
        ledger: StepLedger::new(),
        ans: AnsStore::new(options.ans_mode, size),
        count: CountRegister::default(),
        answers: Vec::new(),
    };
    run.ledger.charge_paper_steps(u64::from(problem.qubits()));
    let marks = mark_solutions(problem, &mut run.ledger);
    let mut pending = spawn_writers(&marks);
    if let Some(seed) = options.shuffle_submit {
        shuffle_submissions(&mut pending, seed);
    }
    let all_writers = pending.clone();

    // One controller for the whole run so a Random policy draws from one stream.
    let mut ccc = match options.arbitration {
        Arbitration::Central(policy) => Some(Ccc::new(policy)),
        Arbitration::TokenRing { .. } => None,
    };

    let mut attempts = 0;
    while !pending.is_empty() && attempts <= options.faults.max_reruns {
        attempts += 1;
        pending.sort_by_key(|r| r.submit_order);
        for r in &pending {
            run.tracer.log(TraceKind::Request, r.index);
        }
        let mut failed = Vec::new();
        match (&mut ccc, options.arbitration) {
            (Some(ccc), _) => {
                for r in &pending {
                    ccc.submit(*r)?;
                }
                while let Some(grant) = ccc.grant_next()? {
                    let request = *pending.iter().find(|r| r.index == grant.index()).expect("granted a pending writer");
                    if !run.serve(&grant, &request, &options.faults, rng)? {
                        failed.push(request);
                    }
                    ccc.release(grant)?;
                    if options.early_stop && !run.answers.is_empty() {
                        run.cancel_waiting(ccc.drain());
                        failed.clear();
                        break;
                    }
                }
            }
            (None, Arbitration::TokenRing { start }) => {
                let order = token_ring_arbitrate(&pending, start, size)?;
                run.ledger.charge_token_hops(size as u64);
                let mut order = order.into_iter();
                while let Some(j) = order.next() {
                    let request = *pending.iter().find(|r| r.index == j).expect("ring granted a pending writer");
                    if !run.serve(&Grant::issue(j), &request, &options.faults, rng)? {
                        failed.push(request);
                    }
                    if options.early_stop && !run.answers.is_empty() {
                        run.cancel_waiting(order.by_ref().collect());
                        failed.clear();
                        break;
                    }
                }
            }
            (None, Arbitration::Central(_)) => unreachable!("central arbitration always has a controller"),
        }

        if options.early_stop && !run.answers.is_empty() {
            failed.clear();
        }
        pending = if failed.is_empty() {
            Vec::new()
        } else {
            match options.rerun {
                RerunStrategy::FailedOnly => failed,
                RerunStrategy::FullRestart => {
                    // discarded writes leave the paper-model tally; grants_issued keeps their cost
                    run.ledger.paper_steps -= run.count.value();
                    run.ans = AnsStore::new(options.ans_mode, size);
                    run.count = CountRegister::default();
                    run.answers.clear();
                    all_writers.clone()
                }
            }
        };
        for r in &mut pending {
            r.attempt += 1;
        }
    }

    let mut unwritten: Vec<usize> = pending.iter().map(|r| r.index).collect();
    unwritten.sort_unstable();
    Ok(ModifiedResult {
        answers: run.answers,
        count: run.count.value(),
        ans: run.ans,
        trace: run.tracer.into_events(),
        ledger: run.ledger,
        attempts: attempts.max(1),
        completed: unwritten.is_empty(),
        unwritten,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarlyStopResult {
    pub index: usize,
    pub trace: Vec<TraceEvent>,
    pub ledger: StepLedger,
}

/// Stops after the first granted write. Writers still waiting are cancelled
/// and appear in the trace as `Fail`.
pub fn early_stop_search(problem: &SearchProblem, policy: SelectionPolicy) -> Result<EarlyStopResult> {
    if problem.solution_count() == 0 {
        return Err(Error::NoSolution);
    }
    let options = SearchOptions { early_stop: true, ans_mode: AnsMode::Single, ..SearchOptions::with_policy(policy) };
    // no faults are configured, so the generator is never drawn from
    let r = run_modified_search(problem, &options, &mut ChaCha8Rng::seed_from_u64(0))?;
    Ok(EarlyStopResult { index: r.answers[0], trace: r.trace, ledger: r.ledger })
}

/// Runs the search with one OS thread per writer contending on a
/// [`SharedArbiter`]. Interleavings vary between runs; the invariants do not.
///
/// Fails with [`Error::Timeout`] if the writers have not all finished within
/// `timeout`. Only central arbitration is supported; each failed writer
/// retries on its own, so `options.rerun` is not consulted.
pub fn run_stress_search(
    problem: &SearchProblem,
    options: &SearchOptions,
    seed: u64,
    timeout: Duration,
) -> Result<ModifiedResult> {
    let Arbitration::Central(policy) = options.arbitration else {
        return Err(Error::Domain("stress mode supports central arbitration only".into()));
    };
    let size = problem.size();
    let mut ledger = StepLedger::new();
    ledger.charge_paper_steps(u64::from(problem.qubits()));
    let mut writers = spawn_writers(&mark_solutions(problem, &mut ledger));
    if let Some(s) = options.shuffle_submit {
        shuffle_submissions(&mut writers, s);
    }

    let arbiter = Arc::new(SharedArbiter::new(policy, options.ans_mode, size));
    let (done_tx, done_rx) = mpsc::channel::<Result<(usize, u32, bool)>>();
    let mut handles = Vec::with_capacity(writers.len());
    for request in writers.iter().copied() {
        let arbiter = Arc::clone(&arbiter);
        let done = done_tx.clone();
        let faults = options.faults;
        handles.push(std::thread::spawn(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (request.index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let outcome = (|| {
                let mut request = request;
                loop {
                    let grant = arbiter.acquire(request)?;
                    if faults.strikes(request.attempt, &mut rng) {
                        arbiter.fail(grant)?;
                        if request.attempt >= faults.max_reruns {
                            return Ok((request.index, request.attempt + 1, false));
                        }
                        request.attempt += 1;
                        continue;
                    }
                    arbiter.write(&grant)?;
                    arbiter.release(grant)?;
                    return Ok((request.index, request.attempt + 1, true));
                }
            })();
            let _ = done.send(outcome);
        }));
    }
    drop(done_tx);

    let deadline = Instant::now() + timeout;
    let mut attempts = 1;
    let mut unwritten = Vec::new();
    for _ in 0..writers.len() {
        let remaining = deadline.saturating_duration_since(Instant::now());
        let (index, tries, written) = match done_rx.recv_timeout(remaining) {
            Ok(outcome) => outcome?,
            Err(_) => return Err(Error::Timeout(timeout)),
        };
        attempts = attempts.max(tries);
        if !written {
            unwritten.push(index);
        }
    }
    for h in handles {
        h.join().map_err(|_| Error::Protocol("writer thread panicked".into()))?;
    }

    let arbiter = Arc::into_inner(arbiter).expect("all writers joined");
    let (trace, ans, count, violations) = arbiter.into_parts();
    if let Some(v) = violations.into_iter().next() {
        return Err(v);
    }
    let answers: Vec<usize> = trace.iter().filter(|e| e.kind == TraceKind::WriteEnd).map(|e| e.index).collect();
    ledger.grants_issued = trace.iter().filter(|e| e.kind == TraceKind::Grant).count() as u64;
    ledger.charge_paper_steps(answers.len() as u64);
    unwritten.sort_unstable();
    Ok(ModifiedResult {
        answers,
        count: count.value(),
        ans,
        trace,
        ledger,
        attempts,
        completed: unwritten.is_empty(),
        unwritten,
    })
}
