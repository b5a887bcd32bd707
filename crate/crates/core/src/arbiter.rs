//! Concurrency control for the ANS/COUNT registers.
//!
//! Writers compete for a single critical section covering both registers.
//! [`Ccc`] is the central controller used by the deterministic simulation;
//! [`SharedArbiter`] is its thread-safe counterpart for stress runs with real
//! worker threads. [`token_ring_arbitrate`] is the decentralized alternative.
//! Every protocol step is logged as a [`TraceEvent`] and [`verify_trace`]
//! checks mutual exclusion, starvation and deadlock freedom after the fact.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex, MutexGuard};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marksearch::WriteRequest;

/// Rule the central controller uses to choose among waiting writers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionPolicy {
    /// Lowest index first, so answers come out sorted.
    AscendingIndex,
    DescendingIndex,
    /// Earliest `submit_order` first.
    Fifo,
    /// Uniform choice driven by a generator seeded with the given value.
    Random(u64),
}

impl SelectionPolicy {
    /// Parses a policy name; `random` takes its seed from `seed`.
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ascending" | "asc" => Ok(Self::AscendingIndex),
            "descending" | "desc" => Ok(Self::DescendingIndex),
            "fifo" => Ok(Self::Fifo),
            "random" => Ok(Self::Random(seed)),
            other => Err(Error::Domain(format!("unknown selection policy `{other}`"))),
        }
    }

    pub fn all(seed: u64) -> [SelectionPolicy; 4] {
        [Self::AscendingIndex, Self::DescendingIndex, Self::Fifo, Self::Random(seed)]
    }
}

impl fmt::Display for SelectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AscendingIndex => f.write_str("ascending"),
            Self::DescendingIndex => f.write_str("descending"),
            Self::Fifo => f.write_str("fifo"),
            Self::Random(seed) => write!(f, "random({seed})"),
        }
    }
}

#[derive(Debug, Clone)]
struct Selector {
    policy: SelectionPolicy,
    rng: Option<ChaCha8Rng>,
}

impl Selector {
    fn new(policy: SelectionPolicy) -> Self {
        let rng = match policy {
            SelectionPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Self { policy, rng }
    }

    /// Position in `waiting` of the next writer to grant. `waiting` is non-empty.
    fn pick(&mut self, waiting: &[WriteRequest]) -> usize {
        let by = |key: fn(&WriteRequest) -> (usize, u64)| {
            waiting.iter().enumerate().min_by_key(|(_, r)| key(r)).map(|(i, _)| i).unwrap_or(0)
        };
        match self.policy {
            SelectionPolicy::AscendingIndex => by(|r| (r.index, 0)),
            SelectionPolicy::DescendingIndex => {
                waiting.iter().enumerate().max_by_key(|(_, r)| r.index).map(|(i, _)| i).unwrap_or(0)
            }
            SelectionPolicy::Fifo => by(|r| (0, r.submit_order)),
            SelectionPolicy::Random(_) => {
                self.rng.as_mut().expect("random selector has a generator").gen_range(0..waiting.len())
            }
        }
    }
}

/// Exclusive right to enter the ANS/COUNT critical section.
///
/// Only an arbiter can mint one, so [`write_and_increment`] cannot be called
/// without holding the grant.
#[derive(Debug, PartialEq, Eq)]
pub struct Grant {
    index: usize,
}

impl Grant {
    pub(crate) fn issue(index: usize) -> Self {
        Self { index }
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

/// Central Concurrency Controller: queues requests and issues one grant at a time.
#[derive(Debug, Clone)]
pub struct Ccc {
    selector: Selector,
    waiting: Vec<WriteRequest>,
    outstanding: Option<usize>,
}

impl Ccc {
    pub fn new(policy: SelectionPolicy) -> Self {
        Self { selector: Selector::new(policy), waiting: Vec::new(), outstanding: None }
    }

    pub fn policy(&self) -> SelectionPolicy {
        self.selector.policy
    }

    pub fn waiting(&self) -> usize {
        self.waiting.len()
    }

    pub fn submit(&mut self, request: WriteRequest) -> Result<()> {
        if self.outstanding == Some(request.index) || self.waiting.iter().any(|r| r.index == request.index) {
            return Err(Error::Protocol(format!("duplicate request for index {}", request.index)));
        }
        self.waiting.push(request);
        Ok(())
    }

    /// Selects the next waiting writer, or `None` when the queue is empty.
    pub fn grant_next(&mut self) -> Result<Option<Grant>> {
        if let Some(holder) = self.outstanding {
            return Err(Error::Protocol(format!("grant to {holder} still outstanding")));
        }
        if self.waiting.is_empty() {
            return Ok(None);
        }
        let pos = self.selector.pick(&self.waiting);
        let request = self.waiting.remove(pos);
        self.outstanding = Some(request.index);
        Ok(Some(Grant { index: request.index }))
    }

    /// Removes every waiting request, returning their indices in queue order.
    pub fn drain(&mut self) -> Vec<usize> {
        self.waiting.drain(..).map(|r| r.index).collect()
    }

    pub fn release(&mut self, grant: Grant) -> Result<()> {
        if self.outstanding != Some(grant.index) {
            return Err(Error::Protocol(format!("release of {} which does not hold the grant", grant.index)));
        }
        self.outstanding = None;
        Ok(())
    }
}

/// Order in which the central controller grants `requests` under `policy`.
pub fn ccc_arbitrate(requests: &[WriteRequest], policy: SelectionPolicy) -> Result<Vec<usize>> {
    let mut ccc = Ccc::new(policy);
    for request in requests {
        ccc.submit(*request)?;
    }
    let mut order = Vec::with_capacity(requests.len());
    while let Some(grant) = ccc.grant_next()? {
        order.push(grant.index);
        ccc.release(grant)?;
    }
    Ok(order)
}

/// One circulation of a token over `ring_size` positions starting at `start`;
/// each requester is granted when the token reaches it. The pass always costs
/// `ring_size` hops since nodes do not know how many requesters exist.
pub fn token_ring_arbitrate(requests: &[WriteRequest], start: usize, ring_size: usize) -> Result<Vec<usize>> {
    if start >= ring_size {
        return Err(Error::Domain(format!("token start {start} outside ring of size {ring_size}")));
    }
    let mut wants = vec![false; ring_size];
    for r in requests {
        if r.index >= ring_size {
            return Err(Error::IndexOutOfRange { index: r.index, size: ring_size });
        }
        if std::mem::replace(&mut wants[r.index], true) {
            return Err(Error::Protocol(format!("duplicate request for index {}", r.index)));
        }
    }
    Ok((0..ring_size).map(|hop| (start + hop) % ring_size).filter(|&pos| wants[pos]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AnsMode {
    /// One register, overwritten by every write.
    Single,
    /// N registers; the i-th write lands in cell i.
    #[default]
    Array,
}

impl FromStr for AnsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Self::Single),
            "array" => Ok(Self::Array),
            other => Err(Error::Domain(format!("unknown ANS mode `{other}`"))),
        }
    }
}

/// The ANS register(s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsStore {
    mode: AnsMode,
    single: Option<usize>,
    cells: Vec<Option<usize>>,
}

impl AnsStore {
    /// `size` is the cell count in array mode and is ignored in single mode.
    pub fn new(mode: AnsMode, size: usize) -> Self {
        let cells = match mode {
            AnsMode::Single => Vec::new(),
            AnsMode::Array => vec![None; size],
        };
        Self { mode, single: None, cells }
    }

    pub fn mode(&self) -> AnsMode {
        self.mode
    }

    /// Most recent value in single mode.
    pub fn single(&self) -> Option<usize> {
        self.single
    }

    pub fn cell(&self, i: usize) -> Option<usize> {
        self.cells.get(i).copied().flatten()
    }

    /// Written array cells in COUNT order (single mode: the current value, if any).
    pub fn contents(&self) -> Vec<usize> {
        match self.mode {
            AnsMode::Single => self.single.into_iter().collect(),
            AnsMode::Array => self.cells.iter().map_while(|c| *c).collect(),
        }
    }
}

/// The COUNT register: completed writes so far. Never decrements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRegister {
    value: u64,
}

impl CountRegister {
    pub fn value(&self) -> u64 {
        self.value
    }
}

/// Writes the granted index into ANS (at cell COUNT in array mode) and bumps COUNT.
/// Both registers change together under one grant.
pub fn write_and_increment(grant: &Grant, ans: &mut AnsStore, count: &mut CountRegister) -> Result<()> {
    match ans.mode {
        AnsMode::Single => ans.single = Some(grant.index),
        AnsMode::Array => {
            let slot = ans.cells.get_mut(count.value as usize).ok_or_else(|| {
                Error::Protocol(format!("ANS has no cell {} for writer {}", count.value, grant.index))
            })?;
            *slot = Some(grant.index);
        }
    }
    count.value += 1;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TraceKind {
    Request,
    Grant,
    WriteStart,
    WriteEnd,
    Release,
    Fail,
}

impl TraceKind {
    fn as_str(self) -> &'static str {
        match self {
            Self::Request => "request",
            Self::Grant => "grant",
            Self::WriteStart => "write_start",
            Self::WriteEnd => "write_end",
            Self::Release => "release",
            Self::Fail => "fail",
        }
    }
}

impl FromStr for TraceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "request" => Self::Request,
            "grant" => Self::Grant,
            "write_start" => Self::WriteStart,
            "write_end" => Self::WriteEnd,
            "release" => Self::Release,
            "fail" => Self::Fail,
            other => return Err(format!("unknown event kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub time: u64,
    pub kind: TraceKind,
    pub index: usize,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.time, self.kind.as_str(), self.index)
    }
}

impl FromStr for TraceEvent {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let mut fields = line.split_whitespace();
        let (Some(time), Some(kind), Some(index), None) = (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(format!("expected `time kind index`, got `{line}`"));
        };
        Ok(TraceEvent {
            time: time.parse().map_err(|_| format!("bad time `{time}`"))?,
            kind: kind.parse()?,
            index: index.parse().map_err(|_| format!("bad index `{index}`"))?,
        })
    }
}

/// Writes one `time kind index` line per event.
pub fn write_trace<W: Write>(trace: &[TraceEvent], mut out: W) -> std::io::Result<()> {
    for event in trace {
        writeln!(out, "{event}")?;
    }
    Ok(())
}

/// Reads a line-delimited trace. Blank lines and `#` comments are skipped.
pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<TraceEvent>> {
    let mut events = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Trace { time: 0, reason: e.to_string() })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let event = line
            .parse()
            .map_err(|reason| Error::Trace { time: 0, reason: format!("line {}: {reason}", lineno + 1) })?;
        events.push(event);
    }
    Ok(events)
}

/// Event log with a global logical clock.
#[derive(Debug, Clone, Default)]
pub struct Tracer {
    clock: u64,
    events: Vec<TraceEvent>,
}

impl Tracer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn log(&mut self, kind: TraceKind, index: usize) {
        self.events.push(TraceEvent { time: self.clock, kind, index });
        self.clock += 1;
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// No two WriteStart..WriteEnd intervals overlap.
    pub mutual_exclusion_ok: bool,
    /// Every expected index was granted with at most M−1 predecessors.
    pub starvation_ok: bool,
    /// Every request ended in Release or Fail.
    pub deadlock_ok: bool,
    /// Largest number of distinct writers granted before some writer's first grant.
    pub max_wait_position: u64,
    pub grants: u64,
    pub completed_writes: u64,
    /// Expected indices that were never granted.
    pub never_granted: Vec<usize>,
    /// Indices whose last request was left unresolved.
    pub unresolved: Vec<usize>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.mutual_exclusion_ok && self.starvation_ok && self.deadlock_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Requested,
    Granted,
    Writing,
    Written,
}

/// Checks a complete trace for mutual exclusion, starvation and deadlock freedom.
///
/// Each writer must follow Request → Grant → WriteStart → WriteEnd → Release,
/// with Fail allowed in place of any step after Request; a failed writer may
/// request again. Logical times must be strictly increasing. A trace that
/// breaks those rules is malformed and yields [`Error::Trace`]; one that
/// follows them but grants a writer while another still holds the grant,
/// overlaps writes, or leaves writers waiting yields a report
/// with the relevant flag cleared.
pub fn verify_trace(trace: &[TraceEvent], expected: &[usize], m: u64) -> Result<VerificationReport> {
    let mut phases: HashMap<usize, Phase> = HashMap::new();
    let mut writing: BTreeSet<usize> = BTreeSet::new();
    // writer between Grant and Release/Fail
    let mut holder: Option<usize> = None;
    let mut first_grant: HashMap<usize, u64> = HashMap::new();
    let mut mutual_exclusion_ok = true;
    let mut grants = 0;
    let mut completed_writes = 0;
    let mut last_time = None;

    for event in trace {
        let malformed = |reason: String| Error::Trace { time: event.time, reason };
        if last_time.is_some_and(|t| event.time <= t) {
            return Err(malformed("logical time is not strictly increasing".into()));
        }
        last_time = Some(event.time);

        let phase = phases.entry(event.index).or_insert(Phase::Idle);
        let next = match (event.kind, *phase) {
            (TraceKind::Request, Phase::Idle) => Phase::Requested,
            (TraceKind::Grant, Phase::Requested) => {
                if holder.is_some() {
                    mutual_exclusion_ok = false;
                }
                holder = Some(event.index);
                grants += 1;
                let position = first_grant.len() as u64;
                first_grant.entry(event.index).or_insert(position);
                Phase::Granted
            }
            (TraceKind::WriteStart, Phase::Granted) => {
                if !writing.is_empty() {
                    mutual_exclusion_ok = false;
                }
                writing.insert(event.index);
                Phase::Writing
            }
            (TraceKind::WriteEnd, Phase::Writing) => {
                writing.remove(&event.index);
                completed_writes += 1;
                Phase::Written
            }
            (TraceKind::Release, Phase::Written) => {
                holder = holder.filter(|&h| h != event.index);
                Phase::Idle
            }
            (TraceKind::Fail, Phase::Requested | Phase::Granted | Phase::Writing) => {
                writing.remove(&event.index);
                holder = holder.filter(|&h| h != event.index);
                Phase::Idle
            }
            (kind, from) => {
                return Err(malformed(format!("{kind:?} for index {} while {from:?}", event.index)));
            }
        };
        *phase = next;
    }

    let never_granted: Vec<usize> = expected.iter().copied().filter(|j| !first_grant.contains_key(j)).collect();
    let max_wait_position = first_grant.values().copied().max().unwrap_or(0);
    let wait_bound = m.saturating_sub(1);
    let starvation_ok = never_granted.is_empty() && first_grant.values().all(|&w| w <= wait_bound);
    let mut unresolved: Vec<usize> =
        phases.iter().filter(|(_, p)| **p != Phase::Idle).map(|(&j, _)| j).collect();
    unresolved.sort_unstable();

    Ok(VerificationReport {
        mutual_exclusion_ok,
        starvation_ok,
        deadlock_ok: unresolved.is_empty(),
        max_wait_position,
        grants,
        completed_writes,
        never_granted,
        unresolved,
    })
}

const EMPTY: usize = usize::MAX;

/// Registers shared by stress-mode workers. Writes are plain load/store pairs,
/// so only the arbiter's grant keeps them consistent.
#[derive(Debug)]
struct SharedRegisters {
    mode: AnsMode,
    single: AtomicUsize,
    cells: Vec<AtomicUsize>,
    count: AtomicU64,
}

#[derive(Debug)]
struct SharedState {
    selector: Selector,
    waiting: Vec<WriteRequest>,
    holder: Option<usize>,
    tracer: Tracer,
    violations: Vec<Error>,
}

/// Thread-safe central controller for stress runs.
///
/// Workers call [`acquire`](Self::acquire), which blocks until the caller holds
/// the grant, then [`write`](Self::write) and [`release`](Self::release) (or
/// [`fail`](Self::fail)). Logical time is assigned under the arbiter's lock as
/// each event is admitted.
#[derive(Debug)]
pub struct SharedArbiter {
    state: Mutex<SharedState>,
    turn: Condvar,
    registers: SharedRegisters,
}

impl SharedArbiter {
    pub fn new(policy: SelectionPolicy, mode: AnsMode, size: usize) -> Self {
        let cells = match mode {
            AnsMode::Single => Vec::new(),
            AnsMode::Array => (0..size).map(|_| AtomicUsize::new(EMPTY)).collect(),
        };
        Self {
            state: Mutex::new(SharedState {
                selector: Selector::new(policy),
                waiting: Vec::new(),
                holder: None,
                tracer: Tracer::new(),
                violations: Vec::new(),
            }),
            turn: Condvar::new(),
            registers: SharedRegisters { mode, single: AtomicUsize::new(EMPTY), cells, count: AtomicU64::new(0) },
        }
    }

    fn lock(&self) -> MutexGuard<'_, SharedState> {
        self.state.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    fn dispatch(state: &mut SharedState) {
        if state.holder.is_none() && !state.waiting.is_empty() {
            let pos = state.selector.pick(&state.waiting);
            let request = state.waiting.remove(pos);
            state.holder = Some(request.index);
            state.tracer.log(TraceKind::Grant, request.index);
        }
    }

    /// Submits a request and blocks until it is granted.
    pub fn acquire(&self, request: WriteRequest) -> Result<Grant> {
        let mut state = self.lock();
        if state.holder == Some(request.index) || state.waiting.iter().any(|r| r.index == request.index) {
            return Err(Error::Protocol(format!("duplicate request for index {}", request.index)));
        }
        state.tracer.log(TraceKind::Request, request.index);
        state.waiting.push(request);
        Self::dispatch(&mut state);
        let _granted =
            self.turn.wait_while(state, |s| s.holder != Some(request.index)).unwrap_or_else(|p| p.into_inner());
        Ok(Grant { index: request.index })
    }

    /// Enters the critical section, writes ANS and increments COUNT.
    pub fn write(&self, grant: &Grant) -> Result<()> {
        {
            let mut state = self.lock();
            if state.holder != Some(grant.index) {
                let err = Error::ExclusionViolation { writer: grant.index, holder: state.holder };
                state.violations.push(err.clone());
                return Err(err);
            }
            state.tracer.log(TraceKind::WriteStart, grant.index);
        }
        let regs = &self.registers;
        let c = regs.count.load(Ordering::Acquire);
        match regs.mode {
            AnsMode::Single => regs.single.store(grant.index, Ordering::Release),
            AnsMode::Array => match regs.cells.get(c as usize) {
                Some(cell) => cell.store(grant.index, Ordering::Release),
                None => {
                    return Err(Error::Protocol(format!("ANS has no cell {c} for writer {}", grant.index)));
                }
            },
        }
        std::thread::yield_now();
        regs.count.store(c + 1, Ordering::Release);
        self.lock().tracer.log(TraceKind::WriteEnd, grant.index);
        Ok(())
    }

    fn finish(&self, grant: Grant, kind: TraceKind) -> Result<()> {
        let mut state = self.lock();
        if state.holder != Some(grant.index) {
            return Err(Error::Protocol(format!("{kind:?} by {} which does not hold the grant", grant.index)));
        }
        state.tracer.log(kind, grant.index);
        state.holder = None;
        Self::dispatch(&mut state);
        drop(state);
        self.turn.notify_all();
        Ok(())
    }

    pub fn release(&self, grant: Grant) -> Result<()> {
        self.finish(grant, TraceKind::Release)
    }

    /// Gives up the grant without writing.
    pub fn fail(&self, grant: Grant) -> Result<()> {
        self.finish(grant, TraceKind::Fail)
    }

    /// Final trace, ANS contents, COUNT, and any exclusion violations observed.
    pub fn into_parts(self) -> (Vec<TraceEvent>, AnsStore, CountRegister, Vec<Error>) {
        let state = self.state.into_inner().unwrap_or_else(|p| p.into_inner());
        let load = |a: &AtomicUsize| Some(a.load(Ordering::Acquire)).filter(|&v| v != EMPTY);
        let ans = AnsStore {
            mode: self.registers.mode,
            single: load(&self.registers.single),
            cells: self.registers.cells.iter().map(load).collect(),
        };
        let count = CountRegister { value: self.registers.count.load(Ordering::Acquire) };
        (state.tracer.into_events(), ans, count, state.violations)
    }
}
