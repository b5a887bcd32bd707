//! Step accounting.
//!
//! Every run carries a [`StepLedger`] with two views of its cost. The
//! *paper-model* view prices register preparation at one unit per qubit, the
//! marking pass at zero units and each granted write at one unit, giving
//! `n + M` for a full search and `n + 1` when stopping after the first answer.
//! The *actual* view counts what the simulator really did: predicate
//! evaluations, amplitude updates, grants and token hops.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::arbiter::{TraceEvent, TraceKind};
use crate::error::{Error, Result};
use crate::grover::optimal_iterations;

/// Amplitude updates charged per amplitude for each layer of a Grover run.
/// Preparation is one layer and each iteration is one layer, so a run of `k`
/// iterations over `N` amplitudes costs `(k + 1) * N * AMPLITUDE_OPS_PER_LAYER`.
pub const AMPLITUDE_OPS_PER_LAYER: u64 = 1;

/// Footnote attached to every comparison row.
pub const MARKING_PASS_NOTE: &str =
    "marking pass priced at 0 paper-model units; predicate_evals counts its classical cost (N evaluations)";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLedger {
    pub paper_steps: u64,
    pub predicate_evals: u64,
    pub amplitude_ops: u64,
    pub grover_iterations: u64,
    pub grants_issued: u64,
    /// Token-ring positions visited; zero under central arbitration.
    pub token_hops: u64,
}

impl StepLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge_paper_steps(&mut self, units: u64) {
        self.paper_steps += units;
    }

    pub fn charge_predicate_evals(&mut self, evals: u64) {
        self.predicate_evals += evals;
    }

    pub fn charge_amplitude_ops(&mut self, ops: u64) {
        self.amplitude_ops += ops;
    }

    pub fn charge_grover_iteration(&mut self) {
        self.grover_iterations += 1;
    }

    pub fn charge_grant(&mut self) {
        self.grants_issued += 1;
    }

    pub fn charge_token_hops(&mut self, hops: u64) {
        self.token_hops += hops;
    }

    /// Adds another completed run's counters into this one.
    pub fn merge(&mut self, other: &StepLedger) {
        self.paper_steps += other.paper_steps;
        self.predicate_evals += other.predicate_evals;
        self.amplitude_ops += other.amplitude_ops;
        self.grover_iterations += other.grover_iterations;
        self.grants_issued += other.grants_issued;
        self.token_hops += other.token_hops;
    }
}

/// Paper-model cost of the marking-register search: `n + M`, or `n + min(M, 1)`
/// when only the first answer is kept.
pub fn paper_step_count(n: u32, m: u64, early_stop: bool) -> u64 {
    let writes = if early_stop { m.min(1) } else { m };
    u64::from(n) + writes
}

/// What kind of run a trace came from, with the metadata the trace lacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Modified { n: u32, token_passes: u64 },
    Grover { n: u32, iterations: u64 },
}

/// Rebuilds a ledger from a finished run's trace.
///
/// For marking-register runs, paper steps are `n` plus one per completed write
/// (`WriteEnd` event), grants are counted from `Grant` events and predicate
/// evaluations are always `N`.
pub fn actual_cost(trace: &[TraceEvent], run: RunKind) -> StepLedger {
    let mut ledger = StepLedger::new();
    match run {
        RunKind::Modified { n, token_passes } => {
            let size = 1u64 << n;
            let count = |kind| trace.iter().filter(|e| e.kind == kind).count() as u64;
            ledger.charge_paper_steps(u64::from(n) + count(TraceKind::WriteEnd));
            ledger.charge_predicate_evals(size);
            ledger.grants_issued = count(TraceKind::Grant);
            ledger.charge_token_hops(token_passes * size);
        }
        RunKind::Grover { n, iterations } => {
            let size = 1u64 << n;
            ledger.grover_iterations = iterations;
            ledger.charge_paper_steps(iterations);
            ledger.charge_amplitude_ops((iterations + 1) * size * AMPLITUDE_OPS_PER_LAYER);
        }
    }
    ledger
}

/// One line of the Grover versus marking-register comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    #[serde(rename = "N")]
    pub size: u64,
    #[serde(rename = "M")]
    pub m: u64,
    /// `None` when M = 0, where Grover's schedule is undefined.
    pub grover_iters: Option<u64>,
    pub paper_steps_full: u64,
    pub paper_steps_early: u64,
    pub predicate_evals: u64,
    /// Paper-model units charged for the marking pass; always 0.
    pub marking_pass_paper_units: u64,
    pub note: String,
}

pub const CSV_HEADER: [&str; 6] =
    ["N", "M", "grover_iters", "paper_steps_full", "paper_steps_early", "predicate_evals"];

/// Formula-level comparison of Grover iterations against the paper-model cost.
pub fn compare_models(size: u64, m: u64) -> Result<ComparisonRow> {
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::Domain(format!("N = {size} is not 2^n with n >= 1")));
    }
    if m > size {
        return Err(Error::Domain(format!("M = {m} exceeds N = {size}")));
    }
    let n = size.trailing_zeros();
    let grover_iters = if m == 0 { None } else { Some(optimal_iterations(size, m)?) };
    Ok(ComparisonRow {
        size,
        m,
        grover_iters,
        paper_steps_full: paper_step_count(n, m, false),
        paper_steps_early: paper_step_count(n, m, true),
        predicate_evals: size,
        marking_pass_paper_units: 0,
        note: MARKING_PASS_NOTE.to_owned(),
    })
}

impl ComparisonRow {
    fn csv_record(&self) -> [String; 6] {
        [
            self.size.to_string(),
            self.m.to_string(),
            self.grover_iters.map_or_else(|| "n/a".to_owned(), |k| k.to_string()),
            self.paper_steps_full.to_string(),
            self.paper_steps_early.to_string(),
            self.predicate_evals.to_string(),
        ]
    }
}

/// Writes rows as CSV (header, LF endings) followed by a `#` footnote line.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], out: W) -> std::io::Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush()?;
    let mut out = writer.into_inner().map_err(|e| e.into_error())?;
    writeln!(out, "# {MARKING_PASS_NOTE}")
}

/// Human-readable table; paper-model columns carry a `*` footnote marker.
pub fn write_comparison_table<W: Write>(rows: &[ComparisonRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>10} {:>6} {:>12} {:>12} {:>13} {:>16}",
        "N", "M", "grover_iters", "paper_full*", "paper_early*", "predicate_evals"
    )?;
    for row in rows {
        let r = row.csv_record();
        writeln!(out, "{:>10} {:>6} {:>12} {:>12} {:>13} {:>16}", r[0], r[1], r[2], r[3], r[4], r[5])?;
    }
    writeln!(out, "* {MARKING_PASS_NOTE}")
}
