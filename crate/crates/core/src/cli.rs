//! Command-line front end.
//!
//! [`run_command`] takes the argument list and the three standard streams so
//! the whole CLI can be driven from tests; the `qsearch` binary is a thin
//! wrapper around it.
//!
//! Exit codes: 0 on success, 1 on a runtime error (including a failed trace
//! verification), 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arbiter::{read_trace, verify_trace, write_trace, AnsMode, SelectionPolicy, VerificationReport};
use crate::error::Error;
use crate::grover::{run_grover, GroverResult, Iterations};
use crate::ledger::{
    compare_models, paper_step_count, write_comparison_csv, write_comparison_table, ComparisonRow,
    MARKING_PASS_NOTE,
};
use crate::marksearch::{
    early_stop_search, run_modified_search, run_stress_search, Arbitration, EarlyStopResult, FaultConfig,
    ModifiedResult, RerunStrategy, SearchOptions,
};
use crate::qsim::{SearchProblem, MAX_QUBITS};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "QSEARCH_SEED";

#[derive(Debug, Clone, Parser)]
#[command(name = "qsearch", version, about = "Grover and marking-register search experiments")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for fixtures, fault schedules and measurement.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Output format (default: table, or csv for compare and sweep).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run baseline Grover search and measure once.
    Grover(GroverArgs),
    /// Run the marking-register search.
    Modified(ModifiedArgs),
    /// Tabulate Grover iterations against paper-model step counts.
    Compare(CompareArgs),
    /// Run marking-register searches over a grid of (n, M) and tabulate live step counts.
    Sweep(SweepArgs),
    /// Check a `time kind index` trace for exclusion, starvation and deadlock.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FixtureArgs {
    /// Qubit count; the search space is [0, 2^n).
    #[arg(long)]
    pub n: u32,

    /// Explicit comma-separated solution indices.
    #[arg(long, value_delimiter = ',', conflicts_with = "random_m")]
    pub solutions: Option<Vec<usize>>,

    /// Draw this many distinct solutions using the run seed.
    #[arg(long)]
    pub random_m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GroverArgs {
    #[command(flatten)]
    pub fixture: FixtureArgs,

    /// Iteration count, or `auto` for ⌊(π/4)√(N/M)⌋.
    #[arg(long, default_value = "auto")]
    pub iterations: Iterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyName {
    Ascending,
    Descending,
    Fifo,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnsModeName {
    Single,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArbitrationName {
    Central,
    Ring,
}

#[derive(Debug, Clone, Args)]
pub struct ModifiedArgs {
    #[command(flatten)]
    pub fixture: FixtureArgs,

    #[arg(long, value_enum, default_value = "ascending")]
    pub policy: PolicyName,

    #[arg(long, value_enum, default_value = "array")]
    pub ans_mode: AnsModeName,

    /// Central controller or decentralized token ring.
    #[arg(long, value_enum, default_value = "central")]
    pub arbitration: ArbitrationName,

    /// Token start position for ring arbitration.
    #[arg(long, default_value_t = 0)]
    pub ring_start: usize,

    /// Per-attempt writer failure probability, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub fault_prob: f64,

    #[arg(long, default_value_t = 0)]
    pub max_reruns: u32,

    /// On failure, clear ANS/COUNT and respawn every writer.
    #[arg(long)]
    pub full_restart: bool,

    /// Stop after the first granted write.
    #[arg(long)]
    pub early_stop: bool,

    /// Pause for a newline after each ANS update (single ANS mode only).
    #[arg(long)]
    pub paged: bool,

    /// Permute writer submission order with this seed.
    #[arg(long)]
    pub shuffle_submit: Option<u64>,

    /// Run writers as parallel threads.
    #[arg(long, conflicts_with = "early_stop")]
    pub stress: bool,

    /// Stress-mode termination deadline.
    #[arg(long, default_value_t = 10)]
    pub timeout_secs: u64,

    /// Write the event trace here as `time kind index` lines.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub n: u32,

    /// Comma-separated solution counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub n_min: u32,

    #[arg(long, default_value_t = 16)]
    pub n_max: u32,

    #[arg(long, value_delimiter = ',', default_value = "0,1,2,4,8")]
    pub m: Vec<u64>,

    #[arg(long, value_enum, default_value = "ascending")]
    pub policy: PolicyName,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Trace file, or `-` for standard input.
    #[arg(long)]
    pub trace: PathBuf,

    /// Comma-separated indices that must each be granted.
    #[arg(long, value_delimiter = ',')]
    pub expected: Vec<usize>,

    /// Wait bound M; defaults to the number of expected indices.
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverReport {
    pub seed: u64,
    pub n: u32,
    pub solutions: Vec<usize>,
    pub iterations: Iterations,
    pub result: GroverResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModifiedReport {
    pub seed: u64,
    pub n: u32,
    pub solutions: Vec<usize>,
    pub options: SearchOptions,
    pub stress: bool,
    pub result: ModifiedResult,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopReport {
    pub seed: u64,
    pub n: u32,
    pub solutions: Vec<usize>,
    pub policy: SelectionPolicy,
    pub result: EarlyStopResult,
    pub note: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run_command<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&config, input, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn execute(config: &RunConfig, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let seed = config.seed;
    match &config.command {
        Command::Grover(args) => grover(args, seed, config.format.unwrap_or(OutputFormat::Table), out).map(|_| 0),
        Command::Modified(args) => {
            modified(args, seed, config.format.unwrap_or(OutputFormat::Table), input, out, err).map(|_| 0)
        }
        Command::Compare(args) => compare(args, config.format.unwrap_or(OutputFormat::Csv), out).map(|_| 0),
        Command::Sweep(args) => sweep(args, seed, config.format.unwrap_or(OutputFormat::Csv), out, err),
        Command::Verify(args) => verify(args, config.format.unwrap_or(OutputFormat::Table), input, out),
    }
}

fn check_qubits(n: u32) -> CliResult {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--n must be in 1..={MAX_QUBITS}, got {n}")))
    }
}

fn build_problem(fixture: &FixtureArgs, rng: &mut ChaCha8Rng) -> CliResult<SearchProblem> {
    check_qubits(fixture.n)?;
    let problem = match (&fixture.solutions, fixture.random_m) {
        (Some(list), None) => SearchProblem::new(fixture.n, list.iter().copied()),
        (None, Some(m)) => SearchProblem::random(fixture.n, m, rng),
        (None, None) => return Err(CliError::Usage("one of --solutions or --random-m is required".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects --solutions with --random-m"),
    };
    problem.map_err(|e| CliError::Usage(e.to_string()))
}

fn list(indices: &[usize]) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn grover(args: &GroverArgs, seed: u64, format: OutputFormat, out: &mut dyn Write) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = build_problem(&args.fixture, &mut rng)?;
    let result = run_grover(&problem, args.iterations, &mut rng).map_err(|e| match e {
        Error::NoSolution => CliError::Usage("`--iterations auto` needs at least one solution".into()),
        other => other.into(),
    })?;
    let report = GroverReport {
        seed,
        n: problem.qubits(),
        solutions: problem.solutions().to_vec(),
        iterations: args.iterations,
        result,
    };
    match format {
        OutputFormat::Table => {
            let r = &report.result;
            writeln!(out, "N:                   {}", problem.size())?;
            writeln!(out, "M:                   {}", problem.solution_count())?;
            writeln!(out, "iterations:          {}", r.iterations_used)?;
            writeln!(out, "sampled index:       {}", r.sampled_index)?;
            writeln!(out, "is solution:         {}", r.is_solution)?;
            writeln!(out, "success probability: {:.6}", r.success_probability)?;
            writeln!(out, "amplitude ops:       {}", r.ledger.amplitude_ops)?;
            writeln!(out, "seed:                {seed}")?;
        }
        OutputFormat::Csv => {
            let r = &report.result;
            let mut w = csv_writer(out);
            w.write_record(["seed", "N", "M", "iterations", "sampled_index", "is_solution", "success_probability"])
                .map_err(csv_error)?;
            w.write_record([
                seed.to_string(),
                problem.size().to_string(),
                problem.solution_count().to_string(),
                r.iterations_used.to_string(),
                r.sampled_index.to_string(),
                r.is_solution.to_string(),
                r.success_probability.to_string(),
            ])
            .map_err(csv_error)?;
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn search_options(args: &ModifiedArgs, seed: u64, size: usize) -> CliResult<SearchOptions> {
    if !(0.0..1.0).contains(&args.fault_prob) {
        return Err(CliError::Usage(format!("--fault-prob must be in [0, 1), got {}", args.fault_prob)));
    }
    let policy = match args.policy {
        PolicyName::Ascending => SelectionPolicy::AscendingIndex,
        PolicyName::Descending => SelectionPolicy::DescendingIndex,
        PolicyName::Fifo => SelectionPolicy::Fifo,
        PolicyName::Random => SelectionPolicy::Random(seed),
    };
    let arbitration = match args.arbitration {
        ArbitrationName::Central => Arbitration::Central(policy),
        ArbitrationName::Ring => {
            if args.ring_start >= size {
                return Err(CliError::Usage(format!("--ring-start must be below N = {size}")));
            }
            if args.stress {
                return Err(CliError::Usage("--stress requires central arbitration".into()));
            }
            Arbitration::TokenRing { start: args.ring_start }
        }
    };
    Ok(SearchOptions {
        arbitration,
        ans_mode: match args.ans_mode {
            AnsModeName::Single => AnsMode::Single,
            AnsModeName::Array => AnsMode::Array,
        },
        faults: FaultConfig::new(args.fault_prob, args.max_reruns)?,
        rerun: if args.full_restart { RerunStrategy::FullRestart } else { RerunStrategy::FailedOnly },
        shuffle_submit: args.shuffle_submit,
        early_stop: false,
    })
}

fn modified(
    args: &ModifiedArgs,
    seed: u64,
    format: OutputFormat,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = build_problem(&args.fixture, &mut rng)?;
    let options = search_options(args, seed, problem.size())?;

    if args.early_stop {
        if problem.solution_count() == 0 {
            return Err(CliError::Usage("--early-stop needs at least one solution".into()));
        }
        let Arbitration::Central(policy) = options.arbitration else {
            return Err(CliError::Usage("--early-stop requires central arbitration".into()));
        };
        let result = early_stop_search(&problem, policy)?;
        if let Some(path) = &args.trace_out {
            write_trace(&result.trace, File::create(path)?)?;
        }
        let report = EarlyStopReport {
            seed,
            n: problem.qubits(),
            solutions: problem.solutions().to_vec(),
            policy,
            result,
            note: MARKING_PASS_NOTE.to_owned(),
        };
        return write_early_stop(&report, format, out);
    }

    let result = if args.stress {
        run_stress_search(&problem, &options, seed, Duration::from_secs(args.timeout_secs))?
    } else {
        run_modified_search(&problem, &options, &mut rng)?
    };
    if let Some(path) = &args.trace_out {
        write_trace(&result.trace, File::create(path)?)?;
    }

    if args.paged {
        if options.ans_mode == AnsMode::Single {
            // keep structured output clean: pace on stderr for csv/json
            match format {
                OutputFormat::Table => paged_display(&result.answers, input, out, err)?,
                _ => {
                    let mut warnings = Vec::new();
                    paged_display(&result.answers, input, err, &mut warnings)?;
                    err.write_all(&warnings)?;
                }
            }
        } else {
            writeln!(err, "warning: --paged applies to single ANS mode only; ignored")?;
        }
    }

    let report = ModifiedReport {
        seed,
        n: problem.qubits(),
        solutions: problem.solutions().to_vec(),
        options,
        stress: args.stress,
        result,
        note: MARKING_PASS_NOTE.to_owned(),
    };
    write_modified(&report, format, out)?;
    if !report.result.completed {
        return Err(CliError::Runtime(format!(
            "writers {:?} still failing after {} passes",
            report.result.unwritten, report.result.attempts
        )));
    }
    Ok(())
}

fn write_modified(report: &ModifiedReport, format: OutputFormat, out: &mut dyn Write) -> CliResult {
    let r = &report.result;
    match format {
        OutputFormat::Table => {
            writeln!(out, "answers:          {}", list(&r.answers))?;
            writeln!(out, "count:            {}", r.count)?;
            writeln!(out, "paper steps:      {}*", r.ledger.paper_steps)?;
            writeln!(out, "predicate evals:  {}", r.ledger.predicate_evals)?;
            writeln!(out, "grants issued:    {}", r.ledger.grants_issued)?;
            if r.ledger.token_hops > 0 {
                writeln!(out, "token hops:       {}", r.ledger.token_hops)?;
            }
            writeln!(out, "attempts:         {}", r.attempts)?;
            writeln!(out, "completed:        {}", r.completed)?;
            writeln!(out, "seed:             {}", report.seed)?;
            writeln!(out, "* {}", report.note)?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "seed",
                "N",
                "M",
                "answers",
                "count",
                "attempts",
                "completed",
                "paper_steps",
                "predicate_evals",
                "grants_issued",
                "token_hops",
            ])
            .map_err(csv_error)?;
            w.write_record([
                report.seed.to_string(),
                (1usize << report.n).to_string(),
                report.solutions.len().to_string(),
                list(&r.answers),
                r.count.to_string(),
                r.attempts.to_string(),
                r.completed.to_string(),
                r.ledger.paper_steps.to_string(),
                r.ledger.predicate_evals.to_string(),
                r.ledger.grants_issued.to_string(),
                r.ledger.token_hops.to_string(),
            ])
            .map_err(csv_error)?;
            w.flush()?;
            drop(w);
            writeln!(out, "# {}", report.note)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_early_stop(report: &EarlyStopReport, format: OutputFormat, out: &mut dyn Write) -> CliResult {
    let r = &report.result;
    match format {
        OutputFormat::Table => {
            writeln!(out, "answer:           {}", r.index)?;
            writeln!(out, "paper steps:      {}*", r.ledger.paper_steps)?;
            writeln!(out, "predicate evals:  {}", r.ledger.predicate_evals)?;
            writeln!(out, "seed:             {}", report.seed)?;
            writeln!(out, "* {}", report.note)?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["seed", "N", "M", "answer", "paper_steps", "predicate_evals"]).map_err(csv_error)?;
            w.write_record([
                report.seed.to_string(),
                (1usize << report.n).to_string(),
                report.solutions.len().to_string(),
                r.index.to_string(),
                r.ledger.paper_steps.to_string(),
                r.ledger.predicate_evals.to_string(),
            ])
            .map_err(csv_error)?;
            w.flush()?;
            drop(w);
            writeln!(out, "# {}", report.note)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Prints each ANS value and waits for a newline on `input` before the next.
/// If `input` closes, the remaining values are printed without pausing and a
/// warning goes to `warn`. Pacing never affects which values are shown.
pub fn paged_display(
    answers: &[usize],
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    warn: &mut dyn Write,
) -> io::Result<()> {
    let mut paging = true;
    for j in answers {
        writeln!(out, "ANS = {j}")?;
        out.flush()?;
        if paging {
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(warn, "warning: input closed; finishing without pauses")?;
                paging = false;
            }
        }
    }
    Ok(())
}

fn write_rows(rows: &[ComparisonRow], format: OutputFormat, out: &mut dyn Write) -> CliResult {
    match format {
        OutputFormat::Csv => write_comparison_csv(rows, out)?,
        OutputFormat::Table => write_comparison_table(rows, out)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn compare(args: &CompareArgs, format: OutputFormat, out: &mut dyn Write) -> CliResult {
    check_qubits(args.n)?;
    let size = 1u64 << args.n;
    let rows = args
        .m
        .iter()
        .map(|&m| compare_models(size, m).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    write_rows(&rows, format, out)
}

fn sweep(args: &SweepArgs, seed: u64, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    check_qubits(args.n_min)?;
    check_qubits(args.n_max)?;
    if args.n_min > args.n_max {
        return Err(CliError::Usage("--n-min exceeds --n-max".into()));
    }
    let policy = match args.policy {
        PolicyName::Ascending => SelectionPolicy::AscendingIndex,
        PolicyName::Descending => SelectionPolicy::DescendingIndex,
        PolicyName::Fifo => SelectionPolicy::Fifo,
        PolicyName::Random => SelectionPolicy::Random(seed),
    };
    let options = SearchOptions::with_policy(policy);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for n in args.n_min..=args.n_max {
        let size = 1u64 << n;
        for &m in &args.m {
            if m > size {
                writeln!(err, "note: skipping M = {m} > N = {size}")?;
                continue;
            }
            let problem = SearchProblem::random(n, m as usize, &mut rng)?;
            let full = run_modified_search(&problem, &options, &mut rng)?;
            let early_steps = if m == 0 {
                u64::from(n)
            } else {
                early_stop_search(&problem, policy)?.ledger.paper_steps
            };
            let mut row = compare_models(size, m)?;
            if full.ledger.paper_steps != paper_step_count(n, m, false) || early_steps != paper_step_count(n, m, true)
            {
                mismatches += 1;
                writeln!(err, "mismatch: n = {n}, M = {m}: live {} / {early_steps}", full.ledger.paper_steps)?;
            }
            row.paper_steps_full = full.ledger.paper_steps;
            row.paper_steps_early = early_steps;
            row.predicate_evals = full.ledger.predicate_evals;
            rows.push(row);
        }
    }
    write_rows(&rows, format, out)?;
    Ok(if mismatches == 0 { 0 } else { 1 })
}

fn verify(args: &VerifyArgs, format: OutputFormat, input: &mut dyn BufRead, out: &mut dyn Write) -> CliResult<i32> {
    let trace = if args.trace.as_os_str() == "-" {
        read_trace(input)?
    } else {
        let file = File::open(&args.trace)
            .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", args.trace.display())))?;
        read_trace(BufReader::new(file))?
    };
    let m = args.m.unwrap_or(args.expected.len() as u64);
    let report: VerificationReport = verify_trace(&trace, &args.expected, m)?;
    match format {
        OutputFormat::Table => {
            writeln!(out, "events:            {}", trace.len())?;
            writeln!(out, "grants:            {}", report.grants)?;
            writeln!(out, "completed writes:  {}", report.completed_writes)?;
            writeln!(out, "mutual exclusion:  {}", ok(report.mutual_exclusion_ok))?;
            writeln!(out, "starvation free:   {}", ok(report.starvation_ok))?;
            writeln!(out, "deadlock free:     {}", ok(report.deadlock_ok))?;
            writeln!(out, "max wait position: {}", report.max_wait_position)?;
            if !report.never_granted.is_empty() {
                writeln!(out, "never granted:     {}", list(&report.never_granted))?;
            }
            if !report.unresolved.is_empty() {
                writeln!(out, "unresolved:        {}", list(&report.unresolved))?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["mutual_exclusion_ok", "starvation_ok", "deadlock_ok", "max_wait_position", "grants"])
                .map_err(csv_error)?;
            w.write_record([
                report.mutual_exclusion_ok.to_string(),
                report.starvation_ok.to_string(),
                report.deadlock_ok.to_string(),
                report.max_wait_position.to_string(),
                report.grants.to_string(),
            ])
            .map_err(csv_error)?;
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(if report.all_ok() { 0 } else { 1 })
}

fn ok(flag: bool) -> &'static str {
    if flag {
        "ok"
    } else {
        "VIOLATED"
    }
}
