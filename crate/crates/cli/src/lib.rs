//! Batch driver: reads a CommS file, runs the abstract analysis, the bounded
//! concrete explorer or both, and reports the result as JSON and DOT files.

mod dot;
mod input;

pub use dot::{dot_files, emit_dot};
pub use input::{parse_input, InputSpec};

use clap::{Parser, Subcommand, ValueEnum};
use comms::concrete::{CollectingMemory, CollectingStore, Limits, Machine};
use comms::domain::AbstractMemory;
use comms::interp::{analyze, store_contains, Analysis, AnalysisConfig, AnalysisError, Violation};
use comms::lang::{parse_program, pretty_print, LabeledProgram};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "comms", version, about = "Static analyzer for CommS programs with reflection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze, execute or cross-check one program.
    Run(RunArgs),
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Analyze)]
    pub mode: Mode,
    /// Horizon of the automata widening.
    #[arg(long, default_value_t = 3)]
    pub widen_n: usize,
    /// Reflection depth at which the analysis gives up on a site.
    #[arg(long, default_value_t = 4)]
    pub tower_threshold: usize,
    /// Longest concrete trace, in transitions.
    #[arg(long, default_value_t = 64)]
    pub max_trace_len: usize,
    /// Deepest concrete reflection nesting.
    #[arg(long, default_value_t = 10)]
    pub max_tower: usize,
    /// Write one DOT file per automaton recorded at a reflect site.
    #[arg(long, value_name = "DIR")]
    pub emit_dot: Option<PathBuf>,
    /// Leave timings out of the report so it is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Initial value: `x=top`, `x=[lo,hi]`, `s='a','b'`, `s=*` (any string)
    /// or `b=true,false`. Repeatable.
    #[arg(long = "input", value_name = "VAR=VALUE")]
    pub inputs: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analyze,
    Concrete,
    Diff,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Config(String),
    #[error("{count} containment violation(s)")]
    Unsound { count: usize, report: Box<RunReport> },
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) => 1,
            CliError::Config(_) => 2,
            CliError::Unsound { .. } => 3,
            CliError::Runtime(_) | CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub source: SourceInfo,
    pub mode: Mode,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concrete: Option<ConcreteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffReport>,
    /// Milliseconds per phase.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SourceInfo {
    pub file: String,
    pub sha256: String,
    pub program: String,
    pub labels: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub analysis: AnalysisConfig,
    pub max_trace_len: usize,
    pub max_tower: usize,
    pub inputs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcreteReport {
    /// Per-line join over every explored state.
    pub lines: CollectingStore,
    /// Join of the final memories of the runs that terminated.
    pub exit: Option<CollectingMemory>,
    /// Store of the shortest terminating run.
    pub final_store: Option<CollectingStore>,
    pub states: usize,
    /// Some run was cut at the trace bound.
    pub truncated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub lines: BTreeMap<usize, LineVerdict>,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineVerdict {
    Contained,
    Violation,
}

impl RunReport {
    /// Deterministic pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl RunArgs {
    fn analysis_config(&self) -> AnalysisConfig {
        AnalysisConfig { widen_n: self.widen_n, tower_threshold: self.tower_threshold, ..AnalysisConfig::default() }
    }

    fn limits(&self) -> Limits {
        Limits { max_len: self.max_trace_len, max_tower: self.max_tower, ..Limits::default() }
    }
}

struct Timer {
    enabled: bool,
    phases: BTreeMap<String, f64>,
}

impl Timer {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.phases.insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

/// Runs one program as configured by `args`. A diff that finds a violation
/// is an error carrying the full report.
pub fn run(args: &RunArgs) -> Result<RunReport, CliError> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| CliError::io(&args.file, e))?;
    let mut timer = Timer { enabled: !args.no_timing, phases: BTreeMap::new() };
    let program = timer.time("parse", || parse_program(&text)).map_err(|e| CliError::Syntax(e.to_string()))?;
    let cfg = args.analysis_config();
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if args.max_trace_len == 0 {
        return Err(CliError::Config("max-trace-len must be at least 1".into()));
    }
    let inputs = args
        .inputs
        .iter()
        .map(|raw| parse_input(raw).map_err(CliError::Config))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = RunReport {
        source: SourceInfo {
            file: args.file.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(text.as_bytes())),
            program: pretty_print(&program),
            labels: program.end_label,
        },
        mode: args.mode,
        config: ConfigEcho {
            analysis: cfg.clone(),
            max_trace_len: args.max_trace_len,
            max_tower: args.max_tower,
            inputs: inputs.iter().map(|i| (i.var.clone(), i.value.to_string())).collect(),
        },
        analysis: None,
        concrete: None,
        diff: None,
        timing: None,
    };

    if args.mode != Mode::Concrete {
        let init = AbstractMemory::from_pairs(inputs.iter().map(|i| (i.var.clone(), i.value.abstract_value())));
        let analysis = timer.time("analyze", || analyze(&program, init, &cfg)).map_err(|e| match e {
            AnalysisError::Config(msg) => CliError::Config(msg),
            other => CliError::Runtime(other.to_string()),
        })?;
        report.analysis = Some(analysis);
    }
    if args.mode != Mode::Analyze {
        let init = concrete_init(&inputs)?;
        let limits = args.limits();
        report.concrete = Some(timer.time("concrete", || explore(&program, init, limits))?);
    }
    if let (Some(a), Some(c)) = (&report.analysis, &report.concrete) {
        report.diff = Some(timer.time("diff", || diff(&program, a, c)));
    }
    if let Some(dir) = &args.emit_dot {
        emit_dot(&report, dir)?;
    }
    report.timing = timer.enabled.then_some(timer.phases);
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json() + "\n").map_err(|e| CliError::io(path, e))?;
    }
    match &report.diff {
        Some(d) if !d.violations.is_empty() => Err(CliError::Unsound { count: d.violations.len(), report: Box::new(report) }),
        _ => Ok(report),
    }
}

fn concrete_init(inputs: &[InputSpec]) -> Result<CollectingStore, CliError> {
    let mut mem = CollectingMemory::new();
    for i in inputs {
        let values = i
            .value
            .concrete_values()
            .ok_or_else(|| CliError::Config(format!("concrete runs need a finite value for `{}`", i.var)))?;
        mem.set(&i.var, values);
    }
    Ok(CollectingStore::entry(mem))
}

fn explore(p: &LabeledProgram, init: CollectingStore, limits: Limits) -> Result<ConcreteReport, CliError> {
    let ex = Machine::new(limits).explore(p, init, 0).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(ConcreteReport {
        lines: ex.line_join(),
        exit: ex.exit_memory(),
        final_store: ex.first_final().map(|s| (*s.store).clone()),
        states: ex.states.len(),
        truncated: ex.truncated,
    })
}

fn diff(p: &LabeledProgram, a: &Analysis, c: &ConcreteReport) -> DiffReport {
    let violations = store_contains(&a.store, &c.lines);
    let lines = p
        .labels()
        .map(|l| {
            let verdict = if violations.iter().any(|v| v.line == l) { LineVerdict::Violation } else { LineVerdict::Contained };
            (l, verdict)
        })
        .collect();
    DiffReport { lines, violations }
}

/// Short human-readable account of a report.
pub fn summary(report: &RunReport) -> String {
    let mut out = format!("program {} ({} lines)\n", report.source.file, report.source.labels);
    if let Some(a) = &report.analysis {
        write_sites(&mut out, a, "");
        for w in a.all_warnings() {
            out.push_str(&format!("warning: line {} depth {}: {}\n", w.line, w.depth, w.message));
        }
        if let Some(exit) = a.store.get_ref(report.source.labels) {
            out.push_str(&format!("exit: {exit}\n"));
        }
    }
    if let Some(c) = &report.concrete {
        let exit = c.exit.as_ref().map_or("no terminating run".to_string(), |m| m.to_string());
        out.push_str(&format!("concrete: {} states, exit {exit}\n", c.states));
    }
    if let Some(d) = &report.diff {
        out.push_str(&format!("diff: {} violation(s)\n", d.violations.len()));
    }
    out
}

fn write_sites(out: &mut String, a: &Analysis, indent: &str) {
    for s in &a.sites {
        out.push_str(&format!("{indent}site {} (depth {}): {:?}\n", s.line, s.depth, s.outcome));
        if let Some(p) = &s.program {
            out.push_str(&format!("{indent}  program: {p}\n"));
        }
        if let Some(sub) = &s.sub {
            write_sites(out, sub, &format!("{indent}  "));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use comms::domain::AbstVal;

    #[test]
    fn escaping_values_are_violations() {
        let p = parse_program("x:=1;$").unwrap();
        let mut a = analyze(&p, AbstractMemory::empty(), &AnalysisConfig::default()).unwrap();
        let c = explore(&p, CollectingStore::new(), Limits::default()).unwrap();
        assert!(diff(&p, &a, &c).violations.is_empty());
        a.store.set(2, AbstractMemory::from_pairs([("x".to_string(), AbstVal::int(2))]));
        let d = diff(&p, &a, &c);
        assert_eq!(d.lines[&1], LineVerdict::Contained);
        assert_eq!(d.lines[&2], LineVerdict::Violation);
        assert_eq!(d.violations[0].var, "x");
        let err = CliError::Unsound { count: 1, report: Box::new(dummy_report()) };
        assert_eq!(err.exit_code(), 3);
    }

    fn dummy_report() -> RunReport {
        RunReport {
            source: SourceInfo { file: String::new(), sha256: String::new(), program: String::new(), labels: 1 },
            mode: Mode::Diff,
            config: ConfigEcho {
                analysis: AnalysisConfig::default(),
                max_trace_len: 1,
                max_tower: 1,
                inputs: BTreeMap::new(),
            },
            analysis: None,
            concrete: None,
            diff: None,
            timing: None,
        }
    }
}
