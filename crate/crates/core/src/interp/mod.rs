//! Abstract interpretation of CommS: abstract expression semantics, the
//! worklist fixpoint with widening, and the reflection hook that analyzes a
//! synthesized program in place of the reflected strings.

mod eval;
mod fixpoint;
mod gamma;

pub use eval::{abs_eval, abs_filter, SUBSTRING_PAIRS};
pub use fixpoint::{analyze, analyze_from};
pub use gamma::{abstract_memory, abstraction, memory_contains, store_contains, value_contains, Violation};

use crate::domain::{AbstVal, AbstractStore, WidenParams};
use crate::lang::Label;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisConfig {
    /// Bound of the automata widening.
    pub widen_n: usize,
    /// Reflection depth at which sites are cut off to ⊤.
    pub tower_threshold: usize,
    /// Plain joins at a widening point before widening starts.
    pub loop_widen_delay: usize,
    pub interval_thresholds: Vec<i64>,
    /// Transfer-function applications per program before giving up.
    pub max_iterations: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            widen_n: 3,
            tower_threshold: 4,
            loop_widen_delay: 1,
            interval_thresholds: Vec::new(),
            max_iterations: 100_000,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.widen_n == 0 {
            return Err(AnalysisError::Config("widen_n must be at least 1".into()));
        }
        if self.tower_threshold == 0 {
            return Err(AnalysisError::Config("tower_threshold must be at least 1".into()));
        }
        Ok(())
    }

    pub fn widen_params(&self) -> WidenParams {
        let mut thresholds = self.interval_thresholds.clone();
        thresholds.sort_unstable();
        thresholds.dedup();
        WidenParams { fa_n: self.widen_n, thresholds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no fixpoint after {0} iterations at reflection depth {1}")]
    Budget(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningKind {
    /// The reflection depth reached the threshold.
    TowerCutoff,
    /// Synthesis failed; affected variables went to ⊤.
    Degraded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub line: Label,
    pub depth: usize,
    pub kind: WarningKind,
    pub message: String,
}

/// How a reflect site was resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteOutcome {
    /// A program was synthesized and analyzed.
    Synthesized,
    /// No string in the argument is executable.
    NotExecutable,
    /// The argument is not a string.
    NotAString,
    TowerCutoff,
    Degraded,
}

/// Everything recorded about one reflect site, from its last evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct SiteRecord {
    pub line: Label,
    pub depth: usize,
    pub argument: AbstVal,
    pub outcome: SiteOutcome,
    /// DOT renderings of the quoted argument, the statement automaton and
    /// its executable part.
    pub input_dot: Option<String>,
    pub stmsyn_dot: Option<String>,
    pub exec_dot: Option<String>,
    pub regex: Option<String>,
    pub program: Option<String>,
    pub sub: Option<Box<Analysis>>,
}

/// Result of analyzing one program at one reflection depth.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub depth: usize,
    pub program: String,
    pub store: AbstractStore,
    pub sites: Vec<SiteRecord>,
    pub warnings: Vec<Warning>,
    pub iterations: usize,
}

impl Analysis {
    /// Warnings of this analysis and of every nested one, outermost first.
    pub fn all_warnings(&self) -> Vec<&Warning> {
        let mut out: Vec<&Warning> = self.warnings.iter().collect();
        for s in &self.sites {
            if let Some(sub) = &s.sub {
                out.extend(sub.all_warnings());
            }
        }
        out
    }

    pub fn site(&self, line: Label) -> Option<&SiteRecord> {
        self.sites.iter().find(|s| s.line == line)
    }

    /// Height of the tree of nested analyses.
    pub fn height(&self) -> usize {
        self.sites.iter().filter_map(|s| s.sub.as_ref()).map(|a| 1 + a.height()).max().unwrap_or(0)
    }
}
