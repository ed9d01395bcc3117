//! Executability analysis: from an automaton of string values to a program
//! that over-approximates every executable string in it.
//!
//! The stages are statement synthesis (collapsing symbol runs into statement
//! labels), filtering through the lexer/parser transducer, regular expression
//! extraction, and guarded program synthesis.

mod progsyn;
mod regex;
mod stmsyn;

pub use progsyn::{is_guard, parse_fragment, prog_syn, Fragment, GUARD_PREFIX};
pub use regex::{regex_of, Regex};
pub use stmsyn::{build, stm_syn, stm_syn_edges, StatementAutomaton, StatementEdges, MAX_LABELS};

use crate::alphabet::{sigma, APEX};
use crate::automata::{Dfa, FiniteAutomaton, Nfa};
use crate::lang::LabeledProgram;
use crate::transducers::lex_parser;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExeError {
    #[error("automaton has no transition on the opening apex")]
    NoApexStart,
    #[error("synthesized blocks are not balanced")]
    UnbalancedBlocks,
    #[error("label {0:?} is not a statement fragment")]
    InvalidAtom(String),
    #[error("a cycle runs inside a single statement")]
    IntraStatementCycle,
    #[error("more than {MAX_LABELS} statement labels from one state")]
    TooManyLabels,
    #[error("every string is possible")]
    Universal,
}

/// Whether the lexer/parser transducer echoes `label`.
pub fn label_is_executable(label: &str) -> bool {
    lex_parser().transduce(label).contains(label)
}

/// Keeps only the edges whose label survives the lexer/parser transducer.
pub fn filter_executable(a: &StatementAutomaton) -> StatementAutomaton {
    a.retain_symbols(|label| label_is_executable(label))
}

/// Artifacts of one run of the pipeline.
#[derive(Clone, Debug)]
pub struct Synthesis {
    /// The value automaton wrapped in apexes.
    pub input: FiniteAutomaton,
    pub stmsyn: StatementAutomaton,
    pub exec: StatementAutomaton,
    pub regex: Regex,
    /// `None` when no string in the input is executable.
    pub program: Option<LabeledProgram>,
    /// Every string in the input is executable, so a concrete reflect on it
    /// never falls through.
    pub total: bool,
}

/// Whether some string has text after a terminator, which no parse accepts.
fn terminator_inside(values: &FiniteAutomaton) -> bool {
    let any = Dfa::universal(sigma());
    let nonempty = any.minus(&Dfa::epsilon());
    let bad = any.concat(&Dfa::from_strs(["$"])).concat(&nonempty);
    !values.intersect(&bad).is_empty()
}

/// Strings spelled by the paths of a statement automaton.
pub fn spelled(a: &StatementAutomaton) -> FiniteAutomaton {
    let mut nfa = Nfa::new();
    let states: Vec<usize> = (0..a.num_states()).map(|_| nfa.add_state()).collect();
    for q in 0..a.num_states() {
        if a.is_final(q) {
            nfa.set_final(states[q]);
        }
        for (label, &to) in a.transitions(q) {
            let mut at = states[q];
            let chars: Vec<char> = label.chars().collect();
            for (i, &c) in chars.iter().enumerate() {
                let next = if i + 1 == chars.len() { states[to] } else { nfa.add_state() };
                nfa.add_edge(at, Some(c), next);
                at = next;
            }
            if chars.is_empty() {
                nfa.add_edge(at, None, states[to]);
            }
        }
    }
    nfa.add_edge(0, None, states[a.initial()]);
    nfa.determinize()
}

/// `'`·L·`'` for a value language L.
pub fn quoted(values: &FiniteAutomaton) -> FiniteAutomaton {
    let apex = Dfa::word(&[APEX]);
    apex.concat(values).concat(&apex)
}

pub fn exe_pipeline(values: &FiniteAutomaton) -> Result<Synthesis, ExeError> {
    if *values == Dfa::universal(sigma()) {
        return Err(ExeError::Universal);
    }
    let input = quoted(values);
    if values.is_empty() {
        let none = StatementAutomaton::empty();
        return Ok(Synthesis {
            input,
            stmsyn: none.clone(),
            exec: none,
            regex: Regex::Empty,
            program: None,
            total: true,
        });
    }
    let stmsyn = stm_syn(&input)?;
    let exec = filter_executable(&stmsyn);
    // Labels the source parser rejects occur in no executable string.
    let parsed = exec.retain_symbols(|label| parse_fragment(label).is_some());
    let regex = regex_of(&parsed);
    let program = match regex {
        Regex::Empty => None,
        ref r => Some(prog_syn(r)?),
    };
    let total = program.is_some() && values.is_subset_of(&spelled(&parsed)) && !terminator_inside(values);
    Ok(Synthesis { input, stmsyn, exec, regex, program, total })
}

#[cfg(test)]
mod tests;
