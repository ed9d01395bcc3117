use super::ExeError;
use crate::alphabet::{is_statement_punctuation, APEX};
use crate::automata::{Dfa, FiniteAutomaton, Nfa};
use std::collections::{BTreeMap, BTreeSet};

/// Automaton over statement labels. Its canonical form has no ε-edges.
pub type StatementAutomaton = Dfa<String>;

/// Labels enumerated from one state before giving up.
pub const MAX_LABELS: usize = 4096;

/// Statements readable from `q`: each punctuation-terminated word with the
/// state it reaches, plus the word before a closing apex into a final state.
///
/// Every path marks the state pairs it has crossed and never crosses one
/// twice. The second component reports whether a marked pair was skipped,
/// which happens exactly when a cycle runs inside a single statement.
pub fn build(a: &FiniteAutomaton, q: usize) -> Result<(BTreeSet<(String, usize)>, bool), ExeError> {
    let mut found = BTreeSet::new();
    let mut truncated = false;
    let mut mark = Vec::new();
    let mut word = String::new();
    build_from(a, q, &mut word, &mut mark, &mut found, &mut truncated)?;
    Ok((found, truncated))
}

fn build_from(
    a: &FiniteAutomaton,
    q: usize,
    word: &mut String,
    mark: &mut Vec<(usize, usize)>,
    found: &mut BTreeSet<(String, usize)>,
    truncated: &mut bool,
) -> Result<(), ExeError> {
    for (&sym, &p) in a.transitions(q) {
        if mark.contains(&(q, p)) {
            *truncated = true;
            continue;
        }
        if !is_statement_punctuation(sym) && !a.is_final(p) {
            word.push(sym);
            mark.push((q, p));
            build_from(a, p, word, mark, found, truncated)?;
            mark.pop();
            word.pop();
        }
        if is_statement_punctuation(sym) {
            found.insert((format!("{word}{sym}"), p));
        }
        if sym == APEX && a.is_final(p) {
            found.insert((word.clone(), p));
        }
        if found.len() > MAX_LABELS {
            return Err(ExeError::TooManyLabels);
        }
    }
    Ok(())
}

/// Output of [`stm_syn`] before canonicalization, kept for inspection.
#[derive(Clone, Debug)]
pub struct StatementEdges {
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, String, usize)>,
}

impl StatementEdges {
    /// Canonical automaton; the empty label is ε.
    pub fn to_automaton(&self) -> StatementAutomaton {
        let ids: BTreeMap<usize, usize> = std::iter::once(self.initial)
            .chain(self.edges.iter().flat_map(|(p, _, q)| [*p, *q]))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, q)| (q, i))
            .collect();
        let mut nfa: Nfa<String> = Nfa {
            initial: ids[&self.initial],
            finals: self.finals.iter().filter_map(|q| ids.get(q).copied()).collect(),
            edges: vec![Vec::new(); ids.len()],
        };
        for (p, label, q) in &self.edges {
            let sym = (!label.is_empty()).then(|| label.clone());
            nfa.add_edge(ids[p], sym, ids[q]);
        }
        nfa.determinize()
    }
}

/// Collapses runs of symbols into statement edges, starting after the
/// opening apex. Labels that do not end in punctuation are erased, except the
/// empty label that closes the string.
pub fn stm_syn_edges(a: &FiniteAutomaton) -> Result<StatementEdges, ExeError> {
    let start = a.step(0, &APEX).ok_or(ExeError::NoApexStart)?;
    let mut out = StatementEdges { initial: start, finals: BTreeSet::new(), edges: BTreeSet::new() };
    let mut visited = BTreeSet::new();
    let mut work = vec![start];
    while let Some(q) = work.pop() {
        if !visited.insert(q) {
            continue;
        }
        if a.is_final(q) {
            out.finals.insert(q);
        }
        let (found, truncated) = build(a, q)?;
        if truncated {
            return Err(ExeError::IntraStatementCycle);
        }
        for (label, p) in found {
            let ends_statement = label.chars().last().is_none_or(is_statement_punctuation);
            if ends_statement {
                out.edges.insert((q, label, p));
                if !visited.contains(&p) {
                    work.push(p);
                }
            }
        }
    }
    Ok(out)
}

pub fn stm_syn(a: &FiniteAutomaton) -> Result<StatementAutomaton, ExeError> {
    stm_syn_edges(a).map(|e| e.to_automaton())
}
