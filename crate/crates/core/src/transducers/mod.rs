//! Symbolic finite transducers over characters.
//!
//! Guards are explicit finite symbol sets and every rule emits at most one
//! symbol. The string operations, the lexer and the statement parser used by
//! the executability filter are all built on this type.

mod lex;
mod parser;
mod strings;

use crate::automata::{Dfa, FiniteAutomaton, Nfa};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write;

pub use lex::{lex_sft, marker, token_of_marker, Token, TOKENS};
pub use parser::{compile_grammar, lex_parser, parser_sft, GrammarError, PARSER_GRAMMAR};
pub use strings::{append_sft, append_str, apply, concat_sft, identity_sft, substring_sft};

pub type SymSet = BTreeSet<char>;

/// Input side of a rule: consume nothing or one symbol from the set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Guard {
    Epsilon,
    Set(SymSet),
}

/// Output side of a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Epsilon,
    /// Echo the consumed symbol.
    Identity,
    Const(char),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub from: usize,
    pub guard: Guard,
    pub output: Output,
    pub to: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Sft {
    pub num_states: usize,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub rules: Vec<Rule>,
}

/// Cap on ε-generated output per transduction, guarding against ε-cycles that
/// emit symbols (none of the transducers built here has one).
const MAX_EPSILON_OUTPUT: usize = 4096;

impl Sft {
    pub fn new() -> Self {
        Sft { num_states: 1, initial: 0, finals: BTreeSet::new(), rules: Vec::new() }
    }

    pub fn add_state(&mut self) -> usize {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_rule(&mut self, from: usize, guard: Guard, output: Output, to: usize) {
        debug_assert!(
            !(guard == Guard::Epsilon && output == Output::Identity),
            "an ε-input rule cannot echo"
        );
        self.rules.push(Rule { from, guard, output, to });
    }

    fn by_source(&self) -> Vec<Vec<&Rule>> {
        let mut out = vec![Vec::new(); self.num_states];
        for r in &self.rules {
            out[r.from].push(r);
        }
        out
    }

    /// All outputs of accepting runs on `word`.
    pub fn transduce(&self, word: &str) -> BTreeSet<String> {
        let rules = self.by_source();
        let close = |configs: HashSet<(usize, String)>| {
            let mut seen = configs.clone();
            let mut stack: Vec<(usize, String)> = configs.into_iter().collect();
            while let Some((q, out)) = stack.pop() {
                for r in &rules[q] {
                    if r.guard != Guard::Epsilon {
                        continue;
                    }
                    let mut o = out.clone();
                    if let Output::Const(c) = r.output {
                        if o.len() >= MAX_EPSILON_OUTPUT {
                            continue;
                        }
                        o.push(c);
                    }
                    if seen.insert((r.to, o.clone())) {
                        stack.push((r.to, o));
                    }
                }
            }
            seen
        };
        let mut cur = close(HashSet::from([(self.initial, String::new())]));
        for a in word.chars() {
            let mut next = HashSet::new();
            for (q, out) in &cur {
                for r in &rules[*q] {
                    let Guard::Set(set) = &r.guard else { continue };
                    if !set.contains(&a) {
                        continue;
                    }
                    let mut o = out.clone();
                    match r.output {
                        Output::Epsilon => {}
                        Output::Identity => o.push(a),
                        Output::Const(c) => o.push(c),
                    }
                    next.insert((r.to, o));
                }
            }
            if next.is_empty() {
                return BTreeSet::new();
            }
            cur = close(next);
        }
        cur.into_iter().filter(|(q, _)| self.finals.contains(q)).map(|(_, o)| o).collect()
    }

    /// Whether `word` belongs to the input language.
    pub fn accepts_input(&self, word: &str) -> bool {
        let rules = self.by_source();
        let close = |set: &mut BTreeSet<usize>| {
            let mut stack: Vec<usize> = set.iter().copied().collect();
            while let Some(q) = stack.pop() {
                for r in &rules[q] {
                    if r.guard == Guard::Epsilon && set.insert(r.to) {
                        stack.push(r.to);
                    }
                }
            }
        };
        let mut cur = BTreeSet::from([self.initial]);
        close(&mut cur);
        for a in word.chars() {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for r in &rules[q] {
                    if matches!(&r.guard, Guard::Set(s) if s.contains(&a)) {
                        next.insert(r.to);
                    }
                }
            }
            close(&mut next);
            if next.is_empty() {
                return false;
            }
            cur = next;
        }
        cur.iter().any(|q| self.finals.contains(q))
    }

    /// The automaton of the output language.
    pub fn output_fa(&self) -> FiniteAutomaton {
        let mut nfa: Nfa<char> = Nfa {
            initial: self.initial,
            finals: self.finals.clone(),
            edges: vec![Vec::new(); self.num_states],
        };
        for r in &self.rules {
            match (&r.guard, r.output) {
                (_, Output::Epsilon) => nfa.add_edge(r.from, None, r.to),
                (_, Output::Const(c)) => nfa.add_edge(r.from, Some(c), r.to),
                (Guard::Set(set), Output::Identity) => {
                    for &c in set {
                        nfa.add_edge(r.from, Some(c), r.to);
                    }
                }
                (Guard::Epsilon, Output::Identity) => unreachable!("rejected by add_rule"),
            }
        }
        nfa.determinize()
    }

    /// The automaton of the input language.
    pub fn input_fa(&self) -> FiniteAutomaton {
        let mut nfa: Nfa<char> = Nfa {
            initial: self.initial,
            finals: self.finals.clone(),
            edges: vec![Vec::new(); self.num_states],
        };
        for r in &self.rules {
            match &r.guard {
                Guard::Epsilon => nfa.add_edge(r.from, None, r.to),
                Guard::Set(set) => {
                    for &c in set {
                        nfa.add_edge(r.from, Some(c), r.to);
                    }
                }
            }
        }
        nfa.determinize()
    }

    /// Sequential composition: `self` first, then `next` on its output.
    pub fn compose(&self, next: &Sft) -> Sft {
        let first = self.by_source();
        let second = next.by_source();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut out = Sft { num_states: 0, initial: 0, finals: BTreeSet::new(), rules: Vec::new() };
        let mut queue = VecDeque::new();
        fn intern(
            pair: (usize, usize),
            ids: &mut HashMap<(usize, usize), usize>,
            out: &mut Sft,
            queue: &mut VecDeque<(usize, usize)>,
        ) -> usize {
            *ids.entry(pair).or_insert_with(|| {
                queue.push_back(pair);
                out.num_states += 1;
                out.num_states - 1
            })
        }
        intern((self.initial, next.initial), &mut ids, &mut out, &mut queue);
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            if self.finals.contains(&p) && next.finals.contains(&q) {
                out.finals.insert(from);
            }
            // `next` moves alone on ε-input.
            for r2 in &second[q] {
                if r2.guard == Guard::Epsilon {
                    let to = intern((p, r2.to), &mut ids, &mut out, &mut queue);
                    out.rules.push(Rule { from, guard: Guard::Epsilon, output: r2.output, to });
                }
            }
            for r1 in &first[p] {
                if r1.output == Output::Epsilon {
                    let to = intern((r1.to, q), &mut ids, &mut out, &mut queue);
                    out.rules.push(Rule { from, guard: r1.guard.clone(), output: Output::Epsilon, to });
                    continue;
                }
                for r2 in &second[q] {
                    let Guard::Set(psi) = &r2.guard else { continue };
                    let guard = match (&r1.guard, r1.output) {
                        (Guard::Set(phi), Output::Identity) => {
                            let both: SymSet = phi.intersection(psi).copied().collect();
                            if both.is_empty() {
                                continue;
                            }
                            Guard::Set(both)
                        }
                        (g, Output::Const(c)) => {
                            if !psi.contains(&c) {
                                continue;
                            }
                            g.clone()
                        }
                        _ => unreachable!(),
                    };
                    let output = match r2.output {
                        Output::Identity => r1.output,
                        o => o,
                    };
                    let to = intern((r1.to, r2.to), &mut ids, &mut out, &mut queue);
                    out.rules.push(Rule { from, guard, output, to });
                }
            }
        }
        out.eliminate_silent().trim()
    }

    /// Removes rules that neither consume nor emit.
    pub fn eliminate_silent(&self) -> Sft {
        let silent = |r: &Rule| r.guard == Guard::Epsilon && r.output == Output::Epsilon;
        let rules = self.by_source();
        let mut out = Sft {
            num_states: self.num_states,
            initial: self.initial,
            finals: BTreeSet::new(),
            rules: Vec::new(),
        };
        let mut seen: HashSet<Rule> = HashSet::new();
        for s in 0..self.num_states {
            let mut closure = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(q) = stack.pop() {
                for r in &rules[q] {
                    if silent(r) && closure.insert(r.to) {
                        stack.push(r.to);
                    }
                }
            }
            for &t in &closure {
                if self.finals.contains(&t) {
                    out.finals.insert(s);
                }
                for r in &rules[t] {
                    if !silent(r) {
                        let rule = Rule { from: s, ..(*r).clone() };
                        if seen.insert(rule.clone()) {
                            out.rules.push(rule);
                        }
                    }
                }
            }
        }
        out
    }

    /// Drops states that are unreachable or cannot reach a final state.
    pub fn trim(&self) -> Sft {
        let n = self.num_states;
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for r in &self.rules {
            fwd[r.from].push(r.to);
            bwd[r.to].push(r.from);
        }
        let reach = |starts: Vec<usize>, adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = starts;
            for &s in &stack {
                seen[s] = true;
            }
            while let Some(q) = stack.pop() {
                for &t in &adj[q] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        };
        let reachable = reach(vec![self.initial], &fwd);
        let live = reach(self.finals.iter().copied().collect(), &bwd);
        let keep: Vec<bool> = (0..n).map(|q| reachable[q] && live[q]).collect();
        if !keep[self.initial] {
            return Sft::new();
        }
        let mut ids = BTreeMap::new();
        for q in (0..n).filter(|&q| keep[q]) {
            let len = ids.len();
            ids.insert(q, len);
        }
        Sft {
            num_states: ids.len(),
            initial: ids[&self.initial],
            finals: self.finals.iter().filter_map(|q| ids.get(q).copied()).collect(),
            rules: self
                .rules
                .iter()
                .filter(|r| keep[r.from] && keep[r.to])
                .map(|r| Rule { from: ids[&r.from], to: ids[&r.to], ..r.clone() })
                .collect(),
        }
    }

    /// Graphviz rendering with `φ/f` edge labels.
    pub fn to_dot(&self, name: &str) -> String {
        let show = |c: char| match token_of_marker(c) {
            Some(t) => format!("<{}>", t.name()),
            None => c.to_string(),
        };
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n  start [shape=point];\n");
        for q in 0..self.num_states {
            let shape = if self.finals.contains(&q) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(out, "  start -> q{};", self.initial);
        for r in &self.rules {
            let guard = match &r.guard {
                Guard::Epsilon => "ε".to_string(),
                Guard::Set(s) if s.iter().all(|&c| token_of_marker(c).is_none()) => {
                    crate::automata::char_class_label(&s.iter().copied().collect::<Vec<_>>())
                }
                Guard::Set(s) => s.iter().map(|&c| show(c)).collect::<Vec<_>>().join(","),
            };
            let output = match r.output {
                Output::Epsilon => "ε".to_string(),
                Output::Identity => "id".to_string(),
                Output::Const(c) => show(c),
            };
            let label = format!("{guard}/{output}").replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  q{} -> q{} [label=\"{label}\"];", r.from, r.to);
        }
        out.push_str("}\n");
        out
    }
}

/// Turns a canonical automaton into an SFT that echoes exactly its language.
pub(crate) fn dfa_rules(sft: &mut Sft, dfa: &Dfa<char>, base: usize) {
    for ((p, q), syms) in dfa.grouped_edges() {
        sft.add_rule(p + base, Guard::Set(syms.into_iter().collect()), Output::Identity, q + base);
    }
}
