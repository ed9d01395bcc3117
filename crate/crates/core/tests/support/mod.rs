//! Generators and oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use comms::automata::{Dfa, FiniteAutomaton, Nfa};
use comms::concrete::{CollectingMemory, CollectingStore, Limits, Machine};
use comms::concrete::ValueSet;
use comms::exe::{exe_pipeline, is_guard, StatementAutomaton};
use comms::interp::{analyze, store_contains, AnalysisConfig, Violation};
use comms::lang::{parse_executable, parse_program, LabeledProgram};
use comms::domain::AbstractMemory;
use rand::seq::SliceRandom;
use rand::Rng;

const INT_VARS: [&str; 2] = ["x", "y"];

fn small_int<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-3..6)
}

fn int_expr<R: Rng>(rng: &mut R) -> String {
    let v = *INT_VARS.choose(rng).unwrap();
    let w = *INT_VARS.choose(rng).unwrap();
    // No rand(): the oracle cannot narrow its symbolic set through guards.
    match rng.gen_range(0..7) {
        0 => format!("{v}+1"),
        1 => format!("{v}-{w}"),
        2 => format!("{v}*2"),
        3 => small_int(rng).to_string(),
        4 => "len(s)".into(),
        5 => format!("{v}+{w}"),
        _ => "num('12')".into(),
    }
}

fn str_expr<R: Rng>(rng: &mut R) -> String {
    match rng.gen_range(0..5) {
        0 => "s.'a'".into(),
        1 => "ss(s,1,2)".into(),
        2 => "'b'".into(),
        3 => "'x:=x+1;'.s".into(),
        _ => "s.s".into(),
    }
}

fn cond<R: Rng>(rng: &mut R) -> String {
    let v = *INT_VARS.choose(rng).unwrap();
    match rng.gen_range(0..6) {
        0 => format!("{v}<{}", small_int(rng)),
        1 => format!("{v}>{}", small_int(rng)),
        2 => format!("{v}={}", small_int(rng)),
        3 => "b".into(),
        4 => format!("!{v}<2"),
        _ => format!("b&{v}<3"),
    }
}

fn stmt<R: Rng>(rng: &mut R, depth: usize) -> String {
    let branchy = if depth < 2 { 8 } else { 6 };
    match rng.gen_range(0..branchy) {
        0 | 1 => format!("{}:={};", INT_VARS.choose(rng).unwrap(), int_expr(rng)),
        2 => format!("s:={};", str_expr(rng)),
        3 => format!("b:={};", cond(rng)),
        4 => "skip;".into(),
        5 => format!("x:=x+{};", rng.gen_range(1..3)),
        6 => format!("if {} {{{}}};", cond(rng), block(rng, depth + 1)),
        _ => format!("while {} {{{}}};", cond(rng), block(rng, depth + 1)),
    }
}

fn block<R: Rng>(rng: &mut R, depth: usize) -> String {
    let n = rng.gen_range(1..4);
    (0..n).map(|_| stmt(rng, depth)).collect()
}

/// A random well-typed program without reflection.
pub fn fuzz_program<R: Rng>(rng: &mut R) -> String {
    let prologue = format!("x:={};y:={};s:='ab';b:=true;", small_int(rng), small_int(rng));
    format!("{prologue}{}$", block(rng, 0))
}

/// A random statement as it would appear inside reflected code.
pub fn fuzz_statement<R: Rng>(rng: &mut R) -> String {
    stmt(rng, 1)
}

/// Programs exercising bounded reflection.
pub const REFLECT_PROGRAMS: [&str; 20] = [
    "y:='x:=x+1;'; x:=0; reflect(y);$",
    "r:=rand(); if r=1 {y:='a:=a+1;';}; if r=2 {y:='b:=b+1;';}; a:=0; b:=0; reflect(y);$",
    "y:='x:=x+1;'; x:=0; while x<1 {y:=y.'x:=x+1;'; x:=x+1;}; reflect(y);$",
    "x:=1;str:='';while x<3 {str:='x:=x+1;'.str; reflect(str);};$",
    "y:='hello'; x:=1; reflect(y);$",
    "s:='x:=1;'; z:=reflect(s);$",
    "x:=5; y:='if x>3 {x:=x-1;};'; reflect(y); reflect(y);$",
    "x:=0; y:='while x<3 {x:=x+1;};'; reflect(y);$",
    "x:=2; p:='y:=x*3;'; reflect(p); q:='x:=y+1;'; reflect(q);$",
    "i:=0; c:=''; while i<2 {c:=c.'i:=i+0;'; i:=i+1;}; reflect(c);$",
    "x:=1; s:='x:=x+1;$'; reflect(s);$",
    "a:=0; s:='a:=a+1;'; t:=s.s; reflect(t); reflect(s);$",
    "x:=0; r:=rand(); s:='x:=7;'; if r>0 {s:='x:=8;';}; reflect(s);$",
    "x:=3; s:='y:=len(s);'; reflect(s);$",
    "x:=0; in:='x:=x+2;'; out:='reflect(in);'; reflect(out);$",
    "n:=0; s:='n:=n+1;'; while n<2 {reflect(s);}; $",
    "s:='x:=1;'; u:=s.'y:=2;'; v:=ss(u,1,5); reflect(v);$",
    "x:=0; s:='junk'; s:=s.';'; reflect(s); x:=x+1;$",
    "b:=true; s:='b:=!b;'; reflect(s); reflect(s);$",
    "x:=4; s:='x:=x-1;'; w:=reflect(s); y:=x;$",
];

pub fn analysis_config() -> AnalysisConfig {
    AnalysisConfig::default()
}

pub fn oracle_limits() -> Limits {
    Limits { max_len: 24, max_tower: 6, max_states: 50_000 }
}

/// γ-containment violations of the abstract result against a bounded
/// concrete exploration, both from the empty store.
pub fn soundness_violations(src: &str) -> Vec<Violation> {
    let p = parse_program(src).unwrap_or_else(|e| panic!("{src}: {e}"));
    let abs = analyze(&p, AbstractMemory::empty(), &analysis_config()).expect("analysis converges");
    let ex = Machine::new(oracle_limits())
        .explore(&p, CollectingStore::new(), 0)
        .unwrap_or_else(|e| panic!("{src}: {e}"));
    store_contains(&abs.store, &ex.line_join())
}

/// A random statement automaton over `atoms` with at most `states` states.
pub fn random_statement_automaton<R: Rng>(rng: &mut R, states: usize, atoms: &[&str]) -> StatementAutomaton {
    let mut nfa: Nfa<String> = Nfa::new();
    let n = rng.gen_range(1..=states);
    for _ in 1..n {
        nfa.add_state();
    }
    for q in 0..n {
        for _ in 0..rng.gen_range(0..3) {
            let atom = atoms.choose(rng).unwrap().to_string();
            nfa.add_edge(q, Some(atom), rng.gen_range(0..n));
        }
        if rng.gen_bool(0.3) {
            nfa.set_final(q);
        }
    }
    nfa.set_final(rng.gen_range(0..n));
    nfa.determinize()
}

pub const ATOMS: [&str; 6] = ["x:=x+1;", "y:=10;", "while x>5 {", "}", "skip;", "if y<3 {"];

/// An increasing chain driven by a small pool of words: each step either
/// appends a pool word to every string or adds a pool word.
pub struct PoolChain {
    pub pool: Vec<FiniteAutomaton>,
    pub current: FiniteAutomaton,
}

impl PoolChain {
    pub fn new<R: Rng>(rng: &mut R, alphabet: usize) -> Self {
        let pool = (0..rng.gen_range(1..=3)).map(|_| random_language(rng, alphabet, 1, 10)).collect();
        PoolChain { pool, current: random_language(rng, alphabet, 2, 10) }
    }

    pub fn step<R: Rng>(&mut self, rng: &mut R) {
        let p = self.pool.choose(rng).unwrap();
        self.current = if rng.gen_bool(0.5) {
            self.current.union(&self.current.concat(p))
        } else {
            self.current.union(p)
        };
    }

    /// Every string any continuation of the chain can reach.
    pub fn horizon(&self) -> FiniteAutomaton {
        let all = self.pool.iter().fold(FiniteAutomaton::empty(), |acc, p| acc.union(p));
        self.current.union(&all).concat(&all.star())
    }
}

/// A random finite language over the first `alphabet` letters.
pub fn random_language<R: Rng>(rng: &mut R, alphabet: usize, words: usize, max_len: usize) -> FiniteAutomaton {
    let letters: Vec<char> = ('a'..='h').take(alphabet).collect();
    let ws: Vec<String> = (0..words)
        .map(|_| (0..rng.gen_range(0..=max_len)).map(|_| *letters.choose(rng).unwrap()).collect())
        .collect();
    Dfa::from_strs(ws.iter().map(String::as_str))
}

/// Current memories along one path, without guard variables, with
/// consecutive repeats collapsed.
pub fn observations(ex: &comms::concrete::Exploration, path: &[usize]) -> Vec<CollectingMemory> {
    let mut out: Vec<CollectingMemory> = Vec::new();
    for &i in path {
        let m = ex.states[i].current().restrict(|x| !is_guard(x));
        if out.last() != Some(&m) {
            out.push(m);
        }
    }
    out
}

/// Whether `obs` embeds, in order and up to containment, into `target`.
pub fn embeds(obs: &[CollectingMemory], target: &[CollectingMemory]) -> bool {
    let mut it = target.iter();
    obs.iter().all(|m| it.any(|t| m.leq(t)))
}

pub fn program(src: &str) -> LabeledProgram {
    parse_program(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

/// Reflect sites with finite languages: initial integer variables and the
/// reflected strings.
pub type Site = (&'static [(&'static str, i64)], &'static [&'static str]);

pub const SITES: [Site; 10] = [
    (&[("x", 0)], &["x:=x+1;"]),
    (&[("a", 0), ("b", 0)], &["a:=a+1;", "b:=b+1;"]),
    (&[("x", 0)], &["x:=x+1;", "x:=x+1;x:=x+1;", "x:=x+1;x:=x+1;x:=x+1;"]),
    (&[("x", 2), ("y", 0)], &["x:=x+1;y:=10;", "while x>5 {x:=x+1;y:=x;};", "hello"]),
    (&[("x", 4)], &["if x>3 {x:=x-1;};", "x:=0;"]),
    (&[("x", 0)], &["while x<3 {x:=x+1;};", "skip;"]),
    (&[("x", 1), ("y", 1)], &["y:=x*3;x:=y+1;", "y:=x;", "junk;"]),
    (&[("i", 0)], &["i:=i+2;$", "i:=i-1;$", "i:=5;$"]),
    (&[("x", 1)], &["x:=x+1;", "x:=1", "x:=2;x:=3;"]),
    (&[("n", 3), ("m", 0)], &["m:=n;n:=0;", "if n=3 {m:=1;};", "m:=m+n;", "n:=n*n;"]),
];

/// Traces of the filtered programs of a site that no trace of the
/// synthesized program covers, as (word, path index).
pub fn uncovered_traces(init: &[(&str, i64)], words: &[&str], limits: Limits) -> Vec<(String, usize)> {
    let syn = exe_pipeline(&Dfa::from_strs(words.iter().copied())).expect("synthesis succeeds");
    match syn.program {
        Some(synth) => uncovered_by(&synth, init, words, limits),
        None => words.iter().filter(|w| parse_executable(w).is_some()).map(|w| (w.to_string(), 0)).collect(),
    }
}

/// Traces of the programs in `words` that no trace of `synth` covers.
pub fn uncovered_by(synth: &LabeledProgram, init: &[(&str, i64)], words: &[&str], limits: Limits) -> Vec<(String, usize)> {
    let start = CollectingMemory::from_pairs(init.iter().map(|&(x, v)| (x, ValueSet::ints([v]))));
    // Guards add steps, so the synthesized program gets a longer horizon.
    let wide = Limits { max_len: limits.max_len * 4, ..limits.clone() };
    let target = Machine::new(wide).explore(synth, CollectingStore::entry(start.clone()), 0).unwrap();
    let target_obs: Vec<Vec<CollectingMemory>> =
        target.paths(10_000).iter().map(|path| observations(&target, path)).collect();
    let mut out = Vec::new();
    for w in words {
        let Some(p) = parse_executable(w) else { continue };
        let ex = Machine::new(limits.clone()).explore(&p, CollectingStore::entry(start.clone()), 0).unwrap();
        for (k, path) in ex.paths(10_000).iter().enumerate() {
            let obs = observations(&ex, path);
            if !target_obs.iter().any(|t| embeds(&obs, t)) {
                out.push((w.to_string(), k));
            }
        }
    }
    out
}
