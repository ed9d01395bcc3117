//! Finite automata up to language equivalence.
//!
//! [`Dfa`] values are always canonical: deterministic, trim, minimal and
//! numbered in breadth-first order, so two automata are equal exactly when
//! their languages are. [`Nfa`] is the construction scratchpad.

mod dot;
mod ops;
mod widen;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

pub use dot::{char_class_label, Dot};
pub use widen::{bounded_signatures, widen_n, widen_with_relation};

/// Anything usable as an edge label.
pub trait Symbol: Clone + Ord + Hash + Debug {}
impl<T: Clone + Ord + Hash + Debug> Symbol for T {}

/// Character-level automaton: the abstract string value.
pub type FiniteAutomaton = Dfa<char>;

pub type StateId = usize;

/// Nondeterministic automaton with ε-edges (`None` labels).
#[derive(Clone, Debug)]
pub struct Nfa<S> {
    pub initial: StateId,
    pub finals: BTreeSet<StateId>,
    pub edges: Vec<Vec<(Option<S>, StateId)>>,
}

impl<S: Symbol> Default for Nfa<S> {
    fn default() -> Self {
        Nfa::new()
    }
}

impl<S: Symbol> Nfa<S> {
    /// A single non-final initial state.
    pub fn new() -> Self {
        Nfa { initial: 0, finals: BTreeSet::new(), edges: vec![Vec::new()] }
    }

    pub fn add_state(&mut self) -> StateId {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    pub fn add_edge(&mut self, from: StateId, sym: Option<S>, to: StateId) {
        self.edges[from].push((sym, to));
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    /// Copies `other` into `self`, returning the offset added to its state ids.
    pub fn embed(&mut self, other: &Nfa<S>) -> usize {
        let base = self.edges.len();
        for out in &other.edges {
            self.edges.push(out.iter().map(|(s, t)| (s.clone(), t + base)).collect());
        }
        base
    }

    fn closure(&self, set: &mut BTreeSet<StateId>) {
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for (s, t) in &self.edges[q] {
                if s.is_none() && set.insert(*t) {
                    stack.push(*t);
                }
            }
        }
    }

    /// Whether the automaton accepts `word`.
    pub fn accepts(&self, word: &[S]) -> bool {
        let mut cur = BTreeSet::from([self.initial]);
        self.closure(&mut cur);
        for sym in word {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for (s, t) in &self.edges[q] {
                    if s.as_ref() == Some(sym) {
                        next.insert(*t);
                    }
                }
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|q| self.finals.contains(q))
    }

    /// Subset construction followed by canonicalization.
    pub fn determinize(&self) -> Dfa<S> {
        let mut start = BTreeSet::from([self.initial]);
        self.closure(&mut start);
        let mut ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut raw = RawDfa::default();
        let mut queue = VecDeque::new();
        ids.insert(start.clone(), raw.add(start.iter().any(|q| self.finals.contains(q))));
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let from = ids[&set];
            let mut moves: BTreeMap<&S, BTreeSet<StateId>> = BTreeMap::new();
            for &q in &set {
                for (s, t) in &self.edges[q] {
                    if let Some(s) = s {
                        moves.entry(s).or_default().insert(*t);
                    }
                }
            }
            for (sym, mut target) in moves {
                self.closure(&mut target);
                let to = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = raw.add(target.iter().any(|q| self.finals.contains(q)));
                        ids.insert(target.clone(), id);
                        queue.push_back(target);
                        id
                    }
                };
                raw.trans[from].insert(sym.clone(), to);
            }
        }
        raw.canonicalize()
    }
}

/// Deterministic automaton before trimming and minimization. State 0 is initial.
#[derive(Clone, Debug)]
pub(crate) struct RawDfa<S> {
    pub finals: Vec<bool>,
    pub trans: Vec<BTreeMap<S, StateId>>,
}

impl<S> Default for RawDfa<S> {
    fn default() -> Self {
        RawDfa { finals: Vec::new(), trans: Vec::new() }
    }
}

impl<S: Symbol> RawDfa<S> {
    pub fn add(&mut self, is_final: bool) -> StateId {
        self.finals.push(is_final);
        self.trans.push(BTreeMap::new());
        self.finals.len() - 1
    }

    /// Trim, minimize and renumber breadth-first.
    pub fn canonicalize(self) -> Dfa<S> {
        let n = self.finals.len();
        if n == 0 {
            return Dfa::empty();
        }
        // Co-reachability.
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, out) in self.trans.iter().enumerate() {
            for &t in out.values() {
                rev[t].push(q);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<StateId> = (0..n).filter(|&q| self.finals[q]).collect();
        for &q in &stack {
            live[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        if !live[0] {
            return Dfa::empty();
        }
        let class = hopcroft(&self.finals, &self.trans, &live);
        // Breadth-first renumbering from the initial class.
        let mut id_of: BTreeMap<usize, StateId> = BTreeMap::new();
        let mut rep: Vec<StateId> = Vec::new();
        let mut queue = VecDeque::from([0]);
        id_of.insert(class[0], 0);
        rep.push(0);
        let mut trans: Vec<BTreeMap<S, StateId>> = Vec::new();
        let mut finals = Vec::new();
        while let Some(q) = queue.pop_front() {
            let mut out = BTreeMap::new();
            for (s, &t) in &self.trans[q] {
                if !live[t] {
                    continue;
                }
                let id = *id_of.entry(class[t]).or_insert_with(|| {
                    rep.push(t);
                    queue.push_back(t);
                    rep.len() - 1
                });
                out.insert(s.clone(), id);
            }
            trans.push(out);
            finals.push(self.finals[q]);
        }
        Dfa { finals, trans }
    }
}

/// Hopcroft partition refinement over the live states, with every missing or
/// dead transition sent to one implicit sink. Returns a block id per state;
/// dead states get arbitrary ids.
fn hopcroft<S: Symbol>(finals: &[bool], trans: &[BTreeMap<S, StateId>], live: &[bool]) -> Vec<usize> {
    let n = finals.len();
    let sink = n;
    let symbols: Vec<&S> = trans
        .iter()
        .enumerate()
        .filter(|&(q, _)| live[q])
        .flat_map(|(_, out)| out.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&S, usize> = symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // Predecessors per symbol; the sink collects every missing move.
    let mut inv: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); n + 1]; symbols.len()];
    for q in (0..n).filter(|&q| live[q]) {
        let mut seen = vec![false; symbols.len()];
        for (s, &t) in &trans[q] {
            let a = index[s];
            seen[a] = true;
            inv[a][if live[t] { t } else { sink }].push(q);
        }
        for (a, _) in seen.iter().enumerate().filter(|(_, &hit)| !hit) {
            inv[a][sink].push(q);
        }
    }
    for row in inv.iter_mut() {
        row[sink].push(sink);
    }
    let states: Vec<StateId> = (0..n).filter(|&q| live[q]).chain([sink]).collect();
    let (fin, rest): (Vec<StateId>, Vec<StateId>) = states.into_iter().partition(|&q| q < n && finals[q]);
    let mut blocks: Vec<Vec<StateId>> = [fin, rest].into_iter().filter(|b| !b.is_empty()).collect();
    let mut block_of = vec![0; n + 1];
    for (b, members) in blocks.iter().enumerate() {
        for &q in members {
            block_of[q] = b;
        }
    }
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for b in 0..blocks.len() {
        for a in 0..symbols.len() {
            pending.insert((b, a));
        }
    }
    let mut mark = vec![false; n + 1];
    while let Some((b, a)) = pending.pop_first() {
        let mut hit: BTreeMap<usize, Vec<StateId>> = BTreeMap::new();
        for &t in &blocks[b] {
            for &p in &inv[a][t] {
                if !mark[p] {
                    mark[p] = true;
                    hit.entry(block_of[p]).or_default().push(p);
                }
            }
        }
        for (y, split) in hit {
            let whole = split.len() == blocks[y].len();
            if !whole {
                blocks[y].retain(|&q| !mark[q]);
            }
            for &p in &split {
                mark[p] = false;
            }
            if whole {
                continue;
            }
            let z = blocks.len();
            for &p in &split {
                block_of[p] = z;
            }
            blocks.push(split);
            for c in 0..symbols.len() {
                if pending.contains(&(y, c)) || blocks[z].len() <= blocks[y].len() {
                    pending.insert((z, c));
                } else {
                    pending.insert((y, c));
                }
            }
        }
    }
    block_of.truncate(n);
    block_of
}

/// Canonical minimal DFA. State 0 is initial; missing transitions reject.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa<S> {
    finals: Vec<bool>,
    trans: Vec<BTreeMap<S, StateId>>,
}

impl<S: Symbol> Dfa<S> {
    /// The empty language: one non-final state.
    pub fn empty() -> Self {
        Dfa { finals: vec![false], trans: vec![BTreeMap::new()] }
    }

    /// The language `{ε}`.
    pub fn epsilon() -> Self {
        Dfa { finals: vec![true], trans: vec![BTreeMap::new()] }
    }

    /// The language of all words over `alphabet`.
    pub fn universal(alphabet: impl IntoIterator<Item = S>) -> Self {
        let out = alphabet.into_iter().map(|s| (s, 0)).collect();
        Dfa { finals: vec![true], trans: vec![out] }
    }

    pub fn word(word: &[S]) -> Self {
        Self::words([word.to_vec()])
    }

    pub fn words<I: IntoIterator<Item = Vec<S>>>(words: I) -> Self {
        let mut nfa = Nfa::new();
        for w in words {
            let mut q = nfa.initial;
            for s in w {
                let t = nfa.add_state();
                nfa.add_edge(q, Some(s), t);
                q = t;
            }
            nfa.set_final(q);
        }
        nfa.determinize()
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn transitions(&self, q: StateId) -> &BTreeMap<S, StateId> {
        &self.trans[q]
    }

    pub fn step(&self, q: StateId, s: &S) -> Option<StateId> {
        self.trans[q].get(s).copied()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        !self.finals[0] && self.trans[0].is_empty()
    }

    pub fn accepts(&self, word: &[S]) -> bool {
        let mut q = 0;
        for s in word {
            match self.step(q, s) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.finals[q]
    }

    /// Symbols occurring on some edge.
    pub fn alphabet(&self) -> BTreeSet<S> {
        self.trans.iter().flat_map(|m| m.keys().cloned()).collect()
    }

    pub fn to_nfa(&self) -> Nfa<S> {
        Nfa {
            initial: 0,
            finals: (0..self.num_states()).filter(|&q| self.finals[q]).collect(),
            edges: self
                .trans
                .iter()
                .map(|m| m.iter().map(|(s, &t)| (Some(s.clone()), t)).collect())
                .collect(),
        }
    }

    /// Applies `f` to every symbol; the result is re-canonicalized.
    pub fn map_symbols<T: Symbol>(&self, f: impl Fn(&S) -> T) -> Dfa<T> {
        let mut nfa = Nfa {
            initial: 0,
            finals: (0..self.num_states()).filter(|&q| self.finals[q]).collect(),
            edges: vec![Vec::new(); self.num_states()],
        };
        for (q, m) in self.trans.iter().enumerate() {
            for (s, &t) in m {
                nfa.add_edge(q, Some(f(s)), t);
            }
        }
        nfa.determinize()
    }
}

/// A partition of an automaton's states into blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePartition {
    block_of: Vec<usize>,
    blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("partition does not cover the {states} states of the automaton exactly once")]
pub struct PartitionMismatch {
    pub states: usize,
}

impl StatePartition {
    /// Builds a partition of `0..states` from explicit blocks.
    pub fn from_blocks(states: usize, blocks: &[Vec<StateId>]) -> Result<Self, PartitionMismatch> {
        let mut block_of = vec![usize::MAX; states];
        for (b, members) in blocks.iter().enumerate() {
            for &q in members {
                if q >= states || block_of[q] != usize::MAX {
                    return Err(PartitionMismatch { states });
                }
                block_of[q] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(PartitionMismatch { states });
        }
        Ok(StatePartition { block_of, blocks: blocks.len() })
    }

    /// One block per state.
    pub fn discrete(states: usize) -> Self {
        StatePartition { block_of: (0..states).collect(), blocks: states }
    }

    pub fn block_of(&self, q: StateId) -> usize {
        self.block_of[q]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }
}

#[cfg(test)]
mod tests;
