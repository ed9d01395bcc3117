use super::{Dfa, Nfa, RawDfa, StatePartition, Symbol};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

impl<S: Symbol> Dfa<S> {
    pub fn union(&self, other: &Self) -> Self {
        let mut nfa = Nfa::new();
        let a = nfa.embed(&self.to_nfa());
        let b = nfa.embed(&other.to_nfa());
        nfa.add_edge(0, None, a);
        nfa.add_edge(0, None, b);
        for q in self.final_states() {
            nfa.set_final(q + a);
        }
        for q in other.final_states() {
            nfa.set_final(q + b);
        }
        nfa.determinize()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut raw = RawDfa::default();
        let mut queue = VecDeque::from([(0, 0)]);
        ids.insert((0, 0), raw.add(self.is_final(0) && other.is_final(0)));
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            for (s, &p2) in self.transitions(p) {
                let Some(q2) = other.step(q, s) else { continue };
                let to = *ids.entry((p2, q2)).or_insert_with(|| {
                    queue.push_back((p2, q2));
                    raw.add(self.is_final(p2) && other.is_final(q2))
                });
                raw.trans[from].insert(s.clone(), to);
            }
        }
        raw.canonicalize()
    }

    /// Words of `self` that are not in `other`.
    pub fn minus(&self, other: &Self) -> Self {
        let mut ids: HashMap<(usize, Option<usize>), usize> = HashMap::new();
        let mut raw = RawDfa::default();
        let accepting = |p: usize, q: Option<usize>| {
            self.is_final(p) && !q.is_some_and(|q| other.is_final(q))
        };
        let mut queue = VecDeque::from([(0, Some(0))]);
        ids.insert((0, Some(0)), raw.add(accepting(0, Some(0))));
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            for (s, &p2) in self.transitions(p) {
                let key = (p2, q.and_then(|q| other.step(q, s)));
                let to = *ids.entry(key).or_insert_with(|| {
                    queue.push_back(key);
                    raw.add(accepting(key.0, key.1))
                });
                raw.trans[from].insert(s.clone(), to);
            }
        }
        raw.canonicalize()
    }

    /// Language inclusion `L(self) ⊆ L(other)`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        // `None` is the implicit rejecting sink of `other`.
        let mut seen: BTreeSet<(usize, Option<usize>)> = BTreeSet::from([(0, Some(0))]);
        let mut queue = VecDeque::from([(0, Some(0))]);
        while let Some((p, q)) = queue.pop_front() {
            if self.is_final(p) && !q.is_some_and(|q| other.is_final(q)) {
                return false;
            }
            for (s, &p2) in self.transitions(p) {
                let next = (p2, q.and_then(|q| other.step(q, s)));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        true
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut nfa = self.to_nfa();
        let b = nfa.embed(&other.to_nfa());
        for q in std::mem::take(&mut nfa.finals) {
            nfa.add_edge(q, None, b);
        }
        for q in other.final_states() {
            nfa.set_final(q + b);
        }
        nfa.determinize()
    }

    pub fn star(&self) -> Self {
        let mut nfa = Nfa::new();
        let a = nfa.embed(&self.to_nfa());
        nfa.add_edge(0, None, a);
        nfa.set_final(0);
        for q in self.final_states() {
            nfa.add_edge(q + a, None, 0);
        }
        nfa.determinize()
    }

    /// All factors (contiguous subwords) of words in the language.
    pub fn factors(&self) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        // Trim DFAs: every state is reachable and co-reachable.
        let mut nfa = Nfa::new();
        let a = nfa.embed(&self.to_nfa());
        for q in 0..self.num_states() {
            nfa.add_edge(0, None, q + a);
            nfa.set_final(q + a);
        }
        nfa.determinize()
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.is_final(q))
    }

    /// Whether some cycle is reachable; trim automata are infinite exactly then.
    pub fn is_finite(&self) -> bool {
        self.topological_order().is_some()
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut indeg = vec![0usize; n];
        for q in 0..n {
            for &t in self.transitions(q).values() {
                indeg[t] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&q| indeg[q] == 0).collect();
        while let Some(q) = ready.pop() {
            order.push(q);
            for &t in self.transitions(q).values() {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Length of the shortest accepted word.
    pub fn min_len(&self) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.num_states()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            if self.is_final(q) {
                return Some(dist[q]);
            }
            for &t in self.transitions(q).values() {
                if dist[t] == usize::MAX {
                    dist[t] = dist[q] + 1;
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Length of the longest accepted word; `None` when the language is
    /// empty or infinite.
    pub fn max_len(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let order = self.topological_order()?;
        let mut longest = vec![0usize; self.num_states()];
        let mut best = 0;
        for q in order {
            if self.is_final(q) {
                best = best.max(longest[q]);
            }
            for &t in self.transitions(q).values() {
                longest[t] = longest[t].max(longest[q] + 1);
            }
        }
        Some(best)
    }

    /// Accepted words of length at most `max_len`, shortest first then
    /// lexicographically.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<S>> {
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<S>, usize)> = vec![(Vec::new(), 0)];
        for depth in 0..=max_len {
            let mut next = Vec::new();
            for (w, q) in layer {
                if self.is_final(q) {
                    out.push(w.clone());
                }
                if depth < max_len {
                    for (s, &t) in self.transitions(q) {
                        let mut w2 = w.clone();
                        w2.push(s.clone());
                        next.push((w2, t));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// All words, when the language is finite and has at most `limit` words.
    pub fn enumerate(&self, limit: usize) -> Option<Vec<Vec<S>>> {
        if self.is_empty() {
            return Some(Vec::new());
        }
        let order = self.topological_order()?;
        // Count words per state first so huge finite languages bail out early.
        let mut count = vec![0usize; self.num_states()];
        for &q in order.iter().rev() {
            let mut c = usize::from(self.is_final(q));
            for &t in self.transitions(q).values() {
                c = c.saturating_add(count[t]);
            }
            count[q] = c;
        }
        if count[0] > limit {
            return None;
        }
        Some(self.words_up_to(self.max_len().unwrap_or(0)))
    }

    /// Merges the states of each block. The result is canonical again.
    pub fn quotient(&self, partition: &StatePartition) -> Result<Self, super::PartitionMismatch> {
        if partition.num_states() != self.num_states() {
            return Err(super::PartitionMismatch { states: self.num_states() });
        }
        let mut nfa = Nfa {
            initial: partition.block_of(0),
            finals: BTreeSet::new(),
            edges: vec![Vec::new(); partition.num_blocks()],
        };
        let mut seen: BTreeSet<(usize, &S, usize)> = BTreeSet::new();
        for q in 0..self.num_states() {
            let b = partition.block_of(q);
            if self.is_final(q) {
                nfa.set_final(b);
            }
            for (s, &t) in self.transitions(q) {
                let bt = partition.block_of(t);
                if seen.insert((b, s, bt)) {
                    nfa.add_edge(b, Some(s.clone()), bt);
                }
            }
        }
        Ok(nfa.determinize())
    }

    /// Drops the edges whose symbol fails `keep`; the result is re-canonicalized.
    pub fn retain_symbols(&self, keep: impl Fn(&S) -> bool) -> Self {
        let mut nfa = self.to_nfa();
        for out in &mut nfa.edges {
            out.retain(|(s, _)| s.as_ref().is_some_and(&keep));
        }
        nfa.determinize()
    }

    /// Transitions grouped by (source, target).
    pub fn grouped_edges(&self) -> BTreeMap<(usize, usize), Vec<S>> {
        let mut out: BTreeMap<(usize, usize), Vec<S>> = BTreeMap::new();
        for q in 0..self.num_states() {
            for (s, &t) in self.transitions(q) {
                out.entry((q, t)).or_default().push(s.clone());
            }
        }
        out
    }
}

impl Dfa<char> {
    /// Finite language of the given strings.
    pub fn from_strs<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Self::words(words.into_iter().map(|w| w.chars().collect()))
    }

    pub fn accepts_str(&self, w: &str) -> bool {
        self.accepts(&w.chars().collect::<Vec<_>>())
    }

    /// All strings, when the language is finite and small enough.
    pub fn enumerate_strings(&self, limit: usize) -> Option<Vec<String>> {
        self.enumerate(limit).map(|ws| ws.into_iter().map(|w| w.into_iter().collect()).collect())
    }

    pub fn strings_up_to(&self, max_len: usize) -> Vec<String> {
        self.words_up_to(max_len).into_iter().map(|w| w.into_iter().collect()).collect()
    }
}
