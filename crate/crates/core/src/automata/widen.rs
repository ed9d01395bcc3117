//! Widening by merging states that look alike within a bounded horizon.

use super::{Dfa, StatePartition, Symbol};
use std::collections::BTreeMap;

/// Finality plus the class reached on each symbol.
type Signature<S> = (bool, Vec<(S, usize)>);

/// Classes of bounded-horizon behaviour for the states of several automata.
///
/// Two states share a class iff the same words of length at most `n` can be
/// read from them and each such word leads to a final state from both or
/// from neither. Classes are comparable across the given automata.
pub fn bounded_signatures<S: Symbol>(automata: &[&Dfa<S>], n: usize) -> Vec<Vec<usize>> {
    let mut class: Vec<Vec<usize>> = automata
        .iter()
        .map(|a| (0..a.num_states()).map(|q| usize::from(a.is_final(q))).collect())
        .collect();
    for _ in 0..n {
        let mut ids: BTreeMap<Signature<&S>, usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(automata.len());
        for (k, a) in automata.iter().enumerate() {
            let row: Vec<usize> = (0..a.num_states())
                .map(|q| {
                    let succ = a.transitions(q).iter().map(|(s, &t)| (s, class[k][t])).collect();
                    let len = ids.len();
                    *ids.entry((a.is_final(q), succ)).or_insert(len)
                })
                .collect();
            next.push(row);
        }
        class = next;
    }
    class
}

/// Widening parameterized by a relation between the states of `old` and the
/// states of `union` (the minimal automaton of `old ∪ new`).
///
/// States of `union` related to a common state of `old` are merged, closing
/// transitively; the quotient is returned.
pub fn widen_with_relation<S: Symbol>(
    old: &Dfa<S>,
    union: &Dfa<S>,
    related: impl Fn(usize, usize) -> bool,
) -> Dfa<S> {
    let mut uf = UnionFind::new(union.num_states());
    for q1 in 0..old.num_states() {
        let mut first = None;
        for q2 in 0..union.num_states() {
            if related(q1, q2) {
                match first {
                    None => first = Some(q2),
                    Some(f) => uf.union(f, q2),
                }
            }
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for q in 0..union.num_states() {
        let root = uf.find(q);
        let len = ids.len();
        let b = *ids.entry(root).or_insert(len);
        if b == blocks.len() {
            blocks.push(Vec::new());
        }
        blocks[b].push(q);
    }
    let partition = StatePartition::from_blocks(union.num_states(), &blocks)
        .expect("union-find blocks cover every state once");
    union.quotient(&partition).expect("partition built for this automaton")
}

/// Widening with horizon `n`: states of `old ∪ new` are merged when they share
/// their bounded-horizon behaviour with some state of `old`.
pub fn widen_n<S: Symbol>(old: &Dfa<S>, new: &Dfa<S>, n: usize) -> Dfa<S> {
    let union = old.union(new);
    let sig = bounded_signatures(&[old, &union], n);
    widen_with_relation(old, &union, |q1, q2| sig[0][q1] == sig[1][q2])
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
