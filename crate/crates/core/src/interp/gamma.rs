use crate::concrete::{CollectingMemory, CollectingStore, IntSet, ValueSet};
use crate::domain::{AbstVal, AbstractMemory, AbstractStore, BoolSet, Interval};
use crate::lang::Label;
use serde::Serialize;

/// Whether every value in `c` lies in the concretization of `a`.
///
/// The symbolic set from `rand()` survives filters unchanged, so after a
/// guard it only stands for some integers: it is checked by kind alone.
pub fn value_contains(a: &AbstVal, c: &ValueSet) -> bool {
    let ints = match &c.ints {
        IntSet::All => matches!(a, AbstVal::Top | AbstVal::Interval(_)),
        IntSet::Finite(vs) => vs.iter().all(|&v| a.contains_int(v)),
    };
    ints && c.bools.iter().all(|&b| a.contains_bool(b)) && c.strs.iter().all(|w| a.contains_str(w))
}

/// Best abstract value covering `c`; mixed kinds go to ⊤.
pub fn abstraction(c: &ValueSet) -> AbstVal {
    let ints = match &c.ints {
        IntSet::All => AbstVal::from_interval(Interval::FULL),
        IntSet::Finite(vs) => match (vs.first(), vs.last()) {
            (Some(&lo), Some(&hi)) => AbstVal::interval(Some(lo), Some(hi)),
            _ => AbstVal::Bot,
        },
    };
    let bools = AbstVal::from_bools(BoolSet { may_true: c.bools.contains(&true), may_false: c.bools.contains(&false) });
    let strs = AbstVal::strs(c.strs.iter().map(String::as_str));
    ints.lub(&bools).lub(&strs)
}

/// Pointwise abstraction of a concrete memory.
pub fn abstract_memory(c: &CollectingMemory) -> AbstractMemory {
    AbstractMemory::from_pairs(c.vars().map(|(x, v)| (x.clone(), abstraction(v))))
}

/// A concrete value set escaping its abstract counterpart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub line: Label,
    pub var: String,
    pub concrete: String,
    pub abstract_value: String,
}

/// Variables of `c` whose values escape `a`.
pub fn memory_contains(a: &AbstractMemory, c: &CollectingMemory) -> Vec<(String, ValueSet)> {
    c.vars()
        .filter(|(x, v)| !v.is_empty() && !value_contains(&a.get(x), v))
        .map(|(x, v)| (x.clone(), v.clone()))
        .collect()
}

/// Per-line γ-containment of a concrete store in an abstract one.
pub fn store_contains(a: &AbstractStore, c: &CollectingStore) -> Vec<Violation> {
    let mut out = Vec::new();
    for (l, cm) in c.lines() {
        let am = a.get(l);
        for (x, v) in memory_contains(&am, cm) {
            out.push(Violation {
                line: l,
                abstract_value: am.get(&x).to_string(),
                var: x,
                concrete: v.to_string(),
            });
        }
    }
    out
}
