//! Concrete collecting semantics: value sets per variable, memories per line,
//! and a bounded explorer of the transition system including nested
//! reflection. Used as the ground truth for the abstract analysis.

mod eval;
mod machine;

use crate::lang::{parse_executable, Label, LabeledProgram};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use eval::{eval_expr, filter_condition};
pub use machine::{run_traces, Exploration, Limits, Machine, State};

/// Integer part of a value set; `All` is the symbolic set produced by `rand()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntSet {
    Finite(BTreeSet<i64>),
    All,
}

impl Default for IntSet {
    fn default() -> Self {
        IntSet::Finite(BTreeSet::new())
    }
}

impl IntSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, IntSet::Finite(s) if s.is_empty())
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        match (self, other) {
            (IntSet::Finite(a), IntSet::Finite(b)) => IntSet::Finite(a | b),
            _ => IntSet::All,
        }
    }
}

/// A set of values of possibly mixed types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueSet {
    pub ints: IntSet,
    pub bools: BTreeSet<bool>,
    pub strs: BTreeSet<String>,
}

impl ValueSet {
    pub fn ints<I: IntoIterator<Item = i64>>(vals: I) -> Self {
        ValueSet { ints: IntSet::Finite(vals.into_iter().collect()), ..Default::default() }
    }

    pub fn all_ints() -> Self {
        ValueSet { ints: IntSet::All, ..Default::default() }
    }

    pub fn bools<I: IntoIterator<Item = bool>>(vals: I) -> Self {
        ValueSet { bools: vals.into_iter().collect(), ..Default::default() }
    }

    pub fn strs<I: IntoIterator<Item = S>, S: Into<String>>(vals: I) -> Self {
        ValueSet { strs: vals.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.ints.is_empty() && self.bools.is_empty() && self.strs.is_empty()
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        ValueSet {
            ints: self.ints.union(&other.ints),
            bools: &self.bools | &other.bools,
            strs: &self.strs | &other.strs,
        }
    }

    pub fn union_with(&mut self, other: &ValueSet) {
        *self = self.union(other);
    }

    pub(crate) fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        match &self.ints {
            IntSet::All => out.push(Point::AnyInt),
            IntSet::Finite(s) => out.extend(s.iter().map(|&v| Point::Int(v))),
        }
        out.extend(self.bools.iter().map(|&b| Point::Bool(b)));
        out.extend(self.strs.iter().map(|s| Point::Str(s.clone())));
        out
    }

    pub(crate) fn from_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> ValueSet {
        let mut out = ValueSet::default();
        for p in points {
            out.insert(p.clone());
        }
        out
    }

    pub(crate) fn insert(&mut self, p: Point) {
        match p {
            Point::Int(v) => {
                if let IntSet::Finite(s) = &mut self.ints {
                    s.insert(v);
                }
            }
            Point::AnyInt => self.ints = IntSet::All,
            Point::Bool(b) => {
                self.bools.insert(b);
            }
            Point::Str(s) => {
                self.strs.insert(s);
            }
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match &self.ints {
            IntSet::All => parts.push("ℤ".into()),
            IntSet::Finite(s) => parts.extend(s.iter().map(i64::to_string)),
        }
        parts.extend(self.bools.iter().map(bool::to_string));
        parts.extend(self.strs.iter().map(|s| format!("'{s}'")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for ValueSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match &self.ints {
            IntSet::All => map.serialize_entry("ints", "all")?,
            IntSet::Finite(v) if !v.is_empty() => map.serialize_entry("ints", v)?,
            IntSet::Finite(_) => {}
        }
        if !self.bools.is_empty() {
            map.serialize_entry("bools", &self.bools)?;
        }
        if !self.strs.is_empty() {
            map.serialize_entry("strs", &self.strs)?;
        }
        map.end()
    }
}

/// A single concrete value; `AnyInt` stands for every integer at once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Point {
    Int(i64),
    AnyInt,
    Bool(bool),
    Str(String),
}

/// Variable to value-set map. Missing variables hold the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CollectingMemory(BTreeMap<String, ValueSet>);

impl CollectingMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (S, ValueSet)>, S: Into<String>>(pairs: I) -> Self {
        let mut m = Self::new();
        for (x, v) in pairs {
            m.set(&x.into(), v);
        }
        m
    }

    pub fn get(&self, x: &str) -> ValueSet {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn get_ref(&self, x: &str) -> Option<&ValueSet> {
        self.0.get(x)
    }

    pub fn set(&mut self, x: &str, v: ValueSet) {
        if v.is_empty() {
            self.0.remove(x);
        } else {
            self.0.insert(x.to_string(), v);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = (&String, &ValueSet)> {
        self.0.iter()
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.0 {
            out.0.entry(x.clone()).or_default().union_with(v);
        }
        out
    }

    /// Pointwise inclusion.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().all(|(x, v)| v.union(&other.get(x)) == other.get(x))
    }

    /// Drops variables for which `keep` is false.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> Self {
        CollectingMemory(self.0.iter().filter(|(x, _)| keep(x)).map(|(x, v)| (x.clone(), v.clone())).collect())
    }
}

impl fmt::Display for CollectingMemory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(x, v)| format!("{x}/{v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Per-line memories. Lines never written hold the empty memory.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CollectingStore(BTreeMap<Label, CollectingMemory>);

impl CollectingStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// The initial store of a (reflected) run: `m` at line 1, empty elsewhere.
    pub fn entry(m: CollectingMemory) -> Self {
        let mut s = Self::new();
        s.join_at(1, &m);
        s
    }

    pub fn get(&self, l: Label) -> CollectingMemory {
        self.0.get(&l).cloned().unwrap_or_default()
    }

    /// `S[S_l ← m]`: joins `m` into line `l`.
    pub fn join_at(&mut self, l: Label, m: &CollectingMemory) {
        if m.is_empty() && !self.0.contains_key(&l) {
            return;
        }
        let joined = self.get(l).join(m);
        self.0.insert(l, joined);
    }

    pub fn lines(&self) -> impl Iterator<Item = (Label, &CollectingMemory)> {
        self.0.iter().map(|(&l, m)| (l, m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConcreteError {
    #[error("type error at line {line}: {msg}")]
    Type { line: Label, msg: String },
    #[error("reflection tower exceeds the bound at line {line}")]
    TowerDivergence { line: Label },
    #[error("exploration exceeded {0} states")]
    StateLimit(usize),
}

/// The values that denote programs, each labeled.
pub fn executable_subset<'a>(values: impl IntoIterator<Item = &'a String>) -> Vec<(String, LabeledProgram)> {
    values.into_iter().filter_map(|v| parse_executable(v).map(|p| (v.clone(), p))).collect()
}
