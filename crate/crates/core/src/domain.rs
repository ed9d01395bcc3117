//! Abstract values, memories and stores.

use crate::alphabet::sigma;
use crate::automata::{widen_n, FiniteAutomaton};
use crate::lang::Label;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Integer interval; `None` bounds are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

/// Extended integers for endpoint arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    NegInf,
    Fin(i128),
    PosInf,
}

impl Ext {
    fn lo(b: Option<i64>) -> Ext {
        b.map_or(Ext::NegInf, |v| Ext::Fin(v.into()))
    }
    fn hi(b: Option<i64>) -> Ext {
        b.map_or(Ext::PosInf, |v| Ext::Fin(v.into()))
    }
    fn mul(self, other: Ext) -> Ext {
        use Ext::*;
        match (self, other) {
            (Fin(a), Fin(b)) => Fin(a.saturating_mul(b)),
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (a, b) => {
                let neg = (a < Fin(0)) != (b < Fin(0));
                if neg {
                    NegInf
                } else {
                    PosInf
                }
            }
        }
    }
    /// Out-of-range results widen to infinity, which is sound for either bound.
    fn to_bound(self) -> Option<i64> {
        match self {
            Ext::Fin(v) => i64::try_from(v).ok(),
            _ => None,
        }
    }
}

impl Interval {
    pub const FULL: Interval = Interval { lo: None, hi: None };

    pub fn new(lo: Option<i64>, hi: Option<i64>) -> Self {
        Interval { lo, hi }
    }

    pub fn point(v: i64) -> Self {
        Interval { lo: Some(v), hi: Some(v) }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|l| l <= v) && self.hi.is_none_or(|h| v <= h)
    }

    pub fn is_full(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn singleton(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Some(l),
            _ => None,
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.zip(other.lo).map(|(a, b)| a.min(b)),
            hi: self.hi.zip(other.hi).map(|(a, b)| a.max(b)),
        }
    }

    pub fn meet(&self, other: &Interval) -> Interval {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lo, hi }
    }

    pub fn leq(&self, other: &Interval) -> bool {
        let lo_ok = match (other.lo, self.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(a)) => b <= a,
        };
        let hi_ok = match (other.hi, self.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(a)) => a <= b,
        };
        lo_ok && hi_ok
    }

    /// Standard widening; unstable bounds jump to the nearest threshold
    /// beyond them, or to infinity.
    pub fn widen(&self, next: &Interval, thresholds: &[i64]) -> Interval {
        let lo = match (self.lo, next.lo) {
            (Some(a), Some(b)) if b < a => thresholds.iter().rev().copied().find(|&t| t <= b),
            (Some(_), None) => None,
            (a, _) => a,
        };
        let hi = match (self.hi, next.hi) {
            (Some(a), Some(b)) if b > a => thresholds.iter().copied().find(|&t| t >= b),
            (Some(_), None) => None,
            (a, _) => a,
        };
        Interval { lo, hi }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.zip(o.lo).and_then(|(a, b)| a.checked_add(b)),
            hi: self.hi.zip(o.hi).and_then(|(a, b)| a.checked_add(b)),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.and_then(i64::checked_neg),
            hi: self.lo.and_then(i64::checked_neg),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let (a, b) = (Ext::lo(self.lo), Ext::hi(self.hi));
        let (c, d) = (Ext::lo(o.lo), Ext::hi(o.hi));
        let products = [a.mul(c), a.mul(d), b.mul(c), b.mul(d)];
        let lo = *products.iter().min().unwrap();
        let hi = *products.iter().max().unwrap();
        Interval { lo: lo.to_bound(), hi: hi.to_bound() }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(l) => write!(f, "[{l},")?,
            None => write!(f, "[-∞,")?,
        }
        match self.hi {
            Some(h) => write!(f, "{h}]"),
            None => write!(f, "+∞]"),
        }
    }
}

/// Subset of `{true, false}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct BoolSet {
    pub may_true: bool,
    pub may_false: bool,
}

impl BoolSet {
    pub const BOTH: BoolSet = BoolSet { may_true: true, may_false: true };

    pub fn of(b: bool) -> Self {
        BoolSet { may_true: b, may_false: !b }
    }

    pub fn contains(&self, b: bool) -> bool {
        if b {
            self.may_true
        } else {
            self.may_false
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.may_true && !self.may_false
    }

    pub fn union(&self, o: &BoolSet) -> BoolSet {
        BoolSet { may_true: self.may_true || o.may_true, may_false: self.may_false || o.may_false }
    }

    pub fn intersect(&self, o: &BoolSet) -> BoolSet {
        BoolSet { may_true: self.may_true && o.may_true, may_false: self.may_false && o.may_false }
    }

    pub fn not(&self) -> BoolSet {
        BoolSet { may_true: self.may_false, may_false: self.may_true }
    }

    pub fn and(&self, o: &BoolSet) -> BoolSet {
        BoolSet {
            may_true: self.may_true && o.may_true,
            may_false: (self.may_false && !o.is_empty()) || (o.may_false && !self.is_empty()),
        }
    }
}

impl fmt::Display for BoolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.may_true {
            parts.push("true");
        }
        if self.may_false {
            parts.push("false");
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An abstract value. Empty payloads are normalized to `Bot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AbstVal {
    Top,
    Interval(Interval),
    Bools(BoolSet),
    Str(FiniteAutomaton),
    Bot,
}

/// Parameters of value widening.
#[derive(Clone, Debug)]
pub struct WidenParams {
    pub fa_n: usize,
    pub thresholds: Vec<i64>,
}

impl Default for WidenParams {
    fn default() -> Self {
        WidenParams { fa_n: 3, thresholds: Vec::new() }
    }
}

impl AbstVal {
    pub fn interval(lo: Option<i64>, hi: Option<i64>) -> Self {
        Self::from_interval(Interval { lo, hi })
    }

    pub fn int(v: i64) -> Self {
        AbstVal::Interval(Interval::point(v))
    }

    pub fn from_interval(i: Interval) -> Self {
        if i.is_empty() {
            AbstVal::Bot
        } else {
            AbstVal::Interval(i)
        }
    }

    pub fn from_bools(b: BoolSet) -> Self {
        if b.is_empty() {
            AbstVal::Bot
        } else {
            AbstVal::Bools(b)
        }
    }

    pub fn from_fa(fa: FiniteAutomaton) -> Self {
        if fa.is_empty() {
            AbstVal::Bot
        } else {
            AbstVal::Str(fa)
        }
    }

    pub fn strs<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Self::from_fa(FiniteAutomaton::from_strs(words))
    }

    /// All strings over Σ.
    pub fn any_string() -> Self {
        AbstVal::Str(FiniteAutomaton::universal(sigma()))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, AbstVal::Bot)
    }

    pub fn lub(&self, other: &AbstVal) -> AbstVal {
        use AbstVal::*;
        match (self, other) {
            (Bot, v) | (v, Bot) => v.clone(),
            (Top, _) | (_, Top) => Top,
            (Interval(a), Interval(b)) => Interval(a.hull(b)),
            (Bools(a), Bools(b)) => Bools(a.union(b)),
            (Str(a), Str(b)) => Str(a.union(b)),
            _ => Top,
        }
    }

    pub fn glb(&self, other: &AbstVal) -> AbstVal {
        use AbstVal::*;
        match (self, other) {
            (Top, v) | (v, Top) => v.clone(),
            (Bot, _) | (_, Bot) => Bot,
            (Interval(a), Interval(b)) => Self::from_interval(a.meet(b)),
            (Bools(a), Bools(b)) => Self::from_bools(a.intersect(b)),
            (Str(a), Str(b)) => Self::from_fa(a.intersect(b)),
            _ => Bot,
        }
    }

    pub fn leq(&self, other: &AbstVal) -> bool {
        use AbstVal::*;
        match (self, other) {
            (Bot, _) | (_, Top) => true,
            (Interval(a), Interval(b)) => a.leq(b),
            (Bools(a), Bools(b)) => a.union(b) == *b,
            (Str(a), Str(b)) => a.is_subset_of(b),
            _ => false,
        }
    }

    pub fn widen(&self, next: &AbstVal, params: &WidenParams) -> AbstVal {
        use AbstVal::*;
        match (self, next) {
            (Bot, v) | (v, Bot) => v.clone(),
            (Top, _) | (_, Top) => Top,
            (Interval(a), Interval(b)) => Interval(a.widen(&a.hull(b), &params.thresholds)),
            (Bools(a), Bools(b)) => Bools(a.union(b)),
            (Str(a), Str(b)) => {
                if b.is_subset_of(a) {
                    Str(a.clone())
                } else {
                    Str(widen_n(a, b, params.fa_n))
                }
            }
            _ => Top,
        }
    }

    pub fn contains_int(&self, v: i64) -> bool {
        match self {
            AbstVal::Top => true,
            AbstVal::Interval(i) => i.contains(v),
            _ => false,
        }
    }

    pub fn contains_all_ints(&self) -> bool {
        match self {
            AbstVal::Top => true,
            AbstVal::Interval(i) => i.is_full(),
            _ => false,
        }
    }

    pub fn contains_bool(&self, b: bool) -> bool {
        match self {
            AbstVal::Top => true,
            AbstVal::Bools(s) => s.contains(b),
            _ => false,
        }
    }

    pub fn contains_str(&self, w: &str) -> bool {
        match self {
            AbstVal::Top => true,
            AbstVal::Str(a) => a.accepts_str(w),
            _ => false,
        }
    }

    /// The automaton of a string value; ⊤ counts as Σ*.
    pub fn as_fa(&self) -> Option<FiniteAutomaton> {
        match self {
            AbstVal::Str(a) => Some(a.clone()),
            AbstVal::Top => Some(FiniteAutomaton::universal(sigma())),
            AbstVal::Bot => Some(FiniteAutomaton::empty()),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AbstVal::Top => "top",
            AbstVal::Interval(_) => "interval",
            AbstVal::Bools(_) => "bool",
            AbstVal::Str(_) => "string",
            AbstVal::Bot => "bottom",
        }
    }
}

/// Words shown when printing a finite string value.
const SHOWN_WORDS: usize = 8;

impl fmt::Display for AbstVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstVal::Top => write!(f, "⊤"),
            AbstVal::Bot => write!(f, "⊥"),
            AbstVal::Interval(i) => write!(f, "{i}"),
            AbstVal::Bools(b) => write!(f, "{b}"),
            AbstVal::Str(a) => match a.enumerate_strings(SHOWN_WORDS) {
                Some(words) => {
                    let quoted: Vec<String> = words.iter().map(|w| format!("'{w}'")).collect();
                    write!(f, "{{{}}}", quoted.join(", "))
                }
                None => write!(f, "FA({} states)", a.num_states()),
            },
        }
    }
}

impl Serialize for AbstVal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("kind", self.kind())?;
        match self {
            AbstVal::Interval(i) => {
                map.serialize_entry("lo", &i.lo)?;
                map.serialize_entry("hi", &i.hi)?;
            }
            AbstVal::Bools(b) => {
                let vals: Vec<bool> = [true, false].into_iter().filter(|&v| b.contains(v)).collect();
                map.serialize_entry("values", &vals)?;
            }
            AbstVal::Str(a) => {
                map.serialize_entry("states", &a.num_states())?;
                map.serialize_entry("finals", &a.final_states().collect::<Vec<_>>())?;
                let edges: Vec<(usize, String, usize)> = a
                    .grouped_edges()
                    .into_iter()
                    .map(|((p, q), syms)| (p, crate::automata::char_class_label(&syms), q))
                    .collect();
                map.serialize_entry("transitions", &edges)?;
                if let Some(words) = a.enumerate_strings(64) {
                    map.serialize_entry("words", &words)?;
                }
            }
            _ => {}
        }
        map.end()
    }
}

/// Variable to value map; `None` marks an unreachable point. Missing
/// variables are ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbstractMemory(Option<BTreeMap<String, AbstVal>>);

impl AbstractMemory {
    pub fn unreachable() -> Self {
        AbstractMemory(None)
    }

    /// Reachable with every variable ⊥.
    pub fn empty() -> Self {
        AbstractMemory(Some(BTreeMap::new()))
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, AbstVal)>>(pairs: I) -> Self {
        let mut m = Self::empty();
        for (x, v) in pairs {
            m.set(&x, v);
        }
        m
    }

    pub fn is_reachable(&self) -> bool {
        self.0.is_some()
    }

    pub fn get(&self, x: &str) -> AbstVal {
        self.0.as_ref().and_then(|m| m.get(x)).cloned().unwrap_or(AbstVal::Bot)
    }

    /// Strong update; no effect on an unreachable memory.
    pub fn set(&mut self, x: &str, v: AbstVal) {
        if let Some(m) = &mut self.0 {
            if v.is_bot() {
                m.remove(x);
            } else {
                m.insert(x.to_string(), v);
            }
        }
    }

    pub fn remove(&mut self, x: &str) {
        if let Some(m) = &mut self.0 {
            m.remove(x);
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = (&String, &AbstVal)> {
        self.0.iter().flat_map(|m| m.iter())
    }

    fn combine(&self, other: &Self, f: impl Fn(&AbstVal, &AbstVal) -> AbstVal) -> Self {
        match (&self.0, &other.0) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => {
                let mut out = BTreeMap::new();
                for x in a.keys().chain(b.keys()) {
                    let v = f(&self.get(x), &other.get(x));
                    if !v.is_bot() {
                        out.insert(x.clone(), v);
                    }
                }
                AbstractMemory(Some(out))
            }
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        self.combine(other, AbstVal::lub)
    }

    pub fn widen(&self, other: &Self, params: &WidenParams) -> Self {
        self.combine(other, |a, b| a.widen(b, params))
    }

    pub fn leq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(_)) => a.iter().all(|(x, v)| v.leq(&other.get(x))),
        }
    }
}

impl fmt::Display for AbstractMemory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            None => write!(f, "unreachable"),
            Some(m) => {
                let parts: Vec<String> = m.iter().map(|(x, v)| format!("{x}/{v}")).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl Serialize for AbstractMemory {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            None => s.serialize_none(),
            Some(m) => m.serialize(s),
        }
    }
}

/// Per-line abstract memories, indexed by label.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct AbstractStore {
    lines: BTreeMap<Label, AbstractMemory>,
}

impl AbstractStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, l: Label) -> AbstractMemory {
        self.lines.get(&l).cloned().unwrap_or_default()
    }

    pub fn get_ref(&self, l: Label) -> Option<&AbstractMemory> {
        self.lines.get(&l)
    }

    pub fn set(&mut self, l: Label, m: AbstractMemory) {
        self.lines.insert(l, m);
    }

    pub fn lines(&self) -> impl Iterator<Item = (Label, &AbstractMemory)> {
        self.lines.iter().map(|(&l, m)| (l, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> AbstVal {
        AbstVal::interval(Some(lo), Some(hi))
    }

    #[test]
    fn lub_and_glb() {
        assert_eq!(iv(1, 2).lub(&iv(5, 7)), iv(1, 7));
        assert_eq!(iv(1, 2).lub(&AbstVal::strs(["a"])), AbstVal::Top);
        assert_eq!(AbstVal::strs(["a", "b"]).glb(&AbstVal::strs(["b", "c"])), AbstVal::strs(["b"]));
        assert_eq!(iv(1, 2).glb(&AbstVal::strs(["a"])), AbstVal::Bot);
        assert_eq!(iv(1, 2).glb(&iv(3, 4)), AbstVal::Bot);
    }

    #[test]
    fn widening() {
        let p = WidenParams::default();
        assert_eq!(iv(0, 1).widen(&iv(0, 2), &p), AbstVal::interval(Some(0), None));
        let both = AbstVal::Bools(BoolSet::BOTH);
        assert_eq!(AbstVal::Bools(BoolSet::of(true)).widen(&both, &p), both);
        let s = "x:=x+1;";
        let s2 = s.repeat(2);
        let w = AbstVal::strs(["", s]).widen(&AbstVal::strs(["", s, &s2]), &p);
        let star = AbstVal::Str(FiniteAutomaton::from_strs([s]).star());
        assert_eq!(w, star);
        assert_eq!(iv(1, 2).widen(&AbstVal::Bools(BoolSet::BOTH), &p), AbstVal::Top);
    }

    #[test]
    fn thresholds_slow_down_interval_widening() {
        let a = Interval::new(Some(0), Some(1));
        let b = Interval::new(Some(0), Some(5));
        assert_eq!(a.widen(&b, &[10, 100]), Interval::new(Some(0), Some(10)));
        assert_eq!(a.widen(&b, &[]), Interval::new(Some(0), None));
    }

    #[test]
    fn interval_arithmetic() {
        let a = Interval::new(Some(-2), Some(3));
        let b = Interval::new(Some(4), None);
        assert_eq!(a.add(&b), Interval::new(Some(2), None));
        assert_eq!(a.sub(&b), Interval::new(None, Some(-1)));
        assert_eq!(a.mul(&Interval::point(2)), Interval::new(Some(-4), Some(6)));
        assert_eq!(a.mul(&b), Interval::FULL);
        assert_eq!(Interval::point(0).mul(&Interval::FULL), Interval::point(0));
        let big = Interval::point(i64::MAX);
        assert_eq!(big.add(&Interval::point(1)), Interval::new(None, None));
    }

    #[test]
    fn memory_join_and_order() {
        let m1 = AbstractMemory::from_pairs([("x".into(), iv(1, 1))]);
        let m2 = AbstractMemory::from_pairs([("x".into(), iv(3, 3)), ("y".into(), iv(0, 0))]);
        let j = m1.join(&m2);
        assert_eq!(j.get("x"), iv(1, 3));
        assert_eq!(j.get("y"), iv(0, 0));
        assert!(m1.leq(&j) && m2.leq(&j));
        assert!(AbstractMemory::unreachable().leq(&m1));
        assert_eq!(AbstractMemory::unreachable().join(&m1), m1);
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(iv(1, 2)).unwrap();
        assert_eq!(v["kind"], "interval");
        assert_eq!(v["lo"], 1);
        let s = serde_json::to_value(AbstVal::strs(["ab"])).unwrap();
        assert_eq!(s["words"][0], "ab");
    }
}
