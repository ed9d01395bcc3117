use crate::automata::{Dfa, FiniteAutomaton};
use crate::domain::{AbstVal, AbstractMemory, BoolSet, Interval};
use crate::lang::{ArithOp, CmpOp, Expr};
use crate::transducers::{append_str, apply, substring_sft};

/// Index pairs enumerated for `ss` before falling back to all factors.
pub const SUBSTRING_PAIRS: usize = 64;
/// Largest start index turned into a dedicated transducer.
const SUBSTRING_MAX_START: i64 = 1024;
/// Words enumerated when a finite language is inspected word by word.
const WORD_LIMIT: usize = 64;

/// Integer view of a value: intervals as they are, ⊤ as every integer.
fn as_interval(v: &AbstVal) -> Option<Interval> {
    match v {
        AbstVal::Interval(i) => Some(*i),
        AbstVal::Top => Some(Interval::FULL),
        _ => None,
    }
}

fn as_bools(v: &AbstVal) -> Option<BoolSet> {
    match v {
        AbstVal::Bools(b) => Some(*b),
        AbstVal::Top => Some(BoolSet::BOTH),
        _ => None,
    }
}

fn numerals() -> FiniteAutomaton {
    let digit = Dfa::words(('0'..='9').map(|c| vec![c]));
    Dfa::from_strs(["", "-"]).concat(&digit).concat(&digit.star())
}

/// The single word of a language, if it has exactly one.
fn single_word(a: &FiniteAutomaton) -> Option<String> {
    match a.enumerate_strings(1)?.as_slice() {
        [w] => Some(w.clone()),
        _ => None,
    }
}

fn bools(b: BoolSet) -> AbstVal {
    AbstVal::from_bools(b)
}

fn compare_ints(op: CmpOp, a: Interval, b: Interval) -> BoolSet {
    let lt = |x: Interval, y: Interval| {
        // Definitely x < y, definitely x >= y.
        let yes = matches!((x.hi, y.lo), (Some(h), Some(l)) if h < l);
        let no = matches!((x.lo, y.hi), (Some(l), Some(h)) if l >= h);
        (yes, no)
    };
    let (yes, no) = match op {
        CmpOp::Eq => {
            let same = a.singleton().is_some() && a.singleton() == b.singleton();
            (same, a.meet(&b).is_empty())
        }
        CmpOp::Lt => lt(a, b),
        CmpOp::Gt => lt(b, a),
    };
    match (yes, no) {
        (true, _) => BoolSet::of(true),
        (_, true) => BoolSet::of(false),
        _ => BoolSet::BOTH,
    }
}

fn compare_strs(op: CmpOp, a: &FiniteAutomaton, b: &FiniteAutomaton) -> BoolSet {
    if let (Some(x), Some(y)) = (single_word(a), single_word(b)) {
        return BoolSet::of(match op {
            CmpOp::Eq => x == y,
            CmpOp::Lt => y.starts_with(&x),
            CmpOp::Gt => x.starts_with(&y),
        });
    }
    if op == CmpOp::Eq && a.intersect(b).is_empty() {
        return BoolSet::of(false);
    }
    BoolSet::BOTH
}

fn substring(s: &FiniteAutomaton, from: Interval, count: Interval) -> FiniteAutomaton {
    let bounded = |i: Interval| i.lo.zip(i.hi);
    let (Some((f_lo, f_hi)), Some((c_lo, c_hi))) = (bounded(from), bounded(count)) else {
        return s.factors();
    };
    let (f_lo, c_lo) = (f_lo.max(1), c_lo.max(0));
    if f_lo > f_hi || c_lo > c_hi {
        return FiniteAutomaton::empty();
    }
    let pairs = (f_hi - f_lo + 1).saturating_mul(c_hi - c_lo + 1);
    if pairs > SUBSTRING_PAIRS as i64 || f_hi > SUBSTRING_MAX_START || c_hi > SUBSTRING_MAX_START {
        return s.factors();
    }
    let longest = s.max_len().map(|n| n as i64);
    let mut out = FiniteAutomaton::empty();
    for start in f_lo..=f_hi {
        for len in c_lo..=c_hi {
            if longest.is_some_and(|n| start - 1 + len > n) {
                continue;
            }
            out = out.union(&apply(s, &substring_sft(start as usize, len as usize)));
        }
    }
    out
}

fn length(a: &FiniteAutomaton) -> AbstVal {
    match a.min_len() {
        None => AbstVal::Bot,
        Some(lo) => AbstVal::interval(Some(lo as i64), a.max_len().map(|n| n as i64)),
    }
}

fn number(a: &FiniteAutomaton) -> AbstVal {
    let nums = a.intersect(&numerals());
    if nums.is_empty() {
        return AbstVal::Bot;
    }
    let Some(words) = nums.enumerate_strings(WORD_LIMIT) else {
        return AbstVal::from_interval(Interval::FULL);
    };
    // Numerals beyond the integer range denote nothing.
    words
        .iter()
        .filter_map(|w| w.parse::<i64>().ok())
        .map(AbstVal::int)
        .fold(AbstVal::Bot, |acc, v| acc.lub(&v))
}

/// Abstract value of `e` in `m`. Ill-typed operands give ⊤ and empty
/// operands give ⊥, so evaluation never fails.
pub fn abs_eval(e: &Expr, m: &AbstractMemory) -> AbstVal {
    if !m.is_reachable() {
        return AbstVal::Bot;
    }
    let ev = |x: &Expr| abs_eval(x, m);
    match e {
        Expr::Var(x) => m.get(x),
        Expr::Int(n) => AbstVal::int(*n),
        Expr::Bool(b) => bools(BoolSet::of(*b)),
        Expr::Str(s) => AbstVal::strs([s.as_str()]),
        Expr::Rand => AbstVal::from_interval(Interval::FULL),
        Expr::Len(s) => match ev(s) {
            AbstVal::Bot => AbstVal::Bot,
            AbstVal::Str(a) => length(&a),
            AbstVal::Top => AbstVal::interval(Some(0), None),
            _ => AbstVal::Top,
        },
        Expr::Num(s) => match ev(s) {
            AbstVal::Bot => AbstVal::Bot,
            AbstVal::Str(a) => number(&a),
            AbstVal::Top => AbstVal::from_interval(Interval::FULL),
            _ => AbstVal::Top,
        },
        Expr::Arith(op, a, b) => {
            let (va, vb) = (ev(a), ev(b));
            if va.is_bot() || vb.is_bot() {
                return AbstVal::Bot;
            }
            match (as_interval(&va), as_interval(&vb)) {
                (Some(x), Some(y)) => AbstVal::from_interval(match op {
                    ArithOp::Add => x.add(&y),
                    ArithOp::Sub => x.sub(&y),
                    ArithOp::Mul => x.mul(&y),
                }),
                _ => AbstVal::Top,
            }
        }
        Expr::Cmp(op, a, b) => {
            let (va, vb) = (ev(a), ev(b));
            match (&va, &vb) {
                (AbstVal::Bot, _) | (_, AbstVal::Bot) => AbstVal::Bot,
                (AbstVal::Interval(x), AbstVal::Interval(y)) => bools(compare_ints(*op, *x, *y)),
                (AbstVal::Str(x), AbstVal::Str(y)) => bools(compare_strs(*op, x, y)),
                (AbstVal::Bools(x), AbstVal::Bools(y)) if *op == CmpOp::Eq => {
                    let both_single = x.contains(true) != x.contains(false) && y.contains(true) != y.contains(false);
                    if both_single {
                        bools(BoolSet::of(x == y))
                    } else if x.intersect(y).is_empty() {
                        bools(BoolSet::of(false))
                    } else {
                        bools(BoolSet::BOTH)
                    }
                }
                _ => bools(BoolSet::BOTH),
            }
        }
        Expr::And(a, b) => {
            let (va, vb) = (ev(a), ev(b));
            if va.is_bot() || vb.is_bot() {
                return AbstVal::Bot;
            }
            match (as_bools(&va), as_bools(&vb)) {
                (Some(x), Some(y)) => bools(x.and(&y)),
                _ => AbstVal::Top,
            }
        }
        Expr::Not(b) => match ev(b) {
            AbstVal::Bot => AbstVal::Bot,
            v => as_bools(&v).map_or(AbstVal::Top, |x| bools(x.not())),
        },
        Expr::Concat(a, b) => {
            let (va, vb) = (ev(a), ev(b));
            if va.is_bot() || vb.is_bot() {
                return AbstVal::Bot;
            }
            let (Some(x), Some(y)) = (va.as_fa(), vb.as_fa()) else { return AbstVal::Top };
            // A known suffix is appended symbol by symbol with the concat transducer.
            let suffix = match &**b {
                Expr::Str(w) => Some(w.clone()),
                _ => single_word(&y),
            };
            AbstVal::from_fa(match suffix {
                Some(w) => append_str(&x, &w),
                None => x.concat(&y),
            })
        }
        Expr::Substr(s, from, count) => {
            let (vs, vf, vc) = (ev(s), ev(from), ev(count));
            if vs.is_bot() || vf.is_bot() || vc.is_bot() {
                return AbstVal::Bot;
            }
            match (vs.as_fa(), as_interval(&vf), as_interval(&vc)) {
                (Some(a), Some(f), Some(c)) => AbstVal::from_fa(substring(&a, f, c)),
                _ => AbstVal::Top,
            }
        }
    }
}

/// Comparison `lhs rel rhs` after folding in the polarity.
#[derive(Clone, Copy, PartialEq)]
enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    fn of(op: CmpOp, polarity: bool) -> Rel {
        match (op, polarity) {
            (CmpOp::Eq, true) => Rel::Eq,
            (CmpOp::Eq, false) => Rel::Ne,
            (CmpOp::Lt, true) => Rel::Lt,
            (CmpOp::Lt, false) => Rel::Ge,
            (CmpOp::Gt, true) => Rel::Gt,
            (CmpOp::Gt, false) => Rel::Le,
        }
    }

    fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }
}

/// Largest sub-interval of `x` whose points may satisfy `x rel y` for some `y`.
fn constrain(x: Interval, rel: Rel, y: Interval) -> Interval {
    let min = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let max = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    match rel {
        Rel::Eq => x.meet(&y),
        Rel::Ne => match y.singleton() {
            Some(c) if x.singleton() == Some(c) => Interval::new(Some(1), Some(0)),
            Some(c) if x.lo == Some(c) => Interval::new(c.checked_add(1), x.hi),
            Some(c) if x.hi == Some(c) => Interval::new(x.lo, c.checked_sub(1)),
            _ => x,
        },
        Rel::Lt => Interval::new(x.lo, min(x.hi, y.hi.map(|h| h.saturating_sub(1)))),
        Rel::Le => Interval::new(x.lo, min(x.hi, y.hi)),
        Rel::Gt => Interval::new(max(x.lo, y.lo.map(|l| l.saturating_add(1))), x.hi),
        Rel::Ge => Interval::new(max(x.lo, y.lo), x.hi),
    }
}

fn refine_var(m: &mut AbstractMemory, x: &str, rel: Rel, other: &AbstVal) {
    let current = m.get(x);
    let refined = match (as_interval(&current), as_interval(other)) {
        (Some(cx), Some(cy)) if !(current == AbstVal::Top && *other == AbstVal::Top) => {
            AbstVal::from_interval(constrain(cx, rel, cy))
        }
        _ => match (&current, other, rel) {
            (AbstVal::Str(a), AbstVal::Str(b), Rel::Eq) => AbstVal::from_fa(a.intersect(b)),
            (AbstVal::Top, AbstVal::Str(b), Rel::Eq) => AbstVal::Str(b.clone()),
            (AbstVal::Bools(a), AbstVal::Bools(b), Rel::Eq) => AbstVal::from_bools(a.intersect(b)),
            _ => current.clone(),
        },
    };
    if refined.is_bot() {
        *m = AbstractMemory::unreachable();
    } else {
        m.set(x, refined);
    }
}

/// Sound refinement of `m` by the outcome `polarity` of condition `b`.
pub fn abs_filter(b: &Expr, m: &AbstractMemory, polarity: bool) -> AbstractMemory {
    if !m.is_reachable() {
        return m.clone();
    }
    match abs_eval(b, m) {
        AbstVal::Top => {}
        AbstVal::Bools(v) if v.contains(polarity) => {}
        _ => return AbstractMemory::unreachable(),
    }
    match b {
        Expr::Not(inner) => abs_filter(inner, m, !polarity),
        Expr::And(l, r) if polarity => abs_filter(r, &abs_filter(l, m, true), true),
        Expr::And(l, r) => {
            let left_false = abs_filter(l, m, false);
            let right_false = abs_filter(r, &abs_filter(l, m, true), false);
            left_false.join(&right_false)
        }
        Expr::Var(x) => {
            let mut out = m.clone();
            refine_var(&mut out, x, Rel::Eq, &bools(BoolSet::of(polarity)));
            out
        }
        Expr::Cmp(op, l, r) => {
            let rel = Rel::of(*op, polarity);
            let (vl, vr) = (abs_eval(l, m), abs_eval(r, m));
            // Prefix order on strings has no useful complement.
            let strings = matches!(vl, AbstVal::Str(_)) || matches!(vr, AbstVal::Str(_));
            if strings && rel != Rel::Eq {
                return m.clone();
            }
            let mut out = m.clone();
            if let Expr::Var(x) = &**l {
                refine_var(&mut out, x, rel, &vr);
            }
            if let Expr::Var(y) = &**r {
                let vl = abs_eval(l, &out);
                refine_var(&mut out, y, rel.flip(), &vl);
            }
            out
        }
        _ => m.clone(),
    }
}
