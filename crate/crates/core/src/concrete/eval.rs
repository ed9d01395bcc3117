use super::{CollectingMemory, ConcreteError, Point, ValueSet};
use crate::lang::{ArithOp, CmpOp, Expr};
use std::collections::{BTreeMap, BTreeSet};

/// Above this many points, expressions are evaluated per variable instead of
/// per point, which over-approximates correlated occurrences.
const POINT_LIMIT: usize = 1 << 14;

type Env = BTreeMap<String, Vec<Point>>;

/// Results of one evaluation plus a count of ill-typed combinations.
#[derive(Default)]
struct Acc {
    vals: BTreeSet<Point>,
    well: usize,
    ill: usize,
}

impl Acc {
    fn push(&mut self, r: Option<Vec<Point>>) {
        match r {
            Some(v) => {
                self.well += 1;
                self.vals.extend(v);
            }
            None => self.ill += 1,
        }
    }

    fn finish(self, what: &str) -> Result<BTreeSet<Point>, String> {
        if self.well == 0 && self.ill > 0 {
            Err(format!("ill-typed operands for {what}"))
        } else {
            Ok(self.vals)
        }
    }
}

fn is_numeral(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// 1-based window of `len` symbols starting at `start`.
fn window(w: &str, start: i64, len: i64) -> Option<String> {
    let chars: Vec<char> = w.chars().collect();
    if start < 1 || len < 0 || start - 1 + len > chars.len() as i64 {
        return None;
    }
    let s = (start - 1) as usize;
    Some(chars[s..s + len as usize].iter().collect())
}

fn arith(op: ArithOp, a: &Point, b: &Point) -> Option<Vec<Point>> {
    use Point::*;
    match (a, b) {
        (Int(x), Int(y)) => Some(
            match op {
                ArithOp::Add => x.checked_add(*y),
                ArithOp::Sub => x.checked_sub(*y),
                ArithOp::Mul => x.checked_mul(*y),
            }
            .map(Int)
            .into_iter()
            .collect(),
        ),
        (Int(0), AnyInt) | (AnyInt, Int(0)) if op == ArithOp::Mul => Some(vec![Int(0)]),
        (Int(_) | AnyInt, Int(_) | AnyInt) => Some(vec![AnyInt]),
        _ => None,
    }
}

fn compare(op: CmpOp, a: &Point, b: &Point) -> Option<Vec<Point>> {
    use Point::*;
    let both = || Some(vec![Bool(true), Bool(false)]);
    let one = |v: bool| Some(vec![Bool(v)]);
    match (op, a, b) {
        (_, AnyInt, Int(_) | AnyInt) | (_, Int(_), AnyInt) => both(),
        (CmpOp::Eq, Int(x), Int(y)) => one(x == y),
        (CmpOp::Eq, Bool(x), Bool(y)) => one(x == y),
        (CmpOp::Eq, Str(x), Str(y)) => one(x == y),
        (CmpOp::Lt, Int(x), Int(y)) => one(x < y),
        (CmpOp::Gt, Int(x), Int(y)) => one(x > y),
        // Strings are ordered by prefix.
        (CmpOp::Lt, Str(x), Str(y)) => one(y.starts_with(x.as_str())),
        (CmpOp::Gt, Str(x), Str(y)) => one(x.starts_with(y.as_str())),
        _ => None,
    }
}

fn eval_in(e: &Expr, env: &Env) -> Result<BTreeSet<Point>, String> {
    use Point::*;
    let unary = |inner: &Expr, what: &str, f: &dyn Fn(&Point) -> Option<Vec<Point>>| {
        let vals = eval_in(inner, env)?;
        let mut acc = Acc::default();
        for v in &vals {
            acc.push(f(v));
        }
        acc.finish(what)
    };
    let binary = |a: &Expr, b: &Expr, what: &str, f: &dyn Fn(&Point, &Point) -> Option<Vec<Point>>| {
        let (va, vb) = (eval_in(a, env)?, eval_in(b, env)?);
        let mut acc = Acc::default();
        for x in &va {
            for y in &vb {
                acc.push(f(x, y));
            }
        }
        acc.finish(what)
    };
    match e {
        Expr::Var(x) => Ok(env.get(x).map(|v| v.iter().cloned().collect()).unwrap_or_default()),
        Expr::Int(n) => Ok([Int(*n)].into()),
        Expr::Bool(b) => Ok([Bool(*b)].into()),
        Expr::Str(s) => Ok([Str(s.clone())].into()),
        Expr::Rand => Ok([AnyInt].into()),
        Expr::Len(s) => unary(s, "len", &|p| match p {
            Str(w) => Some(vec![Int(w.chars().count() as i64)]),
            _ => None,
        }),
        Expr::Num(s) => unary(s, "num", &|p| match p {
            Str(w) => Some(if is_numeral(w) { w.parse().ok().map(Int).into_iter().collect() } else { vec![] }),
            _ => None,
        }),
        Expr::Not(b) => unary(b, "!", &|p| match p {
            Bool(v) => Some(vec![Bool(!v)]),
            _ => None,
        }),
        Expr::And(a, b) => binary(a, b, "&", &|x, y| match (x, y) {
            (Bool(x), Bool(y)) => Some(vec![Bool(*x && *y)]),
            _ => None,
        }),
        Expr::Arith(op, a, b) => binary(a, b, op.symbol(), &|x, y| arith(*op, x, y)),
        Expr::Cmp(op, a, b) => binary(a, b, op.symbol(), &|x, y| compare(*op, x, y)),
        Expr::Concat(a, b) => binary(a, b, ".", &|x, y| match (x, y) {
            (Str(x), Str(y)) => Some(vec![Str(format!("{x}{y}"))]),
            _ => None,
        }),
        Expr::Substr(s, a, b) => {
            let (vs, va, vb) = (eval_in(s, env)?, eval_in(a, env)?, eval_in(b, env)?);
            let mut acc = Acc::default();
            for w in &vs {
                for x in &va {
                    for y in &vb {
                        let Str(w) = w else {
                            acc.push(None);
                            continue;
                        };
                        let len = w.chars().count() as i64;
                        let starts: Vec<i64> = match x {
                            Int(v) => vec![*v],
                            AnyInt => (1..=len + 1).collect(),
                            _ => {
                                acc.push(None);
                                continue;
                            }
                        };
                        let mut out = Vec::new();
                        for &st in &starts {
                            let lens: Vec<i64> = match y {
                                Int(v) => vec![*v],
                                AnyInt => (0..=len).collect(),
                                _ => {
                                    out.clear();
                                    break;
                                }
                            };
                            out.extend(lens.into_iter().filter_map(|l| window(w, st, l)).map(Str));
                        }
                        if matches!(y, Int(_) | AnyInt) {
                            acc.push(Some(out));
                        } else {
                            acc.push(None);
                        }
                    }
                }
            }
            acc.finish("ss")
        }
    }
}

/// Every combination of values for `vars`, or `None` when there are too many.
fn points_of(vars: &BTreeSet<String>, m: &CollectingMemory) -> Option<Vec<Env>> {
    let mut total: usize = 1;
    let mut choices = Vec::new();
    for x in vars {
        let pts = m.get(x).points();
        total = total.saturating_mul(pts.len());
        choices.push((x, pts));
    }
    if total > POINT_LIMIT {
        return None;
    }
    let mut envs = vec![Env::new()];
    for (x, pts) in choices {
        let mut next = Vec::with_capacity(envs.len() * pts.len());
        for env in &envs {
            for p in &pts {
                let mut e = env.clone();
                e.insert(x.clone(), vec![p.clone()]);
                next.push(e);
            }
        }
        envs = next;
    }
    Some(envs)
}

fn whole_env(vars: &BTreeSet<String>, m: &CollectingMemory) -> Env {
    vars.iter().map(|x| (x.clone(), m.get(x).points())).collect()
}

fn type_error(msg: String) -> ConcreteError {
    ConcreteError::Type { line: 0, msg }
}

/// Collecting semantics of an expression: its values over every point of `m`.
pub fn eval_expr(e: &Expr, m: &CollectingMemory) -> Result<ValueSet, ConcreteError> {
    let vars = e.vars();
    let envs = points_of(&vars, m).unwrap_or_else(|| vec![whole_env(&vars, m)]);
    let mut out = BTreeSet::new();
    let mut last_err = None;
    let mut ok = false;
    for env in &envs {
        match eval_in(e, env) {
            Ok(v) => {
                ok = true;
                out.extend(v);
            }
            Err(msg) => last_err = Some(msg),
        }
    }
    match (ok, last_err) {
        (false, Some(msg)) => Err(type_error(msg)),
        _ => Ok(ValueSet::from_points(&out)),
    }
}

/// Whether `b` is `x = c` or `c = x`; used to pin a symbolic integer.
fn pinned(b: &Expr) -> Option<(&str, i64)> {
    match b {
        Expr::Cmp(CmpOp::Eq, l, r) => match (&**l, &**r) {
            (Expr::Var(x), Expr::Int(c)) | (Expr::Int(c), Expr::Var(x)) => Some((x, *c)),
            _ => None,
        },
        _ => None,
    }
}

/// The largest sub-memory of `m` whose points can make `b` evaluate to
/// `polarity`. Only the variables of `b` are restricted.
pub fn filter_condition(b: &Expr, m: &CollectingMemory, polarity: bool) -> CollectingMemory {
    let vars = b.vars();
    let Some(envs) = points_of(&vars, m) else {
        return m.clone();
    };
    let mut kept: BTreeMap<&String, ValueSet> = vars.iter().map(|x| (x, ValueSet::default())).collect();
    for env in &envs {
        let Ok(vals) = eval_in(b, env) else { continue };
        if !vals.contains(&Point::Bool(polarity)) {
            continue;
        }
        for x in &vars {
            let p = &env[x][0];
            let p = match (p, pinned(b)) {
                (Point::AnyInt, Some((y, c))) if y == x && polarity => Point::Int(c),
                _ => p.clone(),
            };
            kept.get_mut(x).unwrap().insert(p);
        }
    }
    let mut out = m.clone();
    for (x, v) in kept {
        out.set(x, v);
    }
    out
}
