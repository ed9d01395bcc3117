use comms::concrete::ValueSet;
use comms::domain::{AbstVal, BoolSet};
use comms::lang::KEYWORDS;
use std::collections::BTreeSet;
use std::fmt;

/// Widest interval a concrete run will enumerate.
const MAX_CONCRETE_RANGE: i64 = 10_000;

/// One `--input VAR=VALUE` seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub var: String,
    pub value: InputValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputValue {
    Top,
    AnyString,
    Interval(Option<i64>, Option<i64>),
    Strs(BTreeSet<String>),
    Bools(BTreeSet<bool>),
}

impl InputValue {
    pub fn abstract_value(&self) -> AbstVal {
        match self {
            InputValue::Top => AbstVal::Top,
            InputValue::AnyString => AbstVal::any_string(),
            InputValue::Interval(lo, hi) => AbstVal::interval(*lo, *hi),
            InputValue::Strs(ws) => AbstVal::strs(ws.iter().map(String::as_str)),
            InputValue::Bools(bs) => AbstVal::from_bools(BoolSet { may_true: bs.contains(&true), may_false: bs.contains(&false) }),
        }
    }

    /// The value as a finite set, if it is one the explorer can enumerate.
    pub fn concrete_values(&self) -> Option<ValueSet> {
        match self {
            InputValue::Interval(Some(lo), Some(hi)) if hi.saturating_sub(*lo) <= MAX_CONCRETE_RANGE => {
                Some(ValueSet::ints(*lo..=*hi))
            }
            InputValue::Strs(ws) => Some(ValueSet::strs(ws.iter().cloned())),
            InputValue::Bools(bs) => Some(ValueSet::bools(bs.iter().copied())),
            _ => None,
        }
    }
}

impl fmt::Display for InputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |b: &Option<i64>, inf: &str| b.map_or(inf.to_string(), |v| v.to_string());
        match self {
            InputValue::Top => write!(f, "top"),
            InputValue::AnyString => write!(f, "*"),
            InputValue::Interval(lo, hi) => write!(f, "[{},{}]", bound(lo, "-inf"), bound(hi, "+inf")),
            InputValue::Strs(ws) => {
                let quoted: Vec<String> = ws.iter().map(|w| format!("'{w}'")).collect();
                write!(f, "{}", quoted.join(","))
            }
            InputValue::Bools(bs) => {
                let names: Vec<String> = bs.iter().map(bool::to_string).collect();
                write!(f, "{}", names.join(","))
            }
        }
    }
}

/// Parses `VAR=VALUE`, where VALUE is `top` (or `⊤`), `*` for any string,
/// an interval `[lo,hi]` with `-inf`/`+inf` bounds, quoted strings
/// `'a','b'` or Booleans `true,false`.
pub fn parse_input(raw: &str) -> Result<InputSpec, String> {
    let (var, value) = raw.split_once('=').ok_or_else(|| format!("`{raw}`: expected VAR=VALUE"))?;
    let var = var.trim();
    let mut chars = var.chars();
    let ident = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ident || KEYWORDS.contains(&var) {
        return Err(format!("`{var}` is not a variable name"));
    }
    let value = parse_value(value.trim()).map_err(|e| format!("`{raw}`: {e}"))?;
    Ok(InputSpec { var: var.to_string(), value })
}

fn parse_value(v: &str) -> Result<InputValue, String> {
    match v {
        "top" | "⊤" => return Ok(InputValue::Top),
        "*" => return Ok(InputValue::AnyString),
        _ => {}
    }
    if let Some(inner) = v.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (lo, hi) = inner.split_once(',').ok_or("interval needs two bounds")?;
        let bound = |s: &str, inf: &str| -> Result<Option<i64>, String> {
            let s = s.trim();
            if s == inf {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| format!("bad bound `{s}`"))
            }
        };
        let (lo, hi) = (bound(lo, "-inf")?, bound(hi, "+inf")?);
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return Err("empty interval".into());
            }
        }
        return Ok(InputValue::Interval(lo, hi));
    }
    if v.starts_with('\'') {
        return parse_strings(v).map(InputValue::Strs);
    }
    let bools = v
        .split(',')
        .map(|b| b.trim().parse::<bool>().map_err(|_| format!("unrecognized value `{v}`")))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(InputValue::Bools(bools))
}

fn parse_strings(v: &str) -> Result<BTreeSet<String>, String> {
    let mut out = BTreeSet::new();
    let mut rest = v;
    loop {
        let body = rest.strip_prefix('\'').ok_or("expected a quoted string")?;
        let end = body.find('\'').ok_or("unterminated string")?;
        out.insert(body[..end].to_string());
        rest = body[end + 1..].trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        rest = rest.strip_prefix(',').ok_or("strings must be separated by commas")?.trim_start();
    }
}
