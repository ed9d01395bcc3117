use crate::automata::{Dfa, Nfa};
use std::collections::BTreeMap;
use std::fmt;

/// Regular expression over statement labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Atom(String),
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn atom(s: impl Into<String>) -> Regex {
        Regex::Atom(s.into())
    }

    /// Concatenation with `Empty` absorbing, `Epsilon` neutral and nested
    /// sequences flattened.
    pub fn concat(parts: impl IntoIterator<Item = Regex>) -> Regex {
        let mut out = Vec::new();
        for r in parts {
            match r {
                Regex::Empty => return Regex::Empty,
                Regex::Epsilon => {}
                Regex::Concat(rs) => out.extend(rs),
                r => out.push(r),
            }
        }
        match out.len() {
            0 => Regex::Epsilon,
            1 => out.pop().unwrap(),
            _ => Regex::Concat(out),
        }
    }

    /// Alternation with `Empty` neutral, duplicates removed and nested
    /// alternations flattened. Branch order is kept.
    pub fn alt(branches: impl IntoIterator<Item = Regex>) -> Regex {
        let mut out: Vec<Regex> = Vec::new();
        for r in branches {
            let items = match r {
                Regex::Empty => continue,
                Regex::Alt(rs) => rs,
                r => vec![r],
            };
            for r in items {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        match out.len() {
            0 => Regex::Empty,
            1 => out.pop().unwrap(),
            _ => Regex::Alt(out),
        }
    }

    pub fn star(r: Regex) -> Regex {
        match r {
            Regex::Empty | Regex::Epsilon => Regex::Epsilon,
            Regex::Star(_) => r,
            r => Regex::Star(Box::new(r)),
        }
    }

    /// Thompson construction; ε-transitions become `None`.
    pub fn to_nfa(&self) -> Nfa<String> {
        let mut nfa = Nfa::new();
        let end = nfa.add_state();
        self.build(&mut nfa, 0, end);
        nfa.set_final(end);
        nfa
    }

    fn build(&self, nfa: &mut Nfa<String>, from: usize, to: usize) {
        match self {
            Regex::Empty => {}
            Regex::Epsilon => nfa.add_edge(from, None, to),
            Regex::Atom(s) => nfa.add_edge(from, Some(s.clone()), to),
            Regex::Concat(rs) => {
                let mut cur = from;
                for (i, r) in rs.iter().enumerate() {
                    let next = if i + 1 == rs.len() { to } else { nfa.add_state() };
                    r.build(nfa, cur, next);
                    cur = next;
                }
            }
            Regex::Alt(rs) => {
                for r in rs {
                    r.build(nfa, from, to);
                }
            }
            Regex::Star(r) => {
                let hub = nfa.add_state();
                nfa.add_edge(from, None, hub);
                nfa.add_edge(hub, None, to);
                let back = nfa.add_state();
                r.build(nfa, hub, back);
                nfa.add_edge(back, None, hub);
            }
        }
    }

    pub fn to_dfa(&self) -> Dfa<String> {
        self.to_nfa().determinize()
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Alt(_) => 0,
            Regex::Concat(_) => 1,
            _ => 2,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Regex::Empty => write!(f, "∅"),
            Regex::Epsilon => write!(f, "ε"),
            Regex::Atom(s) => write!(f, "{s}"),
            Regex::Concat(rs) => {
                for r in rs {
                    r.fmt_at(f, 2)?;
                }
                Ok(())
            }
            Regex::Alt(rs) => {
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    r.fmt_at(f, 1)?;
                }
                Ok(())
            }
            Regex::Star(r) => {
                write!(f, "(")?;
                r.fmt_at(f, 0)?;
                write!(f, ")*")
            }
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Regular expression for the language of a statement automaton, by state
/// elimination. States go in increasing order of in-degree times out-degree,
/// ties by number, so the output is deterministic.
pub fn regex_of(a: &Dfa<String>) -> Regex {
    if a.is_empty() {
        return Regex::Empty;
    }
    let n = a.num_states();
    let (start, end) = (n, n + 1);
    let mut edges: BTreeMap<(usize, usize), Regex> = BTreeMap::new();
    for ((p, q), mut labels) in a.grouped_edges() {
        labels.sort();
        edges.insert((p, q), Regex::alt(labels.into_iter().map(Regex::Atom)));
    }
    edges.insert((start, 0), Regex::Epsilon);
    for q in a.final_states() {
        edges.insert((q, end), Regex::Epsilon);
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let degree = |k: usize| {
            let ins = edges.keys().filter(|&&(p, q)| q == k && p != k).count();
            let outs = edges.keys().filter(|&&(p, q)| p == k && q != k).count();
            ins * outs
        };
        let (pos, &k) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &k)| (degree(k), k))
            .unwrap();
        remaining.swap_remove(pos);
        let looped = edges.remove(&(k, k)).map(Regex::star).unwrap_or(Regex::Epsilon);
        let ins: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|((_, q), _)| *q == k)
            .map(|(&(p, _), r)| (p, r.clone()))
            .collect();
        let outs: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|((p, _), _)| *p == k)
            .map(|(&(_, q), r)| (q, r.clone()))
            .collect();
        edges.retain(|&(p, q), _| p != k && q != k);
        for (p, r_in) in &ins {
            for (q, r_out) in &outs {
                let through = Regex::concat([r_in.clone(), looped.clone(), r_out.clone()]);
                let merged = match edges.remove(&(*p, *q)) {
                    Some(old) => Regex::alt([old, through]),
                    None => through,
                };
                edges.insert((*p, *q), merged);
            }
        }
    }
    edges.remove(&(start, end)).unwrap_or(Regex::Empty)
}
