use super::{Dfa, Nfa, Symbol};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Graphviz rendering.
pub trait Dot {
    fn to_dot(&self, name: &str) -> String;
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render(
    name: &str,
    states: usize,
    initial: usize,
    is_final: impl Fn(usize) -> bool,
    edges: &BTreeMap<(usize, usize), String>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    out.push_str("  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..states {
        let shape = if is_final(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{q} [shape={shape}];");
    }
    let _ = writeln!(out, "  start -> q{initial};");
    for ((p, q), label) in edges {
        let _ = writeln!(out, "  q{p} -> q{q} [label=\"{}\"];", escape(label));
    }
    out.push_str("}\n");
    out
}

/// Compact label for a set of characters, using ranges such as `a-z`.
pub fn char_class_label(chars: &[char]) -> String {
    let mut sorted = chars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() == 1 {
        return sorted[0].to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] as u32 == sorted[j] as u32 + 1 {
            j += 1;
        }
        parts.push(match j - i {
            0 => sorted[i].to_string(),
            1 => format!("{}{}", sorted[i], sorted[j]),
            _ => format!("{}-{}", sorted[i], sorted[j]),
        });
        i = j + 1;
    }
    format!("[{}]", parts.concat())
}

impl Dot for Dfa<char> {
    fn to_dot(&self, name: &str) -> String {
        let edges = self
            .grouped_edges()
            .into_iter()
            .map(|(k, syms)| (k, char_class_label(&syms)))
            .collect();
        render(name, self.num_states(), 0, |q| self.is_final(q), &edges)
    }
}

impl<S: Symbol + std::fmt::Display> Dot for Nfa<S> {
    fn to_dot(&self, name: &str) -> String {
        let mut grouped: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for (p, out) in self.edges.iter().enumerate() {
            for (s, q) in out {
                let label = s.as_ref().map_or_else(|| "ε".to_string(), |s| s.to_string());
                grouped.entry((p, *q)).or_default().push(label);
            }
        }
        let edges = grouped.into_iter().map(|(k, v)| (k, v.join(" | "))).collect();
        render(name, self.num_states(), self.initial, |q| self.finals.contains(&q), &edges)
    }
}
