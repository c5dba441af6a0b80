use std::collections::BTreeSet;
use std::fmt::Write;

use super::ParseError;
use crate::automaton::{Automaton, RawAutomaton};
use crate::event::Event;

const START: &str = "__start";

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Graphviz description of `a`: one node per state, double circles for
/// marker states, a point feeding the initial state and one labelled edge
/// per transition, all in state order.
pub fn emit_dot(a: &Automaton, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", esc(name)).unwrap();
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=circle];\n");
    writeln!(out, "    {START} [shape=point, label=\"\"];").unwrap();
    for q in a.states() {
        if a.is_marked(q) {
            writeln!(out, "    {} [shape=doublecircle];", esc(a.state_name(q))).unwrap();
        } else {
            writeln!(out, "    {};", esc(a.state_name(q))).unwrap();
        }
    }
    writeln!(out, "    {START} -> {};", esc(a.state_name(a.initial()))).unwrap();
    for (s, e, d) in a.transitions() {
        writeln!(
            out,
            "    {} -> {} [label={}];",
            esc(a.state_name(s)),
            esc(a.state_name(d)),
            esc(&e.to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads a quoted identifier from the front of `s`.
fn take_quoted(s: &str) -> Option<(String, &str)> {
    let rest = s.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = rest.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?.1),
            '"' => return Some((out, &rest[i + 1..])),
            _ => out.push(c),
        }
    }
    None
}

fn take_node(s: &str) -> Option<(String, &str)> {
    match s.strip_prefix(START) {
        Some(rest) => Some((START.to_string(), rest)),
        None => take_quoted(s),
    }
}

/// Parses the subset of Graphviz written by [`emit_dot`]. The alphabet is
/// the set of edge labels.
pub fn parse_dot(text: &str) -> Result<Automaton, ParseError> {
    let mut states = Vec::new();
    let mut marked = Vec::new();
    let mut initial = None;
    let mut transitions = Vec::new();
    let mut alphabet = BTreeSet::new();
    let mut lines = text.lines().enumerate();
    let bad = |n: usize, what: &str| ParseError::invalid(format!("line {}", n + 1), what);

    match lines.next() {
        Some((_, l)) if l.starts_with("digraph ") && l.ends_with('{') => {}
        _ => return Err(bad(0, "expected `digraph NAME {`")),
    }
    for (n, line) in lines {
        let line = line.trim();
        if line == "}" {
            return Ok(Automaton::from_raw(&RawAutomaton {
                states,
                alphabet: alphabet.into_iter().collect(),
                initial: initial.ok_or_else(|| bad(n, "no initial state"))?,
                marked,
                transitions,
            })
            .map_err(|v| ParseError::violations("graph", &v))?);
        }
        if line.is_empty() || line.starts_with("rankdir") || line.starts_with("node ") {
            continue;
        }
        let body = line.strip_suffix(';').ok_or_else(|| bad(n, "missing `;`"))?;
        let (src, rest) = take_node(body).ok_or_else(|| bad(n, "expected a node name"))?;
        let rest = rest.trim_start();
        if let Some(rest) = rest.strip_prefix("->") {
            let (dst, rest) = take_node(rest.trim_start()).ok_or_else(|| bad(n, "expected a target"))?;
            let rest = rest.trim_start();
            if src == START {
                if !rest.is_empty() {
                    return Err(bad(n, "unexpected attributes on the initial arrow"));
                }
                initial = Some(dst);
                continue;
            }
            let label = rest
                .strip_prefix("[label=")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(take_quoted)
                .filter(|(_, tail)| tail.is_empty())
                .ok_or_else(|| bad(n, "expected `[label=\"...\"]`"))?
                .0;
            let ev: Event = label.parse().map_err(|e| bad(n, &format!("{e}")))?;
            alphabet.insert(ev.clone());
            transitions.push((src, ev, dst));
        } else if src == START {
            continue;
        } else if rest.is_empty() {
            states.push(src);
        } else if rest == "[shape=doublecircle]" {
            marked.push(src.clone());
            states.push(src);
        } else {
            return Err(bad(n, "unsupported node attributes"));
        }
    }
    Err(bad(text.lines().count(), "missing closing `}`"))
}
