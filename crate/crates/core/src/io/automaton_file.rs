use std::fmt::Write;

use serde::Deserialize;

use super::ParseError;
use crate::automaton::{Automaton, RawAutomaton};
use crate::event::Event;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    marked: Vec<String>,
    transitions: Vec<[String; 3]>,
}

pub(super) fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn write_list<'a>(out: &mut String, key: &str, items: impl IntoIterator<Item = &'a str>) {
    let items: Vec<String> = items.into_iter().map(quote).collect();
    if items.is_empty() {
        writeln!(out, "{key} = []").unwrap();
        return;
    }
    writeln!(out, "{key} = [").unwrap();
    for i in items {
        writeln!(out, "    {i},").unwrap();
    }
    writeln!(out, "]").unwrap();
}

/// Serializes `a` with one transition per line. Event kinds survive through
/// their text encoding.
pub fn emit_automaton_file(a: &Automaton) -> String {
    let mut out = String::new();
    write_list(&mut out, "states", a.state_names().iter().map(String::as_str));
    let alphabet: Vec<String> = a.alphabet().iter().map(ToString::to_string).collect();
    write_list(&mut out, "alphabet", alphabet.iter().map(String::as_str));
    writeln!(out, "initial = {}", quote(a.state_name(a.initial()))).unwrap();
    write_list(&mut out, "marked", a.marked_states().map(|q| a.state_name(q)));
    if a.num_transitions() == 0 {
        out.push_str("transitions = []\n");
        return out;
    }
    out.push_str("transitions = [\n");
    for (s, e, d) in a.transitions() {
        writeln!(
            out,
            "    [{}, {}, {}],",
            quote(a.state_name(s)),
            quote(&e.to_string()),
            quote(a.state_name(d))
        )
        .unwrap();
    }
    out.push_str("]\n");
    out
}

pub fn parse_automaton_file(text: &str) -> Result<Automaton, ParseError> {
    let doc: AutomatonDoc = toml::from_str(text)?;
    let parse = |path: String, s: &str| s.parse::<Event>().map_err(|e| ParseError::invalid(path, e));
    let alphabet = doc
        .alphabet
        .iter()
        .enumerate()
        .map(|(i, s)| parse(format!("alphabet[{i}]"), s))
        .collect::<Result<Vec<_>, _>>()?;
    let transitions = doc
        .transitions
        .iter()
        .enumerate()
        .map(|(i, [s, e, d])| Ok((s.clone(), parse(format!("transitions[{i}]"), e)?, d.clone())))
        .collect::<Result<Vec<_>, ParseError>>()?;
    let raw = RawAutomaton {
        states: doc.states,
        alphabet,
        initial: doc.initial,
        marked: doc.marked,
        transitions,
    };
    Automaton::from_raw(&raw).map_err(|v| ParseError::violations("automaton", &v))
}
