use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ParseError;
use crate::automaton::{Automaton, RawAutomaton};
use crate::event::{check_plant_name, Event};
use crate::instance::ProblemInstance;
use crate::spec::AlphabetSpec;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    alphabet: AlphabetSection,
    edit: EditSection,
    intruder: IntruderSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    commands: Option<CommandsSection>,
    plant: PlantSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    requirement: Option<AutomatonSection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphabetSection {
    events: Vec<String>,
    controllable: Vec<String>,
    observable: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EditSection {
    observable: Vec<String>,
    editable: Vec<String>,
    bound: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntruderSection {
    observable: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommandsSection {
    sets: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantSection {
    states: Vec<String>,
    initial: String,
    marked: Vec<String>,
    #[serde(default)]
    secret: Vec<String>,
    #[serde(default)]
    avoid: Vec<String>,
    transitions: Vec<[String; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonSection {
    /// Events the requirement constrains; defaults to those on its transitions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    events: Option<Vec<String>>,
    states: Vec<String>,
    initial: String,
    marked: Vec<String>,
    transitions: Vec<[String; 3]>,
}

fn names(path: &str, list: &[String]) -> Result<BTreeSet<String>, ParseError> {
    let mut out = BTreeSet::new();
    for (i, n) in list.iter().enumerate() {
        check_plant_name(n).map_err(|e| ParseError::invalid(format!("{path}[{i}]"), e))?;
        out.insert(n.clone());
    }
    Ok(out)
}

fn automaton(
    path: &str,
    alphabet: &BTreeSet<String>,
    states: &[String],
    initial: &str,
    marked: &[String],
    transitions: &[[String; 3]],
) -> Result<Automaton, ParseError> {
    let mut edges = Vec::with_capacity(transitions.len());
    for (i, [src, ev, dst]) in transitions.iter().enumerate() {
        let at = format!("{path}.transitions[{i}]");
        check_plant_name(ev).map_err(|e| ParseError::invalid(&at, e))?;
        if !alphabet.contains(ev) {
            return Err(ParseError::invalid(at, format!("`{ev}` is not a declared event")));
        }
        edges.push((src.clone(), Event::plant(ev.as_str()), dst.clone()));
    }
    let raw = RawAutomaton {
        states: states.to_vec(),
        alphabet: alphabet.iter().map(|e| Event::plant(e.as_str())).collect(),
        initial: initial.to_string(),
        marked: marked.to_vec(),
        transitions: edges,
    };
    Automaton::from_raw(&raw).map_err(|v| ParseError::violations(path, &v))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    let doc: InstanceDoc = toml::from_str(text)?;
    let events = names("alphabet.events", &doc.alphabet.events)?;
    let commands = match &doc.commands {
        None => None,
        Some(c) => Some(
            c.sets
                .iter()
                .enumerate()
                .map(|(i, s)| names(&format!("commands.sets[{i}]"), s))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let spec = AlphabetSpec {
        controllable: names("alphabet.controllable", &doc.alphabet.controllable)?,
        observable: names("alphabet.observable", &doc.alphabet.observable)?,
        edit_observable: names("edit.observable", &doc.edit.observable)?,
        editable: names("edit.editable", &doc.edit.editable)?,
        intruder_observable: names("intruder.observable", &doc.intruder.observable)?,
        bound: doc.edit.bound,
        commands,
        events,
    };
    spec.validate()?;
    let p = &doc.plant;
    let plant = automaton("plant", &spec.events, &p.states, &p.initial, &p.marked, &p.transitions)?;
    let secret = ProblemInstance::plant_states(&plant, "secret state", p.secret.iter().map(String::as_str))?;
    let avoid = ProblemInstance::plant_states(&plant, "avoid state", p.avoid.iter().map(String::as_str))?;
    let requirement = match &doc.requirement {
        None => None,
        Some(r) => {
            let used = match &r.events {
                Some(list) => names("requirement.events", list)?,
                None => r.transitions.iter().map(|t| t[1].clone()).collect(),
            };
            if let Some(e) = used.iter().find(|e| !spec.events.contains(*e)) {
                return Err(ParseError::invalid("requirement", format!("`{e}` is not a declared event")));
            }
            Some(automaton("requirement", &used, &r.states, &r.initial, &r.marked, &r.transitions)?)
        }
    };
    Ok(ProblemInstance::new(plant, spec, secret, avoid, requirement)?)
}

fn list(set: &BTreeSet<String>) -> Vec<String> {
    set.iter().cloned().collect()
}

fn triples(a: &Automaton) -> Vec<[String; 3]> {
    a.transitions()
        .map(|(s, e, d)| [a.state_name(s).to_string(), e.to_string(), a.state_name(d).to_string()])
        .collect()
}

/// Writes an instance back out in the same format.
pub fn emit_instance(inst: &ProblemInstance) -> String {
    let spec = &inst.spec;
    let g = &inst.plant;
    let state_list = |set: &crate::automaton::StateSet| -> Vec<String> {
        set.iter().map(|&q| g.state_name(q).to_string()).collect()
    };
    let doc = InstanceDoc {
        alphabet: AlphabetSection {
            events: list(&spec.events),
            controllable: list(&spec.controllable),
            observable: list(&spec.observable),
        },
        edit: EditSection {
            observable: list(&spec.edit_observable),
            editable: list(&spec.editable),
            bound: spec.bound,
        },
        intruder: IntruderSection { observable: list(&spec.intruder_observable) },
        commands: spec.commands.as_ref().map(|c| CommandsSection { sets: c.iter().map(list).collect() }),
        plant: PlantSection {
            states: g.state_names().to_vec(),
            initial: g.state_name(g.initial()).to_string(),
            marked: g.marked_states().map(|q| g.state_name(q).to_string()).collect(),
            secret: state_list(&inst.secret),
            avoid: state_list(&inst.avoid),
            transitions: triples(g),
        },
        requirement: inst.requirement.as_ref().map(|r| AutomatonSection {
            events: Some(r.alphabet().iter().map(ToString::to_string).collect()),
            states: r.state_names().to_vec(),
            initial: r.state_name(r.initial()).to_string(),
            marked: r.marked_states().map(|q| r.state_name(q).to_string()).collect(),
            transitions: triples(r),
        }),
    };
    toml::to_string(&doc).expect("instance serializes")
}
