//! Deterministic finite-state automata with a partial transition function.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::event::Event;

/// Index of a state inside one [`Automaton`].
pub type StateId = usize;

/// A set of states of one automaton, in index order.
pub type StateSet = BTreeSet<StateId>;

/// An unvalidated automaton description, as read from a file or assembled by
/// hand. Convert it with [`Automaton::from_raw`], which runs [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub states: Vec<String>,
    pub alphabet: Vec<Event>,
    pub initial: String,
    pub marked: Vec<String>,
    pub transitions: Vec<(String, Event, String)>,
}

/// One broken automaton invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateState(String),
    InitialNotInStates(String),
    MarkedNotInStates(String),
    EndpointNotInStates { source: String, event: Event, target: String },
    LabelNotInAlphabet { source: String, event: Event },
    Nondeterministic { source: String, event: Event },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            Violation::InitialNotInStates(s) => write!(f, "initial state `{s}` not in states"),
            Violation::MarkedNotInStates(s) => write!(f, "marked state `{s}` not in states"),
            Violation::EndpointNotInStates { source, event, target } => write!(
                f,
                "endpoint not in states: `{source}` -{event}-> `{target}`"
            ),
            Violation::LabelNotInAlphabet { source, event } => {
                write!(f, "label `{event}` at `{source}` not in alphabet")
            }
            Violation::Nondeterministic { source, event } => {
                write!(f, "nondeterministic: `{source}` has several `{event}` transitions")
            }
        }
    }
}

/// Checks every automaton invariant of `raw`; returns all violations found.
pub fn validate(raw: &RawAutomaton) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for s in &raw.states {
        if seen.insert(s.as_str(), ()).is_some() {
            out.push(Violation::DuplicateState(s.clone()));
        }
    }
    if !seen.contains_key(raw.initial.as_str()) {
        out.push(Violation::InitialNotInStates(raw.initial.clone()));
    }
    for m in &raw.marked {
        if !seen.contains_key(m.as_str()) {
            out.push(Violation::MarkedNotInStates(m.clone()));
        }
    }
    let alphabet: BTreeSet<&Event> = raw.alphabet.iter().collect();
    let mut targets: HashMap<(&str, &Event), &str> = HashMap::new();
    for (src, ev, dst) in &raw.transitions {
        if !seen.contains_key(src.as_str()) || !seen.contains_key(dst.as_str()) {
            out.push(Violation::EndpointNotInStates {
                source: src.clone(),
                event: ev.clone(),
                target: dst.clone(),
            });
        }
        if !alphabet.contains(ev) {
            out.push(Violation::LabelNotInAlphabet { source: src.clone(), event: ev.clone() });
        }
        match targets.get(&(src.as_str(), ev)) {
            Some(prev) if *prev != dst.as_str() => out.push(Violation::Nondeterministic {
                source: src.clone(),
                event: ev.clone(),
            }),
            _ => {
                targets.insert((src.as_str(), ev), dst.as_str());
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// A deterministic automaton `(Q, Σ, ξ, q0, Qm)`.
///
/// States and events are addressed by dense indices. The alphabet is kept in
/// canonical event order and every state's outgoing transitions are sorted by
/// event index, so two automata built from the same description are equal
/// value-for-value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    alphabet: Vec<Event>,
    initial: StateId,
    marked: Vec<bool>,
    delta: Vec<Vec<(u32, u32)>>,
}

impl Automaton {
    /// Validates `raw` and converts it. Duplicate identical transitions are
    /// merged.
    pub fn from_raw(raw: &RawAutomaton) -> Result<Self, Vec<Violation>> {
        validate(raw)?;
        let mut b = AutomatonBuilder::new(raw.alphabet.iter().cloned());
        for s in &raw.states {
            b.add_state(s);
        }
        for m in &raw.marked {
            let id = b.state_id(m).expect("validated");
            b.set_marked(id, true);
        }
        for (src, ev, dst) in &raw.transitions {
            let (s, d) = (b.state_id(src).unwrap(), b.state_id(dst).unwrap());
            b.add_transition(s, ev, d);
        }
        let init = b.state_id(&raw.initial).unwrap();
        Ok(b.build(init))
    }

    /// Assembles an automaton from parts that are already consistent:
    /// distinct names, sorted alphabet and rows sorted by event index.
    pub(crate) fn from_parts(
        states: Vec<String>,
        alphabet: Vec<Event>,
        initial: StateId,
        marked: Vec<bool>,
        delta: Vec<Vec<(u32, u32)>>,
    ) -> Self {
        debug_assert!(alphabet.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(delta.iter().all(|row| row.windows(2).all(|w| w[0].0 < w[1].0)));
        Automaton { states, alphabet, initial, marked, delta }
    }

    pub fn to_raw(&self) -> RawAutomaton {
        RawAutomaton {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial: self.states[self.initial].clone(),
            marked: self.marked_states().map(|q| self.states[q].clone()).collect(),
            transitions: self
                .transitions()
                .map(|(s, e, d)| (self.states[s].clone(), e.clone(), self.states[d].clone()))
                .collect(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    /// Linear lookup of a state by name.
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[Event] {
        &self.alphabet
    }

    pub fn event(&self, idx: usize) -> &Event {
        &self.alphabet[idx]
    }

    pub fn event_index(&self, ev: &Event) -> Option<usize> {
        self.alphabet.binary_search(ev).ok()
    }

    pub fn contains_event(&self, ev: &Event) -> bool {
        self.event_index(ev).is_some()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.marked.iter().enumerate().filter(|(_, m)| **m).map(|(q, _)| q)
    }

    /// `ξ(q, σ)` by event index.
    pub fn step_idx(&self, q: StateId, ev: usize) -> Option<StateId> {
        let row = &self.delta[q];
        row.binary_search_by_key(&(ev as u32), |(e, _)| *e)
            .ok()
            .map(|i| row[i].1 as StateId)
    }

    /// `ξ(q, σ)`; `None` when undefined or when `σ` is not in the alphabet.
    pub fn step(&self, q: StateId, ev: &Event) -> Option<StateId> {
        self.event_index(ev).and_then(|i| self.step_idx(q, i))
    }

    /// Extended transition function over a word.
    pub fn run<'a, I>(&self, from: StateId, word: I) -> Option<StateId>
    where
        I: IntoIterator<Item = &'a Event>,
    {
        word.into_iter().try_fold(from, |q, ev| self.step(q, ev))
    }

    /// Outgoing transitions of `q` as `(event index, target)`, in event order.
    pub fn out_idx(&self, q: StateId) -> impl Iterator<Item = (usize, StateId)> + '_ {
        self.delta[q].iter().map(|&(e, d)| (e as usize, d as StateId))
    }

    /// Outgoing transitions of `q`, in event order.
    pub fn out(&self, q: StateId) -> impl Iterator<Item = (&Event, StateId)> + '_ {
        self.out_idx(q).map(|(e, d)| (&self.alphabet[e], d))
    }

    /// `En(q)`: events defined at `q`.
    pub fn enabled(&self, q: StateId) -> impl Iterator<Item = &Event> + '_ {
        self.out(q).map(|(e, _)| e)
    }

    /// All transitions in (source, event) order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Event, StateId)> + '_ {
        self.states().flat_map(move |q| self.out(q).map(move |(e, d)| (q, e, d)))
    }

    /// Predecessor lists: for every state, the `(source, event index)` pairs
    /// leading into it.
    pub fn predecessors(&self) -> Vec<Vec<(StateId, usize)>> {
        let mut pred = vec![Vec::new(); self.num_states()];
        for q in self.states() {
            for (e, d) in self.out_idx(q) {
                pred[d].push((q, e));
            }
        }
        pred
    }

    /// Boolean mask over the alphabet selecting the members of `set`.
    pub fn event_mask(&self, set: &BTreeSet<Event>) -> Vec<bool> {
        self.alphabet.iter().map(|e| set.contains(e)).collect()
    }
}

/// Incremental constructor for [`Automaton`] used by the component builders
/// and the algorithms.
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    alphabet: Vec<Event>,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    marked: Vec<bool>,
    delta: Vec<Vec<(u32, u32)>>,
}

impl AutomatonBuilder {
    pub fn new<I: IntoIterator<Item = Event>>(alphabet: I) -> Self {
        let mut alphabet: Vec<Event> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        AutomatonBuilder {
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            marked: Vec::new(),
            delta: Vec::new(),
        }
    }

    /// Adds a state or returns the id of the existing one with that name.
    pub fn add_state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.marked.push(false);
        self.delta.push(Vec::new());
        id
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn set_marked(&mut self, q: StateId, marked: bool) {
        self.marked[q] = marked;
    }

    pub fn event_index(&self, ev: &Event) -> Option<usize> {
        self.alphabet.binary_search(ev).ok()
    }

    /// Adds `src -ev-> dst`.
    ///
    /// Panics if `ev` is outside the alphabet or if a different target is
    /// already defined; builders only ever construct deterministic automata.
    pub fn add_transition(&mut self, src: StateId, ev: &Event, dst: StateId) {
        let e = self
            .event_index(ev)
            .unwrap_or_else(|| panic!("event `{ev}` not in alphabet"));
        self.add_transition_idx(src, e, dst);
    }

    pub fn add_transition_idx(&mut self, src: StateId, e: usize, dst: StateId) {
        let row = &mut self.delta[src];
        match row.binary_search_by_key(&(e as u32), |(x, _)| *x) {
            Ok(i) => assert_eq!(
                row[i].1 as usize, dst,
                "nondeterministic transition on `{}` at `{}`",
                self.alphabet[e], self.states[src]
            ),
            Err(i) => row.insert(i, (e as u32, dst as u32)),
        }
    }

    pub fn build(self, initial: StateId) -> Automaton {
        assert!(initial < self.states.len(), "initial state out of range");
        Automaton {
            states: self.states,
            alphabet: self.alphabet,
            initial,
            marked: self.marked,
            delta: self.delta,
        }
    }
}
