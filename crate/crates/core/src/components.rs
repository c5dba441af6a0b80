//! The component automata around the plant: edit constraints `EC`,
//! supervisor constraints `SC`, command execution `CE`, the intruder `I`,
//! and the command set `Γ`.

use std::collections::BTreeSet;

use crate::automaton::{Automaton, AutomatonBuilder, StateId, StateSet};
use crate::error::ModelError;
use crate::event::Event;
use crate::instance::{compile_requirement, ProblemInstance};
use crate::observer::{observer, BeliefState};
use crate::reach::blocking_states;
use crate::spec::AlphabetSpec;

/// Default cap on `|Σc|` when `Γ` is enumerated.
pub const DEFAULT_COMMAND_LIMIT: usize = 12;

pub const EC_INIT: &str = "ec_init";
pub const SC_INIT: &str = "sc_init";
pub const SC_ISSUE: &str = "issue";
pub const CE_INIT: &str = "ce_init";
pub const UNSAFE: &str = "unsafe";

/// Switches that change how components are built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    /// Upper bound on `|Σc|` for the default `Γ` enumeration.
    pub command_limit: usize,
    /// Route observed non-editable events to `q_0` instead of `q_1`, so that
    /// letting them pass does not count against the bound.
    pub pass_through_to_q0: bool,
    /// Forbid deleting an editable observation: no `stop` at `q_0`.
    pub no_delete: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            command_limit: DEFAULT_COMMAND_LIMIT,
            pass_through_to_q0: false,
            no_delete: false,
        }
    }
}

/// `Γ`: the explicit command list if given, otherwise every nonempty subset
/// of `Σc`, in canonical event order.
pub fn build_gamma(spec: &AlphabetSpec, command_limit: usize) -> Result<Vec<Event>, ModelError> {
    if let Some(cmds) = &spec.commands {
        let mut out: Vec<Event> = cmds.iter().map(|c| Event::Command(c.clone())).collect();
        out.sort();
        return Ok(out);
    }
    let ctrl: Vec<&String> = spec.controllable.iter().collect();
    if ctrl.is_empty() {
        return Err(ModelError::EmptyControllableSet);
    }
    if ctrl.len() > command_limit {
        return Err(ModelError::TooManyCommands(ctrl.len(), command_limit));
    }
    let mut out: Vec<Event> = (1u64..(1u64 << ctrl.len()))
        .map(|mask| {
            Event::Command(
                ctrl.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| (*e).clone())
                    .collect(),
            )
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Name of `q_n` in `EC`.
pub fn ec_state(n: usize) -> String {
    format!("q{n}")
}

/// Edit constraints `EC` with states `ec_init, q0, ..., qU`.
pub fn build_edit_constraints(
    spec: &AlphabetSpec,
    gamma: &[Event],
    opts: &BuildOptions,
) -> Result<Automaton, ModelError> {
    if opts.no_delete && opts.pass_through_to_q0 {
        return Err(ModelError::IncompatibleEditOptions);
    }
    let u = spec.bound;
    let mut b = AutomatonBuilder::new(spec.closed_loop_alphabet(gamma));
    let init = b.add_state(EC_INIT);
    b.set_marked(init, true);
    let q: Vec<StateId> = (0..=u).map(|n| b.add_state(&ec_state(n))).collect();
    let pass_target = if opts.pass_through_to_q0 { q[0] } else { q[1.min(u)] };

    // 1: unobserved activity leaves EC where it is
    for e in spec.events.iter().filter(|e| !spec.edit_observable.contains(*e)) {
        b.add_transition(init, &Event::Plant(e.clone()), init);
    }
    for g in gamma {
        b.add_transition(init, g, init);
    }
    b.add_transition(init, &Event::Decode, init);
    // 2, 3: an observed event opens an edit round
    for e in &spec.edit_observable {
        let target = if spec.editable.contains(e) { q[0] } else { pass_target };
        b.add_transition(init, &Event::Plant(e.clone()), target);
    }
    // 4: send one more editable event
    for n in 0..u {
        for e in &spec.editable {
            b.add_transition(q[n], &Event::Edited(e.clone()), q[n + 1]);
        }
    }
    // 5: end the round
    for (n, &qn) in q.iter().enumerate() {
        if n == 0 && opts.no_delete {
            continue;
        }
        b.add_transition(qn, &Event::Stop, init);
    }
    Ok(b.build(init))
}

/// Supervisor constraints `SC` with states `sc_init` and `issue`, both marked.
pub fn build_supervisor_constraints(spec: &AlphabetSpec, gamma: &[Event]) -> Automaton {
    let mut b = AutomatonBuilder::new(spec.closed_loop_alphabet(gamma));
    let init = b.add_state(SC_INIT);
    let issue = b.add_state(SC_ISSUE);
    b.set_marked(init, true);
    b.set_marked(issue, true);
    let sensed = spec.supervisor_sensed();
    for ev in spec.closed_loop_alphabet(gamma) {
        if ev.is_command() {
            b.add_transition(init, &ev, issue);
            continue;
        }
        b.add_transition(init, &ev, init);
        if sensed.contains(&ev) {
            b.add_transition(issue, &ev, init);
        } else {
            b.add_transition(issue, &ev, issue);
        }
    }
    b.build(init)
}

/// Name of `q^γ` in `CE`.
pub fn ce_state(gamma: &Event) -> String {
    format!("q[{gamma}]")
}

/// Command execution `CE` with states `ce_init` and one `q[γ]` per command.
pub fn build_command_execution(spec: &AlphabetSpec, gamma: &[Event]) -> Automaton {
    let mut alphabet = spec.sigma();
    alphabet.extend(gamma.iter().cloned());
    let mut b = AutomatonBuilder::new(alphabet);
    let init = b.add_state(CE_INIT);
    b.set_marked(init, true);
    let uncontrollable = spec.uncontrollable();
    for g in gamma {
        let qg = b.add_state(&ce_state(g));
        b.add_transition(init, g, qg);
        let enables = g.enables().expect("command event");
        for e in enables.union(&uncontrollable) {
            let target = if spec.observable.contains(e) { init } else { qg };
            b.add_transition(qg, &Event::Plant(e.clone()), target);
        }
    }
    for e in &uncontrollable {
        b.add_transition(init, &Event::Plant(e.clone()), init);
    }
    b.build(init)
}

/// The intruder model together with its two absorbing states.
#[derive(Debug, Clone)]
pub struct Intruder {
    pub automaton: Automaton,
    /// Belief of every state over the plant; `None` for `unsafe`.
    pub beliefs: Vec<Option<BeliefState>>,
    pub unsafe_state: StateId,
    /// The empty-belief state, if reachable.
    pub empty_state: Option<StateId>,
}

impl Intruder {
    /// States from which the edit-function/supervisor pair has failed:
    /// `unsafe` and the empty belief.
    pub fn exposed_states(&self) -> StateSet {
        let mut s = StateSet::from([self.unsafe_state]);
        s.extend(self.empty_state);
        s
    }
}

/// Intruder `I`: the reachable current-state estimator of the plant under
/// `Σ_{o,I}`, with editable events relabelled to their `#` copies, a
/// `decode` transition from every nonempty all-secret belief to `unsafe`,
/// and self-loops at the two absorbing states.
pub fn build_intruder(inst: &ProblemInstance) -> Intruder {
    let spec = &inst.spec;
    let visible: BTreeSet<Event> = spec
        .intruder_observable
        .iter()
        .map(|e| Event::Plant(e.clone()))
        .collect();
    let obs = observer(&inst.plant, &visible);
    let relabel = |ev: &Event| match ev {
        Event::Plant(n) if spec.editable.contains(n) => Event::Edited(n.clone()),
        other => other.clone(),
    };

    let mut alphabet: BTreeSet<Event> =
        spec.sigma().iter().filter(|e| !matches!(e, Event::Plant(n) if spec.editable.contains(n))).cloned().collect();
    alphabet.extend(spec.edited_copies());
    alphabet.insert(Event::Decode);
    let loops: Vec<Event> = alphabet.iter().filter(|e| **e != Event::Decode).cloned().collect();

    let mut b = AutomatonBuilder::new(alphabet);
    for q in obs.automaton.states() {
        let id = b.add_state(obs.automaton.state_name(q));
        b.set_marked(id, !obs.beliefs[q].is_empty());
    }
    let unsafe_state = b.add_state(UNSAFE);
    for (src, ev, dst) in obs.automaton.transitions() {
        b.add_transition(src, &relabel(ev), dst);
    }
    let empty_state = obs.empty_state();
    for (q, belief) in obs.beliefs.iter().enumerate() {
        if !belief.is_empty() && belief.is_subset_of(&inst.secret) {
            b.add_transition(q, &Event::Decode, unsafe_state);
        }
    }
    for absorbing in empty_state.into_iter().chain([unsafe_state]) {
        for ev in &loops {
            b.add_transition(absorbing, ev, absorbing);
        }
    }
    let mut beliefs: Vec<Option<BeliefState>> = obs.beliefs.into_iter().map(Some).collect();
    beliefs.push(None);
    Intruder {
        automaton: b.build(obs.automaton.initial()),
        beliefs,
        unsafe_state,
        empty_state,
    }
}

/// Position of each component in the products built by the procedures.
pub mod slot {
    pub const PLANT: usize = 0;
    pub const CE: usize = 1;
    pub const EC: usize = 2;
    pub const SC: usize = 3;
    pub const INTRUDER: usize = 4;
}

/// Everything the procedures and the verifier compose with: the refined
/// plant plus the four fixed components.
#[derive(Debug, Clone)]
pub struct ComponentSet {
    pub spec: AlphabetSpec,
    pub options: BuildOptions,
    pub gamma: Vec<Event>,
    /// The plant with the requirement folded in.
    pub plant: Automaton,
    /// Original plant state behind each refined plant state.
    pub plant_origin: Vec<StateId>,
    /// Forbidden refined plant states.
    pub avoid: StateSet,
    /// `Q_block` of the refined plant.
    pub blocking: StateSet,
    pub ce: Automaton,
    pub ec: Automaton,
    pub sc: Automaton,
    pub intruder: Intruder,
}

impl ComponentSet {
    pub fn build(inst: &ProblemInstance, options: &BuildOptions) -> Result<Self, ModelError> {
        inst.spec.validate()?;
        let gamma = build_gamma(&inst.spec, options.command_limit)?;
        let compiled = compile_requirement(inst);
        Ok(ComponentSet {
            spec: inst.spec.clone(),
            options: options.clone(),
            blocking: blocking_states(&compiled.plant),
            ce: build_command_execution(&inst.spec, &gamma),
            ec: build_edit_constraints(&inst.spec, &gamma, options)?,
            sc: build_supervisor_constraints(&inst.spec, &gamma),
            intruder: build_intruder(inst),
            plant: compiled.plant,
            plant_origin: compiled.origin,
            avoid: compiled.avoid,
            gamma,
        })
    }

    /// Components in slot order.
    pub fn parts(&self) -> [&Automaton; 5] {
        [&self.plant, &self.ce, &self.ec, &self.sc, &self.intruder.automaton]
    }

    /// `Σ ∪ Σ_{s,E}^# ∪ Γ ∪ {stop, decode}`
    pub fn alphabet(&self) -> BTreeSet<Event> {
        self.spec.closed_loop_alphabet(&self.gamma)
    }

    /// The command whose execution state `q` is in `CE`, if any.
    pub fn ce_command(&self, q: StateId) -> Option<&Event> {
        if q == self.ce.initial() {
            None
        } else {
            // states are added in Γ order after ce_init
            self.gamma.get(q - 1)
        }
    }
}
