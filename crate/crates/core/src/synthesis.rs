//! Local supervisor synthesis under partial observation.
//!
//! The synthesizer works on the belief automaton of the plant over the
//! observable events. Beliefs that meet the uncontrollable closure of the bad
//! states are illegal, illegality spreads backwards over uncontrollable
//! observable transitions, and controllable transitions into illegal beliefs
//! are disabled. The surviving beliefs become the supervisor.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, AutomatonBuilder, StateId, StateSet};
use crate::event::Event;
use crate::observer::{image, BeliefState, BeliefTable, Closer};
use crate::spec::AlphabetSpec;

/// What a local agent may disable and what it sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlConstraint {
    pub controllable: BTreeSet<Event>,
    pub observable: BTreeSet<Event>,
}

impl ControlConstraint {
    /// `(Γ, (Σo − Σ_{s,E}) ∪ Σ_{s,E}^# ∪ Γ)`
    pub fn supervisor(spec: &AlphabetSpec, gamma: &[Event]) -> Self {
        let controllable: BTreeSet<Event> = gamma.iter().cloned().collect();
        let mut observable = spec.supervisor_sensed();
        observable.extend(controllable.iter().cloned());
        ControlConstraint { controllable, observable }
    }

    /// `(Σ_{s,E}^# ∪ {stop}, Σ_{o,E} ∪ Σ_{s,E}^# ∪ {stop})`
    pub fn edit(spec: &AlphabetSpec) -> Self {
        let mut controllable = spec.edited_copies();
        controllable.insert(Event::Stop);
        let mut observable: BTreeSet<Event> =
            spec.edit_observable.iter().map(|e| Event::Plant(e.clone())).collect();
        observable.extend(controllable.iter().cloned());
        ControlConstraint { controllable, observable }
    }

    pub fn is_well_formed(&self) -> bool {
        self.controllable.is_subset(&self.observable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisGoal {
    MarkerReachable,
    Nonblocking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    InitialBeliefForbidden,
    NoMarkerReachable,
    NonblockingFixpointEmpty,
}

impl fmt::Display for EmptyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmptyReason::InitialBeliefForbidden => "the initial belief is forbidden",
            EmptyReason::NoMarkerReachable => "no marker state is reachable under control",
            EmptyReason::NonblockingFixpointEmpty => {
                "removing blocking beliefs eliminated the initial belief"
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthesisOutcome {
    Supervisor(Automaton),
    Empty(EmptyReason),
}

impl SynthesisOutcome {
    pub fn supervisor(&self) -> Option<&Automaton> {
        match self {
            SynthesisOutcome::Supervisor(s) => Some(s),
            SynthesisOutcome::Empty(_) => None,
        }
    }

    pub fn into_supervisor(self) -> Result<Automaton, EmptyReason> {
        match self {
            SynthesisOutcome::Supervisor(s) => Ok(s),
            SynthesisOutcome::Empty(r) => Err(r),
        }
    }
}

/// Least superset of `bad` closed under predecessors over events outside
/// `constraint.controllable`.
pub fn uncontrollable_bad_closure(p: &Automaton, bad: &StateSet, constraint: &ControlConstraint) -> StateSet {
    let ctrl = p.event_mask(&constraint.controllable);
    let pred = p.predecessors();
    let mut in_f = vec![false; p.num_states()];
    let mut stack: Vec<StateId> = bad.iter().copied().collect();
    for &q in bad {
        in_f[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &(src, e) in &pred[q] {
            if !ctrl[e] && !in_f[src] {
                in_f[src] = true;
                stack.push(src);
            }
        }
    }
    (0..p.num_states()).filter(|&q| in_f[q]).collect()
}

/// The reachable belief automaton of `p` over the observable events. Empty
/// images are left out.
struct BeliefGraph {
    beliefs: Vec<BeliefState>,
    /// Alphabet indices of `p` that are observable, in canonical order.
    observed: Vec<usize>,
    /// `next[b][k]` follows `observed[k]` from belief `b`.
    next: Vec<Vec<Option<usize>>>,
}

impl BeliefGraph {
    fn build(p: &Automaton, observable: &[bool]) -> Self {
        let invisible: Vec<bool> = observable.iter().map(|o| !o).collect();
        let observed: Vec<usize> = (0..observable.len()).filter(|&e| observable[e]).collect();
        let mut table = BeliefTable::default();
        let mut next: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::new();
        let fresh = |bs: &BeliefState, next: &mut Vec<Vec<Option<usize>>>, queue: &mut VecDeque<usize>| {
            let _ = bs;
            next.push(vec![None; observed.len()]);
            queue.push_back(next.len() - 1);
            next.len() - 1
        };
        let mut closer = Closer::new(p, &invisible);
        table.intern(closer.close([p.initial()]), |bs| fresh(bs, &mut next, &mut queue));
        while let Some(b) = queue.pop_front() {
            for (k, &e) in observed.iter().enumerate() {
                let img = image(p, &table.beliefs[b], e);
                if img.is_empty() {
                    continue;
                }
                let target = closer.close(img);
                let d = table.intern(target, |bs| fresh(bs, &mut next, &mut queue));
                next[b][k] = Some(d);
            }
        }
        BeliefGraph { beliefs: table.beliefs, observed, next }
    }
}

/// Spreads illegality backwards over uncontrollable observable transitions.
fn propagate(graph: &BeliefGraph, uncontrollable: &[bool], illegal: &mut [bool]) {
    let n = graph.beliefs.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for b in 0..n {
        for (k, d) in graph.next[b].iter().enumerate() {
            if let Some(d) = *d {
                if uncontrollable[graph.observed[k]] {
                    pred[d].push(b);
                }
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&b| illegal[b]).collect();
    while let Some(b) = stack.pop() {
        for &src in &pred[b] {
            if !illegal[src] {
                illegal[src] = true;
                stack.push(src);
            }
        }
    }
}

/// Builds the full-alphabet supervisor from the legal part of `graph`.
fn lift(p: &Automaton, graph: &BeliefGraph, illegal: &[bool], constraint: &ControlConstraint) -> Automaton {
    let ctrl = p.event_mask(&constraint.controllable);
    let obs = p.event_mask(&constraint.observable);
    let mut slot = vec![usize::MAX; p.alphabet().len()];
    for (k, &e) in graph.observed.iter().enumerate() {
        slot[e] = k;
    }
    let mut b = AutomatonBuilder::new(p.alphabet().iter().cloned());
    let mut id_of = vec![usize::MAX; graph.beliefs.len()];
    let mut belief_of = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    id_of[0] = b.add_state("s0");
    belief_of.push(0);
    while let Some(bel) = queue.pop_front() {
        let src = id_of[bel];
        for e in 0..p.alphabet().len() {
            if !obs[e] {
                b.add_transition_idx(src, e, src);
                continue;
            }
            match graph.next[bel][slot[e]] {
                Some(d) if !illegal[d] => {
                    if id_of[d] == usize::MAX {
                        id_of[d] = b.add_state(&format!("s{}", belief_of.len()));
                        belief_of.push(d);
                        queue.push_back(d);
                    }
                    b.add_transition_idx(src, e, id_of[d]);
                }
                _ if !ctrl[e] => b.add_transition_idx(src, e, src),
                _ => {}
            }
        }
    }
    for q in 0..belief_of.len() {
        b.set_marked(q, true);
    }
    b.build(0)
}

/// `p` under the belief supervisor as pairs `(p-state, belief)`, reachable
/// part only. This is the product of `p` with the lifted supervisor.
struct ClosedLoop {
    pairs: Vec<(StateId, usize)>,
    succ: Vec<Vec<u32>>,
}

impl ClosedLoop {
    fn build(p: &Automaton, graph: &BeliefGraph, illegal: &[bool], observable: &[bool]) -> Self {
        let mut slot = vec![usize::MAX; p.alphabet().len()];
        for (k, &e) in graph.observed.iter().enumerate() {
            slot[e] = k;
        }
        let key = |q: StateId, b: usize| (q as u64) << 32 | b as u64;
        let mut index: HashMap<u64, u32> = HashMap::new();
        let mut pairs = vec![(p.initial(), 0)];
        let mut succ: Vec<Vec<u32>> = vec![Vec::new()];
        index.insert(key(p.initial(), 0), 0);
        let mut next = 0;
        while next < pairs.len() {
            let (q, b) = pairs[next];
            for (e, d) in p.out_idx(q) {
                let nb = if !observable[e] {
                    b
                } else {
                    // `q` is in belief `b`, so the image is nonempty and an
                    // uncontrollable move never leads into an illegal belief.
                    match graph.next[b][slot[e]] {
                        Some(nb) if !illegal[nb] => nb,
                        _ => continue,
                    }
                };
                let id = *index.entry(key(d, nb)).or_insert_with(|| {
                    pairs.push((d, nb));
                    succ.push(Vec::new());
                    (pairs.len() - 1) as u32
                });
                succ[next].push(id);
            }
            next += 1;
        }
        ClosedLoop { pairs, succ }
    }

    /// Pairs that cannot reach a pair whose plant state is marked.
    fn blocking(&self, p: &Automaton) -> Vec<usize> {
        let n = self.pairs.len();
        let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (src, ds) in self.succ.iter().enumerate() {
            for &d in ds {
                pred[d as usize].push(src as u32);
            }
        }
        let mut co: Vec<bool> = self.pairs.iter().map(|&(q, _)| p.is_marked(q)).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| co[i]).collect();
        while let Some(i) = stack.pop() {
            for &src in &pred[i] {
                if !co[src as usize] {
                    co[src as usize] = true;
                    stack.push(src as usize);
                }
            }
        }
        (0..n).filter(|&i| !co[i]).collect()
    }
}

/// Synthesizes a local supervisor for `p` that keeps the closed loop out of
/// `bad` and meets `goal`.
///
/// The returned automaton is over the alphabet of `p`, has every state
/// marked, and satisfies [`check_constraint_shape`] for `constraint`.
pub fn synthesize(p: &Automaton, bad: &StateSet, constraint: &ControlConstraint, goal: SynthesisGoal) -> SynthesisOutcome {
    debug_assert!(constraint.is_well_formed());
    let f = uncontrollable_bad_closure(p, bad, constraint);
    let observable = p.event_mask(&constraint.observable);
    let ctrl = p.event_mask(&constraint.controllable);
    let uncontrollable: Vec<bool> = ctrl.iter().map(|c| !c).collect();
    let graph = BeliefGraph::build(p, &observable);
    let mut illegal: Vec<bool> = graph
        .beliefs
        .iter()
        .map(|bs| bs.members().iter().any(|q| f.contains(q)))
        .collect();

    let mut cut_for_blocking = false;
    loop {
        propagate(&graph, &uncontrollable, &mut illegal);
        if illegal[0] {
            return SynthesisOutcome::Empty(if cut_for_blocking {
                EmptyReason::NonblockingFixpointEmpty
            } else {
                EmptyReason::InitialBeliefForbidden
            });
        }
        let closed = ClosedLoop::build(p, &graph, &illegal, &observable);
        match goal {
            SynthesisGoal::MarkerReachable => {
                if !closed.pairs.iter().any(|&(q, _)| p.is_marked(q)) {
                    return SynthesisOutcome::Empty(EmptyReason::NoMarkerReachable);
                }
                break;
            }
            SynthesisGoal::Nonblocking => {
                let mut changed = false;
                for i in closed.blocking(p) {
                    let bel = closed.pairs[i].1;
                    if !illegal[bel] {
                        illegal[bel] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
                cut_for_blocking = true;
            }
        }
    }
    SynthesisOutcome::Supervisor(lift(p, &graph, &illegal, constraint))
}

/// Shape violations of a local supervisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeViolation {
    /// An uncontrollable event is not defined at a state.
    Controllability { state: String, event: Event },
    /// An unobservable event moves a state elsewhere.
    Observability { state: String, event: Event },
}

impl fmt::Display for ShapeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeViolation::Controllability { state, event } => {
                write!(f, "controllability shape: `{event}` is not defined at {state}")
            }
            ShapeViolation::Observability { state, event } => {
                write!(f, "observability shape: unobservable `{event}` leaves {state}")
            }
        }
    }
}

/// Checks that `s` never disables an uncontrollable event and never moves on
/// an unobservable one.
pub fn check_constraint_shape(s: &Automaton, constraint: &ControlConstraint) -> Result<(), Vec<ShapeViolation>> {
    let mut out = Vec::new();
    for q in s.states() {
        for (e, ev) in s.alphabet().iter().enumerate() {
            let step = s.step_idx(q, e);
            if !constraint.controllable.contains(ev) && step.is_none() {
                out.push(ShapeViolation::Controllability {
                    state: s.state_name(q).to_string(),
                    event: ev.clone(),
                });
            }
            if !constraint.observable.contains(ev) && step.is_some_and(|d| d != q) {
                out.push(ShapeViolation::Observability {
                    state: s.state_name(q).to_string(),
                    event: ev.clone(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
