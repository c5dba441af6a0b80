//! Closed-loop assembly and the four closed-loop checks.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::components::{slot, ComponentSet};
use crate::event::Event;
use crate::instance::ProblemInstance;
use crate::observer::observer;
use crate::product::{product_all, Product};
use crate::reach::{coreachable_mask, shortest_path_to};

/// Slot of the edit function in the closed loop.
pub const EDIT_SLOT: usize = 5;
/// Slot of the supervisor in the closed loop.
pub const SUPERVISOR_SLOT: usize = 6;

/// `B = G || CE || EC || SC || I || E || S`.
pub fn assemble_closed_loop(cs: &ComponentSet, e: &Automaton, s: &Automaton) -> Product {
    let mut parts = cs.parts().to_vec();
    parts.push(e);
    parts.push(s);
    product_all(&parts)
}

/// Outcome of one check. A failed check carries the shortest event sequence
/// from the initial state of `B` to a violating state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Vec<Event>>,
}

impl Check {
    fn from_search(found: Option<(Vec<Event>, StateId)>) -> Self {
        match found {
            Some((w, _)) => Check { holds: false, witness: Some(w) },
            None => Check { holds: true, witness: None },
        }
    }
}

fn intruder_at(b: &Product, target: Option<StateId>) -> impl Fn(StateId) -> bool + '_ {
    move |q| Some(b.tuples[q][slot::INTRUDER]) == target
}

/// The intruder never reaches `unsafe`.
pub fn check_opacity(b: &Product, cs: &ComponentSet) -> Check {
    Check::from_search(shortest_path_to(&b.automaton, intruder_at(b, Some(cs.intruder.unsafe_state))))
}

/// The same property read off the transitions: `decode` never fires.
pub fn decode_never_fires(b: &Product) -> bool {
    let a = &b.automaton;
    match a.event_index(&Event::Decode) {
        None => true,
        Some(d) => a.states().all(|q| a.step_idx(q, d).is_none()),
    }
}

/// The intruder's estimate never becomes empty.
pub fn check_covertness(b: &Product, cs: &ComponentSet) -> Check {
    match cs.intruder.empty_state {
        None => Check { holds: true, witness: None },
        Some(_) => Check::from_search(shortest_path_to(&b.automaton, intruder_at(b, cs.intruder.empty_state))),
    }
}

/// No forbidden plant state is reachable.
pub fn check_avoid(b: &Product, cs: &ComponentSet) -> Check {
    Check::from_search(shortest_path_to(&b.automaton, |q| cs.avoid.contains(&b.tuples[q][slot::PLANT])))
}

/// Every reachable state of `B` can reach a marker state.
pub fn check_nonblocking(b: &Product) -> Check {
    let a = &b.automaton;
    let target: Vec<bool> = a.states().map(|q| a.is_marked(q)).collect();
    let co = coreachable_mask(a, &target);
    Check::from_search(shortest_path_to(a, |q| !co[q]))
}

/// `(avoid unreachable, nonblocking)`.
pub fn check_avoid_and_nonblocking(b: &Product, cs: &ComponentSet) -> (Check, Check) {
    (check_avoid(b, cs), check_nonblocking(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub opaque: Check,
    pub covert: Check,
    pub nonblocking: Check,
    pub avoid_unreachable: Check,
    pub closed_loop_states: usize,
}

impl VerificationReport {
    pub fn all_hold(&self) -> bool {
        self.opaque.holds && self.covert.holds && self.nonblocking.holds && self.avoid_unreachable.holds
    }

    /// `(name, check)` in report order.
    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [
            ("opaque", &self.opaque),
            ("covert", &self.covert),
            ("nonblocking", &self.nonblocking),
            ("avoid_unreachable", &self.avoid_unreachable),
        ]
    }
}

/// Runs all four checks on an assembled closed loop.
pub fn verify_closed_loop(b: &Product, cs: &ComponentSet) -> VerificationReport {
    let (avoid, nonblocking) = check_avoid_and_nonblocking(b, cs);
    VerificationReport {
        opaque: check_opacity(b, cs),
        covert: check_covertness(b, cs),
        nonblocking,
        avoid_unreachable: avoid,
        closed_loop_states: b.tuples.len(),
    }
}

/// Assembles `B` for `e` and `s` and runs all four checks.
pub fn verify(cs: &ComponentSet, e: &Automaton, s: &Automaton) -> VerificationReport {
    verify_closed_loop(&assemble_closed_loop(cs, e, s), cs)
}

/// Current-state opacity of the unsupervised plant: no reachable estimate
/// of the intruder is a nonempty set of secret states.
pub fn check_cso(inst: &ProblemInstance) -> bool {
    let visible: BTreeSet<Event> = inst
        .spec
        .intruder_observable
        .iter()
        .map(|e| Event::Plant(e.clone()))
        .collect();
    let obs = observer(&inst.plant, &visible);
    obs.beliefs
        .iter()
        .all(|b| b.is_empty() || !b.is_subset_of(&inst.secret))
}

/// Searches `b` for a run whose projection onto `Σ` is `plant_word` and whose
/// projection onto `view` is `view_word`. Returns the shortest such run.
pub fn find_run(
    b: &Automaton,
    plant_word: &[Event],
    view: &BTreeSet<Event>,
    view_word: &[Event],
) -> Option<Vec<Event>> {
    type Node = (StateId, usize, usize);
    let start: Node = (b.initial(), 0, 0);
    let mut parent: HashMap<Node, Option<(Node, usize)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(node @ (q, i, j)) = queue.pop_front() {
        if i == plant_word.len() && j == view_word.len() {
            let mut word = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, e))) = parent.get(&cur) {
                word.push(b.event(*e).clone());
                cur = *prev;
            }
            word.reverse();
            return Some(word);
        }
        for (e, d) in b.out_idx(q) {
            let ev = b.event(e);
            let (mut ni, mut nj) = (i, j);
            if ev.is_plant() {
                if plant_word.get(i) != Some(ev) {
                    continue;
                }
                ni += 1;
            }
            if view.contains(ev) {
                if view_word.get(j) != Some(ev) {
                    continue;
                }
                nj += 1;
            }
            let next = (d, ni, nj);
            if !parent.contains_key(&next) {
                parent.insert(next, Some((node, e)));
                queue.push_back(next);
            }
        }
    }
    None
}
