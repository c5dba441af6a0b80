//! Natural projection, unobservable reach and the subset-construction
//! observer.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, AutomatonBuilder, StateId};
use crate::event::Event;

/// A set of states of an underlying automaton, kept sorted so that equal sets
/// are equal values. The empty belief is legal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BeliefState(Vec<StateId>);

impl BeliefState {
    pub fn new<I: IntoIterator<Item = StateId>>(members: I) -> Self {
        let mut v: Vec<StateId> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        BeliefState(v)
    }

    pub fn empty() -> Self {
        BeliefState(Vec::new())
    }

    pub fn members(&self) -> &[StateId] {
        &self.0
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_subset_of(&self, set: &BTreeSet<StateId>) -> bool {
        self.0.iter().all(|q| set.contains(q))
    }

    /// `{n1,n2,...}` using the state names of `a`.
    pub fn label(&self, a: &Automaton) -> String {
        let names: Vec<&str> = self.0.iter().map(|&q| a.state_name(q)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Display for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `P(s)`: erases every event of `word` outside `visible`.
pub fn natural_projection(word: &[Event], visible: &BTreeSet<Event>) -> Vec<Event> {
    word.iter().filter(|e| visible.contains(e)).cloned().collect()
}

/// Closure of sets of states under invisible events, reusing its scratch
/// space between calls.
pub(crate) struct Closer<'a> {
    a: &'a Automaton,
    invisible: &'a [bool],
    stamp: Vec<u32>,
    round: u32,
    stack: Vec<StateId>,
}

impl<'a> Closer<'a> {
    pub fn new(a: &'a Automaton, invisible: &'a [bool]) -> Self {
        Closer { a, invisible, stamp: vec![0; a.num_states()], round: 0, stack: Vec::new() }
    }

    pub fn close(&mut self, seeds: impl IntoIterator<Item = StateId>) -> BeliefState {
        self.round += 1;
        let round = self.round;
        let mut out = Vec::new();
        for q in seeds {
            if self.stamp[q] != round {
                self.stamp[q] = round;
                self.stack.push(q);
                out.push(q);
            }
        }
        while let Some(q) = self.stack.pop() {
            for (e, d) in self.a.out_idx(q) {
                if self.invisible[e] && self.stamp[d] != round {
                    self.stamp[d] = round;
                    self.stack.push(d);
                    out.push(d);
                }
            }
        }
        BeliefState::new(out)
    }
}

/// Closure of `seeds` under the events with `invisible[e] == true`.
pub(crate) fn closure(a: &Automaton, seeds: impl IntoIterator<Item = StateId>, invisible: &[bool]) -> BeliefState {
    Closer::new(a, invisible).close(seeds)
}

/// `UR(q)`: states reachable from `q` by strings of events outside `visible`.
pub fn unobservable_reach(a: &Automaton, q: StateId, visible: &BTreeSet<Event>) -> BeliefState {
    let invisible: Vec<bool> = a.alphabet().iter().map(|e| !visible.contains(e)).collect();
    closure(a, [q], &invisible)
}

/// One-step image `ξ(B, σ)` by event index.
pub(crate) fn image(a: &Automaton, belief: &BeliefState, e: usize) -> Vec<StateId> {
    belief.members().iter().filter_map(|&q| a.step_idx(q, e)).collect()
}

/// Observer together with the belief behind each of its states.
#[derive(Debug, Clone)]
pub struct Observer {
    pub automaton: Automaton,
    pub beliefs: Vec<BeliefState>,
}

impl Observer {
    /// Observer state holding `belief`, if reachable.
    pub fn state_of(&self, belief: &BeliefState) -> Option<StateId> {
        self.beliefs.iter().position(|b| b == belief)
    }

    /// The empty belief's state, if it is reachable.
    pub fn empty_state(&self) -> Option<StateId> {
        self.state_of(&BeliefState::empty())
    }
}

/// The reachable part of the observer `P_Σ'(G)` for `visible = Σ'`.
///
/// The observer keeps the full alphabet of `a`. At every nonempty belief a
/// visible event leads to the unobservable reach of its one-step image (which
/// may be the empty belief), and an invisible event self-loops. The empty
/// belief has no outgoing transitions. States are labelled `{q1,q2,...}`
/// with the member names of `a`.
pub fn observer(a: &Automaton, visible: &BTreeSet<Event>) -> Observer {
    let invisible: Vec<bool> = a.alphabet().iter().map(|e| !visible.contains(e)).collect();
    let mut b = AutomatonBuilder::new(a.alphabet().iter().cloned());
    let mut table = BeliefTable::default();
    let mut queue = VecDeque::new();

    let mut closer = Closer::new(a, &invisible);
    let init = table.intern(closer.close([a.initial()]), |bs| {
        let id = b.add_state(&bs.label(a));
        queue.push_back(id);
        id
    });
    while let Some(q) = queue.pop_front() {
        let belief = table.beliefs[q].clone();
        if belief.is_empty() {
            continue;
        }
        for e in 0..a.alphabet().len() {
            if invisible[e] {
                b.add_transition_idx(q, e, q);
            } else {
                let target = closer.close(image(a, &belief, e));
                let d = table.intern(target, |bs| {
                    let id = b.add_state(&bs.label(a));
                    queue.push_back(id);
                    id
                });
                b.add_transition_idx(q, e, d);
            }
        }
    }
    // Marking is left empty; callers decide what the observer marks.
    Observer { automaton: b.build(init), beliefs: table.beliefs }
}

/// Dense numbering of beliefs in discovery order.
#[derive(Debug, Default)]
pub(crate) struct BeliefTable {
    pub beliefs: Vec<BeliefState>,
    index: HashMap<BeliefState, StateId>,
}

impl BeliefTable {
    /// Returns the id of `bs`, calling `on_new` (which must return the next
    /// dense id) the first time it is seen.
    pub fn intern(&mut self, bs: BeliefState, on_new: impl FnOnce(&BeliefState) -> StateId) -> StateId {
        if let Some(&id) = self.index.get(&bs) {
            return id;
        }
        let id = on_new(&bs);
        debug_assert_eq!(id, self.beliefs.len());
        self.index.insert(bs.clone(), id);
        self.beliefs.push(bs);
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::RawAutomaton;

    fn visible(names: &[&str]) -> BTreeSet<Event> {
        names.iter().map(|n| Event::plant(*n)).collect()
    }

    fn aut(n: usize, edges: &[(usize, &str, usize)]) -> Automaton {
        let mut names: Vec<&str> = edges.iter().map(|e| e.1).collect();
        names.sort();
        names.dedup();
        Automaton::from_raw(&RawAutomaton {
            states: (0..n).map(|i| i.to_string()).collect(),
            alphabet: names.iter().map(|n| Event::plant(*n)).collect(),
            initial: "0".into(),
            marked: vec![],
            transitions: edges
                .iter()
                .map(|(s, e, d)| (s.to_string(), Event::plant(*e), d.to_string()))
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn reach_without_invisible_moves_is_the_state_itself() {
        let a = aut(2, &[(0, "a", 1)]);
        assert_eq!(unobservable_reach(&a, 0, &visible(&["a"])), BeliefState::new([0]));
    }

    #[test]
    fn one_invisible_step_is_followed() {
        let a = aut(2, &[(0, "u", 1)]);
        assert_eq!(unobservable_reach(&a, 0, &visible(&[])), BeliefState::new([0, 1]));
    }

    #[test]
    fn hidden_prefix_then_visible_step() {
        let a = aut(3, &[(0, "u", 1), (1, "a", 2)]);
        let obs = observer(&a, &visible(&["a"]));
        assert_eq!(obs.beliefs[0], BeliefState::new([0, 1]));
        let q = obs.automaton.step(obs.automaton.initial(), &Event::plant("a")).unwrap();
        assert_eq!(obs.beliefs[q], BeliefState::new([2]));
        // u self-loops at every nonempty belief
        assert_eq!(obs.automaton.step(q, &Event::plant("u")), Some(q));
        // a is undefined at {2}: the empty belief, with no outgoing transitions
        let dead = obs.automaton.step(q, &Event::plant("a")).unwrap();
        assert!(obs.beliefs[dead].is_empty());
        assert_eq!(obs.automaton.out(dead).count(), 0);
        assert_eq!(obs.automaton.state_name(obs.automaton.initial()), "{0,1}");
    }

    #[test]
    fn full_observation_gives_singletons() {
        let a = aut(3, &[(0, "a", 1), (1, "b", 2), (2, "a", 0)]);
        let obs = observer(&a, &visible(&["a", "b"]));
        let nonempty: Vec<_> = obs.beliefs.iter().filter(|b| !b.is_empty()).collect();
        assert_eq!(nonempty.len(), 3);
        assert!(nonempty.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn projection_erases_invisible_events() {
        let w = [Event::plant("a"), Event::plant("u"), Event::plant("b")];
        assert_eq!(
            natural_projection(&w, &visible(&["a", "b"])),
            vec![Event::plant("a"), Event::plant("b")]
        );
        assert!(natural_projection(&[], &visible(&["a"])).is_empty());
    }
}
