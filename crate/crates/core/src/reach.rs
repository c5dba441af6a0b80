//! Reachability, coreachability and the predicates built on them.

use std::collections::VecDeque;

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonBuilder, StateId, StateSet};
use crate::event::Event;

/// Forward closure from the initial state.
pub fn reachable_states(a: &Automaton) -> StateSet {
    reachable_mask(a).iter().enumerate().filter(|(_, r)| **r).map(|(q, _)| q).collect()
}

pub(crate) fn reachable_mask(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack = vec![a.initial()];
    seen[a.initial()] = true;
    while let Some(q) = stack.pop() {
        for (_, d) in a.out_idx(q) {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen
}

/// Backward closure from the marker states.
pub fn coreachable_states(a: &Automaton) -> StateSet {
    let targets: Vec<bool> = a.states().map(|q| a.is_marked(q)).collect();
    coreachable_mask(a, &targets)
        .iter()
        .enumerate()
        .filter(|(_, r)| **r)
        .map(|(q, _)| q)
        .collect()
}

/// States from which some state with `target[q]` is reachable.
pub(crate) fn coreachable_mask(a: &Automaton, target: &[bool]) -> Vec<bool> {
    let pred = a.predecessors();
    let mut seen = target.to_vec();
    let mut stack: Vec<StateId> = a.states().filter(|&q| target[q]).collect();
    while let Some(q) = stack.pop() {
        for &(p, _) in &pred[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Every reachable state can reach a marker state.
pub fn is_nonblocking(a: &Automaton) -> bool {
    let r = reachable_mask(a);
    let targets: Vec<bool> = a.states().map(|q| a.is_marked(q)).collect();
    let c = coreachable_mask(a, &targets);
    r.iter().zip(&c).all(|(r, c)| !*r || *c)
}

/// Some marker state is reachable.
pub fn is_marker_reachable(a: &Automaton) -> bool {
    reachable_mask(a)
        .iter()
        .enumerate()
        .any(|(q, r)| *r && a.is_marked(q))
}

/// States from which no marker state can be reached (`Q_block`).
pub fn blocking_states(a: &Automaton) -> StateSet {
    let co = coreachable_states(a);
    a.states().filter(|q| !co.contains(q)).collect()
}

/// Reachable states that cannot reach a marker state.
pub fn reachable_blocking_states(a: &Automaton) -> StateSet {
    let r = reachable_mask(a);
    let targets: Vec<bool> = a.states().map(|q| a.is_marked(q)).collect();
    let c = coreachable_mask(a, &targets);
    a.states().filter(|&q| r[q] && !c[q]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RemoveError {
    #[error("the initial state was removed; the result is the empty automaton")]
    EmptyResult,
    #[error("state {0} is out of range")]
    UnknownState(StateId),
}

/// Deletes `cut` and every transition touching it. Marking of the remaining
/// states is kept, state names and order are preserved, and nothing is
/// trimmed.
pub fn remove_states(a: &Automaton, cut: &StateSet) -> Result<Automaton, RemoveError> {
    if let Some(&q) = cut.iter().find(|&&q| q >= a.num_states()) {
        return Err(RemoveError::UnknownState(q));
    }
    if cut.contains(&a.initial()) {
        return Err(RemoveError::EmptyResult);
    }
    let mut b = AutomatonBuilder::new(a.alphabet().iter().cloned());
    let mut map = vec![usize::MAX; a.num_states()];
    for q in a.states().filter(|q| !cut.contains(q)) {
        map[q] = b.add_state(a.state_name(q));
        b.set_marked(map[q], a.is_marked(q));
    }
    for q in a.states().filter(|q| !cut.contains(q)) {
        for (e, d) in a.out_idx(q) {
            if !cut.contains(&d) {
                b.add_transition_idx(map[q], e, map[d]);
            }
        }
    }
    Ok(b.build(map[a.initial()]))
}

/// Shortest event sequence from the initial state to some state satisfying
/// `goal`, with the state it ends in.
pub fn shortest_path_to(
    a: &Automaton,
    mut goal: impl FnMut(StateId) -> bool,
) -> Option<(Vec<Event>, StateId)> {
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([a.initial()]);
    seen[a.initial()] = true;
    while let Some(q) = queue.pop_front() {
        if goal(q) {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some((p, e)) = parent[cur] {
                word.push(a.event(e).clone());
                cur = p;
            }
            word.reverse();
            return Some((word, q));
        }
        for (e, d) in a.out_idx(q) {
            if !seen[d] {
                seen[d] = true;
                parent[d] = Some((q, e));
                queue.push_back(d);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::RawAutomaton;

    fn aut(n: usize, marked: &[usize], edges: &[(usize, &str, usize)]) -> Automaton {
        let mut names: Vec<&str> = edges.iter().map(|e| e.1).collect();
        names.sort();
        names.dedup();
        Automaton::from_raw(&RawAutomaton {
            states: (0..n).map(|i| i.to_string()).collect(),
            alphabet: names.iter().map(|n| Event::plant(*n)).collect(),
            initial: "0".into(),
            marked: marked.iter().map(|m| m.to_string()).collect(),
            transitions: edges
                .iter()
                .map(|(s, e, d)| (s.to_string(), Event::plant(*e), d.to_string()))
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn isolated_state_is_unreachable() {
        let a = aut(3, &[], &[(0, "a", 1)]);
        assert_eq!(reachable_states(&a), StateSet::from([0, 1]));
    }

    #[test]
    fn marked_initial_without_moves() {
        let a = aut(1, &[0], &[]);
        assert_eq!(coreachable_states(&a), StateSet::from([0]));
        assert!(is_nonblocking(&a));
        assert!(is_marker_reachable(&a));
    }

    #[test]
    fn marked_initial_with_dead_successor() {
        let a = aut(2, &[0], &[(0, "a", 1)]);
        assert!(is_marker_reachable(&a));
        assert!(!is_nonblocking(&a));
        assert_eq!(blocking_states(&a), StateSet::from([1]));
    }

    #[test]
    fn fully_marked_has_no_blocking_states() {
        let a = aut(3, &[0, 1, 2], &[(0, "a", 1), (1, "a", 2)]);
        assert!(blocking_states(&a).is_empty());
    }

    #[test]
    fn removing_nothing_is_identity() {
        let a = aut(3, &[2], &[(0, "a", 1), (1, "a", 2)]);
        assert_eq!(remove_states(&a, &StateSet::new()).unwrap(), a);
    }

    #[test]
    fn removing_the_initial_state_is_empty() {
        let a = aut(2, &[1], &[(0, "a", 1)]);
        assert_eq!(remove_states(&a, &StateSet::from([0])), Err(RemoveError::EmptyResult));
    }

    #[test]
    fn cutting_the_middle_of_a_chain_keeps_the_prefix() {
        let a = aut(3, &[2], &[(0, "a", 1), (1, "b", 2)]);
        let cut = remove_states(&a, &StateSet::from([2])).unwrap();
        assert_eq!(cut.num_states(), 2);
        assert_eq!(cut.num_transitions(), 1);
        assert_eq!(cut.marked_states().count(), 0);
    }

    #[test]
    fn shortest_path_reports_a_witness() {
        let a = aut(4, &[3], &[(0, "a", 1), (1, "b", 3), (0, "c", 2), (2, "d", 1)]);
        let (w, q) = shortest_path_to(&a, |q| q == 3).unwrap();
        assert_eq!(q, 3);
        assert_eq!(w, vec![Event::plant("a"), Event::plant("b")]);
    }
}
