#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cosynth::automaton::{Automaton, AutomatonBuilder, StateId, StateSet};
use cosynth::components::ComponentSet;
use cosynth::event::Event;
use cosynth::instance::ProblemInstance;
use cosynth::spec::AlphabetSpec;
use cosynth::synthesis::ControlConstraint;
use cosynth::verify::{EDIT_SLOT, SUPERVISOR_SLOT};
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &str = include_str!("../../data/campus.toml");

pub fn example() -> ProblemInstance {
    cosynth::io::parse_instance(EXAMPLE).expect("bundled example parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ev(name: &str) -> Event {
    Event::plant(name)
}

pub fn word(text: &str) -> Vec<Event> {
    text.split_whitespace().map(|w| w.parse().unwrap()).collect()
}

pub fn names(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Builds an automaton from `(src, event, dst)` triples over named states
/// `"0".."n-1"`, initial `"0"`.
pub fn automaton(n: usize, alphabet: &[&str], marked: &[usize], edges: &[(usize, &str, usize)]) -> Automaton {
    let mut b = AutomatonBuilder::new(alphabet.iter().map(|e| ev(e)));
    for q in 0..n {
        let id = b.add_state(&q.to_string());
        b.set_marked(id, marked.contains(&q));
    }
    for &(s, e, d) in edges {
        b.add_transition(s, &ev(e), d);
    }
    b.build(0)
}

/// Random deterministic automaton with `n` states over `alphabet`; each
/// `(state, event)` pair is defined with probability `density`.
pub fn random_automaton(r: &mut ChaCha8Rng, n: usize, alphabet: &[Event], density: f64) -> Automaton {
    let mut b = AutomatonBuilder::new(alphabet.iter().cloned());
    for q in 0..n {
        let id = b.add_state(&q.to_string());
        b.set_marked(id, r.random_bool(0.5));
    }
    for q in 0..n {
        for e in alphabet {
            if r.random_bool(density) {
                b.add_transition(q, e, r.random_range(0..n));
            }
        }
    }
    b.build(0)
}

fn random_subset(r: &mut ChaCha8Rng, from: &BTreeSet<String>, p: f64) -> BTreeSet<String> {
    from.iter().filter(|_| r.random_bool(p)).cloned().collect()
}

/// Random valid alphabet partitions over `e0..e{k-1}`; `Σc` is never empty.
pub fn random_spec(r: &mut ChaCha8Rng, k: usize, bound: usize) -> AlphabetSpec {
    let events: BTreeSet<String> = (0..k).map(|i| format!("e{i}")).collect();
    let mut controllable = random_subset(r, &events, 0.6);
    if controllable.is_empty() {
        controllable.insert(events.iter().choose(r).unwrap().clone());
    }
    let observable = random_subset(r, &events, 0.7);
    let edit_observable = random_subset(r, &observable, 0.8);
    let editable = random_subset(r, &edit_observable, 0.6);
    let intruder_observable = random_subset(r, &events, 0.7);
    AlphabetSpec {
        events,
        controllable,
        observable,
        edit_observable,
        editable,
        intruder_observable,
        bound,
        commands: None,
    }
}

/// Random instance with at most `max_q` plant states, `max_k` events and
/// bound at most `max_u`.
pub fn random_instance(r: &mut ChaCha8Rng, max_q: usize, max_k: usize, max_u: usize) -> ProblemInstance {
    let k = r.random_range(1..=max_k);
    let u = r.random_range(1..=max_u);
    let spec = random_spec(r, k, u);
    let n = r.random_range(1..=max_q);
    let sigma: Vec<Event> = spec.sigma().into_iter().collect();
    let plant = random_automaton(r, n, &sigma, 0.45);
    let secret: StateSet = (0..n).filter(|_| r.random_bool(0.3)).collect();
    let avoid: StateSet = (1..n).filter(|_| r.random_bool(0.15)).collect();
    ProblemInstance::new(plant, spec, secret, avoid, None).expect("generated instance is valid")
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[Event], max_len: usize) -> Vec<Vec<Event>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for e in alphabet {
                let mut w2: Vec<Event> = w.clone();
                w2.push(e.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Walks `a` along `w` by linear scans of the transition list.
pub fn run_naive(a: &Automaton, w: &[Event]) -> Option<StateId> {
    let edges: Vec<(StateId, Event, StateId)> = a.transitions().map(|(s, e, d)| (s, e.clone(), d)).collect();
    let mut q = a.initial();
    for e in w {
        q = edges.iter().find(|(s, x, _)| *s == q && x == e)?.2;
    }
    Some(q)
}

/// For every projection `s` of a word of length at most `max_len`, the
/// states those words lead to.
pub fn enumerate_projections(
    a: &Automaton,
    visible: &BTreeSet<Event>,
    max_len: usize,
) -> BTreeMap<Vec<Event>, BTreeSet<StateId>> {
    let mut out: BTreeMap<Vec<Event>, BTreeSet<StateId>> = BTreeMap::new();
    for w in all_words(a.alphabet(), max_len) {
        if let Some(q) = run_naive(a, &w) {
            let s: Vec<Event> = w.into_iter().filter(|e| visible.contains(e)).collect();
            out.entry(s).or_default().insert(q);
        }
    }
    out
}

/// `{δ(q0, t) | P(t) = s}`, exact: searches words whose projection is `s`,
/// tracking `(state, prefix of s consumed)` so that no word is explored
/// twice from the same position.
pub fn preimage_states(a: &Automaton, visible: &BTreeSet<Event>, s: &[Event]) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([(a.initial(), 0usize)]);
    let mut stack = vec![(a.initial(), 0usize)];
    while let Some((q, i)) = stack.pop() {
        for (e, d) in a.out(q) {
            let next = if visible.contains(e) {
                if s.get(i) != Some(e) {
                    continue;
                }
                (d, i + 1)
            } else {
                (d, i)
            };
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.into_iter().filter(|&(_, i)| i == s.len()).map(|(q, _)| q).collect()
}

/// Breadth-first unobservable closure from `q`.
pub fn closure_oracle(a: &Automaton, q: StateId, visible: &BTreeSet<Event>) -> BTreeSet<StateId> {
    let mut out = BTreeSet::from([q]);
    let mut frontier = vec![q];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in frontier {
            for (e, d) in a.out(s) {
                if !visible.contains(e) && out.insert(d) {
                    next.push(d);
                }
            }
        }
        frontier = next;
    }
    out
}

/// States reachable forward and states that reach a marker, by fixpoint
/// iteration over the edge list.
pub fn reach_oracle(a: &Automaton) -> (BTreeSet<StateId>, BTreeSet<StateId>) {
    let edges: Vec<(StateId, StateId)> = a.transitions().map(|(s, _, d)| (s, d)).collect();
    let mut fwd = BTreeSet::from([a.initial()]);
    let mut bwd: BTreeSet<StateId> = a.marked_states().collect();
    loop {
        let before = (fwd.len(), bwd.len());
        for &(s, d) in &edges {
            if fwd.contains(&s) {
                fwd.insert(d);
            }
            if bwd.contains(&d) {
                bwd.insert(s);
            }
        }
        if (fwd.len(), bwd.len()) == before {
            return (fwd, bwd);
        }
    }
}

/// Current-state opacity by enumerating visible strings of length at most
/// `max_len`. Returns `None` when new estimates still appear at the last
/// length, so the bounded answer may differ from the unbounded one.
pub fn cso_by_enumeration(inst: &ProblemInstance, max_len: usize) -> Option<bool> {
    let a = &inst.plant;
    let visible: BTreeSet<Event> = inst.spec.intruder_observable.iter().map(|e| ev(e)).collect();
    let vis: Vec<Event> = visible.iter().cloned().collect();
    let mut seen: BTreeSet<BTreeSet<StateId>> = BTreeSet::new();
    let mut opaque = true;
    let mut layer = vec![Vec::new()];
    let mut grew = true;
    for len in 0..=max_len {
        let before = seen.len();
        let mut next = Vec::new();
        for s in &layer {
            let est = preimage_states(a, &visible, s);
            if est.is_empty() {
                continue;
            }
            if est.iter().all(|q| inst.secret.contains(q)) {
                opaque = false;
            }
            seen.insert(est);
            for e in &vis {
                let mut s2 = s.clone();
                s2.push(e.clone());
                next.push(s2);
            }
        }
        grew = len == 0 || seen.len() > before;
        layer = next;
    }
    (!grew).then_some(opaque)
}

/// A random supervisor that respects `constraint`'s shape: uncontrollable
/// events are defined everywhere, unobservable ones self-loop, controllable
/// ones are present at random.
pub fn random_shaped_agent(
    r: &mut ChaCha8Rng,
    alphabet: &BTreeSet<Event>,
    constraint: &ControlConstraint,
    states: usize,
) -> Automaton {
    let mut b = AutomatonBuilder::new(alphabet.iter().cloned());
    for q in 0..states {
        let id = b.add_state(&format!("r{q}"));
        b.set_marked(id, true);
    }
    for q in 0..states {
        for e in alphabet {
            if !constraint.observable.contains(e) {
                b.add_transition(q, e, q);
            } else if !constraint.controllable.contains(e) || r.random_bool(0.7) {
                b.add_transition(q, e, r.random_range(0..states));
            }
        }
    }
    b.build(0)
}

/// Single marked state with a self-loop on every event.
pub fn universal(alphabet: &BTreeSet<Event>) -> Automaton {
    let mut b = AutomatonBuilder::new(alphabet.iter().cloned());
    let q = b.add_state("u");
    b.set_marked(q, true);
    for e in alphabet {
        b.add_transition(q, e, q);
    }
    b.build(q)
}

/// The seven closed-loop parts in slot order.
pub fn seven<'a>(cs: &'a ComponentSet, e: &'a Automaton, s: &'a Automaton) -> [&'a Automaton; 7] {
    let mut parts = [&cs.plant; 7];
    parts[..5].copy_from_slice(&cs.parts());
    parts[EDIT_SLOT] = e;
    parts[SUPERVISOR_SLOT] = s;
    parts
}
