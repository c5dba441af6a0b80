mod common;

use std::collections::BTreeSet;

use common::*;
use cosynth::automaton::StateSet;
use cosynth::observer::{natural_projection, observer, unobservable_reach};
use cosynth::product::{product_all, sync_product};
use cosynth::reach::{
    blocking_states, coreachable_states, is_marker_reachable, is_nonblocking, reachable_states, remove_states,
};
use cosynth::Event;
use proptest::prelude::*;

fn alphabet(k: usize) -> Vec<Event> {
    ["a", "b", "u", "v"][..k].iter().map(|e| ev(e)).collect()
}

fn visible_part(r: &mut rand_chacha::ChaCha8Rng, sigma: &[Event]) -> BTreeSet<Event> {
    use rand::Rng;
    sigma.iter().filter(|_| r.random_bool(0.5)).cloned().collect()
}

#[test]
fn hand_closure_and_observer() {
    let a = automaton(3, &["u", "a"], &[2], &[(0, "u", 1), (1, "a", 2)]);
    let vis = BTreeSet::from([ev("a")]);
    assert_eq!(unobservable_reach(&a, 0, &vis).members(), &[0, 1]);
    let obs = observer(&a, &vis);
    let init = &obs.beliefs[obs.automaton.initial()];
    assert_eq!(init.members(), &[0, 1]);
    let after = obs.automaton.step(obs.automaton.initial(), &ev("a")).unwrap();
    assert_eq!(obs.beliefs[after].members(), &[2]);
    // the invisible event self-loops on every nonempty belief
    assert_eq!(obs.automaton.step(after, &ev("u")), Some(after));
}

#[test]
fn observer_matches_string_enumeration() {
    let mut checked = 0;
    for seed in 0..50 {
        let mut r = rng(seed);
        use rand::Rng;
        let n = r.random_range(1..=6);
        let sigma = alphabet(3);
        let a = random_automaton(&mut r, n, &sigma, 0.5);
        let vis = visible_part(&mut r, &sigma);
        let obs = observer(&a, &vis);
        for (s, states) in enumerate_projections(&a, &vis, 6) {
            let q = obs.automaton.run(obs.automaton.initial(), s.iter()).expect("observer follows every projection");
            let belief: BTreeSet<usize> = obs.beliefs[q].members().iter().copied().collect();
            assert!(states.is_subset(&belief), "seed {seed}: {s:?}");
            assert_eq!(belief, preimage_states(&a, &vis, &s), "seed {seed}: {s:?}");
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn nonblocking_and_marker_reachable_on_small_cases() {
    let single = automaton(1, &["a"], &[0], &[]);
    assert!(is_nonblocking(&single) && is_marker_reachable(&single));
    let dead = automaton(2, &["a"], &[0], &[(0, "a", 1)]);
    assert!(is_marker_reachable(&dead) && !is_nonblocking(&dead));
    assert_eq!(blocking_states(&dead), StateSet::from([1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn observer_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = alphabet(3);
        let a = random_automaton(&mut r, 5, &sigma, 0.5);
        let vis = visible_part(&mut r, &sigma);
        let obs = observer(&a, &vis);
        for w in all_words(&sigma, 5) {
            if let Some(q) = run_naive(&a, &w) {
                let p = natural_projection(&w, &vis);
                let b = obs.automaton.run(obs.automaton.initial(), p.iter()).unwrap();
                prop_assert!(obs.beliefs[b].contains(q));
            }
        }
    }

    #[test]
    fn closure_matches_bfs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = alphabet(4);
        let a = random_automaton(&mut r, 5, &sigma, 0.5);
        let vis: BTreeSet<Event> = sigma[..2].iter().cloned().collect();
        for q in a.states() {
            let got: BTreeSet<usize> = unobservable_reach(&a, q, &vis).members().iter().copied().collect();
            prop_assert_eq!(got, closure_oracle(&a, q, &vis));
        }
    }

    #[test]
    fn projection_is_idempotent_and_shortens(w in proptest::collection::vec(0usize..4, 0..12)) {
        let sigma = alphabet(4);
        let w: Vec<Event> = w.into_iter().map(|i| sigma[i].clone()).collect();
        let vis = BTreeSet::from([ev("a"), ev("u")]);
        let p = natural_projection(&w, &vis);
        prop_assert!(p.len() <= w.len());
        prop_assert_eq!(natural_projection(&p, &vis), p);
    }

    #[test]
    fn product_language_is_projection_intersection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_automaton(&mut r, 3, &[ev("a"), ev("b")], 0.6);
        let b = random_automaton(&mut r, 3, &[ev("b"), ev("u")], 0.6);
        let ab = sync_product(&a, &b);
        let union = [ev("a"), ev("b"), ev("u")];
        let in_a: BTreeSet<Event> = a.alphabet().iter().cloned().collect();
        let in_b: BTreeSet<Event> = b.alphabet().iter().cloned().collect();
        for w in all_words(&union, 5) {
            let both = run_naive(&a, &natural_projection(&w, &in_a)).is_some()
                && run_naive(&b, &natural_projection(&w, &in_b)).is_some();
            prop_assert_eq!(run_naive(&ab, &w).is_some(), both, "{:?}", w);
        }
    }

    #[test]
    fn product_association_does_not_matter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_automaton(&mut r, 3, &[ev("a"), ev("b")], 0.6);
        let y = random_automaton(&mut r, 3, &[ev("b"), ev("u")], 0.6);
        let z = random_automaton(&mut r, 3, &[ev("a"), ev("u")], 0.6);
        let left = sync_product(&sync_product(&x, &y), &z);
        let right = sync_product(&x, &sync_product(&y, &z));
        let flat = product_all(&[&x, &y, &z]).automaton;
        prop_assert_eq!(left.num_states(), right.num_states());
        prop_assert_eq!(left.num_states(), flat.num_states());
        prop_assert_eq!(left.marked_states().count(), flat.marked_states().count());
    }

    #[test]
    fn reach_sets_match_fixpoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_automaton(&mut r, 8, &alphabet(3), 0.35);
        let (fwd, bwd) = reach_oracle(&a);
        prop_assert_eq!(reachable_states(&a), fwd);
        prop_assert_eq!(coreachable_states(&a), bwd.clone());
        let blocking = blocking_states(&a);
        prop_assert!(blocking.is_disjoint(&bwd));
        prop_assert_eq!(blocking.len() + bwd.len(), a.num_states());
        if is_nonblocking(&a) && a.marked_states().next().is_some() {
            prop_assert!(is_marker_reachable(&a));
        }
    }

    #[test]
    fn removing_states_only_loses_words(seed in any::<u64>(), cut in proptest::collection::btree_set(1usize..5, 0..3)) {
        let mut r = rng(seed);
        let sigma = alphabet(2);
        let a = random_automaton(&mut r, 5, &sigma, 0.6);
        let smaller = remove_states(&a, &cut).unwrap();
        prop_assert!(smaller.num_transitions() <= a.num_transitions());
        for w in all_words(&sigma, 4) {
            if run_naive(&smaller, &w).is_some() {
                prop_assert!(run_naive(&a, &w).is_some());
            }
        }
    }
}
