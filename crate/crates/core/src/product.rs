//! Synchronous product.

use std::collections::HashMap;

use crate::automaton::{Automaton, StateId};
use crate::event::Event;

/// The reachable part of an n-way synchronous product together with the
/// component state tuple behind every product state.
#[derive(Debug, Clone)]
pub struct Product {
    pub automaton: Automaton,
    /// `tuples[q][k]` is the state of component `k` in product state `q`.
    pub tuples: Vec<Vec<StateId>>,
}

impl Product {
    pub fn component(&self, q: StateId, k: usize) -> StateId {
        self.tuples[q][k]
    }

    /// Product state with the given component tuple, if reachable.
    pub fn find(&self, tuple: &[StateId]) -> Option<StateId> {
        self.tuples.iter().position(|t| t == tuple)
    }

    /// Index from tuple to product state.
    pub fn tuple_index(&self) -> HashMap<&[StateId], StateId> {
        self.tuples
            .iter()
            .enumerate()
            .map(|(q, t)| (t.as_slice(), q))
            .collect()
    }
}

/// Renders a component tuple as `(x,y,...)`.
pub fn tuple_label(names: &[&str]) -> String {
    let mut s = String::with_capacity(names.iter().map(|n| n.len() + 1).sum::<usize>() + 2);
    s.push('(');
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(n);
    }
    s.push(')');
    s
}

/// `G1 || G2 || ... || Gn`, reachable part only.
///
/// An event moves every component whose alphabet contains it; components
/// that do not know the event stay put. The event is defined iff every
/// component that knows it has it enabled. For two components this is the
/// usual four-case definition. State labels are flat tuples, and states are
/// numbered in breadth-first discovery order with events tried in canonical
/// order, so the result is reproducible.
pub fn product_all(parts: &[&Automaton]) -> Product {
    assert!(!parts.is_empty(), "product of zero automata");
    let alphabet: Vec<Event> = {
        let mut v: Vec<Event> = parts.iter().flat_map(|a| a.alphabet().iter().cloned()).collect();
        v.sort();
        v.dedup();
        v
    };
    // local[k][e] = index of global event e in component k, if any
    let local: Vec<Vec<Option<usize>>> = parts
        .iter()
        .map(|a| alphabet.iter().map(|e| a.event_index(e)).collect())
        .collect();
    let mut keys = TupleKeys::new(parts);
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut delta: Vec<Vec<(u32, u32)>> = Vec::new();

    let init: Vec<StateId> = parts.iter().map(|a| a.initial()).collect();
    keys.intern(&init, 0);
    tuples.push(init);
    delta.push(Vec::new());

    let mut next = Vec::with_capacity(parts.len());
    let mut q = 0;
    while q < tuples.len() {
        'events: for e in 0..alphabet.len() {
            next.clear();
            for (k, a) in parts.iter().enumerate() {
                let cur = tuples[q][k];
                match local[k][e] {
                    None => next.push(cur),
                    Some(le) => match a.step_idx(cur, le) {
                        Some(d) => next.push(d),
                        None => continue 'events,
                    },
                }
            }
            let (d, new) = keys.intern(&next, tuples.len());
            if new {
                tuples.push(next.clone());
                delta.push(Vec::new());
            }
            delta[q].push((e as u32, d as u32));
        }
        q += 1;
    }
    let names = tuples
        .iter()
        .map(|t| {
            let names: Vec<&str> = t.iter().zip(parts).map(|(&q, a)| a.state_name(q)).collect();
            tuple_label(&names)
        })
        .collect();
    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(parts).all(|(&q, a)| a.is_marked(q)))
        .collect();
    let automaton = Automaton::from_parts(names, alphabet, 0, marked, delta);
    Product { automaton, tuples }
}

/// Dense numbering of component tuples. Tuples are packed into one integer
/// when the component sizes allow it.
enum TupleKeys {
    Packed { radix: Vec<u128>, index: HashMap<u128, StateId> },
    Plain(HashMap<Vec<StateId>, StateId>),
}

impl TupleKeys {
    fn new(parts: &[&Automaton]) -> Self {
        let mut radix = Vec::with_capacity(parts.len());
        let mut span: u128 = 1;
        for a in parts {
            radix.push(span);
            match span.checked_mul(a.num_states().max(1) as u128) {
                Some(s) => span = s,
                None => return TupleKeys::Plain(HashMap::new()),
            }
        }
        TupleKeys::Packed { radix, index: HashMap::new() }
    }

    /// Id of `t` and whether it is new; a new tuple gets `fresh`.
    fn intern(&mut self, t: &[StateId], fresh: StateId) -> (StateId, bool) {
        let found = match self {
            TupleKeys::Packed { radix, index } => {
                let key = t.iter().zip(radix.iter()).map(|(&q, r)| q as u128 * r).sum();
                *index.entry(key).or_insert(fresh)
            }
            TupleKeys::Plain(index) => *index.entry(t.to_vec()).or_insert(fresh),
        };
        (found, found == fresh)
    }
}

/// `a || b`.
pub fn sync_product(a: &Automaton, b: &Automaton) -> Automaton {
    product_all(&[a, b]).automaton
}
