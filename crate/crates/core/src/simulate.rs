//! Seeded random walks through the closed loop.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::StateId;
use crate::components::slot;
use crate::event::Event;
use crate::product::Product;
use crate::verify::{EDIT_SLOT, SUPERVISOR_SLOT};

/// One visited state of the closed loop and the event that led there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    /// `None` for the initial record.
    pub event: Option<Event>,
    pub state: StateId,
    pub plant: String,
    pub ce: String,
    pub ec: String,
    pub sc: String,
    /// The intruder's current estimate, or `unsafe`.
    pub intruder: String,
    pub edit: String,
    pub supervisor: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub records: Vec<TraceRecord>,
    /// The walk stopped early because no event was enabled.
    pub deadlocked: bool,
}

impl Simulation {
    /// Events fired, in order.
    pub fn word(&self) -> Vec<Event> {
        self.records.iter().filter_map(|r| r.event.clone()).collect()
    }
}

/// Names of the seven components of closed-loop state `q`.
pub fn component_names(b: &Product, q: StateId, names: &[&crate::automaton::Automaton; 7]) -> [String; 7] {
    std::array::from_fn(|k| names[k].state_name(b.tuples[q][k]).to_string())
}

/// Walks `b` for at most `steps` events, choosing uniformly among all
/// enabled events with a generator seeded from `seed`. `parts` are the seven
/// closed-loop components in slot order.
pub fn simulate_run(
    b: &Product,
    parts: &[&crate::automaton::Automaton; 7],
    seed: u64,
    steps: usize,
) -> Simulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = &b.automaton;
    let record = |step: usize, event: Option<Event>, q: StateId| {
        let n = component_names(b, q, parts);
        TraceRecord {
            step,
            event,
            state: q,
            plant: n[slot::PLANT].clone(),
            ce: n[slot::CE].clone(),
            ec: n[slot::EC].clone(),
            sc: n[slot::SC].clone(),
            intruder: n[slot::INTRUDER].clone(),
            edit: n[EDIT_SLOT].clone(),
            supervisor: n[SUPERVISOR_SLOT].clone(),
        }
    };
    let mut q = a.initial();
    let mut records = vec![record(0, None, q)];
    for step in 1..=steps {
        let enabled: Vec<(usize, StateId)> = a.out_idx(q).collect();
        if enabled.is_empty() {
            return Simulation { records, deadlocked: true };
        }
        let (e, d) = enabled[rng.random_range(0..enabled.len())];
        q = d;
        records.push(record(step, Some(a.event(e).clone()), q));
    }
    Simulation { records, deadlocked: false }
}
