//! Problem instances and requirement compilation.

use std::collections::BTreeSet;

use crate::automaton::{Automaton, AutomatonBuilder, StateId, StateSet};
use crate::error::ModelError;
use crate::event::Event;
use crate::product::product_all;
use crate::spec::AlphabetSpec;

/// A plant with its secret and forbidden states, the alphabet partitions and
/// an optional requirement automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub plant: Automaton,
    pub spec: AlphabetSpec,
    /// `Q_sec`
    pub secret: StateSet,
    /// `Q_avoid`
    pub avoid: StateSet,
    pub requirement: Option<Automaton>,
}

impl ProblemInstance {
    /// Checks the cross-object invariants and builds the instance.
    pub fn new(
        plant: Automaton,
        spec: AlphabetSpec,
        secret: StateSet,
        avoid: StateSet,
        requirement: Option<Automaton>,
    ) -> Result<Self, ModelError> {
        spec.validate()?;
        let sigma = spec.sigma();
        let plant_events: BTreeSet<Event> = plant.alphabet().iter().cloned().collect();
        if plant_events != sigma {
            let extra: Vec<String> = plant_events
                .symmetric_difference(&sigma)
                .map(ToString::to_string)
                .collect();
            return Err(ModelError::PlantAlphabet(extra.join(", ")));
        }
        for (what, set) in [("secret state", &secret), ("avoid state", &avoid)] {
            if let Some(&q) = set.iter().find(|&&q| q >= plant.num_states()) {
                return Err(ModelError::UnknownState { what, state: q.to_string() });
            }
        }
        if let Some(r) = &requirement {
            if let Some(e) = r.alphabet().iter().find(|e| !sigma.contains(*e)) {
                return Err(ModelError::RequirementEvent(e.to_string()));
            }
        }
        Ok(ProblemInstance { plant, spec, secret, avoid, requirement })
    }

    /// Looks up plant states by name.
    pub fn plant_states<'a>(
        plant: &Automaton,
        what: &'static str,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<StateSet, ModelError> {
        names
            .into_iter()
            .map(|n| {
                plant
                    .state_id(n)
                    .ok_or_else(|| ModelError::UnknownState { what, state: n.to_string() })
            })
            .collect()
    }
}

/// The plant the synthesis works on once the requirement has been folded in.
#[derive(Debug, Clone)]
pub struct CompiledPlant {
    pub plant: Automaton,
    /// Forbidden states of `plant`.
    pub avoid: StateSet,
    /// Original plant state behind every state of `plant`.
    pub origin: Vec<StateId>,
}

/// Completes `req` over its own alphabet with an unmarked dump state that
/// absorbs every event.
fn complete_with_dump(req: &Automaton) -> (Automaton, StateId) {
    let mut dump_name = "dump".to_string();
    while req.state_id(&dump_name).is_some() {
        dump_name.push('\'');
    }
    let mut b = AutomatonBuilder::new(req.alphabet().iter().cloned());
    for q in req.states() {
        let id = b.add_state(req.state_name(q));
        b.set_marked(id, req.is_marked(q));
    }
    let dump = b.add_state(&dump_name);
    for q in req.states() {
        for e in 0..req.alphabet().len() {
            match req.step_idx(q, e) {
                Some(d) => b.add_transition_idx(q, e, d),
                None => b.add_transition_idx(q, e, dump),
            }
        }
    }
    for e in 0..req.alphabet().len() {
        b.add_transition_idx(dump, e, dump);
    }
    (b.build(req.initial()), dump)
}

/// Folds the requirement into the plant so that leaving the requirement's
/// language becomes reaching a forbidden state.
///
/// The refined plant is `G || K̂`, where `K̂` completes the requirement with a
/// dump state; it generates exactly the language of `G`. Its marker states
/// are the pairs marked on both sides. The refined avoid set contains the
/// pairs whose plant state was forbidden and every pair sitting in the dump.
/// Without a requirement the plant and avoid set are returned unchanged.
pub fn compile_requirement(inst: &ProblemInstance) -> CompiledPlant {
    let Some(req) = &inst.requirement else {
        return CompiledPlant {
            plant: inst.plant.clone(),
            avoid: inst.avoid.clone(),
            origin: inst.plant.states().collect(),
        };
    };
    let (complete, dump) = complete_with_dump(req);
    let prod = product_all(&[&inst.plant, &complete]);
    let avoid = prod
        .tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| inst.avoid.contains(&t[0]) || t[1] == dump)
        .map(|(q, _)| q)
        .collect();
    let origin = prod.tuples.iter().map(|t| t[0]).collect();
    CompiledPlant { plant: prod.automaton, avoid, origin }
}
