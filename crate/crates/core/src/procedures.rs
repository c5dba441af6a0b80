//! The two incremental co-synthesis procedures.
//!
//! [`procedure1`] synthesizes the supervisor first and then the edit function;
//! [`procedure2`] does it the other way round. Both work on the product
//! `P = G || CE || EC || SC || I` and express every requirement as a set of
//! product states to stay out of.

use std::fmt;

use crate::automaton::{Automaton, StateSet};
use crate::components::{slot, BuildOptions, ComponentSet};
use crate::error::ModelError;
use crate::event::Event;
use crate::instance::ProblemInstance;
use crate::product::{product_all, Product};
use crate::reach::coreachable_mask;
use crate::synthesis::{synthesize, ControlConstraint, EmptyReason, SynthesisGoal, SynthesisOutcome};

/// Which synthesis order a result came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Supervisor first, then edit function.
    SupervisorFirst,
    /// Edit function first, then supervisor.
    EditFirst,
}

impl Order {
    pub fn number(self) -> u8 {
        match self {
            Order::SupervisorFirst => 1,
            Order::EditFirst => 2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProcedureOptions {
    pub build: BuildOptions,
    /// Demand nonblockingness from the first local synthesis already.
    pub strict_first_nonblocking: bool,
}

/// Where a procedure stopped without a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageFailure {
    /// Step number within the procedure.
    pub step: u8,
    pub reason: EmptyReason,
}

impl fmt::Display for StageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Requirement size at one round of the supervisor loop, or at the single
/// requirement of every other stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub step: u8,
    /// States of the plant the stage synthesizes for.
    pub plant_states: usize,
    /// States the requirement keeps.
    pub requirement_states: usize,
}

#[derive(Debug, Clone)]
pub struct CoSynthesisResult {
    pub order: Order,
    pub supervisor: Option<Automaton>,
    pub edit: Option<Automaton>,
    /// Rounds of the supervisor loop in [`procedure1`]; 0 for [`procedure2`].
    pub iterations: usize,
    pub trace: Vec<RoundRecord>,
    pub failure: Option<StageFailure>,
    /// States of `P`.
    pub p_states: usize,
    /// Requirement cut that seeded the loop of [`procedure1`].
    pub initial_cut: Option<CutReport>,
}

impl CoSynthesisResult {
    pub fn is_empty(&self) -> bool {
        self.failure.is_some()
    }

    /// The synthesized pair, edit function first.
    pub fn pair(&self) -> Option<(&Automaton, &Automaton)> {
        Some((self.edit.as_ref()?, self.supervisor.as_ref()?))
    }
}

/// `P = G || CE || EC || SC || I`, components in [`slot`] order.
pub fn build_plant_p(cs: &ComponentSet) -> Product {
    product_all(&cs.parts())
}

/// The three state sets removed from `P` before the supervisor loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    /// Plant component forbidden.
    pub q1: StateSet,
    /// Plant component cannot reach a marker state.
    pub q2: StateSet,
    /// Unmarked plant component stuck under the command being executed.
    pub q3: StateSet,
    /// States of `P_S^0`.
    pub kept: StateSet,
}

impl CutReport {
    pub fn removed(&self) -> StateSet {
        self.q1.iter().chain(&self.q2).chain(&self.q3).copied().collect()
    }
}

/// Computes `Q1`, `Q2` and `Q3` for `p = build_plant_p(cs)`.
pub fn build_requirement_ps0(p: &Product, cs: &ComponentSet) -> CutReport {
    let uncontrollable = cs.spec.uncontrollable();
    let mut report = CutReport {
        q1: StateSet::new(),
        q2: StateSet::new(),
        q3: StateSet::new(),
        kept: StateSet::new(),
    };
    for (q, t) in p.tuples.iter().enumerate() {
        let g = t[slot::PLANT];
        let mut cut = false;
        if cs.avoid.contains(&g) {
            report.q1.insert(q);
            cut = true;
        }
        if cs.blocking.contains(&g) {
            report.q2.insert(q);
            cut = true;
        }
        if !cs.plant.is_marked(g) {
            if let Some(cmd) = cs.ce_command(t[slot::CE]) {
                let allowed = cmd.enables().expect("command event");
                let stuck = !cs
                    .plant
                    .enabled(g)
                    .filter_map(Event::plant_name)
                    .any(|n| allowed.contains(n) || uncontrollable.contains(n));
                if stuck {
                    report.q3.insert(q);
                    cut = true;
                }
            }
        }
        if !cut {
            report.kept.insert(q);
        }
    }
    report
}

/// `Q_del` for the requirement `kept` and the round supervisor `s_k`.
///
/// C1 holds at a requirement state when some closed-loop state above it
/// can no longer reach a state whose plant component is marked; C2 holds
/// when no closed-loop state sits above it at all.
pub fn compute_qdel(p: &Product, cs: &ComponentSet, kept: &StateSet, s_k: &Automaton) -> StateSet {
    let closed = product_all(&[&p.automaton, s_k]);
    let c = &closed.automaton;
    let target: Vec<bool> = closed
        .tuples
        .iter()
        .map(|t| cs.plant.is_marked(p.tuples[t[0]][slot::PLANT]))
        .collect();
    let co = coreachable_mask(c, &target);
    let mut seen = vec![false; p.tuples.len()];
    let mut del = StateSet::new();
    for (q, t) in closed.tuples.iter().enumerate() {
        seen[t[0]] = true;
        if !co[q] && kept.contains(&t[0]) {
            del.insert(t[0]);
        }
    }
    del.extend(kept.iter().filter(|&&q| !seen[q]));
    del
}

fn complement(n: usize, kept: &StateSet) -> StateSet {
    (0..n).filter(|q| !kept.contains(q)).collect()
}

/// Supervisor first, then edit function.
pub fn procedure1(inst: &ProblemInstance, opts: &ProcedureOptions) -> Result<CoSynthesisResult, ModelError> {
    let cs = ComponentSet::build(inst, &opts.build)?;
    Ok(procedure1_with(&cs, opts))
}

/// [`procedure1`] on prebuilt components.
pub fn procedure1_with(cs: &ComponentSet, opts: &ProcedureOptions) -> CoSynthesisResult {
    let p = build_plant_p(cs);
    let n = p.tuples.len();
    let cut = build_requirement_ps0(&p, cs);
    let s_cons = ControlConstraint::supervisor(&cs.spec, &cs.gamma);
    let mut result = CoSynthesisResult {
        order: Order::SupervisorFirst,
        supervisor: None,
        edit: None,
        iterations: 0,
        trace: Vec::new(),
        failure: None,
        p_states: n,
        initial_cut: Some(cut.clone()),
    };

    let mut kept = cut.kept;
    let first_goal = if opts.strict_first_nonblocking {
        SynthesisGoal::Nonblocking
    } else {
        SynthesisGoal::MarkerReachable
    };
    let mut step = 3;
    let mut goal = first_goal;
    let s = loop {
        result.trace.push(RoundRecord { step, plant_states: n, requirement_states: kept.len() });
        let s_k = match synthesize(&p.automaton, &complement(n, &kept), &s_cons, goal) {
            SynthesisOutcome::Supervisor(s) => s,
            SynthesisOutcome::Empty(reason) => {
                result.failure = Some(StageFailure { step, reason });
                return result;
            }
        };
        result.iterations += 1;
        let del = compute_qdel(&p, cs, &kept, &s_k);
        if del.is_empty() {
            break s_k;
        }
        kept.retain(|q| !del.contains(q));
        step = 8;
        goal = SynthesisGoal::MarkerReachable;
    };

    let pe = {
        let mut parts = cs.parts().to_vec();
        parts.push(&s);
        product_all(&parts)
    };
    let exposed = cs.intruder.exposed_states();
    let q4: StateSet = pe
        .tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| exposed.contains(&t[slot::INTRUDER]))
        .map(|(q, _)| q)
        .collect();
    let pe_states = pe.tuples.len();
    result.trace.push(RoundRecord {
        step: 11,
        plant_states: pe_states,
        requirement_states: pe_states - q4.len(),
    });
    result.supervisor = Some(s);
    match synthesize(&pe.automaton, &q4, &ControlConstraint::edit(&cs.spec), SynthesisGoal::Nonblocking) {
        SynthesisOutcome::Supervisor(e) => result.edit = Some(e),
        SynthesisOutcome::Empty(reason) => {
            result.supervisor = None;
            result.failure = Some(StageFailure { step: 11, reason });
        }
    }
    result
}

/// Edit function first, then supervisor.
pub fn procedure2(inst: &ProblemInstance, opts: &ProcedureOptions) -> Result<CoSynthesisResult, ModelError> {
    let cs = ComponentSet::build(inst, &opts.build)?;
    Ok(procedure2_with(&cs, opts))
}

/// States of `P` where the intruder has decoded the secret or noticed the
/// edit function (`Q5`).
pub fn exposed_in(p: &Product, cs: &ComponentSet) -> StateSet {
    let exposed = cs.intruder.exposed_states();
    p.tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| exposed.contains(&t[slot::INTRUDER]))
        .map(|(q, _)| q)
        .collect()
}

/// The edit stage of [`procedure2`] on its own.
pub fn procedure2_edit_stage(cs: &ComponentSet, p: &Product, strict: bool) -> SynthesisOutcome {
    let goal = if strict { SynthesisGoal::Nonblocking } else { SynthesisGoal::MarkerReachable };
    synthesize(&p.automaton, &exposed_in(p, cs), &ControlConstraint::edit(&cs.spec), goal)
}

/// [`procedure2`] on prebuilt components.
pub fn procedure2_with(cs: &ComponentSet, opts: &ProcedureOptions) -> CoSynthesisResult {
    let p = build_plant_p(cs);
    let n = p.tuples.len();
    let mut result = CoSynthesisResult {
        order: Order::EditFirst,
        supervisor: None,
        edit: None,
        iterations: 0,
        trace: Vec::new(),
        failure: None,
        p_states: n,
        initial_cut: None,
    };
    let q5 = exposed_in(&p, cs);
    result.trace.push(RoundRecord { step: 3, plant_states: n, requirement_states: n - q5.len() });
    let e = match procedure2_edit_stage(cs, &p, opts.strict_first_nonblocking) {
        SynthesisOutcome::Supervisor(e) => e,
        SynthesisOutcome::Empty(reason) => {
            result.failure = Some(StageFailure { step: 3, reason });
            return result;
        }
    };

    let ps = {
        let mut parts = cs.parts().to_vec();
        parts.push(&e);
        product_all(&parts)
    };
    let q6: StateSet = ps
        .tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| cs.avoid.contains(&t[slot::PLANT]))
        .map(|(q, _)| q)
        .collect();
    let ps_states = ps.tuples.len();
    result.trace.push(RoundRecord {
        step: 6,
        plant_states: ps_states,
        requirement_states: ps_states - q6.len(),
    });
    let s_cons = ControlConstraint::supervisor(&cs.spec, &cs.gamma);
    match synthesize(&ps.automaton, &q6, &s_cons, SynthesisGoal::Nonblocking) {
        SynthesisOutcome::Supervisor(s) => {
            result.edit = Some(e);
            result.supervisor = Some(s);
        }
        SynthesisOutcome::Empty(reason) => {
            result.failure = Some(StageFailure { step: 6, reason });
        }
    }
    result
}
