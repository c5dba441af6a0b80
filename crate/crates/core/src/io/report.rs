use std::fmt::Write;

use serde::Serialize;

use crate::event::render_word;
use crate::procedures::CoSynthesisResult;
use crate::simulate::Simulation;
use crate::verify::VerificationReport;

#[derive(Serialize)]
struct SynthesisReport {
    procedure: u8,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_step: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    iterations: usize,
    p_states: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    supervisor_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edit_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cut: Option<CutSizes>,
    round: Vec<Round>,
}

#[derive(Serialize)]
struct CutSizes {
    q1: usize,
    q2: usize,
    q3: usize,
    kept: usize,
}

#[derive(Serialize)]
struct Round {
    step: u8,
    plant_states: usize,
    requirement_states: usize,
}

/// Machine-readable summary of a procedure run.
pub fn render_synthesis_report(r: &CoSynthesisResult) -> String {
    let doc = SynthesisReport {
        procedure: r.order.number(),
        status: if r.is_empty() { "empty" } else { "ok" },
        failed_step: r.failure.map(|f| f.step),
        reason: r.failure.map(|f| f.reason.to_string()),
        iterations: r.iterations,
        p_states: r.p_states,
        supervisor_states: r.supervisor.as_ref().map(|a| a.num_states()),
        edit_states: r.edit.as_ref().map(|a| a.num_states()),
        cut: r.initial_cut.as_ref().map(|c| CutSizes {
            q1: c.q1.len(),
            q2: c.q2.len(),
            q3: c.q3.len(),
            kept: c.kept.len(),
        }),
        round: r
            .trace
            .iter()
            .map(|t| Round {
                step: t.step,
                plant_states: t.plant_states,
                requirement_states: t.requirement_states,
            })
            .collect(),
    };
    toml::to_string(&doc).expect("report serializes")
}

pub fn render_verification_report(r: &VerificationReport) -> String {
    let mut out = String::new();
    writeln!(out, "closed-loop states: {}", r.closed_loop_states).unwrap();
    for (name, check) in r.checks() {
        match &check.witness {
            None => writeln!(out, "{name}: {}", check.holds).unwrap(),
            Some(w) => writeln!(out, "{name}: {} (witness: {})", check.holds, render_word(w)).unwrap(),
        }
    }
    out
}

/// One line per visited state.
pub fn render_trace(sim: &Simulation) -> String {
    let mut out = String::new();
    for r in &sim.records {
        let ev = r.event.as_ref().map_or("-".to_string(), ToString::to_string);
        writeln!(
            out,
            "{:>4} {:<14} G={} CE={} EC={} SC={} I={} E={} S={}",
            r.step, ev, r.plant, r.ce, r.ec, r.sc, r.intruder, r.edit, r.supervisor
        )
        .unwrap();
    }
    if sim.deadlocked {
        out.push_str("deadlock\n");
    }
    out
}
