use thiserror::Error;

use crate::automaton::Violation;
use crate::event::EventNameError;

/// Errors raised while assembling a problem instance or its components.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    EventName(#[from] EventNameError),
    #[error("{set} contains `{event}`, which is not in {superset}")]
    NotSubset {
        set: &'static str,
        superset: &'static str,
        event: String,
    },
    #[error("the controllable set is empty and no explicit command list was given")]
    EmptyControllableSet,
    #[error("default command enumeration over {0} controllable events exceeds the limit of {1}")]
    TooManyCommands(usize, usize),
    #[error("the command list is empty")]
    EmptyCommandList,
    #[error("command `{0}` is listed twice")]
    DuplicateCommand(String),
    #[error("command `{command}` enables `{event}`, which is not controllable")]
    CommandNotControllable { command: String, event: String },
    #[error("plant alphabet differs from the declared events: {0}")]
    PlantAlphabet(String),
    #[error("{what} `{state}` is not a plant state")]
    UnknownState { what: &'static str, state: String },
    #[error("requirement uses `{0}`, which is not a plant event")]
    RequirementEvent(String),
    #[error("invalid {what}: {}", render(.violations))]
    InvalidAutomaton {
        what: &'static str,
        violations: Vec<Violation>,
    },
    #[error("`no_delete` cannot be combined with routing pass-through events to q_0")]
    IncompatibleEditOptions,
}

fn render(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
