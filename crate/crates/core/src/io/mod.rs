//! File formats: instances, automata, graph descriptions and reports.

mod automaton_file;
mod dot;
mod instance_file;
mod report;

use thiserror::Error;

use crate::automaton::Violation;
use crate::error::ModelError;

pub use automaton_file::{emit_automaton_file, parse_automaton_file};
pub use dot::{emit_dot, parse_dot};
pub use instance_file::{emit_instance, parse_instance};
pub use report::{render_synthesis_report, render_trace, render_verification_report};

#[derive(Debug, Error)]
pub enum ParseError {
    /// Syntax or schema error; the message carries line and column.
    #[error("{0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ParseError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        ParseError::Invalid { path: path.into(), message: message.to_string() }
    }

    pub(crate) fn violations(path: &str, v: &[Violation]) -> Self {
        let text: Vec<String> = v.iter().map(ToString::to_string).collect();
        ParseError::invalid(path, text.join("; "))
    }
}

impl From<toml::de::Error> for ParseError {
    fn from(e: toml::de::Error) -> Self {
        ParseError::Syntax(e.to_string().trim_end().to_string())
    }
}
