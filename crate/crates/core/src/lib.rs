//! Co-synthesis of a supervisor and an edit function for partially observed
//! discrete event systems.
//!
//! A supervisor issues commands to a plant. An edit function sits between
//! the plant's sensors and everything downstream, rewriting observations so
//! that an intruder can never be sure the plant is in a secret state. The
//! crate builds the component automata, synthesizes both agents in either
//! order, and checks the result.

pub mod automaton;
pub mod components;
pub mod error;
pub mod event;
pub mod io;
pub mod instance;
pub mod observer;
pub mod procedures;
pub mod product;
pub mod reach;
pub mod simulate;
pub mod spec;
pub mod synthesis;
pub mod verify;

pub use automaton::{Automaton, AutomatonBuilder, RawAutomaton, StateId, StateSet};
pub use error::ModelError;
pub use event::Event;
pub use instance::ProblemInstance;
pub use spec::AlphabetSpec;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/components.md")]
    mod components {}
    #[doc = include_str!("../../../book/src/synthesis.md")]
    mod synthesis {}
    #[doc = include_str!("../../../book/src/procedures.md")]
    mod procedures {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
