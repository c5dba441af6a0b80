//! Events of the closed-loop universe.
//!
//! Every automaton in this crate is labelled by [`Event`] values. Plant events
//! carry their user-given name; the remaining kinds are generated by the
//! component builders and use a reserved textual encoding so that they
//! round-trip through files:
//!
//! | kind          | text            |
//! |---------------|-----------------|
//! | plant         | `a`             |
//! | edited copy   | `a#`            |
//! | command       | `cmd:a+b`       |
//! | stop          | `stop`          |
//! | decode        | `decode`        |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Name of the edit-round terminator event.
pub const STOP: &str = "stop";
/// Name of the intruder's secret-inference event.
pub const DECODE: &str = "decode";
/// Prefix used to encode command events.
pub const COMMAND_PREFIX: &str = "cmd:";
/// Suffix used to encode edited copies.
pub const EDITED_SUFFIX: char = '#';

/// A symbol of the closed-loop alphabet.
///
/// The derived ordering is the canonical event order used everywhere
/// (alphabets, iteration, file output): plant events first, then edited
/// copies, commands, `stop` and `decode`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    /// An event fired by the plant.
    Plant(String),
    /// `σ#`: the edit function sending the editable event `σ`.
    Edited(String),
    /// A control command, identified by the controllable events it enables.
    Command(BTreeSet<String>),
    /// End of the current edit round.
    Stop,
    /// The intruder infers the secret.
    Decode,
}

impl Event {
    pub fn plant(name: impl Into<String>) -> Self {
        Event::Plant(name.into())
    }

    pub fn edited(base: impl Into<String>) -> Self {
        Event::Edited(base.into())
    }

    pub fn command<I, S>(enables: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Event::Command(enables.into_iter().map(Into::into).collect())
    }

    pub fn is_plant(&self) -> bool {
        matches!(self, Event::Plant(_))
    }

    /// Name of a plant event.
    pub fn plant_name(&self) -> Option<&str> {
        match self {
            Event::Plant(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_command(&self) -> bool {
        matches!(self, Event::Command(_))
    }

    /// The plant event behind an edited copy.
    pub fn base(&self) -> Option<&str> {
        match self {
            Event::Edited(b) => Some(b),
            _ => None,
        }
    }

    /// Enable set of a command event.
    pub fn enables(&self) -> Option<&BTreeSet<String>> {
        match self {
            Event::Command(set) => Some(set),
            _ => None,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Plant(n) => f.write_str(n),
            Event::Edited(n) => write!(f, "{n}{EDITED_SUFFIX}"),
            Event::Command(set) => {
                f.write_str(COMMAND_PREFIX)?;
                for (i, e) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    f.write_str(e)?;
                }
                Ok(())
            }
            Event::Stop => f.write_str(STOP),
            Event::Decode => f.write_str(DECODE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventNameError {
    #[error("empty event name")]
    Empty,
    #[error("event name `{0}` contains a character outside [A-Za-z0-9_.-]")]
    BadCharacter(String),
    #[error("`{0}` is reserved and cannot name a plant event")]
    Reserved(String),
    #[error("command `{0}` has an empty enable set")]
    EmptyCommand(String),
}

/// Checks that `name` is usable as a user-supplied plant event name.
pub fn check_plant_name(name: &str) -> Result<(), EventNameError> {
    if name.is_empty() {
        return Err(EventNameError::Empty);
    }
    if name == STOP
        || name == DECODE
        || name.ends_with(EDITED_SUFFIX)
        || name.starts_with(COMMAND_PREFIX)
    {
        return Err(EventNameError::Reserved(name.to_string()));
    }
    if !name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
    {
        return Err(EventNameError::BadCharacter(name.to_string()));
    }
    Ok(())
}

impl FromStr for Event {
    type Err = EventNameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            STOP => return Ok(Event::Stop),
            DECODE => return Ok(Event::Decode),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix(COMMAND_PREFIX) {
            if rest.is_empty() {
                return Err(EventNameError::EmptyCommand(s.to_string()));
            }
            let mut set = BTreeSet::new();
            for part in rest.split('+') {
                check_plant_name(part)?;
                set.insert(part.to_string());
            }
            return Ok(Event::Command(set));
        }
        if let Some(base) = s.strip_suffix(EDITED_SUFFIX) {
            check_plant_name(base)?;
            return Ok(Event::Edited(base.to_string()));
        }
        check_plant_name(s)?;
        Ok(Event::Plant(s.to_string()))
    }
}

/// Renders a sequence of events as `a·b·c` (or `ε` when empty).
pub fn render_word(word: &[Event]) -> String {
    if word.is_empty() {
        return "ε".to_string();
    }
    word.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("·")
}
