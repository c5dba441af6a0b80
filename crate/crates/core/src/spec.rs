//! Event partitions and observation/control capabilities of every component.

use std::collections::BTreeSet;

use crate::error::ModelError;
use crate::event::{check_plant_name, Event};

/// The event partitions of one problem.
///
/// All sets hold plant event names. `Σuc` and `Σuo` are derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetSpec {
    /// `Σ`
    pub events: BTreeSet<String>,
    /// `Σc`
    pub controllable: BTreeSet<String>,
    /// `Σo`, observable to the supervisor's sensors.
    pub observable: BTreeSet<String>,
    /// `Σ_{o,E}`
    pub edit_observable: BTreeSet<String>,
    /// `Σ_{s,E}`
    pub editable: BTreeSet<String>,
    /// `Σ_{o,I}`
    pub intruder_observable: BTreeSet<String>,
    /// `U`: at most this many events are sent per observed event.
    pub bound: usize,
    /// Explicit command list; `None` means every nonempty subset of `Σc`.
    pub commands: Option<Vec<BTreeSet<String>>>,
}

fn subset(
    set: &BTreeSet<String>,
    set_name: &'static str,
    sup: &BTreeSet<String>,
    sup_name: &'static str,
) -> Result<(), ModelError> {
    match set.iter().find(|e| !sup.contains(*e)) {
        Some(e) => Err(ModelError::NotSubset {
            set: set_name,
            superset: sup_name,
            event: e.clone(),
        }),
        None => Ok(()),
    }
}

fn plant_events<'a>(names: impl IntoIterator<Item = &'a String>) -> BTreeSet<Event> {
    names.into_iter().map(|n| Event::Plant(n.clone())).collect()
}

impl AlphabetSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        for e in &self.events {
            check_plant_name(e)?;
        }
        subset(&self.controllable, "controllable", &self.events, "events")?;
        subset(&self.observable, "observable", &self.events, "events")?;
        subset(&self.edit_observable, "edit.observable", &self.observable, "observable")?;
        subset(&self.editable, "edit.editable", &self.edit_observable, "edit.observable")?;
        subset(&self.intruder_observable, "intruder.observable", &self.events, "events")?;
        if let Some(cmds) = &self.commands {
            if cmds.is_empty() {
                return Err(ModelError::EmptyCommandList);
            }
            let mut seen = BTreeSet::new();
            for c in cmds {
                let ev = Event::Command(c.clone());
                if c.is_empty() {
                    return Err(crate::event::EventNameError::EmptyCommand(ev.to_string()).into());
                }
                if let Some(e) = c.iter().find(|e| !self.controllable.contains(*e)) {
                    return Err(ModelError::CommandNotControllable {
                        command: ev.to_string(),
                        event: e.clone(),
                    });
                }
                if !seen.insert(c.clone()) {
                    return Err(ModelError::DuplicateCommand(ev.to_string()));
                }
            }
        }
        Ok(())
    }

    /// `Σuc`
    pub fn uncontrollable(&self) -> BTreeSet<String> {
        self.events.difference(&self.controllable).cloned().collect()
    }

    /// `Σuo`
    pub fn unobservable(&self) -> BTreeSet<String> {
        self.events.difference(&self.observable).cloned().collect()
    }

    /// `Σ` as events.
    pub fn sigma(&self) -> BTreeSet<Event> {
        plant_events(&self.events)
    }

    /// `Σ_{s,E}^#`
    pub fn edited_copies(&self) -> BTreeSet<Event> {
        self.editable.iter().map(|e| Event::Edited(e.clone())).collect()
    }

    /// `Σ ∪ Σ_{s,E}^# ∪ Γ ∪ {stop, decode}`.
    pub fn closed_loop_alphabet(&self, gamma: &[Event]) -> BTreeSet<Event> {
        let mut all = self.sigma();
        all.extend(self.edited_copies());
        all.extend(gamma.iter().cloned());
        all.insert(Event::Stop);
        all.insert(Event::Decode);
        all
    }

    /// Events the supervisor observes: `(Σo − Σ_{s,E}) ∪ Σ_{s,E}^#`.
    pub fn supervisor_sensed(&self) -> BTreeSet<Event> {
        let mut out = plant_events(self.observable.difference(&self.editable));
        out.extend(self.edited_copies());
        out
    }

    /// Events the intruder observes:
    /// `(Σ_{o,I} − Σ_{s,E}) ∪ (Σ_{o,I} ∩ Σ_{s,E})^#`.
    pub fn intruder_view(&self) -> BTreeSet<Event> {
        let mut out = plant_events(self.intruder_observable.difference(&self.editable));
        out.extend(
            self.intruder_observable
                .intersection(&self.editable)
                .map(|e| Event::Edited(e.clone())),
        );
        out
    }
}
