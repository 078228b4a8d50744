//! Exhaustive and sampled checks of the automaton's local and global
//! properties, exact mixing measures, finite-horizon orbit search and the
//! escape-time census.

mod escape;
mod lemmas;
mod mixing;
mod orbit;

pub use escape::{escape_time_census, EscapeCensus, EscapeQuery};
pub use lemmas::{
    verify_det_table, verify_local_lemmas, verify_multiplication, verify_odometer,
    verify_reversibility,
};
pub use mixing::{mixing_bound, mixing_measure, MixingMethod, MixingQuery};
pub use orbit::{grid_resolution, orbit_stays_in, witness_search, OrbitQuery};

use serde::Serialize;
use std::time::Instant;

/// At most this many violations are listed in a report; all are counted.
pub const MAX_LISTED: usize = 16;

/// Outcome of one verification run. It passes iff no violation was found.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub parameters: serde_json::Value,
    pub checked: u64,
    pub violation_count: u64,
    /// The violations with the smallest indices, at most [`MAX_LISTED`].
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn without_timing(mut self) -> Report {
        self.elapsed_ms = None;
        self
    }
}

/// Running count of checks and violations; merging keeps the listed
/// violations with the smallest indices, so the result is schedule-free.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    checked: u64,
    violations: u64,
    listed: Vec<(u64, String)>,
}

impl Tally {
    pub(crate) fn check(mut self, index: u64, ok: bool, describe: impl FnOnce() -> String) -> Tally {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.listed.len() < MAX_LISTED || index < self.listed.last().map_or(u64::MAX, |l| l.0) {
                self.listed.push((index, describe()));
                self.listed.sort_by_key(|l| l.0);
                self.listed.truncate(MAX_LISTED);
            }
        }
        self
    }

    pub(crate) fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        self.listed.extend(other.listed);
        self.listed.sort_by_key(|l| l.0);
        self.listed.truncate(MAX_LISTED);
        self
    }

    pub(crate) fn into_report(self, name: &str, parameters: serde_json::Value, started: Instant) -> Report {
        Report {
            name: name.to_string(),
            parameters,
            checked: self.checked,
            violation_count: self.violations,
            violations: self.listed.into_iter().map(|l| l.1).collect(),
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
        }
    }
}
