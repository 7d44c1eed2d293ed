use alloc::collections::BTreeSet;
use core::fmt;

use crate::model::OptionId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
    /// The engine could not decide (the heuristic engine never claims
    /// satisfiability, and either engine reports this on resource limits).
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfiable => "satisfiable",
            Verdict::Unsatisfiable => "unsatisfiable",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Options forced by the model under a user assignment. Neither set contains
/// enforced options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceResult {
    pub implied_true: BTreeSet<OptionId>,
    pub implied_false: BTreeSet<OptionId>,
    pub verdict: Verdict,
    /// A clause or decision budget was exhausted; the sets are partial.
    pub limit_hit: bool,
}

impl InferenceResult {
    pub fn new(verdict: Verdict) -> Self {
        InferenceResult {
            implied_true: BTreeSet::new(),
            implied_false: BTreeSet::new(),
            verdict,
            limit_hit: false,
        }
    }

    pub fn implied(&self, id: OptionId) -> Option<bool> {
        if self.implied_true.contains(&id) {
            Some(true)
        } else if self.implied_false.contains(&id) {
            Some(false)
        } else {
            None
        }
    }
}

/// Which inference engine drives a session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Rewrite, distribute to CNF, read off unit clauses. Sound, incomplete.
    Heuristic,
    /// Exact forced sets via satisfiability queries.
    #[default]
    Complete,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Heuristic => "heuristic",
            Engine::Complete => "complete",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heuristic" => Ok(Engine::Heuristic),
            "complete" => Ok(Engine::Complete),
            _ => Err(UnknownEngine),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownEngine;

impl fmt::Display for UnknownEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("engine must be `heuristic` or `complete`")
    }
}

impl core::error::Error for UnknownEngine {}

/// A budget (clauses or search decisions) was exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceLimitExceeded {
    pub limit: u64,
}

impl fmt::Display for ResourceLimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "resource limit of {} exceeded", self.limit)
    }
}

impl core::error::Error for ResourceLimitExceeded {}
