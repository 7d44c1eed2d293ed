//! Interactive configuration state: user enforcements, the derived status
//! of every option, and the completeness gate for saving.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::encode::is_correct;
use crate::formula::{Assignment, Formula, Valuation};
use crate::heuristic::HeuristicEngine;
use crate::inference::{Engine, InferenceResult, Verdict};
use crate::model::{DepsModel, OptionId};
use crate::solver::CompleteSolver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    EnforcedTrue,
    EnforcedFalse,
    ImpliedTrue,
    ImpliedFalse,
    Normal,
}

impl NodeStatus {
    pub const ALL: [NodeStatus; 5] = [
        NodeStatus::EnforcedTrue,
        NodeStatus::EnforcedFalse,
        NodeStatus::ImpliedTrue,
        NodeStatus::ImpliedFalse,
        NodeStatus::Normal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::EnforcedTrue => "enforced_true",
            NodeStatus::EnforcedFalse => "enforced_false",
            NodeStatus::ImpliedTrue => "implied_true",
            NodeStatus::ImpliedFalse => "implied_false",
            NodeStatus::Normal => "normal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|st| st.as_str() == s)
    }

    /// The value this status pins, if any.
    pub fn value(self) -> Option<bool> {
        match self {
            NodeStatus::EnforcedTrue | NodeStatus::ImpliedTrue => Some(true),
            NodeStatus::EnforcedFalse | NodeStatus::ImpliedFalse => Some(false),
            NodeStatus::Normal => None,
        }
    }

    pub fn is_enforced(self) -> bool {
        matches!(self, NodeStatus::EnforcedTrue | NodeStatus::EnforcedFalse)
    }

    pub fn is_implied(self) -> bool {
        matches!(self, NodeStatus::ImpliedTrue | NodeStatus::ImpliedFalse)
    }
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionError {
    UnknownOption(String),
    /// Options that are neither enforced nor implied.
    IncompleteConfiguration { free: Vec<String> },
    ConflictingConfiguration,
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionError::UnknownOption(name) => write!(f, "unknown option `{}`", name),
            SessionError::IncompleteConfiguration { free } => {
                write!(f, "configuration is incomplete; unassigned: {}", free.join(", "))
            }
            SessionError::ConflictingConfiguration => {
                f.write_str("the enforced values are impossible to satisfy")
            }
        }
    }
}

impl core::error::Error for SessionError {}

/// One configuration session over a model.
#[derive(Clone, Debug)]
pub struct Session {
    model: DepsModel,
    solver: CompleteSolver,
    heuristic: HeuristicEngine,
    assignment: Assignment,
    engine: Engine,
    last_result: InferenceResult,
    statuses: Vec<NodeStatus>,
}

impl Session {
    pub fn new(model: DepsModel) -> Self {
        Self::with_engine(model, Engine::Complete)
    }

    pub fn with_engine(model: DepsModel, engine: Engine) -> Self {
        let solver = CompleteSolver::for_model(&model);
        let mut session = Session {
            statuses: Vec::new(),
            model,
            solver,
            heuristic: HeuristicEngine::default(),
            assignment: Assignment::new(),
            engine,
            last_result: InferenceResult::new(Verdict::Unknown),
        };
        session.refresh();
        session
    }

    pub fn model(&self) -> &DepsModel {
        &self.model
    }

    pub fn formula(&self) -> &Formula {
        self.solver.formula()
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn last_result(&self) -> &InferenceResult {
        &self.last_result
    }

    pub fn statuses(&self) -> &[NodeStatus] {
        &self.statuses
    }

    pub fn status(&self, id: OptionId) -> NodeStatus {
        self.statuses[id.index()]
    }

    /// The enforced values are impossible to satisfy.
    pub fn conflict(&self) -> bool {
        self.last_result.verdict == Verdict::Unsatisfiable
    }

    /// Every option is enforced or implied and there is no conflict.
    pub fn is_complete(&self) -> bool {
        !self.conflict() && self.statuses.iter().all(|s| *s != NodeStatus::Normal)
    }

    pub fn lookup(&self, name: &str) -> Result<OptionId, SessionError> {
        self.model
            .lookup(name)
            .ok_or_else(|| SessionError::UnknownOption(name.to_string()))
    }

    fn check(&self, id: OptionId) -> Result<(), SessionError> {
        if id.index() < self.model.len() {
            Ok(())
        } else {
            Err(SessionError::UnknownOption(alloc::format!("#{}", id.index())))
        }
    }

    /// Cycles the option through enforced true, enforced false and
    /// unenforced, then re-runs inference.
    pub fn click(&mut self, id: OptionId) -> Result<(), SessionError> {
        self.check(id)?;
        let next = match self.assignment.get(id) {
            None => Some(true),
            Some(true) => Some(false),
            Some(false) => None,
        };
        self.assignment.set(id, next);
        self.refresh();
        Ok(())
    }

    pub fn click_name(&mut self, name: &str) -> Result<(), SessionError> {
        let id = self.lookup(name)?;
        self.click(id)
    }

    /// Sets an enforcement directly.
    pub fn enforce(&mut self, id: OptionId, value: Option<bool>) -> Result<(), SessionError> {
        self.check(id)?;
        self.assignment.set(id, value);
        self.refresh();
        Ok(())
    }

    /// Replaces every enforcement at once with a single inference run.
    pub fn set_assignment(&mut self, assignment: Assignment) -> Result<(), SessionError> {
        for (id, _) in assignment.iter() {
            self.check(id)?;
        }
        self.assignment = assignment;
        self.refresh();
        Ok(())
    }

    pub fn reset(&mut self) {
        self.assignment = Assignment::new();
        self.refresh();
    }

    pub fn set_engine(&mut self, engine: Engine) {
        if engine != self.engine {
            self.engine = engine;
            self.refresh();
        }
    }

    fn refresh(&mut self) {
        self.last_result = match self.engine {
            Engine::Heuristic => self.heuristic.infer(self.solver.formula(), &self.assignment),
            Engine::Complete => match self.solver.forced_sets(&self.assignment) {
                Ok(result) => result,
                Err(_) => {
                    let mut r = InferenceResult::new(Verdict::Unknown);
                    r.limit_hit = true;
                    r
                }
            },
        };
        let conflict = self.conflict();
        self.statuses = self
            .model
            .options()
            .map(|id| match self.assignment.get(id) {
                Some(true) => NodeStatus::EnforcedTrue,
                Some(false) => NodeStatus::EnforcedFalse,
                None if conflict => NodeStatus::Normal,
                None => match self.last_result.implied(id) {
                    Some(true) => NodeStatus::ImpliedTrue,
                    Some(false) => NodeStatus::ImpliedFalse,
                    None => NodeStatus::Normal,
                },
            })
            .collect();
    }

    pub fn free_options(&self) -> impl Iterator<Item = OptionId> + '_ {
        self.model
            .options()
            .filter(|id| self.statuses[id.index()] == NodeStatus::Normal)
    }

    /// The total configuration given by enforced and implied values.
    pub fn save(&self) -> Result<Valuation, SessionError> {
        if self.conflict() {
            return Err(SessionError::ConflictingConfiguration);
        }
        let free: Vec<String> = self
            .free_options()
            .map(|id| self.model.name(id).to_string())
            .collect();
        if !free.is_empty() {
            return Err(SessionError::IncompleteConfiguration { free });
        }
        let valuation = Valuation(
            self.statuses
                .iter()
                .map(|s| s.value().unwrap_or(false))
                .collect(),
        );
        if !is_correct(&self.model, &valuation) {
            return Err(SessionError::ConflictingConfiguration);
        }
        Ok(valuation)
    }
}
