//! Static configuration over boolean options.
//!
//! A `deps` file declares options, dependencies (`a -> b & c`), interfaces
//! with exactly one implementation (`i : x | y`) and per-option properties.
//! The model is encoded as a propositional formula; under a partial user
//! assignment, an inference engine computes which other options are forced
//! true or false. Complete, correct configurations are turned into `config.h`
//! and `config.mk` text.

#![no_std]

extern crate alloc;

pub mod dot;
pub mod encode;
pub mod formula;
pub mod generate;
pub mod heuristic;
pub mod inference;
pub mod model;
pub mod parser;
pub mod session;
pub mod solver;

pub use dot::{node_id, status_color, to_dot};
pub use encode::{encode_model, is_correct, violated_statements};
pub use formula::{Assignment, Formula, Lit, Valuation};
pub use generate::{generate_config_h, generate_config_mk, GenerateError};
pub use heuristic::{infer_heuristic, HeuristicEngine};
pub use inference::{Engine, InferenceResult, ResourceLimitExceeded, Verdict};
pub use model::{DepsModel, OptionId, Statement};
pub use parser::{parse_deps, ParseError};
pub use session::{NodeStatus, Session, SessionError};
pub use solver::{enumerate_configurations, explain_conflict, forced_sets, is_satisfiable, CompleteSolver, Conflict};
