//! Std companion to `configforge-core`: saved-configuration files, graph
//! JSON, the HTTP service and the command-line front end.

pub mod cli;
pub mod config_file;
pub mod graph;
pub mod server;

pub use config_file::{parse_config, write_config, ConfigFileError};
pub use graph::{to_graph_json, Graph};
pub use server::{router, serve, AppState, GraphPayload};
