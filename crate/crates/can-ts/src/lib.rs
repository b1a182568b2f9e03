//! Transition systems of encoded agents: construction, the agent-level
//! quotient and exports.

pub mod build;
pub mod export;

pub use build::{build_full, default_budget, quotient_agent_level, Edge, Mode, Ts, DEFAULT_BUDGET};
pub use export::{export_dot, export_labels, export_transitions, summary, ExportError, Summary};
