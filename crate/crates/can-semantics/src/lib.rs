//! Reference interpreter: the CAN derivation rules as successor-set functions.
//! Used as the oracle the term encoding is checked against.

pub mod agent;
pub mod explore;
pub mod intention;
pub mod trace;

pub use agent::{agent_successors, AgentRule, AgentStep, ConfigKey};
pub use explore::{reachable_configs, Exploration, Status};
pub use intention::{entails, intention_successors, is_blocked, revise, IRule, IntentionStep, Options, TryFailure};
