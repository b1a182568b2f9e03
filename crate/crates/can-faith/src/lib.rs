//! Cross-checks between the rule encoding and the reference semantics.

pub mod brs;
pub mod crosscheck;
pub mod generator;
pub mod golden;
pub mod graph;

pub use brs::{brs_agent_successors, MicroError, MicroSuccessor, MICRO_BUDGET};
pub use crosscheck::{crosscheck, key_string, observable_key, oracle_options, CrosscheckReport, Discrepancy};
pub use generator::{corpus_seeds, random_agent};
pub use golden::{golden_trace_check, golden_trace_file, GoldenError, GoldenPass, SET_OPS};
pub use graph::{compare_quotient, GraphComparison};
