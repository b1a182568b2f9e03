//! Rewriting engine for agent states: patterns with sites, conditions and
//! priorities, and the rule catalog for CAN agents.

pub mod catalog;
pub mod pattern;
pub mod rule;

pub use catalog::{catalog_text, Catalog, ConcMode, Options, Reaction, TryFailure, INTERLEAVING_RULES};
pub use pattern::{
    attr_of, find_occurrences, match_node, nodes_with_paths, occurs_in, with_attr, AttrPat, Bindings, KindPat, Nac,
    Occurrence, PNode, Scope, Value, ANON,
};
pub use rule::{parse_pattern, parse_rule, CtrlTpl, Rule, TItem, TNode};
