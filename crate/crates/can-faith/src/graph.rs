//! The agent-level quotient against the oracle's reachable graph.

use std::collections::{BTreeMap, BTreeSet};

use can_semantics::{reachable_configs, ConfigKey, Options, Status};
use can_syntax::AgentConfig;
use can_term::decode_config;
use can_ts::{Mode, Ts};
use serde::Serialize;

use crate::crosscheck::{key_string, observable_key};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GraphComparison {
    pub quotient_states: usize,
    pub quotient_edges: usize,
    pub oracle_states: usize,
    pub oracle_edges: usize,
    /// Quotient states that do not decode, or decode to an already seen configuration.
    pub undecodable: Vec<String>,
    pub missing_states: Vec<String>,
    pub extra_states: Vec<String>,
    pub missing_edges: Vec<(String, String)>,
    pub extra_edges: Vec<(String, String)>,
    pub isomorphic: bool,
}

/// Decodes every quotient state and checks that decoding is a bijection
/// onto the oracle's reachable configurations that carries edges onto edges.
pub fn compare_quotient(q: &Ts, cfg: &AgentConfig, opts: Options) -> GraphComparison {
    assert_eq!(q.mode, Mode::Quotient, "expects an agent-level quotient");
    let ex = reachable_configs(cfg, None, opts);
    let mut undecodable = Vec::new();
    let mut keys: Vec<Option<ConfigKey>> = Vec::with_capacity(q.len());
    let mut seen = BTreeSet::new();
    for (i, s) in q.states.iter().enumerate() {
        match decode_config(s, &cfg.actions) {
            Ok(c) => {
                let k = observable_key(&c);
                if !seen.insert(k.clone()) {
                    undecodable.push(format!("state {i} repeats {}", key_string(&k)));
                }
                keys.push(Some(k));
            }
            Err(e) => {
                undecodable.push(format!("state {i}: {e}"));
                keys.push(None);
            }
        }
    }
    let oracle: BTreeSet<ConfigKey> = ex.configs.iter().map(observable_key).collect();
    let ok: BTreeMap<usize, ConfigKey> = ex.configs.iter().map(observable_key).enumerate().collect();
    let pairs = |v: &mut dyn Iterator<Item = (Option<&ConfigKey>, Option<&ConfigKey>)>| -> BTreeSet<(ConfigKey, ConfigKey)> {
        v.filter_map(|(a, b)| Some((a?.clone(), b?.clone()))).collect()
    };
    let q_edges = pairs(&mut q.edges.iter().map(|e| (keys[e.src].as_ref(), keys[e.dst].as_ref())));
    let o_edges = pairs(&mut ex.edges.iter().map(|&(a, b, _)| (ok.get(&a), ok.get(&b))));
    let show = |s: &mut dyn Iterator<Item = &ConfigKey>| s.map(key_string).collect::<Vec<_>>();
    let show_e = |s: &mut dyn Iterator<Item = &(ConfigKey, ConfigKey)>| {
        s.map(|(a, b)| (key_string(a), key_string(b))).collect::<Vec<_>>()
    };
    let missing_states = show(&mut oracle.difference(&seen));
    let extra_states = show(&mut seen.difference(&oracle));
    let missing_edges = show_e(&mut o_edges.difference(&q_edges));
    let extra_edges = show_e(&mut q_edges.difference(&o_edges));
    let isomorphic = ex.status == Status::Closed
        && undecodable.is_empty()
        && missing_states.is_empty()
        && extra_states.is_empty()
        && missing_edges.is_empty()
        && extra_edges.is_empty();
    GraphComparison {
        quotient_states: q.len(),
        quotient_edges: q.edges.len(),
        oracle_states: ex.configs.len(),
        oracle_edges: ex.edges.len(),
        undecodable,
        missing_states,
        extra_states,
        missing_edges,
        extra_edges,
        isomorphic,
    }
}
