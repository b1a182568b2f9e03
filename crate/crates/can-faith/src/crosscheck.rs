//! Agent-level successor sets of the reference semantics against those of
//! the rule encoding, over every configuration reachable within a depth.

use std::collections::BTreeSet;

use can_engine::Catalog;
use can_semantics::{agent_successors, reachable_configs, ConfigKey, Options};
use can_syntax::{print, AgentConfig, Name, Plan, PlanBody};
use can_term::{decode_config, initial_state};
use rayon::prelude::*;
use serde::Serialize;

use crate::brs::{brs_agent_successors, MicroError};

/// Differences found at one configuration.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Discrepancy {
    pub config: String,
    pub oracle: Vec<String>,
    pub encoded: Vec<String>,
    /// Oracle successors the encoding does not reach.
    pub missing: Vec<String>,
    /// Encoded successors the oracle does not have.
    pub extra: Vec<String>,
    /// Divergence, stuck intermediate state or undecodable successor.
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub name: String,
    pub depth: usize,
    pub configs_checked: usize,
    pub successors_compared: usize,
    pub max_micro_path: usize,
    /// `histogram[n]` counts encoded successors first reached after `n` reactions.
    pub path_length_histogram: Vec<usize>,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrosscheckReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.discrepancies.iter().any(|d| d.error.is_some())
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: depth {} configs {} successors {} max-path {} discrepancies {}",
            self.name,
            self.depth,
            self.configs_checked,
            self.successors_compared,
            self.max_micro_path,
            self.discrepancies.len()
        )
    }
}

fn erase_plan_ids(p: &PlanBody) -> PlanBody {
    let rec = |b: &PlanBody| Box::new(erase_plan_ids(b));
    match p {
        PlanBody::Nil | PlanBody::Act(_) | PlanBody::Event(_) => p.clone(),
        PlanBody::Seq(a, b) => PlanBody::Seq(rec(a), rec(b)),
        PlanBody::Conc(a, b) => PlanBody::Conc(rec(a), rec(b)),
        PlanBody::Try(a, b) => PlanBody::Try(rec(a), rec(b)),
        PlanBody::Goal(s, b, f) => PlanBody::Goal(s.clone(), rec(b), f.clone()),
        PlanBody::PlanSet(e, plans) => {
            let mut plans: Vec<Plan> = plans
                .iter()
                .map(|pl| Plan { id: Name::new("_"), body: erase_plan_ids(&pl.body), ..pl.clone() })
                .collect();
            plans.sort();
            PlanBody::PlanSet(e.clone(), plans)
        }
    }
}

/// Configuration identity as far as the term encoding can observe it:
/// alternatives in a pending plan set are compared without their plan ids,
/// since the encoded plans carry none.
pub fn observable_key(cfg: &AgentConfig) -> ConfigKey {
    let mut k = ConfigKey::of(cfg);
    for b in &mut k.intentions {
        *b = erase_plan_ids(b);
    }
    k.intentions.sort();
    k
}

/// One-line rendering of a configuration key.
pub fn key_string(k: &ConfigKey) -> String {
    let bs: Vec<String> = k.beliefs.iter().map(|l| l.to_string()).collect();
    let es: Vec<&str> = k.events.iter().map(|e| e.as_str()).collect();
    let mut out = format!("E={{{}}} B={{{}}}", es.join(", "), bs.join(", "));
    for i in &k.intentions {
        out.push_str(" | ");
        out.push_str(&print::body(i));
    }
    out
}

struct Outcome {
    discrepancy: Option<Discrepancy>,
    compared: usize,
    lengths: Vec<usize>,
}

fn check_one(cfg: &AgentConfig, cat: &Catalog, opts: Options, budget: usize) -> Outcome {
    let oracle: BTreeSet<ConfigKey> = agent_successors(cfg, opts).iter().map(|s| observable_key(&s.after)).collect();
    let config = key_string(&observable_key(cfg));
    let show = |s: &BTreeSet<ConfigKey>| s.iter().map(key_string).collect::<Vec<_>>();
    let fail = |msg: String| Outcome {
        discrepancy: Some(Discrepancy {
            config: config.clone(),
            oracle: show(&oracle),
            encoded: vec![],
            missing: vec![],
            extra: vec![],
            error: Some(msg),
        }),
        compared: 0,
        lengths: vec![],
    };
    let succ = match brs_agent_successors(&initial_state(cfg), cat, budget) {
        Ok(v) => v,
        Err(e @ MicroError::Divergence(_)) => return fail(e.to_string()),
        Err(e @ MicroError::Stuck { .. }) => return fail(e.to_string()),
    };
    let mut encoded = BTreeSet::new();
    let mut lengths = Vec::new();
    for s in &succ {
        match decode_config(&s.state, &cfg.actions) {
            Ok(c) => {
                encoded.insert(observable_key(&c));
                lengths.push(s.path.len());
            }
            Err(e) => return fail(format!("successor does not decode: {e}")),
        }
    }
    let compared = oracle.len().max(encoded.len());
    let discrepancy = (oracle != encoded).then(|| Discrepancy {
        config,
        oracle: show(&oracle),
        encoded: show(&encoded),
        missing: oracle.difference(&encoded).map(key_string).collect(),
        extra: encoded.difference(&oracle).map(key_string).collect(),
        error: None,
    });
    Outcome { discrepancy, compared, lengths }
}

/// Compares successor sets at every configuration the oracle reaches from
/// `cfg` within `depth` agent steps.
pub fn crosscheck(name: &str, cfg: &AgentConfig, depth: usize, cat: &Catalog, opts: Options, budget: usize) -> CrosscheckReport {
    let ex = reachable_configs(cfg, Some(depth), opts);
    let outcomes: Vec<Outcome> = ex.configs.par_iter().map(|c| check_one(c, cat, opts, budget)).collect();
    let mut hist = Vec::new();
    let mut compared = 0;
    let mut discrepancies = Vec::new();
    for o in outcomes {
        compared += o.compared;
        for n in o.lengths {
            if hist.len() <= n {
                hist.resize(n + 1, 0);
            }
            hist[n] += 1;
        }
        discrepancies.extend(o.discrepancy);
    }
    CrosscheckReport {
        name: name.to_string(),
        depth,
        configs_checked: ex.configs.len(),
        successors_compared: compared,
        max_micro_path: hist.len().saturating_sub(1),
        path_length_histogram: hist,
        discrepancies,
    }
}

/// Reference options matching a catalog's configuration.
pub fn oracle_options(cat: &Catalog) -> Options {
    let try_failure = match cat.options.try_failure {
        can_engine::TryFailure::StepBackup => can_semantics::TryFailure::StepBackup,
        can_engine::TryFailure::WaitFree => can_semantics::TryFailure::WaitFree,
    };
    Options { try_failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_ids_are_not_observable() {
        let a = can_syntax::parse_agent("intention 1: {e: P1: a <- (+b), P2: true <- (+c)}\n").unwrap();
        let b = can_syntax::parse_agent("intention 1: {e: Q: true <- (+c), R: a <- (+b)}\n").unwrap();
        assert_ne!(ConfigKey::of(&a), ConfigKey::of(&b));
        assert_eq!(observable_key(&a), observable_key(&b));
        let c = can_syntax::parse_agent("intention 1: {e: P1: a <- (+c)}\n").unwrap();
        assert_ne!(observable_key(&a), observable_key(&c));
    }
}
