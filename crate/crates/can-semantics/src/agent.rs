use std::collections::BTreeSet;
use std::fmt;

use can_syntax::{AgentConfig, Intention, Literal, Name, PlanBody};

use crate::intention::{intention_successors, IRule, Options};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AgentRule {
    Event,
    Step,
    Update,
}

impl AgentRule {
    pub fn name(self) -> &'static str {
        match self {
            AgentRule::Event => "A_event",
            AgentRule::Step => "A_step",
            AgentRule::Update => "A_update",
        }
    }
}

impl fmt::Display for AgentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AgentStep {
    pub rule: AgentRule,
    pub intention: u32,
    /// Intention-level derivation for `A_step`; empty otherwise.
    pub derivation: Vec<IRule>,
    pub after: AgentConfig,
}

/// Identity of a configuration for deduplication: intention ids are
/// bookkeeping only, so the intention base is compared as a multiset of bodies.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConfigKey {
    pub events: Vec<Name>,
    pub beliefs: BTreeSet<Literal>,
    pub intentions: Vec<PlanBody>,
}

impl ConfigKey {
    pub fn of(cfg: &AgentConfig) -> Self {
        let mut intentions: Vec<PlanBody> = cfg.intentions.iter().map(|i| i.body.clone()).collect();
        intentions.sort();
        ConfigKey { events: cfg.external_events.clone(), beliefs: cfg.beliefs.clone(), intentions }
    }
}

pub fn agent_successors(cfg: &AgentConfig, opts: Options) -> Vec<AgentStep> {
    let mut out = Vec::new();
    let mut seen_events: Vec<&Name> = Vec::new();
    for (k, e) in cfg.external_events.iter().enumerate() {
        if seen_events.contains(&e) {
            continue;
        }
        seen_events.push(e);
        let mut next = cfg.clone();
        next.external_events.remove(k);
        let id = cfg.next_intention_id();
        next.intentions.push(Intention { id, body: PlanBody::Event(e.clone()) });
        out.push(AgentStep { rule: AgentRule::Event, intention: id, derivation: vec![], after: next });
    }
    for (k, it) in cfg.intentions.iter().enumerate() {
        let steps = intention_successors(&cfg.beliefs, &it.body, &cfg.plans, opts);
        if steps.is_empty() {
            let mut next = cfg.clone();
            next.intentions.remove(k);
            out.push(AgentStep { rule: AgentRule::Update, intention: it.id, derivation: vec![], after: next });
        }
        for s in steps {
            let mut next = cfg.clone();
            next.beliefs = s.beliefs;
            next.intentions[k].body = s.body;
            out.push(AgentStep { rule: AgentRule::Step, intention: it.id, derivation: s.derivation, after: next });
        }
    }
    out
}
