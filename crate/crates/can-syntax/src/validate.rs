//! Static checks on a parsed agent.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::*;
use crate::diag::Diagnostic;

/// Trigger graph: event -> events posted by the bodies of its relevant plans.
pub fn event_graph(cfg: &AgentConfig) -> BTreeMap<Name, BTreeSet<Name>> {
    let mut g: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for p in &cfg.plans {
        let mut evs = Vec::new();
        p.body.events(&mut evs);
        g.entry(p.trigger.clone()).or_default().extend(evs);
    }
    g
}

fn on_cycle(g: &BTreeMap<Name, BTreeSet<Name>>, start: &Name) -> bool {
    let mut stack: Vec<&Name> = g.get(start).map(|s| s.iter().collect()).unwrap_or_default();
    let mut seen = BTreeSet::new();
    while let Some(e) = stack.pop() {
        if e == start {
            return true;
        }
        if seen.insert(e) {
            if let Some(next) = g.get(e) {
                stack.extend(next.iter());
            }
        }
    }
    false
}

/// Errors for recursive plans; warnings for events nobody handles and for
/// actions whose add and delete sets overlap.
pub fn validate_agent(cfg: &AgentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let g = event_graph(cfg);
    for e in g.keys() {
        if on_cycle(&g, e) {
            out.push(Diagnostic::error(0, 0, format!("event `{e}` is reachable from its own plans (recursive plan library)")));
        }
    }
    for p in &cfg.plans {
        if !p.body.is_user() {
            out.push(Diagnostic::error(0, 0, format!("plan `{}` uses an internal construct in its body", p.id)));
        }
    }

    let triggers: BTreeSet<&Name> = cfg.plans.iter().map(|p| &p.trigger).collect();
    let mut posted = Vec::new();
    for e in &cfg.external_events {
        if !posted.contains(e) {
            posted.push(e.clone());
        }
    }
    for p in &cfg.plans {
        p.body.events(&mut posted);
    }
    for i in &cfg.intentions {
        i.body.events(&mut posted);
    }
    for e in &posted {
        if !triggers.contains(e) {
            out.push(Diagnostic::warning(0, 0, format!("event `{e}` has no relevant plans")));
        }
    }

    for a in &cfg.actions {
        let both: Vec<String> = a.add.intersection(&a.del).map(|l| l.to_string()).collect();
        if !both.is_empty() {
            out.push(Diagnostic::warning(
                0,
                0,
                format!("action `{}` both adds and deletes {}", a.name, both.join(", ")),
            ));
        }
    }
    out
}
