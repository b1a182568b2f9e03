//! Numbered, human-readable step listings.

use std::fmt::Write;

use can_syntax::{print, AgentConfig, PlanBody};

use crate::agent::AgentStep;
use crate::intention::IntentionStep;

/// `(n) P  --rule/premise/...-->  P'`
pub fn intention_trace(start: &PlanBody, steps: &[IntentionStep]) -> String {
    let mut out = String::new();
    let mut cur = start.clone();
    for (n, s) in steps.iter().enumerate() {
        let rules: Vec<&str> = s.derivation.iter().map(|r| r.name()).collect();
        let _ = writeln!(out, "({}) {}  --{}-->  {}", n + 1, print::body(&cur), rules.join("/"), print::body(&s.body));
        cur = s.body.clone();
    }
    out
}

pub fn config(cfg: &AgentConfig) -> String {
    let bs: Vec<String> = cfg.beliefs.iter().map(|l| l.to_string()).collect();
    let es: Vec<&str> = cfg.external_events.iter().map(|e| e.as_str()).collect();
    let mut out = format!("E={{{}}} B={{{}}}", es.join(", "), bs.join(", "));
    for i in &cfg.intentions {
        let _ = write!(out, " [{}] {}", i.id, print::body(&i.body));
    }
    out
}

pub fn agent_trace(start: &AgentConfig, steps: &[AgentStep]) -> String {
    let mut out = format!("(0) {}\n", config(start));
    for (n, s) in steps.iter().enumerate() {
        let via: Vec<&str> = s.derivation.iter().map(|r| r.name()).collect();
        let _ = writeln!(out, "  {} #{} {}", s.rule, s.intention, via.join("/"));
        let _ = writeln!(out, "({}) {}", n + 1, config(&s.after));
    }
    out
}
