//! Printer for the agent text format. Output re-parses to the same AST.

use std::fmt::Write;

use crate::ast::*;

pub fn formula(f: &Formula) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Conj(ls) => ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" & "),
    }
}

/// Operand of `?`: bare for a single literal or constant, parenthesized otherwise.
pub(crate) fn query_operand(f: &Formula) -> String {
    match f {
        Formula::Conj(ls) if ls.len() > 1 => format!("({})", formula(f)),
        _ => formula(f),
    }
}

fn lit_set(s: &std::collections::BTreeSet<Literal>) -> String {
    let v: Vec<String> = s.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

pub fn action(a: &ActionSpec) -> String {
    format!("action {}: {} <- +{} -{}", a.name, formula(&a.pre), lit_set(&a.add), lit_set(&a.del))
}

// Binding levels: |> (0) < || (1) < ; (2) < unit (3).
fn level(p: &PlanBody) -> u8 {
    match p {
        PlanBody::Try(..) => 0,
        PlanBody::Conc(..) => 1,
        PlanBody::Seq(..) => 2,
        _ => 3,
    }
}

fn body_at(p: &PlanBody, min: u8, out: &mut String) {
    if level(p) < min {
        out.push('(');
        body_at(p, 0, out);
        out.push(')');
        return;
    }
    match p {
        PlanBody::Nil => out.push_str("nil"),
        PlanBody::Act(a) => out.push_str(a.name.as_str()),
        PlanBody::Event(e) => out.push_str(e.as_str()),
        PlanBody::Seq(a, b) => {
            body_at(a, 3, out);
            out.push_str("; ");
            body_at(b, 2, out);
        }
        PlanBody::Conc(a, b) => {
            body_at(a, 2, out);
            out.push_str(" || ");
            body_at(b, 1, out);
        }
        PlanBody::Try(a, b) => {
            body_at(a, 1, out);
            out.push_str(" |> ");
            body_at(b, 0, out);
        }
        PlanBody::Goal(s, q, f) => {
            let _ = write!(out, "goal({}, ", formula(s));
            body_at(q, 0, out);
            let _ = write!(out, ", {})", formula(f));
        }
        PlanBody::PlanSet(e, plans) => {
            let _ = write!(out, "{{{}:", e);
            for (i, pl) in plans.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { ", " });
                let _ = write!(out, "{}: {} <- (", pl.id, formula(&pl.context));
                body_at(&pl.body, 0, out);
                out.push(')');
            }
            out.push('}');
        }
    }
}

pub fn body(p: &PlanBody) -> String {
    let mut s = String::new();
    body_at(p, 0, &mut s);
    s
}

pub fn plan(p: &Plan) -> String {
    format!("plan {}: {} : {} <- {}", p.id, p.trigger, formula(&p.context), body(&p.body))
}

/// Full agent file. Declared actions come first so names resolve on re-parse.
pub fn agent(cfg: &AgentConfig) -> String {
    let mut out = String::new();
    let bs: Vec<String> = cfg.beliefs.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(out, "beliefs: {}", bs.join(", "));
    let es: Vec<&str> = cfg.external_events.iter().map(|e| e.as_str()).collect();
    let _ = writeln!(out, "events: {}", es.join(", "));
    for a in &cfg.actions {
        let _ = writeln!(out, "{}", action(a));
    }
    for p in &cfg.plans {
        let _ = writeln!(out, "{}", plan(p));
    }
    for i in &cfg.intentions {
        let _ = writeln!(out, "intention {}: {}", i.id, body(&i.body));
    }
    out
}
