//! Replays the rule catalog along a recorded reduction and compares the
//! intention base against numbered snapshots.
//!
//! Trace files are line based:
//!
//! ```text
//! # comment
//! model conference.can     agent file, relative to the trace
//! adopt e1                 moves a pending event into a new intention
//! (1) Intent.E{e1}         expected intentions, tokens and correlation ids elided
//! -> intention_step        rules fired to reach the next snapshot
//! (2) Intent.Reduce.E{e1}
//! -> set_ops* select_plan_T
//! ```
//!
//! `set_ops*` fires belief-set operations until none is enabled. Any other
//! name must be among the enabled reactions; its first occurrence fires.

use std::path::Path;

use can_engine::Catalog;
use can_syntax::{parse_agent, AgentConfig, Intention, Name, PlanBody};
use can_term::{initial_state, parse_forest, print_forest, term_key, Kind, PrintOpts, State, Term, INTENTIONS};

/// Rules matched by `set_ops*`.
pub const SET_OPS: [&str; 9] =
    ["check_T", "check_F", "check_end", "add_in", "add_notin", "add_end", "del_in", "del_notin", "delete_end"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GoldenError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cannot load agent: {0}")]
    Model(String),
    #[error("step ({step}): `{rule}` is not enabled; enabled: {}", .enabled.join(", "))]
    NotEnabled { step: usize, rule: String, enabled: Vec<String> },
    #[error("step ({step}) differs\n  expected: {expected}\n  actual:   {actual}")]
    Diverged { step: usize, expected: String, actual: String },
}

impl GoldenError {
    /// Snapshot number where replay went wrong, if it got that far.
    pub fn step(&self) -> Option<usize> {
        match self {
            GoldenError::NotEnabled { step, .. } | GoldenError::Diverged { step, .. } => Some(*step),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenPass {
    pub snapshots: usize,
    /// Every rule fired, in order.
    pub fired: Vec<String>,
}

enum Line {
    Snapshot { n: usize, text: String, line: usize },
    Rules(Vec<String>),
}

/// Drops check tokens and correlation ids.
fn strip(t: &Term) -> Term {
    let ctrl = match t.ctrl.corr() {
        Some(_) => t.ctrl.with_corr(0),
        None => t.ctrl.clone(),
    };
    Term::new(ctrl, t.children.iter().filter(|c| c.kind() != Kind::CheckToken).map(strip).collect())
}

fn forest_key(ts: &[Term]) -> String {
    let mut ks: Vec<String> = ts.iter().map(|t| term_key(&strip(t))).collect();
    ks.sort();
    ks.join(" | ")
}

fn intentions(s: &State) -> &[Term] {
    &s.regions[INTENTIONS].children
}

/// Replays `trace`; `load` resolves the `model` line.
pub fn golden_trace_check(
    trace: &str,
    load: &dyn Fn(&str) -> Result<String, String>,
    cat: &Catalog,
) -> Result<GoldenPass, GoldenError> {
    let mut cfg = AgentConfig::default();
    let mut lines = Vec::new();
    for (i, raw) in trace.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let fmt = |m: &str| GoldenError::Format { line, message: m.to_string() };
        if let Some(path) = l.strip_prefix("model ") {
            let text = load(path.trim()).map_err(GoldenError::Model)?;
            cfg = parse_agent(&text).map_err(|d| GoldenError::Model(d.iter().map(|d| d.render(path)).collect::<Vec<_>>().join("\n")))?;
        } else if let Some(e) = l.strip_prefix("adopt ") {
            let e = Name::new(e.trim());
            let k = cfg.external_events.iter().position(|x| *x == e).ok_or_else(|| fmt("event is not pending"))?;
            cfg.external_events.remove(k);
            let id = cfg.next_intention_id();
            cfg.intentions.push(Intention { id, body: PlanBody::Event(e) });
        } else if let Some(rest) = l.strip_prefix("->") {
            lines.push(Line::Rules(rest.split_whitespace().map(String::from).collect()));
        } else if let Some(rest) = l.strip_prefix('(') {
            let (n, text) = rest.split_once(')').ok_or_else(|| fmt("expected `(n) term`"))?;
            let n = n.trim().parse().map_err(|_| fmt("bad snapshot number"))?;
            lines.push(Line::Snapshot { n, text: text.trim().to_string(), line });
        } else {
            return Err(fmt("expected `model`, `adopt`, `(n)` or `->`"));
        }
    }

    let mut s = initial_state(&cfg);
    let mut fired = Vec::new();
    let mut snapshots = 0;
    let mut last = 0;
    for l in lines {
        match l {
            Line::Rules(rules) => {
                for r in rules {
                    if r == "set_ops*" {
                        while let Some(x) = cat.enabled_reactions(&s).into_iter().find(|x| SET_OPS.contains(&x.rule.name.as_str())) {
                            fired.push(x.rule.name.clone());
                            s = x.apply(&s);
                        }
                        continue;
                    }
                    let enabled = cat.enabled_reactions(&s);
                    match enabled.iter().find(|x| x.rule.name == r) {
                        Some(x) => {
                            fired.push(r);
                            s = x.apply(&s);
                        }
                        None => {
                            return Err(GoldenError::NotEnabled {
                                step: last + 1,
                                rule: r,
                                enabled: enabled.iter().map(|x| x.rule.name.clone()).collect(),
                            })
                        }
                    }
                }
            }
            Line::Snapshot { n, text, line } => {
                let shapes = parse_forest(&text).map_err(|e| GoldenError::Format { line, message: e.to_string() })?;
                let expected: Vec<Term> = shapes
                    .iter()
                    .map(|sh| sh.to_term())
                    .collect::<Option<_>>()
                    .ok_or(GoldenError::Format { line, message: "sites are not allowed in snapshots".into() })?;
                let actual = intentions(&s);
                if forest_key(&expected) != forest_key(actual) {
                    return Err(GoldenError::Diverged {
                        step: n,
                        expected: print_forest(&expected, &PrintOpts::terse()),
                        actual: print_forest(actual, &PrintOpts::terse()),
                    });
                }
                snapshots += 1;
                last = n;
            }
        }
    }
    Ok(GoldenPass { snapshots, fired })
}

/// Reads a trace file; `model` paths resolve against its directory.
pub fn golden_trace_file(path: &Path, cat: &Catalog) -> Result<GoldenPass, GoldenError> {
    let text = std::fs::read_to_string(path).map_err(|e| GoldenError::Model(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    golden_trace_check(&text, &|p| std::fs::read_to_string(dir.join(p)).map_err(|e| format!("{p}: {e}")), cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshots_ignore_tokens_and_correlation_ids() {
        let a = can_term::parse_forest("Intent.Act.(CheckRes{3}.1 | Pre.1)").unwrap();
        let b = can_term::parse_forest("Intent.Act.(Pre.1 | CheckRes.1)").unwrap();
        let t = |v: Vec<can_term::Shape>| v.iter().map(|s| s.to_term().unwrap()).collect::<Vec<_>>();
        assert_eq!(forest_key(&t(a)), forest_key(&t(b)));
    }

    #[test]
    fn malformed_lines_are_reported() {
        let cat = Catalog::standard();
        let err = golden_trace_check("step one\n", &|_| Err(String::new()), &cat).unwrap_err();
        assert_eq!(err, GoldenError::Format { line: 1, message: "expected `model`, `adopt`, `(n)` or `->`".into() });
        let err = golden_trace_check("adopt e9\n", &|_| Err(String::new()), &cat).unwrap_err();
        assert!(matches!(err, GoldenError::Format { line: 1, .. }));
    }
}
