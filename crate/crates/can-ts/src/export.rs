//! Dot, explicit DTMC and summary exports.

use std::fmt::Write;

use crate::build::Ts;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("the transition system is not closed")]
    NotClosed,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Summary {
    pub states: usize,
    pub transitions: usize,
    pub closed: bool,
    pub build_ms: u128,
}

pub fn summary(ts: &Ts) -> Summary {
    Summary { states: ts.len(), transitions: ts.edges.len(), closed: ts.closed, build_ms: ts.build_ms }
}

/// Nodes in index order, edges in construction order, rule names as labels.
pub fn export_dot(ts: &Ts) -> String {
    let mut out = String::from("digraph ts {\n");
    for i in 0..ts.len() {
        let shape = if i == ts.initial() { ", shape=doublecircle" } else { "" };
        writeln!(out, "  {i} [label=\"{i}\"{shape}];").unwrap();
    }
    for e in &ts.edges {
        writeln!(out, "  {} -> {} [label=\"{}\"];", e.src, e.dst, e.rule).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Transition matrix with a uniform split over distinct successors;
/// terminal states loop to themselves.
pub fn export_transitions(ts: &Ts) -> Result<String, ExportError> {
    if !ts.closed {
        return Err(ExportError::NotClosed);
    }
    let succ = ts.successors();
    let rows: Vec<Vec<(usize, f64)>> = succ
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.is_empty() {
                vec![(i, 1.0)]
            } else {
                let mut s = s.clone();
                s.sort_unstable();
                let p = 1.0 / s.len() as f64;
                s.into_iter().map(|d| (d, p)).collect()
            }
        })
        .collect();
    let n: usize = rows.iter().map(Vec::len).sum();
    let mut out = format!("{} {}\n", ts.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for (d, p) in row {
            writeln!(out, "{i} {d} {p}").unwrap();
        }
    }
    Ok(out)
}

/// Label file: `init` and `deadlock` first, then the given labels, each
/// with the states it holds in.
pub fn export_labels(ts: &Ts, labels: &[(String, Vec<usize>)]) -> String {
    let mut names = vec!["init".to_string(), "deadlock".to_string()];
    names.extend(labels.iter().map(|(n, _)| n.clone()));
    let mut per_state: Vec<Vec<usize>> = vec![Vec::new(); ts.len()];
    per_state[ts.initial()].push(0);
    for t in ts.terminals() {
        per_state[t].push(1);
    }
    for (k, (_, states)) in labels.iter().enumerate() {
        for &s in states {
            per_state[s].push(k + 2);
        }
    }
    let header: Vec<String> = names.iter().enumerate().map(|(i, n)| format!("{i}=\"{n}\"")).collect();
    let mut out = header.join(" ");
    out.push('\n');
    for (s, ids) in per_state.iter_mut().enumerate() {
        if ids.is_empty() {
            continue;
        }
        ids.sort_unstable();
        let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
        writeln!(out, "{s}: {}", ids.join(" ")).unwrap();
    }
    out
}
