//! Structural well-formedness: which entity may sit under which.

use crate::control::Kind;
use crate::term::{State, Term};

/// Positions a program node may occupy.
const PROGRAM: &[Kind] =
    &[Kind::PB, Kind::Intent, Kind::Seq, Kind::Cons, Kind::L, Kind::R, Kind::Goal, Kind::Try, Kind::Reduce];

fn allowed_parents(k: Kind) -> Vec<Kind> {
    use Kind::*;
    match k {
        Beliefs | Desires | Intentions | Plans => vec![],
        B => vec![Beliefs, Pre, Add, Del, SC, FC, Check],
        False => vec![Pre, SC, FC, Check, Beliefs],
        E => [&[Desires][..], PROGRAM].concat(),
        Act | Seq | Try | Conc | Goal => PROGRAM.to_vec(),
        PlanSet => [&[Plans][..], PROGRAM].concat(),
        Intent => vec![Intentions],
        Plan => vec![PlanSet],
        PB => vec![Plan],
        Pre => vec![Act, Plan],
        Add | Del => vec![Act, Beliefs],
        Cons => vec![Seq, Try],
        L | R => vec![Conc, Stash],
        SC | FC => vec![Goal],
        Check => vec![Beliefs],
        CheckRes => vec![Act, Plan, SC, FC],
        T | F => vec![CheckRes],
        CheckToken => vec![Plan],
        Reduce | ReduceF => PROGRAM.to_vec(),
        Stash => vec![Conc],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintError {
    pub path: Vec<usize>,
    pub message: String,
}

fn visit(t: &Term, parent: Option<Kind>, path: &mut Vec<usize>, out: &mut Vec<LintError>) {
    let k = t.kind();
    if let Some(p) = parent {
        if !allowed_parents(k).contains(&p) {
            out.push(LintError { path: path.clone(), message: format!("{k} under {p}") });
        }
    }
    if k.is_atomic() && !t.children.is_empty() {
        out.push(LintError { path: path.clone(), message: format!("atomic {k} has children") });
    }
    if k == Kind::Intent {
        for aux in [Kind::Reduce, Kind::ReduceF] {
            if t.count(aux) > 1 {
                out.push(LintError { path: path.clone(), message: format!("more than one {aux} in an intention") });
            }
        }
    }
    for (i, c) in t.children.iter().enumerate() {
        path.push(i);
        visit(c, Some(k), path, out);
        path.pop();
    }
}

/// All parent-constraint violations in `s`; empty when well formed.
pub fn lint(s: &State) -> Vec<LintError> {
    let mut out = Vec::new();
    let want = [Kind::Beliefs, Kind::Desires, Kind::Intentions, Kind::Plans];
    for (i, r) in s.regions.iter().enumerate() {
        if r.kind() != want[i] {
            out.push(LintError { path: vec![i], message: format!("region {i} is {}", r.kind()) });
        }
        let mut path = vec![i];
        visit(r, None, &mut path, &mut out);
    }
    out
}
