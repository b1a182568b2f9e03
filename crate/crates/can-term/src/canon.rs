//! Canonical keys: equal keys iff the states are equal as unordered trees,
//! up to meta attributes and renaming of correlation ids.

use std::collections::HashMap;
use std::fmt::Write;

use crate::control::Control;
use crate::term::{State, Term, BELIEFS, DESIRES, INTENTIONS, PLANS};

/// Id given to a correlation that no longer pairs two nodes. Fresh
/// allocation never reaches it.
pub const DANGLING: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
enum CorrMode {
    Masked,
    Exact,
}

fn head(ctrl: &Control, mode: CorrMode, out: &mut String) {
    out.push_str(ctrl.kind().name());
    match ctrl {
        Control::B(l) => {
            let _ = write!(out, "({l})");
        }
        Control::E(e) | Control::PlanSet(e) => {
            let _ = write!(out, "{{{e}}}");
        }
        Control::Check(l) | Control::CheckRes(l) => match (mode, *l) {
            (_, DANGLING) => out.push_str("{_}"),
            (CorrMode::Masked, _) => out.push_str("{?}"),
            (CorrMode::Exact, l) => {
                let _ = write!(out, "{{{l}}}");
            }
        },
        _ => {}
    }
}

fn key_of(t: &Term, mode: CorrMode) -> String {
    let mut out = String::new();
    head(&t.ctrl, mode, &mut out);
    if !t.children.is_empty() {
        let mut ks: Vec<String> = t.children.iter().map(|c| key_of(c, mode)).collect();
        ks.sort();
        out.push('(');
        out.push_str(&ks.join(","));
        out.push(')');
    }
    out
}

/// Key of a single subtree, ignoring meta; correlation ids kept as is.
pub fn term_key(t: &Term) -> String {
    key_of(t, CorrMode::Exact)
}

/// Children in key order, with `mode` keys.
fn sorted_children(t: &Term, mode: CorrMode) -> Vec<&Term> {
    let mut ch: Vec<(String, &Term)> = t.children.iter().map(|c| (key_of(c, mode), c)).collect();
    ch.sort_by(|a, b| a.0.cmp(&b.0));
    ch.into_iter().map(|(_, c)| c).collect()
}

fn first_occurrence(t: &Term, order: &mut Vec<u32>) {
    if let Some(l) = t.ctrl.corr() {
        if l != DANGLING && !order.contains(&l) {
            order.push(l);
        }
    }
    for c in sorted_children(t, CorrMode::Masked) {
        first_occurrence(c, order);
    }
}

#[derive(Clone, Debug)]
pub struct Canonical {
    /// The input with correlation ids normalized; storage order unchanged.
    pub state: State,
    pub key: String,
}

/// Normalizes correlation ids and computes the canonical key.
pub fn canonicalize(s: &State) -> Canonical {
    let mut state = s.clone();
    let mut uses: HashMap<u32, usize> = HashMap::new();
    state.walk(&mut |t| {
        if let Some(l) = t.ctrl.corr() {
            *uses.entry(l).or_default() += 1;
        }
    });
    if !uses.is_empty() {
        state.walk_mut(&mut |t| {
            if let Some(l) = t.ctrl.corr() {
                if uses[&l] == 1 {
                    t.ctrl = t.ctrl.with_corr(DANGLING);
                }
            }
        });
        let mut order = Vec::new();
        for r in [INTENTIONS, PLANS, DESIRES, BELIEFS] {
            first_occurrence(&state.regions[r], &mut order);
        }
        let rename: HashMap<u32, u32> = order.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
        state.walk_mut(&mut |t| {
            if let Some(l) = t.ctrl.corr() {
                if let Some(&n) = rename.get(&l) {
                    t.ctrl = t.ctrl.with_corr(n);
                }
            }
        });
    }
    let key = state.regions.iter().map(|r| key_of(r, CorrMode::Exact)).collect::<Vec<_>>().join("||");
    Canonical { state, key }
}

pub fn canonical_key(s: &State) -> String {
    canonicalize(s).key
}
