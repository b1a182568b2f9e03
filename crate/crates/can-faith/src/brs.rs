//! Agent-level successors of an encoded agent under the rule catalog.

use std::collections::{HashMap, VecDeque};

use can_engine::Catalog;
use can_term::{canonicalize, State};

/// An auxiliary-free state reached from the start, with the rule names of
/// a shortest micro-step path to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicroSuccessor {
    pub state: State,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MicroError {
    #[error("micro-step search exceeded {0} intermediate states")]
    Divergence(usize),
    #[error("no rule applies to an intermediate state after {}", .path.join(" "))]
    Stuck { state: Box<State>, path: Vec<String> },
}

/// Default bound on intermediate states explored per agent step.
pub const MICRO_BUDGET: usize = 100_000;

/// Breadth-first search over micro steps from an auxiliary-free state;
/// auxiliary-free states end a path. Successors are keyed canonically and
/// returned in discovery order.
pub fn brs_agent_successors(start: &State, cat: &Catalog, budget: usize) -> Result<Vec<MicroSuccessor>, MicroError> {
    let mut out: Vec<MicroSuccessor> = Vec::new();
    let mut found: HashMap<String, usize> = HashMap::new();
    let mut seen: HashMap<String, ()> = HashMap::new();
    let mut queue = VecDeque::from([(start.clone(), Vec::<String>::new())]);
    let mut first = true;
    while let Some((s, path)) = queue.pop_front() {
        let succ = cat.successors(&s);
        if succ.is_empty() && !first {
            return Err(MicroError::Stuck { state: Box::new(s), path });
        }
        first = false;
        for (name, t) in succ {
            let mut p = path.clone();
            p.push(name.to_string());
            let c = canonicalize(&t);
            if t.is_aux_free() {
                found.entry(c.key).or_insert_with(|| {
                    out.push(MicroSuccessor { state: c.state, path: p });
                    out.len() - 1
                });
            } else if seen.insert(c.key, ()).is_none() {
                if seen.len() > budget {
                    return Err(MicroError::Divergence(budget));
                }
                queue.push_back((c.state, p));
            }
        }
    }
    Ok(out)
}
