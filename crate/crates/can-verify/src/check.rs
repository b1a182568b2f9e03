//! Fixpoint labelling over a transition system whose terminal states are
//! given self-loops.

use std::collections::{BTreeMap, VecDeque};

use can_ts::Ts;

use crate::ctl::Ctl;
use crate::props::{pattern_holds, PropertyFile};
use crate::VerifyError;

struct Graph {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Graph {
    fn new(succ: Vec<Vec<usize>>) -> Graph {
        let mut pred = vec![Vec::new(); succ.len()];
        for (s, ts) in succ.iter().enumerate() {
            for &t in ts {
                pred[t].push(s);
            }
        }
        Graph { succ, pred }
    }

    fn len(&self) -> usize {
        self.succ.len()
    }

    fn ex(&self, a: &[bool]) -> Vec<bool> {
        self.succ.iter().map(|ts| ts.iter().any(|&t| a[t])).collect()
    }

    /// Least fixpoint of `b | (a & EX z)`.
    fn eu(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let mut z = b.to_vec();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| z[i]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &self.pred[s] {
                if !z[p] && a[p] {
                    z[p] = true;
                    queue.push_back(p);
                }
            }
        }
        z
    }

    /// Least fixpoint of `b | (a & AX z)`; every state has a successor.
    fn au(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let mut z = b.to_vec();
        let mut left: Vec<usize> = self.succ.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| z[i]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &self.pred[s] {
                left[p] -= 1;
                if left[p] == 0 && !z[p] && a[p] {
                    z[p] = true;
                    queue.push_back(p);
                }
            }
        }
        z
    }

    /// Greatest fixpoint of `a & EX z`.
    fn eg(&self, a: &[bool]) -> Vec<bool> {
        let mut z = a.to_vec();
        let mut live: Vec<usize> = self.succ.iter().map(|ts| ts.iter().filter(|&&t| z[t]).count()).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| z[i] && live[i] == 0).collect();
        while let Some(s) = queue.pop_front() {
            if !z[s] {
                continue;
            }
            z[s] = false;
            for &p in &self.pred[s] {
                if z[p] {
                    live[p] -= 1;
                    if live[p] == 0 {
                        queue.push_back(p);
                    }
                }
            }
        }
        z
    }

    /// Shortest path from `from` to a state in `target` moving through `via`.
    fn path_to(&self, from: usize, target: &[bool], via: &[bool]) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            if target[s] {
                let mut path = vec![s];
                let mut c = s;
                while c != from {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            if !via[s] {
                continue;
            }
            for &t in &self.succ[s] {
                if prev[t] == usize::MAX {
                    prev[t] = s;
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Path from `from` that stays inside `inside` until it revisits a state.
    fn lasso(&self, from: usize, inside: &[bool]) -> Vec<usize> {
        let mut path = vec![from];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut s = from;
        while let Some(&t) = self.succ[s].iter().find(|&&t| inside[t]) {
            path.push(t);
            if seen[t] {
                break;
            }
            seen[t] = true;
            s = t;
        }
        path
    }
}

/// A transition system with pattern labels and totalized successors.
pub struct Labelled<'a> {
    pub ts: &'a Ts,
    pub labels: BTreeMap<String, Vec<bool>>,
    g: Graph,
}

impl Labelled<'_> {
    pub fn holding(&self, name: &str) -> Vec<usize> {
        self.labels.get(name).map(|v| (0..v.len()).filter(|&i| v[i]).collect()).unwrap_or_default()
    }
}

/// Labels every state with the patterns of `file` that occur in it.
pub fn label_states<'a>(ts: &'a Ts, file: &PropertyFile) -> Result<Labelled<'a>, VerifyError> {
    let mut labels = BTreeMap::new();
    for (name, p) in &file.patterns {
        let v = ts.states.iter().map(|s| pattern_holds(p, s, file)).collect::<Result<Vec<_>, _>>()?;
        labels.insert(name.clone(), v);
    }
    Ok(with_labels(ts, labels))
}

/// Attaches precomputed labels, one flag per state.
pub fn with_labels(ts: &Ts, labels: BTreeMap<String, Vec<bool>>) -> Labelled<'_> {
    let mut succ = ts.successors();
    for (i, s) in succ.iter_mut().enumerate() {
        if s.is_empty() {
            s.push(i);
        }
    }
    Labelled { ts, labels, g: Graph::new(succ) }
}

fn not(a: &[bool]) -> Vec<bool> {
    a.iter().map(|x| !x).collect()
}

fn and(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

/// States satisfying `f`.
pub fn sat(l: &Labelled, f: &Ctl) -> Result<Vec<bool>, VerifyError> {
    let n = l.g.len();
    let all = vec![true; n];
    Ok(match f {
        Ctl::True => all,
        Ctl::False => vec![false; n],
        Ctl::Atom(a) => l.labels.get(a).cloned().ok_or_else(|| VerifyError::UnknownPattern(a.clone()))?,
        Ctl::Not(a) => not(&sat(l, a)?),
        Ctl::And(a, b) => and(&sat(l, a)?, &sat(l, b)?),
        Ctl::Or(a, b) => sat(l, a)?.iter().zip(sat(l, b)?).map(|(x, y)| *x || y).collect(),
        Ctl::EX(a) => l.g.ex(&sat(l, a)?),
        Ctl::AX(a) => not(&l.g.ex(&not(&sat(l, a)?))),
        Ctl::EF(a) => l.g.eu(&all, &sat(l, a)?),
        Ctl::AF(a) => l.g.au(&all, &sat(l, a)?),
        Ctl::EG(a) => l.g.eg(&sat(l, a)?),
        Ctl::AG(a) => not(&l.g.eu(&all, &not(&sat(l, a)?))),
        Ctl::EU(a, b) => l.g.eu(&sat(l, a)?, &sat(l, b)?),
        Ctl::AU(a, b) => l.g.au(&sat(l, a)?, &sat(l, b)?),
        Ctl::AGF(a) => {
            let af = l.g.au(&all, &sat(l, a)?);
            not(&l.g.eu(&all, &not(&af)))
        }
        Ctl::EFNext(a, b) => {
            let now = and(&sat(l, a)?, &l.g.ex(&sat(l, b)?));
            l.g.eu(&all, &now)
        }
        Ctl::AFNext(a, b) => {
            let (pg, target) = next_product(l, &sat(l, a)?, &sat(l, b)?);
            let z = pg.au(&vec![true; pg.len()], &target);
            (0..n).map(|s| z[2 * s]).collect()
        }
    })
}

/// Product with a flag recording whether the previous state satisfied `a`;
/// state `2s + flag`. Target states have the flag set and satisfy `b`.
fn next_product(l: &Labelled, a: &[bool], b: &[bool]) -> (Graph, Vec<bool>) {
    let n = l.g.len();
    let succ = (0..2 * n)
        .map(|p| {
            let s = p / 2;
            l.g.succ[s].iter().map(|&t| 2 * t + a[s] as usize).collect()
        })
        .collect();
    let target = (0..2 * n).map(|p| p % 2 == 1 && b[p / 2]).collect();
    (Graph::new(succ), target)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub formula: String,
    pub mode: String,
    pub verdict: bool,
    /// State indices from the initial state: a witness when an existential
    /// formula holds, a counterexample when a universal one fails (a path
    /// ending in a repeated state is a loop). Empty when not applicable.
    pub witness_or_counterexample_path: Vec<usize>,
}

/// Checks `f` at the initial state of a closed system.
pub fn check_ctl(l: &Labelled, f: &Ctl) -> Result<Verdict, VerifyError> {
    if !l.ts.closed {
        return Err(VerifyError::NotClosed);
    }
    let init = l.ts.initial();
    let holds = sat(l, f)?[init];
    let all = vec![true; l.g.len()];
    let path = match (f, holds) {
        (Ctl::EF(a), true) => l.g.path_to(init, &sat(l, a)?, &all),
        (Ctl::EU(a, b), true) => l.g.path_to(init, &sat(l, b)?, &sat(l, a)?),
        (Ctl::AG(a), false) => l.g.path_to(init, &not(&sat(l, a)?), &all),
        (Ctl::AF(a), false) => Some(l.g.lasso(init, &l.g.eg(&not(&sat(l, a)?)))),
        (Ctl::EG(a), true) => Some(l.g.lasso(init, &sat(l, a)?)),
        (Ctl::AGF(a), false) => {
            let avoid = l.g.eg(&not(&sat(l, a)?));
            l.g.path_to(init, &avoid, &all).map(|mut p| {
                let last = p.pop().unwrap();
                p.extend(l.g.lasso(last, &avoid));
                p
            })
        }
        (Ctl::EX(a), true) | (Ctl::AX(a), false) => {
            let want = if holds { sat(l, a)? } else { not(&sat(l, a)?) };
            l.g.succ[init].iter().find(|&&t| want[t]).map(|&t| vec![init, t])
        }
        (Ctl::EFNext(a, b), true) => {
            let sb = sat(l, b)?;
            let now = and(&sat(l, a)?, &l.g.ex(&sb));
            l.g.path_to(init, &now, &all).map(|mut p| {
                let last = *p.last().unwrap();
                p.push(*l.g.succ[last].iter().find(|&&t| sb[t]).unwrap());
                p
            })
        }
        (Ctl::AFNext(a, b), false) => {
            let (pg, target) = next_product(l, &sat(l, a)?, &sat(l, b)?);
            let z = pg.au(&vec![true; pg.len()], &target);
            Some(pg.lasso(2 * init, &not(&z)).into_iter().map(|p| p / 2).collect())
        }
        _ => None,
    };
    Ok(Verdict {
        formula: f.to_string(),
        mode: l.ts.mode.to_string(),
        verdict: holds,
        witness_or_counterexample_path: path.unwrap_or_default(),
    })
}

/// Checks every property of `file` on `ts`.
pub fn check_file(ts: &Ts, file: &PropertyFile) -> Result<Vec<Verdict>, VerifyError> {
    let l = label_states(ts, file)?;
    file.properties.iter().map(|(_, f)| check_ctl(&l, f)).collect()
}

/// True when two verdicts agree; verdicts from different modes are not
/// comparable because X ranges over different steps.
pub fn compare_verdicts(a: &Verdict, b: &Verdict) -> Result<bool, VerifyError> {
    if a.mode != b.mode {
        return Err(VerifyError::ModeMismatch(a.mode.clone(), b.mode.clone()));
    }
    Ok(a.formula == b.formula && a.verdict == b.verdict)
}
