//! Exhaustive exploration and the agent-level quotient.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use can_engine::Catalog;
use can_term::{canonicalize, State};
use rayon::prelude::*;

pub const DEFAULT_BUDGET: usize = 100_000;

/// Budget from `CANBRS_BUDGET`, falling back to the default.
pub fn default_budget() -> usize {
    std::env::var("CANBRS_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Quotient,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Quotient => "quotient",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub rule: String,
}

/// Transition system over canonical states. State 0 is initial.
#[derive(Clone, Debug)]
pub struct Ts {
    pub states: Vec<State>,
    pub keys: Vec<String>,
    pub edges: Vec<Edge>,
    pub mode: Mode,
    pub closed: bool,
    pub build_ms: u128,
}

impl Ts {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    /// Distinct successors per state, in edge order.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for e in &self.edges {
            if !out[e.src].contains(&e.dst) {
                out[e.src].push(e.dst);
            }
        }
        out
    }

    pub fn terminals(&self) -> Vec<usize> {
        let succ = self.successors();
        (0..self.len()).filter(|&i| succ[i].is_empty()).collect()
    }

    /// Auxiliary-bearing states that cannot reach an auxiliary-free state:
    /// micro-step runs that get stuck or never finish.
    pub fn micro_violations(&self) -> Vec<usize> {
        let mut pred = vec![Vec::new(); self.len()];
        for e in &self.edges {
            pred[e.dst].push(e.src);
        }
        let mut ok: Vec<bool> = self.states.iter().map(State::is_aux_free).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| ok[i]).collect();
        while let Some(i) = queue.pop_front() {
            for &p in &pred[i] {
                if !ok[p] {
                    ok[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..self.len()).filter(|&i| !ok[i]).collect()
    }
}

struct Builder {
    ts: Ts,
    index: HashMap<String, usize>,
    seen_edges: HashSet<(usize, usize, String)>,
}

impl Builder {
    fn new(mode: Mode) -> Self {
        Builder {
            ts: Ts { states: Vec::new(), keys: Vec::new(), edges: Vec::new(), mode, closed: true, build_ms: 0 },
            index: HashMap::new(),
            seen_edges: HashSet::new(),
        }
    }

    /// Index of `key`, inserting the state if new. The second component
    /// tells whether it was new.
    fn intern(&mut self, key: String, s: State) -> (usize, bool) {
        if let Some(&i) = self.index.get(&key) {
            return (i, false);
        }
        let i = self.ts.states.len();
        self.index.insert(key.clone(), i);
        self.ts.keys.push(key);
        self.ts.states.push(s);
        (i, true)
    }

    fn edge(&mut self, src: usize, dst: usize, rule: &str) {
        if self.seen_edges.insert((src, dst, rule.to_string())) {
            self.ts.edges.push(Edge { src, dst, rule: rule.to_string() });
        }
    }
}

/// Breadth-first closure under the catalog with priorities. Levels are
/// expanded in parallel and merged in order, so the result does not depend
/// on the number of workers. Stops with `closed == false` once more than
/// `budget` states are known.
pub fn build_full(init: &State, cat: &Catalog, budget: usize) -> Ts {
    let t0 = Instant::now();
    let mut b = Builder::new(Mode::Full);
    let c = canonicalize(init);
    b.intern(c.key, c.state);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        if b.ts.states.len() > budget {
            b.ts.closed = false;
            break;
        }
        let expanded: Vec<Vec<(String, String, State)>> = frontier
            .par_iter()
            .map(|&i| {
                cat.successors(&b.ts.states[i])
                    .into_iter()
                    .map(|(r, t)| {
                        let c = canonicalize(&t);
                        (r.to_string(), c.key, c.state)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&src, succ) in frontier.iter().zip(expanded) {
            for (rule, key, state) in succ {
                let (dst, new) = b.intern(key, state);
                if new {
                    next.push(dst);
                }
                b.edge(src, dst, &rule);
            }
        }
        frontier = next;
    }
    b.ts.build_ms = t0.elapsed().as_millis();
    b.ts
}

/// Keeps the auxiliary-free states of a full system and connects two of
/// them when a micro-step path runs between them through auxiliary-bearing
/// states only. The label is the rule that starts the path.
pub fn quotient_agent_level(full: &Ts) -> Ts {
    let t0 = Instant::now();
    let mut out = Builder::new(Mode::Quotient);
    out.ts.closed = full.closed;
    let mut adj = vec![Vec::new(); full.len()];
    for e in &full.edges {
        adj[e.src].push((e.dst, e.rule.as_str()));
    }
    let aux_free: Vec<bool> = full.states.iter().map(State::is_aux_free).collect();
    let mut map = vec![usize::MAX; full.len()];
    for i in 0..full.len() {
        if aux_free[i] {
            map[i] = out.intern(full.keys[i].clone(), full.states[i].clone()).0;
        }
    }
    for s in 0..full.len() {
        if !aux_free[s] {
            continue;
        }
        for &(first, rule) in &adj[s] {
            let mut seen = HashSet::from([first]);
            let mut queue = VecDeque::from([first]);
            while let Some(u) = queue.pop_front() {
                if aux_free[u] {
                    out.edge(map[s], map[u], rule);
                    continue;
                }
                for &(v, _) in &adj[u] {
                    if seen.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    out.ts.build_ms = full.build_ms + t0.elapsed().as_millis();
    out.ts
}
