//! Seeded random agents in the agent text format.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ATOMS: [&str; 4] = ["a", "b", "c", "d"];
const EVENTS: [&str; 3] = ["e1", "e2", "e3"];
const MAX_PLANS: usize = 3;
const MAX_DEPTH: usize = 3;
const ACTIONS: usize = 3;

struct Gen {
    rng: ChaCha8Rng,
    atoms: usize,
}

impl Gen {
    fn literal(&mut self) -> String {
        let a = ATOMS[self.rng.gen_range(0..self.atoms)];
        if self.rng.gen_bool(0.2) {
            format!("~{a}")
        } else {
            a.to_string()
        }
    }

    fn formula(&mut self) -> String {
        match self.rng.gen_range(0..6) {
            0 => "true".into(),
            1 => "false".into(),
            2 | 3 => self.literal(),
            _ => {
                let mut ls = vec![self.literal(), self.literal()];
                ls.sort();
                ls.dedup();
                ls.join(" & ")
            }
        }
    }

    /// Disjoint add and delete sets over positive and negative literals.
    fn effects(&mut self) -> (Vec<String>, Vec<String>) {
        let mut add = Vec::new();
        let mut del = Vec::new();
        for _ in 0..self.rng.gen_range(0..3) {
            let l = self.literal();
            if add.contains(&l) || del.contains(&l) {
                continue;
            }
            if self.rng.gen_bool(0.5) {
                add.push(l);
            } else {
                del.push(l);
            }
        }
        (add, del)
    }

    fn leaf(&mut self, event: usize) -> String {
        let later = event + 1..EVENTS.len();
        match self.rng.gen_range(0..7) {
            0 | 1 => format!("act{}", self.rng.gen_range(1..=ACTIONS)),
            2 if !later.is_empty() => EVENTS[self.rng.gen_range(later)].to_string(),
            2 | 3 => format!("+{}", self.literal()),
            4 => format!("-{}", self.literal()),
            5 if !later.is_empty() => EVENTS[self.rng.gen_range(later)].to_string(),
            _ => {
                let f = self.formula();
                if f.contains('&') {
                    format!("?({f})")
                } else {
                    format!("?{f}")
                }
            }
        }
    }

    /// Body of at most `depth` nested constructors, posting only events
    /// after `event` so the plan library stays non-recursive.
    fn body(&mut self, depth: usize, event: usize) -> String {
        if depth <= 1 || self.rng.gen_bool(0.35) {
            return self.leaf(event);
        }
        match self.rng.gen_range(0..5) {
            0 | 1 => format!("({}; {})", self.body(depth - 1, event), self.body(depth - 1, event)),
            2 | 3 => format!("({} || {})", self.body(depth - 1, event), self.body(depth - 1, event)),
            _ => {
                let sc = self.formula();
                let fc = self.formula();
                format!("goal({sc}, {}, {fc})", self.body(depth - 1, event))
            }
        }
    }
}

/// Agent text for `seed`: at most 4 atoms, 3 plans per event, body depth 3,
/// no recursion between events, no action both adding and deleting a literal.
pub fn random_agent(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(1..=ATOMS.len());
    let mut g = Gen { rng, atoms };
    let mut out = String::new();
    let mut beliefs: Vec<String> = Vec::new();
    for a in &ATOMS[..atoms] {
        if g.rng.gen_bool(0.5) {
            beliefs.push(a.to_string());
        }
    }
    let _ = writeln!(out, "beliefs: {}", beliefs.join(", "));
    let n_events = g.rng.gen_range(1..=2);
    let mut events: Vec<&str> = (0..n_events).map(|_| EVENTS[g.rng.gen_range(0..2)]).collect();
    events.sort();
    let _ = writeln!(out, "events: {}", events.join(", "));
    for i in 1..=ACTIONS {
        let pre = g.formula();
        let (add, del) = g.effects();
        let _ = writeln!(out, "action act{i}: {pre} <- +{{{}}} -{{{}}}", add.join(", "), del.join(", "));
    }
    let mut id = 0;
    for (k, e) in EVENTS.iter().enumerate() {
        for _ in 0..g.rng.gen_range(1..=MAX_PLANS) {
            id += 1;
            let ctx = g.formula();
            let depth = g.rng.gen_range(1..=MAX_DEPTH);
            let body = g.body(depth, k);
            let _ = writeln!(out, "plan P{id}: {e} : {ctx} <- {body}");
        }
    }
    if g.rng.gen_bool(0.3) {
        let body = g.body(2, 0);
        let _ = writeln!(out, "intention 1: {body}");
    }
    out
}

/// Seeds for a corpus of `n` agents derived from one master seed.
pub fn corpus_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen()).collect()
}
