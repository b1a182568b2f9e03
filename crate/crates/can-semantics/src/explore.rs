use std::collections::HashMap;

use can_syntax::AgentConfig;

use crate::agent::{agent_successors, AgentRule, ConfigKey};
use crate::intention::Options;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    /// Every reachable configuration was expanded.
    Closed,
    /// Some configuration at the depth bound still had unexplored successors.
    DepthBoundHit,
}

/// Breadth-first closure of the agent transition relation.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub configs: Vec<AgentConfig>,
    pub depth: Vec<usize>,
    pub edges: Vec<(usize, usize, AgentRule)>,
    /// False for configurations left unexpanded at the depth bound.
    pub expanded: Vec<bool>,
    pub status: Status,
}

impl Exploration {
    pub fn index_of(&self, cfg: &AgentConfig) -> Option<usize> {
        let k = ConfigKey::of(cfg);
        self.configs.iter().position(|c| ConfigKey::of(c) == k)
    }

    /// Expanded configurations with no outgoing edge.
    pub fn terminals(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.configs.len()];
        for &(s, _, _) in &self.edges {
            has_out[s] = true;
        }
        (0..self.configs.len()).filter(|&i| !has_out[i] && self.expanded[i]).collect()
    }
}

/// Explores up to `bound` agent steps from `init` (unbounded when `None`).
/// Configurations are identified modulo intention ids.
pub fn reachable_configs(init: &AgentConfig, bound: Option<usize>, opts: Options) -> Exploration {
    let mut index: HashMap<ConfigKey, usize> = HashMap::new();
    let mut ex = Exploration { configs: vec![init.clone()], depth: vec![0], edges: Vec::new(), expanded: vec![false], status: Status::Closed };
    index.insert(ConfigKey::of(init), 0);
    let mut next = 0;
    while next < ex.configs.len() {
        let i = next;
        next += 1;
        let steps = agent_successors(&ex.configs[i], opts);
        if bound.is_some_and(|b| ex.depth[i] >= b) {
            if !steps.is_empty() {
                ex.status = Status::DepthBoundHit;
            }
            continue;
        }
        ex.expanded[i] = true;
        let d = ex.depth[i] + 1;
        let mut edges = Vec::new();
        for s in steps {
            let k = ConfigKey::of(&s.after);
            let j = *index.entry(k).or_insert_with(|| {
                ex.configs.push(s.after);
                ex.depth.push(d);
                ex.expanded.push(false);
                ex.configs.len() - 1
            });
            edges.push((i, j, s.rule));
        }
        edges.sort();
        edges.dedup();
        ex.edges.extend(edges);
    }
    ex
}
