use crate::control::{Control, Kind};

/// A node with an unordered multiset of children. Sibling order is storage
/// order only; use `canon` to compare terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub ctrl: Control,
    pub children: Vec<Term>,
}

impl Term {
    pub fn new(ctrl: Control, children: Vec<Term>) -> Self {
        Term { ctrl, children }
    }

    pub fn leaf(ctrl: Control) -> Self {
        Term { ctrl, children: Vec::new() }
    }

    pub fn kind(&self) -> Kind {
        self.ctrl.kind()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Term::size).sum::<usize>()
    }

    /// Pre-order walk.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut Term)) {
        f(self);
        for c in &mut self.children {
            c.walk_mut(f);
        }
    }

    pub fn count(&self, kind: Kind) -> usize {
        let mut n = 0;
        self.walk(&mut |t| {
            if t.kind() == kind {
                n += 1;
            }
        });
        n
    }

    pub fn contains(&self, kind: Kind) -> bool {
        self.count(kind) > 0
    }

    pub fn child(&self, kind: Kind) -> Option<&Term> {
        self.children.iter().find(|c| c.kind() == kind)
    }
}

pub const BELIEFS: usize = 0;
pub const DESIRES: usize = 1;
pub const INTENTIONS: usize = 2;
pub const PLANS: usize = 3;

/// An encoded agent: one root per perspective, in the fixed order
/// Beliefs, Desires, Intentions, Plans.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct State {
    pub regions: [Term; 4],
}

impl Default for State {
    fn default() -> Self {
        State {
            regions: [
                Term::leaf(Control::Beliefs),
                Term::leaf(Control::Desires),
                Term::leaf(Control::Intentions),
                Term::leaf(Control::Plans),
            ],
        }
    }
}

/// Position of a node: region index followed by child indices.
pub type Path = Vec<usize>;

impl State {
    pub fn get(&self, path: &[usize]) -> &Term {
        let mut t = &self.regions[path[0]];
        for &i in &path[1..] {
            t = &t.children[i];
        }
        t
    }

    pub fn get_mut(&mut self, path: &[usize]) -> &mut Term {
        let mut t = &mut self.regions[path[0]];
        for &i in &path[1..] {
            t = &mut t.children[i];
        }
        t
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        for r in &self.regions {
            r.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut Term)) {
        for r in &mut self.regions {
            r.walk_mut(f);
        }
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.regions.iter().map(|r| r.count(kind)).sum()
    }

    pub fn size(&self) -> usize {
        self.regions.iter().map(Term::size).sum()
    }

    /// True when no reduction bookkeeping is present: the state stands for
    /// an agent configuration. Check tokens are part of the normal form;
    /// pending belief updates (Add/Del under Beliefs) are not.
    pub fn is_aux_free(&self) -> bool {
        let mut ok = self.regions[BELIEFS].children.iter().all(|c| matches!(c.kind(), Kind::B | Kind::False));
        self.walk(&mut |t| {
            if t.kind().is_auxiliary() {
                ok = false;
            }
        });
        ok
    }

    /// Smallest correlation id not used anywhere in the state.
    pub fn fresh_corr(&self, taken: &[u32]) -> u32 {
        let mut used = taken.to_vec();
        self.walk(&mut |t| {
            if let Some(l) = t.ctrl.corr() {
                used.push(l);
            }
        });
        (0..).find(|l| !used.contains(l)).unwrap()
    }

    /// Next unused intention id.
    pub fn fresh_intent(&self) -> u32 {
        self.regions[INTENTIONS]
            .children
            .iter()
            .filter_map(|t| match t.ctrl {
                Control::Intent(id) => Some(id + 1),
                _ => None,
            })
            .max()
            .unwrap_or(1)
    }
}
