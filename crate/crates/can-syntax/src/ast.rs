use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned identifier. Cloning is a reference-count bump.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// A belief atom with a polarity. `~b` is its own token: it is never
/// derived from `b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Name,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: &str) -> Self {
        Literal { atom: Name::new(atom), positive: true }
    }

    pub fn neg(atom: &str) -> Self {
        Literal { atom: Name::new(atom), positive: false }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Belief formula: conjunctions of literals only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Conj(Vec<Literal>),
}

impl Formula {
    /// Sorts and dedups the conjuncts; an empty conjunction becomes `True`.
    pub fn conj<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let set: BTreeSet<Literal> = lits.into_iter().collect();
        if set.is_empty() {
            Formula::True
        } else {
            Formula::Conj(set.into_iter().collect())
        }
    }

    pub fn literals(&self) -> &[Literal] {
        match self {
            Formula::Conj(ls) => ls,
            _ => &[],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActionKind {
    Named,
    Query,
    AddBelief,
    DelBelief,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActionSpec {
    pub name: Name,
    pub pre: Formula,
    pub add: BTreeSet<Literal>,
    pub del: BTreeSet<Literal>,
}

impl ActionSpec {
    /// Desugared belief operations carry their source text as name, so the
    /// kind can be read back from the first character.
    pub fn kind(&self) -> ActionKind {
        match self.name.as_str().chars().next() {
            Some('?') => ActionKind::Query,
            Some('+') => ActionKind::AddBelief,
            Some('-') => ActionKind::DelBelief,
            _ => ActionKind::Named,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BasicOp {
    Query(Formula),
    Add(Literal),
    Del(Literal),
}

/// `?φ`, `+b` and `-b` as primitive actions.
pub fn desugar_basic(op: &BasicOp) -> ActionSpec {
    match op {
        BasicOp::Query(phi) => ActionSpec {
            name: Name::new(&format!("?{}", crate::print::query_operand(phi))),
            pre: phi.clone(),
            add: BTreeSet::new(),
            del: BTreeSet::new(),
        },
        BasicOp::Add(l) => ActionSpec {
            name: Name::new(&format!("+{l}")),
            pre: Formula::True,
            add: [l.clone()].into_iter().collect(),
            del: BTreeSet::new(),
        },
        BasicOp::Del(l) => ActionSpec {
            name: Name::new(&format!("-{l}")),
            pre: Formula::True,
            add: BTreeSet::new(),
            del: [l.clone()].into_iter().collect(),
        },
    }
}

/// The residual program of a goal whose failure condition holds.
pub fn query_false() -> ActionSpec {
    desugar_basic(&BasicOp::Query(Formula::False))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PlanBody {
    Nil,
    Act(Arc<ActionSpec>),
    Event(Name),
    Seq(Box<PlanBody>, Box<PlanBody>),
    Conc(Box<PlanBody>, Box<PlanBody>),
    Goal(Formula, Box<PlanBody>, Formula),
    Try(Box<PlanBody>, Box<PlanBody>),
    PlanSet(Name, Vec<Plan>),
}

impl PlanBody {
    pub fn seq(a: PlanBody, b: PlanBody) -> Self {
        PlanBody::Seq(Box::new(a), Box::new(b))
    }

    pub fn conc(a: PlanBody, b: PlanBody) -> Self {
        PlanBody::Conc(Box::new(a), Box::new(b))
    }

    pub fn try_(a: PlanBody, b: PlanBody) -> Self {
        PlanBody::Try(Box::new(a), Box::new(b))
    }

    pub fn goal(s: Formula, p: PlanBody, f: Formula) -> Self {
        PlanBody::Goal(s, Box::new(p), f)
    }

    pub fn act(a: ActionSpec) -> Self {
        PlanBody::Act(Arc::new(a))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, PlanBody::Nil)
    }

    /// True for bodies a user may write in a plan.
    pub fn is_user(&self) -> bool {
        match self {
            PlanBody::Nil | PlanBody::Try(..) | PlanBody::PlanSet(..) => false,
            PlanBody::Act(_) | PlanBody::Event(_) => true,
            PlanBody::Seq(a, b) | PlanBody::Conc(a, b) => a.is_user() && b.is_user(),
            PlanBody::Goal(_, p, _) => p.is_user(),
        }
    }

    /// Event names posted anywhere in this body, in first-occurrence order.
    pub fn events(&self, out: &mut Vec<Name>) {
        match self {
            PlanBody::Nil | PlanBody::Act(_) => {}
            PlanBody::Event(e) => {
                if !out.contains(e) {
                    out.push(e.clone());
                }
            }
            PlanBody::Seq(a, b) | PlanBody::Conc(a, b) | PlanBody::Try(a, b) => {
                a.events(out);
                b.events(out);
            }
            PlanBody::Goal(_, p, _) => p.events(out),
            PlanBody::PlanSet(e, plans) => {
                if !out.contains(e) {
                    out.push(e.clone());
                }
                for p in plans {
                    p.body.events(out);
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PlanBody::Nil | PlanBody::Act(_) | PlanBody::Event(_) => 1,
            PlanBody::Seq(a, b) | PlanBody::Conc(a, b) | PlanBody::Try(a, b) => {
                1 + a.depth().max(b.depth())
            }
            PlanBody::Goal(_, p, _) => 1 + p.depth(),
            PlanBody::PlanSet(_, ps) => 1 + ps.iter().map(|p| p.body.depth()).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Plan {
    pub id: Name,
    pub trigger: Name,
    pub context: Formula,
    pub body: PlanBody,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Intention {
    pub id: u32,
    pub body: PlanBody,
}

/// An agent: external events (a multiset, kept sorted), beliefs,
/// intentions, the plan library and the declared actions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AgentConfig {
    pub actions: Vec<ActionSpec>,
    pub external_events: Vec<Name>,
    pub beliefs: BTreeSet<Literal>,
    pub intentions: Vec<Intention>,
    pub plans: Vec<Plan>,
}

impl AgentConfig {
    pub fn add_event(&mut self, e: Name) {
        let at = self.external_events.partition_point(|x| *x <= e);
        self.external_events.insert(at, e);
    }

    pub fn next_intention_id(&self) -> u32 {
        self.intentions.iter().map(|i| i.id + 1).max().unwrap_or(1)
    }

    /// Relevant plans for `e`, in library order.
    pub fn relevant(&self, e: &Name) -> Vec<Plan> {
        self.plans.iter().filter(|p| &p.trigger == e).cloned().collect()
    }
}

/// Deterministic name tables: atoms and events in first-occurrence order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    pub atoms: Vec<Name>,
    pub events: Vec<Name>,
}

impl Symbols {
    pub fn collect(cfg: &AgentConfig) -> Self {
        let mut s = Symbols::default();
        let atom = |s: &mut Symbols, l: &Literal| {
            if !s.atoms.contains(&l.atom) {
                s.atoms.push(l.atom.clone());
            }
        };
        for l in &cfg.beliefs {
            atom(&mut s, l);
        }
        for a in &cfg.actions {
            for l in a.pre.literals().iter().chain(&a.add).chain(&a.del) {
                atom(&mut s, l);
            }
        }
        for p in &cfg.plans {
            for l in p.context.literals() {
                atom(&mut s, l);
            }
        }
        let mut evs = Vec::new();
        for e in &cfg.external_events {
            if !evs.contains(e) {
                evs.push(e.clone());
            }
        }
        for p in &cfg.plans {
            if !evs.contains(&p.trigger) {
                evs.push(p.trigger.clone());
            }
            p.body.events(&mut evs);
        }
        for i in &cfg.intentions {
            i.body.events(&mut evs);
        }
        s.events = evs;
        s
    }

    /// 1-based index of an atom, used for `B(n)` style display.
    pub fn atom_index(&self, a: &Name) -> Option<usize> {
        self.atoms.iter().position(|x| x == a).map(|i| i + 1)
    }
}
