//! Patterns with sites, variables and captures, and the matcher.

use can_syntax::{Literal, Name};
use can_term::{term_key, Control, Kind, Path, State, Term};

/// Value of an entity attribute, as bound by a pattern variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Value {
    Name(Name),
    Lit(Literal),
    Falsum,
    Corr(u32),
}

pub fn attr_of(c: &Control) -> Option<Value> {
    match c {
        Control::B(l) => Some(Value::Lit(l.clone())),
        Control::False => Some(Value::Falsum),
        Control::E(n) | Control::PlanSet(n) => Some(Value::Name(n.clone())),
        Control::Check(l) | Control::CheckRes(l) => Some(Value::Corr(*l)),
        _ => None,
    }
}

/// Control of `kind` carrying `v`, if the two fit together.
pub fn with_attr(kind: Kind, v: &Value) -> Option<Control> {
    Some(match (kind, v) {
        (Kind::B, Value::Lit(l)) => Control::B(l.clone()),
        (Kind::False, Value::Falsum) => Control::False,
        (Kind::E, Value::Name(n)) => Control::E(n.clone()),
        (Kind::PlanSet, Value::Name(n)) => Control::PlanSet(n.clone()),
        (Kind::Check, Value::Corr(l)) => Control::Check(*l),
        (Kind::CheckRes, Value::Corr(l)) => Control::CheckRes(*l),
        _ => return None,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KindPat {
    One(Kind),
    AnyOf(Vec<Kind>),
}

impl KindPat {
    pub fn matches(&self, k: Kind) -> bool {
        match self {
            KindPat::One(x) => *x == k,
            KindPat::AnyOf(xs) => xs.contains(&k),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AttrPat {
    Any,
    Var(usize),
    Const(Value),
}

/// Site index that matches anything and binds nothing.
pub const ANON: usize = usize::MAX;

/// One pattern node. Listed children must be matched injectively by
/// distinct children of the term; the remaining children go to `site`,
/// and without a site there must be none left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PNode {
    pub kind: KindPat,
    pub attr: AttrPat,
    pub capture: Option<usize>,
    pub children: Vec<PNode>,
    pub site: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scope {
    /// Among the site's top-level terms.
    Children,
    /// At any depth inside the site.
    Anywhere,
}

/// Negative application condition: `pattern` must not occur in `site`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nac {
    pub site: usize,
    pub pattern: PNode,
    pub scope: Scope,
}

#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Bindings {
    pub vars: Vec<Option<Value>>,
    pub sites: Vec<Option<Vec<Term>>>,
    pub caps: Vec<Option<Control>>,
}

impl Bindings {
    pub fn new(vars: usize, sites: usize, caps: usize) -> Self {
        Bindings { vars: vec![None; vars], sites: vec![None; sites], caps: vec![None; caps] }
    }

    pub fn site(&self, i: usize) -> &[Term] {
        self.sites[i].as_deref().unwrap_or(&[])
    }
}

/// Continuation: returns true to stop the search.
pub type Cont<'a> = dyn FnMut(&mut Bindings) -> bool + 'a;

/// Enumerates the ways `p` matches `t` at its root, calling `k` for each.
pub fn match_node(p: &PNode, t: &Term, b: &mut Bindings, k: &mut Cont<'_>) -> bool {
    if !p.kind.matches(t.kind()) {
        return false;
    }
    let mut bound_var = None;
    match &p.attr {
        AttrPat::Any => {}
        AttrPat::Const(v) => {
            if attr_of(&t.ctrl).as_ref() != Some(v) {
                return false;
            }
        }
        AttrPat::Var(i) => {
            let Some(v) = attr_of(&t.ctrl) else { return false };
            match &b.vars[*i] {
                Some(w) if *w != v => return false,
                Some(_) => {}
                None => {
                    b.vars[*i] = Some(v);
                    bound_var = Some(*i);
                }
            }
        }
    }
    let old_cap = p.capture.map(|c| b.caps[c].replace(t.ctrl.clone()));
    let mut used = vec![false; t.children.len()];
    let stop = match_children(&p.children, 0, &t.children, &mut used, p.site, b, k);
    if let (Some(c), Some(old)) = (p.capture, old_cap) {
        b.caps[c] = old;
    }
    if let Some(i) = bound_var {
        b.vars[i] = None;
    }
    stop
}

fn match_children(
    pats: &[PNode],
    i: usize,
    ch: &[Term],
    used: &mut Vec<bool>,
    site: Option<usize>,
    b: &mut Bindings,
    k: &mut Cont<'_>,
) -> bool {
    if i == pats.len() {
        let rest: Vec<Term> = ch.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(t, _)| t.clone()).collect();
        return match site {
            None if !rest.is_empty() => false,
            None => k(b),
            Some(ANON) => k(b),
            Some(s) => {
                let old = b.sites[s].replace(rest);
                let stop = k(b);
                b.sites[s] = old;
                stop
            }
        };
    }
    for j in 0..ch.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let stop = match_node(&pats[i], &ch[j], b, &mut |b: &mut Bindings| match_children(pats, i + 1, ch, used, site, b, k));
        used[j] = false;
        if stop {
            return true;
        }
    }
    false
}

/// True when `p` matches at the root of some term in `ts` (or anywhere
/// below, with `Scope::Anywhere`). Bindings are left unchanged.
pub fn occurs_in(p: &PNode, ts: &[Term], scope: Scope, b: &Bindings) -> bool {
    let mut b = b.clone();
    let mut found = false;
    let mut visit = |t: &Term| {
        if !found && match_node(p, t, &mut b, &mut |_| true) {
            found = true;
        }
    };
    for t in ts {
        match scope {
            Scope::Children => visit(t),
            Scope::Anywhere => t.walk(&mut visit),
        }
    }
    found
}

/// Every node of the state with its path, in preorder.
pub fn nodes_with_paths(s: &State) -> Vec<(Path, &Term)> {
    fn go<'a>(t: &'a Term, path: &mut Path, out: &mut Vec<(Path, &'a Term)>) {
        out.push((path.clone(), t));
        for (i, c) in t.children.iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for (r, t) in s.regions.iter().enumerate() {
        go(t, &mut vec![r], &mut out);
    }
    out
}

fn related(a: &[usize], b: &[usize]) -> bool {
    let n = a.len().min(b.len());
    a[..n] == b[..n]
}

/// A match of a list of root patterns at pairwise disjoint positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub roots: Vec<Path>,
    pub bind: Bindings,
}

impl Occurrence {
    /// Identity used to drop duplicate matches: positions, variables and
    /// site contents up to reordering. Captured meta does not count.
    pub fn dedup_key(&self) -> (Vec<Path>, Vec<Option<Value>>, Vec<Vec<String>>) {
        let sites = self
            .bind
            .sites
            .iter()
            .map(|s| {
                let mut ks: Vec<String> = s.as_deref().unwrap_or(&[]).iter().map(term_key).collect();
                ks.sort();
                ks
            })
            .collect();
        (self.roots.clone(), self.bind.vars.clone(), sites)
    }
}

/// All occurrences of `roots` in `s` satisfying `nacs`, deduplicated, in
/// the preorder of their first differing root.
pub fn find_occurrences(
    roots: &[PNode],
    nacs: &[Nac],
    s: &State,
    shape: (usize, usize, usize),
    limit: Option<usize>,
) -> Vec<Occurrence> {
    let nodes = nodes_with_paths(s);
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut b = Bindings::new(shape.0, shape.1, shape.2);
    let mut chosen: Vec<Path> = Vec::new();
    search(roots, 0, &nodes, &mut chosen, &mut b, &mut |b, chosen| {
        if nacs.iter().any(|n| occurs_in(&n.pattern, b.site(n.site), n.scope, b)) {
            return false;
        }
        let occ = Occurrence { roots: chosen.to_vec(), bind: b.clone() };
        if seen.insert(occ.dedup_key()) {
            out.push(occ);
        }
        limit.is_some_and(|l| out.len() >= l)
    });
    out
}

fn search(
    roots: &[PNode],
    i: usize,
    nodes: &[(Path, &Term)],
    chosen: &mut Vec<Path>,
    b: &mut Bindings,
    k: &mut dyn FnMut(&mut Bindings, &[Path]) -> bool,
) -> bool {
    if i == roots.len() {
        return k(b, chosen);
    }
    for (path, t) in nodes {
        if !roots[i].kind.matches(t.kind()) || chosen.iter().any(|c| related(c, path)) {
            continue;
        }
        chosen.push(path.clone());
        let stop = match_node(&roots[i], t, b, &mut |b: &mut Bindings| search(roots, i + 1, nodes, chosen, b, k));
        chosen.pop();
        if stop {
            return true;
        }
    }
    false
}
