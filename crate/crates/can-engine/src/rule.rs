//! Reaction rules: a redex made of root patterns, a reactum made of
//! templates, an instantiation map for sites, conditions and a priority.

use std::collections::HashMap;
use std::fmt;

use can_syntax::{Literal, Name};
use can_term::{Control, Kind, State, Term};

use crate::pattern::{find_occurrences, with_attr, AttrPat, KindPat, Nac, Occurrence, PNode, Scope, Value, ANON};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CtrlTpl {
    Plain(Control),
    /// The control of a captured redex node, meta included.
    Captured(usize),
    /// A control whose attribute is a bound variable.
    WithVar(Kind, usize),
    /// Check or CheckRes carrying the k-th fresh correlation id.
    FreshCorr(Kind, usize),
    FreshIntent,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TNode {
    pub ctrl: CtrlTpl,
    pub children: Vec<TItem>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TItem {
    Node(TNode),
    /// Reactum site; the rule's instantiation map says which redex site fills it.
    Site(usize),
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub name: String,
    /// Higher fires first.
    pub priority: i32,
    pub lhs: Vec<PNode>,
    /// One forest per redex root, replacing it.
    pub rhs: Vec<Vec<TItem>>,
    /// Reactum site index to redex site index. Omitted sites are deleted,
    /// repeated ones duplicated.
    pub inst: Vec<usize>,
    pub nacs: Vec<Nac>,
    pub vars: usize,
    pub sites: usize,
    pub caps: usize,
    pub text: String,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.name, self.priority, self.text)
    }
}

impl Rule {
    pub fn parse(line: &str) -> Result<Rule, String> {
        parse_rule(line)
    }

    /// Occurrences of the redex, conditions not applied.
    pub fn matches(&self, s: &State) -> Vec<Occurrence> {
        find_occurrences(&self.lhs, &[], s, (self.vars, self.sites, self.caps), None)
    }

    /// Occurrences that also satisfy the conditions.
    pub fn occurrences(&self, s: &State) -> Vec<Occurrence> {
        find_occurrences(&self.lhs, &self.nacs, s, (self.vars, self.sites, self.caps), None)
    }

    pub fn is_enabled(&self, s: &State) -> bool {
        !find_occurrences(&self.lhs, &self.nacs, s, (self.vars, self.sites, self.caps), Some(1)).is_empty()
    }

    /// Rewrites `s` at `occ`. Redex roots are replaced deepest-last-first so
    /// that earlier paths stay valid.
    pub fn apply(&self, s: &State, occ: &Occurrence) -> State {
        let mut fresh = Vec::new();
        let nfresh = self.rhs.iter().flatten().map(max_fresh).max().unwrap_or(0);
        for _ in 0..nfresh {
            let l = s.fresh_corr(&fresh);
            fresh.push(l);
        }
        let ctx = Ctx { rule: self, occ, fresh: &fresh, intent: s.fresh_intent() };
        let mut order: Vec<usize> = (0..self.lhs.len()).collect();
        order.sort_by(|a, b| occ.roots[*b].cmp(&occ.roots[*a]));
        let mut out = s.clone();
        for i in order {
            let forest = ctx.forest(&self.rhs[i]);
            let path = &occ.roots[i];
            if path.len() == 1 {
                let [t] = <[Term; 1]>::try_from(forest).expect("region roots are replaced by exactly one node");
                out.regions[path[0]] = t;
            } else {
                let parent = out.get_mut(&path[..path.len() - 1]);
                let at = path[path.len() - 1];
                parent.children.splice(at..at + 1, forest);
            }
        }
        out
    }
}

fn max_fresh(t: &TItem) -> usize {
    match t {
        TItem::Site(_) => 0,
        TItem::Node(n) => {
            let own = if let CtrlTpl::FreshCorr(_, k) = n.ctrl { k + 1 } else { 0 };
            n.children.iter().map(max_fresh).max().unwrap_or(0).max(own)
        }
    }
}

struct Ctx<'a> {
    rule: &'a Rule,
    occ: &'a Occurrence,
    fresh: &'a [u32],
    intent: u32,
}

impl Ctx<'_> {
    fn forest(&self, items: &[TItem]) -> Vec<Term> {
        let mut out = Vec::new();
        for it in items {
            match it {
                TItem::Site(j) => out.extend(self.occ.bind.site(self.rule.inst[*j]).iter().cloned()),
                TItem::Node(n) => out.push(Term::new(self.ctrl(&n.ctrl), self.forest(&n.children))),
            }
        }
        out
    }

    fn ctrl(&self, c: &CtrlTpl) -> Control {
        let b = &self.occ.bind;
        match c {
            CtrlTpl::Plain(c) => c.clone(),
            CtrlTpl::Captured(i) => b.caps[*i].clone().expect("capture bound by the redex"),
            CtrlTpl::WithVar(k, v) => {
                let v = b.vars[*v].as_ref().expect("variable bound by the redex");
                with_attr(*k, v).expect("attribute fits the entity")
            }
            CtrlTpl::FreshCorr(k, i) => Control::of_kind(*k).with_corr(self.fresh[*i]),
            CtrlTpl::FreshIntent => Control::Intent(self.intent),
        }
    }
}

// Rule notation. A rule reads
//   LHS -> RHS ; unless sN has PATTERN ; unless sN contains PATTERN
// where both sides are `||`-separated roots written like the state notation,
// plus: `sN` sites, `id` anonymous sites, `$x` variables in attribute
// position, `[A/B]` kind alternatives, `@k` captures, `{!k}` fresh
// correlation ids, `{!}` a fresh intention id and `<text>` constant meta.

#[derive(Clone, Debug)]
enum RAttr {
    None,
    Var(String),
    Fresh(Option<usize>),
    Const(String),
}

#[derive(Clone, Debug)]
enum RItem {
    Site(Option<usize>),
    Node { kinds: Vec<Kind>, attr: RAttr, meta: Option<String>, cap: Option<usize>, children: Vec<RItem> },
}

struct Lx<'a> {
    s: &'a [u8],
    i: usize,
}

impl Lx<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn at(&mut self, t: &str) -> bool {
        self.ws();
        self.s[self.i..].starts_with(t.as_bytes())
    }

    fn eat(&mut self, t: &str) -> bool {
        if self.at(t) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, m: impl fmt::Display) -> Result<T, String> {
        Err(format!("column {}: {m}", self.i + 1))
    }

    fn expect(&mut self, t: &str) -> Result<(), String> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected `{t}`"))
        }
    }

    fn word(&mut self) -> Result<String, String> {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if st == self.i {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.s[st..self.i]).into_owned())
    }

    fn number(&mut self) -> Result<usize, String> {
        let w = self.word()?;
        w.parse().or_else(|_| self.err(format!("expected a number, found `{w}`")))
    }

    fn kind(&mut self) -> Result<Kind, String> {
        let w = self.word()?;
        Kind::from_name(&w).map_or_else(|| self.err(format!("unknown entity `{w}`")), Ok)
    }

    fn attr_body(&mut self, close: &str) -> Result<RAttr, String> {
        let a = if self.eat("$") {
            RAttr::Var(self.word()?)
        } else if self.eat("!") {
            RAttr::Fresh(if self.at(close) { None } else { Some(self.number()?) })
        } else {
            let neg = self.eat("~");
            let w = self.word()?;
            RAttr::Const(if neg { format!("~{w}") } else { w })
        };
        self.expect(close)?;
        Ok(a)
    }

    fn item(&mut self) -> Result<Option<RItem>, String> {
        if self.eat("1") {
            return Ok(None);
        }
        let kinds = if self.eat("[") {
            let mut ks = vec![self.kind()?];
            while self.eat("/") {
                ks.push(self.kind()?);
            }
            self.expect("]")?;
            ks
        } else if self.eat("*") {
            Kind::ALL.to_vec()
        } else {
            let st = self.i;
            let w = self.word()?;
            if w == "id" {
                return Ok(Some(RItem::Site(None)));
            }
            if let Some(n) = w.strip_prefix('s').and_then(|d| d.parse().ok()) {
                return Ok(Some(RItem::Site(Some(n))));
            }
            self.i = st;
            vec![self.kind()?]
        };
        let mut attr = RAttr::None;
        if self.s.get(self.i) == Some(&b'(') {
            self.i += 1;
            attr = self.attr_body(")")?;
        } else if self.s.get(self.i) == Some(&b'{') {
            self.i += 1;
            attr = self.attr_body("}")?;
        }
        let mut meta = None;
        if self.s.get(self.i) == Some(&b'<') {
            let st = self.i + 1;
            let Some(end) = self.s[st..].iter().position(|c| *c == b'>') else { return self.err("unclosed `<`") };
            meta = Some(String::from_utf8_lossy(&self.s[st..st + end]).into_owned());
            self.i = st + end + 1;
        }
        let mut cap = None;
        if self.s.get(self.i) == Some(&b'@') {
            self.i += 1;
            cap = Some(self.number()?);
        }
        let mut children = Vec::new();
        if self.s.get(self.i) == Some(&b'.') {
            self.i += 1;
            if self.eat("(") {
                children = self.forest()?;
                self.expect(")")?;
            } else if let Some(c) = self.item()? {
                children.push(c);
            }
        }
        Ok(Some(RItem::Node { kinds, attr, meta, cap, children }))
    }

    fn forest(&mut self) -> Result<Vec<RItem>, String> {
        let mut out = Vec::new();
        loop {
            if let Some(x) = self.item()? {
                out.push(x);
            }
            if self.at("||") || !self.eat("|") {
                return Ok(out);
            }
        }
    }

    fn roots(&mut self) -> Result<Vec<Vec<RItem>>, String> {
        let mut out = vec![self.forest()?];
        while self.eat("||") {
            out.push(self.forest()?);
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Names {
    vars: HashMap<String, usize>,
    sites: usize,
    caps: usize,
}

impl Names {
    fn var(&mut self, v: &str) -> usize {
        let n = self.vars.len();
        *self.vars.entry(v.to_string()).or_insert(n)
    }
}

fn const_value(kind: Kind, text: &str) -> Result<Value, String> {
    Ok(match kind {
        Kind::B => match text.strip_prefix('~') {
            Some(a) => Value::Lit(Literal::neg(a)),
            None => Value::Lit(Literal::pos(text)),
        },
        Kind::E | Kind::PlanSet => Value::Name(Name::new(text)),
        Kind::Check | Kind::CheckRes => Value::Corr(text.parse().map_err(|_| format!("bad correlation id `{text}`"))?),
        k => return Err(format!("{k} takes no attribute")),
    })
}

fn to_pnode(it: &RItem, names: &mut Names) -> Result<PNode, String> {
    let RItem::Node { kinds, attr, cap, children, .. } = it else { return Err("a site cannot be a root".into()) };
    let kind = if kinds.len() == 1 { KindPat::One(kinds[0]) } else { KindPat::AnyOf(kinds.clone()) };
    let attr = match attr {
        RAttr::None => AttrPat::Any,
        RAttr::Var(v) => AttrPat::Var(names.var(v)),
        RAttr::Const(c) if kinds.len() == 1 => AttrPat::Const(const_value(kinds[0], c)?),
        RAttr::Const(_) => return Err("constant attribute on a kind alternative".into()),
        RAttr::Fresh(_) => return Err("fresh ids belong to the right-hand side".into()),
    };
    if let Some(c) = cap {
        names.caps = names.caps.max(c + 1);
    }
    let mut site = None;
    let mut pchildren = Vec::new();
    for c in children {
        match c {
            RItem::Site(s) => {
                let s = s.unwrap_or(ANON);
                if s != ANON {
                    names.sites = names.sites.max(s + 1);
                }
                match site {
                    None => site = Some(s),
                    Some(t) if t == s || (t == ANON && s == ANON) => {}
                    Some(_) => return Err("at most one site per child list".into()),
                }
            }
            n => pchildren.push(to_pnode(n, names)?),
        }
    }
    Ok(PNode { kind, attr, capture: *cap, children: pchildren, site })
}

fn to_titems(items: &[RItem], names: &mut Names, inst: &mut Vec<usize>) -> Result<Vec<TItem>, String> {
    items.iter().map(|it| to_titem(it, names, inst)).collect()
}

fn to_titem(it: &RItem, names: &mut Names, inst: &mut Vec<usize>) -> Result<TItem, String> {
    match it {
        RItem::Site(None) => Err("anonymous sites are not allowed on the right-hand side".into()),
        RItem::Site(Some(n)) => {
            if *n >= names.sites {
                return Err(format!("site s{n} is not bound by the left-hand side"));
            }
            inst.push(*n);
            Ok(TItem::Site(inst.len() - 1))
        }
        RItem::Node { kinds, attr, meta, cap, children } => {
            let ctrl = match (cap, attr) {
                (Some(c), _) => CtrlTpl::Captured(*c),
                (None, RAttr::Var(v)) => {
                    let Some(&i) = names.vars.get(v) else { return Err(format!("variable ${v} is not bound")) };
                    CtrlTpl::WithVar(single(kinds)?, i)
                }
                (None, RAttr::Fresh(Some(k))) => CtrlTpl::FreshCorr(single(kinds)?, *k),
                (None, RAttr::Fresh(None)) => CtrlTpl::FreshIntent,
                (None, RAttr::Const(c)) => {
                    let k = single(kinds)?;
                    CtrlTpl::Plain(with_attr(k, &const_value(k, c)?).ok_or("attribute does not fit")?)
                }
                (None, RAttr::None) => {
                    let k = single(kinds)?;
                    CtrlTpl::Plain(match (k, meta) {
                        (Kind::Act, Some(m)) => Control::Act(Name::new(m)),
                        (Kind::Plan, Some(m)) => Control::Plan(Name::new(m), 0),
                        (Kind::Intent, Some(m)) => Control::Intent(m.parse().map_err(|_| "bad intention id")?),
                        (_, Some(_)) => return Err(format!("{k} takes no meta")),
                        (_, None) => Control::of_kind(k),
                    })
                }
            };
            Ok(TItem::Node(TNode { ctrl, children: to_titems(children, names, inst)? }))
        }
    }
}

fn single(kinds: &[Kind]) -> Result<Kind, String> {
    match kinds {
        [k] => Ok(*k),
        _ => Err("the right-hand side needs a single entity kind or a capture".into()),
    }
}

/// Parses root patterns such as `Beliefs.(B(b5) | id) || Intent.ReduceF`.
/// Returns the roots and the (vars, sites, caps) shape of their bindings.
pub fn parse_pattern(text: &str) -> Result<(Vec<PNode>, (usize, usize, usize)), String> {
    let mut lx = Lx { s: text.as_bytes(), i: 0 };
    let roots = lx.roots()?;
    if lx.peek().is_some() {
        return lx.err("trailing input");
    }
    let mut names = Names::default();
    let lhs = roots_to_pnodes(&roots, &mut names)?;
    Ok((lhs, (names.vars.len(), names.sites, names.caps)))
}

fn roots_to_pnodes(roots: &[Vec<RItem>], names: &mut Names) -> Result<Vec<PNode>, String> {
    roots
        .iter()
        .map(|r| match r.as_slice() {
            [it] => to_pnode(it, names),
            _ => Err("each root must be exactly one entity".into()),
        })
        .collect()
}

/// Parses `name priority: LHS -> RHS [; unless sN has|contains PATTERN]*`.
pub fn parse_rule(line: &str) -> Result<Rule, String> {
    let (head, body) = line.split_once(':').ok_or("missing `:` after the rule name")?;
    let mut hw = head.split_whitespace();
    let name = hw.next().ok_or("missing rule name")?.to_string();
    let priority: i32 = hw.next().ok_or("missing priority")?.parse().map_err(|_| "bad priority")?;
    let ctx = |e: String| format!("{name}: {e}");
    let mut parts = body.split(';');
    let main = parts.next().unwrap_or("");
    let (l, r) = main.split_once("->").ok_or_else(|| ctx("missing `->`".into()))?;
    let mut names = Names::default();
    let lroots = Lx { s: l.as_bytes(), i: 0 }.roots().map_err(ctx)?;
    let lhs = roots_to_pnodes(&lroots, &mut names).map_err(ctx)?;
    let mut lx = Lx { s: r.as_bytes(), i: 0 };
    let rroots = lx.roots().map_err(ctx)?;
    if lx.peek().is_some() {
        return Err(ctx("trailing input after the right-hand side".into()));
    }
    if rroots.len() != lhs.len() {
        return Err(ctx(format!("{} redex roots but {} reactum roots", lhs.len(), rroots.len())));
    }
    let mut inst = Vec::new();
    let rhs = rroots.iter().map(|f| to_titems(f, &mut names, &mut inst)).collect::<Result<Vec<_>, _>>().map_err(ctx)?;
    let mut nacs = Vec::new();
    for p in parts {
        let mut lx = Lx { s: p.as_bytes(), i: 0 };
        lx.expect("unless").map_err(ctx)?;
        let s = lx.word().map_err(ctx)?;
        let site: usize = s.strip_prefix('s').and_then(|d| d.parse().ok()).ok_or_else(|| ctx(format!("expected a site, found `{s}`")))?;
        if site >= names.sites {
            return Err(ctx(format!("site s{site} is not bound by the left-hand side")));
        }
        let scope = match lx.word().map_err(ctx)?.as_str() {
            "has" => Scope::Children,
            "contains" => Scope::Anywhere,
            w => return Err(ctx(format!("expected `has` or `contains`, found `{w}`"))),
        };
        let f = lx.forest().map_err(ctx)?;
        if lx.peek().is_some() {
            return Err(ctx("trailing input in condition".into()));
        }
        let [it] = f.as_slice() else { return Err(ctx("a condition is one entity".into())) };
        let saved = names.sites;
        let pattern = to_pnode(&anonymize(it), &mut names).map_err(ctx)?;
        names.sites = saved;
        nacs.push(Nac { site, pattern, scope });
    }
    Ok(Rule {
        name,
        priority,
        lhs,
        rhs,
        inst,
        nacs,
        vars: names.vars.len(),
        sites: names.sites,
        caps: names.caps,
        text: body.split_whitespace().collect::<Vec<_>>().join(" "),
    })
}

/// Sites inside a condition only mean "anything else".
fn anonymize(it: &RItem) -> RItem {
    match it {
        RItem::Site(_) => RItem::Site(None),
        RItem::Node { kinds, attr, meta, cap, children } => RItem::Node {
            kinds: kinds.clone(),
            attr: attr.clone(),
            meta: meta.clone(),
            cap: *cap,
            children: children.iter().map(anonymize).collect(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sites_vars_and_conditions() {
        let r = parse_rule("x 3: Beliefs.(s0 | Add.(B($n) | s1)) -> Beliefs.(s0 | B($n) | Add.s1); unless s0 has B($n)").unwrap();
        assert_eq!((r.vars, r.sites, r.caps), (1, 2, 0));
        assert_eq!(r.inst, vec![0, 1]);
        assert_eq!(r.nacs.len(), 1);
        assert_eq!(r.nacs[0].scope, Scope::Children);
        assert_eq!(r.priority, 3);
    }

    #[test]
    fn rejects_unbound_names() {
        assert!(parse_rule("x 0: Intent.s0 -> Intent.s1").is_err());
        assert!(parse_rule("x 0: Intent.s0 -> B($n)").is_err());
        assert!(parse_rule("x 0: Intent.s0 -> 1 || 1").is_err());
        assert!(parse_rule("x 0: Intent.(s0 | s1) -> 1").is_err());
    }

    #[test]
    fn empty_reactum_and_duplication() {
        let r = parse_rule("x 0: Act.Pre.s0 -> Act.(s0 | s0)").unwrap();
        assert_eq!(r.inst, vec![0, 0]);
        let r = parse_rule("x 0: Intent -> 1").unwrap();
        assert_eq!(r.rhs, vec![vec![]]);
    }
}
