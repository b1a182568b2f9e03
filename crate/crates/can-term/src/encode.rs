//! Structural encoding of agents as terms, and its inverse.

use std::collections::BTreeSet;
use std::sync::Arc;

use can_syntax::{ActionSpec, AgentConfig, Formula, Intention, Literal, Name, Plan, PlanBody};

use crate::control::{Control, Kind};
use crate::term::{State, Term, BELIEFS, DESIRES, INTENTIONS, PLANS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("auxiliary entity present: {0}")]
    Auxiliary(Kind),
    #[error("malformed term: {0}")]
    Malformed(String),
    #[error("action `{0}` does not match its declaration")]
    ActionMismatch(Name),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError::Malformed(msg.into()))
}

pub fn encode_formula(f: &Formula) -> Vec<Term> {
    match f {
        Formula::True => vec![],
        Formula::False => vec![Term::leaf(Control::False)],
        Formula::Conj(ls) => ls.iter().map(|l| Term::leaf(Control::B(l.clone()))).collect(),
    }
}

fn lits(s: &BTreeSet<Literal>) -> Vec<Term> {
    s.iter().map(|l| Term::leaf(Control::B(l.clone()))).collect()
}

pub fn encode_action(a: &ActionSpec) -> Term {
    Term::new(
        Control::Act(a.name.clone()),
        vec![
            Term::new(Control::Pre, encode_formula(&a.pre)),
            Term::new(Control::Add, lits(&a.add)),
            Term::new(Control::Del, lits(&a.del)),
        ],
    )
}

pub fn encode_plan(p: &Plan, ordinal: u32) -> Term {
    Term::new(
        Control::Plan(p.id.clone(), ordinal),
        vec![
            Term::new(Control::Pre, encode_formula(&p.context)),
            Term::new(Control::PB, encode_program(&p.body)),
        ],
    )
}

/// `nil` encodes to the empty forest; every other program to one node.
pub fn encode_program(p: &PlanBody) -> Vec<Term> {
    let t = match p {
        PlanBody::Nil => return vec![],
        PlanBody::Act(a) => encode_action(a),
        PlanBody::Event(e) => Term::leaf(Control::E(e.clone())),
        PlanBody::Seq(a, b) => seq_like(Control::Seq, a, b),
        PlanBody::Try(a, b) => seq_like(Control::Try, a, b),
        PlanBody::Conc(a, b) => Term::new(
            Control::Conc,
            vec![Term::new(Control::L, encode_program(a)), Term::new(Control::R, encode_program(b))],
        ),
        PlanBody::Goal(s, q, f) => {
            let mut ch = vec![Term::new(Control::SC, encode_formula(s))];
            ch.extend(encode_program(q));
            ch.push(Term::new(Control::FC, encode_formula(f)));
            Term::new(Control::Goal, ch)
        }
        PlanBody::PlanSet(e, plans) => Term::new(
            Control::PlanSet(e.clone()),
            plans.iter().enumerate().map(|(i, pl)| encode_plan(pl, i as u32)).collect(),
        ),
    };
    vec![t]
}

fn seq_like(ctrl: Control, a: &PlanBody, b: &PlanBody) -> Term {
    let mut ch = encode_program(a);
    ch.push(Term::new(Control::Cons, encode_program(b)));
    Term::new(ctrl, ch)
}

/// Library as plan sets grouped by trigger, in order of first appearance.
pub fn encode_library(plans: &[Plan]) -> Term {
    let mut groups: Vec<(Name, Vec<Term>)> = Vec::new();
    for (i, p) in plans.iter().enumerate() {
        let t = encode_plan(p, i as u32);
        match groups.iter_mut().find(|(e, _)| *e == p.trigger) {
            Some((_, g)) => g.push(t),
            None => groups.push((p.trigger.clone(), vec![t])),
        }
    }
    Term::new(Control::Plans, groups.into_iter().map(|(e, g)| Term::new(Control::PlanSet(e), g)).collect())
}

pub fn encode_config(cfg: &AgentConfig) -> State {
    let mut s = State::default();
    s.regions[BELIEFS].children = lits(&cfg.beliefs);
    s.regions[DESIRES].children = cfg.external_events.iter().map(|e| Term::leaf(Control::E(e.clone()))).collect();
    s.regions[INTENTIONS].children =
        cfg.intentions.iter().map(|i| Term::new(Control::Intent(i.id), encode_program(&i.body))).collect();
    s.regions[PLANS] = encode_library(&cfg.plans);
    s
}

/// Puts one check token on every plan that lacks one. This is the normal
/// form the reaction rules expect before any plan selection.
pub fn seed_check_tokens(mut s: State) -> State {
    s.walk_mut(&mut |t| {
        if t.kind() == Kind::Plan && !t.children.iter().any(|c| c.kind() == Kind::CheckToken) {
            t.children.push(Term::leaf(Control::CheckToken));
        }
    });
    s
}

/// Encoding followed by token seeding: the initial state of the transition system.
pub fn initial_state(cfg: &AgentConfig) -> State {
    seed_check_tokens(encode_config(cfg))
}

pub fn decode_formula(ch: &[Term]) -> Result<Formula, DecodeError> {
    if ch.iter().any(|t| t.kind() == Kind::False) {
        if ch.len() != 1 {
            return bad("False mixed with literals");
        }
        return Ok(Formula::False);
    }
    let mut out = Vec::new();
    for t in ch {
        match &t.ctrl {
            Control::B(l) => out.push(l.clone()),
            c => return bad(format!("{} in a formula", c.kind())),
        }
    }
    Ok(Formula::conj(out))
}

fn decode_lits(ch: &[Term]) -> Result<BTreeSet<Literal>, DecodeError> {
    ch.iter()
        .map(|t| match &t.ctrl {
            Control::B(l) => Ok(l.clone()),
            c => bad(format!("{} in a belief set", c.kind())),
        })
        .collect()
}

fn only(t: &Term, kind: Kind) -> Result<&Term, DecodeError> {
    let mut it = t.children.iter().filter(|c| c.kind() == kind);
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => bad(format!("{} needs exactly one {kind}", t.kind())),
    }
}

/// Children without the given kinds, ignoring check tokens.
fn rest<'a>(t: &'a Term, skip: &[Kind]) -> Vec<&'a Term> {
    t.children.iter().filter(|c| !skip.contains(&c.kind()) && c.kind() != Kind::CheckToken).collect()
}

struct Decoder<'a> {
    declared: &'a [ActionSpec],
}

impl Decoder<'_> {
    fn forest(&self, ts: &[&Term]) -> Result<PlanBody, DecodeError> {
        match ts {
            [] => Ok(PlanBody::Nil),
            [t] => self.program(t),
            _ => bad("more than one program in one position"),
        }
    }

    fn action(&self, t: &Term, name: &Name) -> Result<ActionSpec, DecodeError> {
        let spec = ActionSpec {
            name: name.clone(),
            pre: decode_formula(&only(t, Kind::Pre)?.children)?,
            add: decode_lits(&only(t, Kind::Add)?.children)?,
            del: decode_lits(&only(t, Kind::Del)?.children)?,
        };
        if let Some(d) = self.declared.iter().find(|d| d.name == *name) {
            if *d != spec {
                return Err(DecodeError::ActionMismatch(name.clone()));
            }
        }
        Ok(spec)
    }

    fn plan(&self, t: &Term, trigger: &Name) -> Result<(u32, Plan), DecodeError> {
        let Control::Plan(id, ord) = &t.ctrl else { return bad("expected Plan") };
        let context = decode_formula(&only(t, Kind::Pre)?.children)?;
        let pb = only(t, Kind::PB)?;
        let body = self.forest(&pb.children.iter().collect::<Vec<_>>())?;
        Ok((*ord, Plan { id: id.clone(), trigger: trigger.clone(), context, body }))
    }

    fn plan_set(&self, t: &Term, e: &Name) -> Result<Vec<(u32, Plan)>, DecodeError> {
        rest(t, &[]).into_iter().map(|p| self.plan(p, e)).collect()
    }

    fn program(&self, t: &Term) -> Result<PlanBody, DecodeError> {
        if t.kind().is_auxiliary() {
            return Err(DecodeError::Auxiliary(t.kind()));
        }
        match &t.ctrl {
            Control::Act(name) => Ok(PlanBody::Act(Arc::new(self.action(t, name)?))),
            Control::E(e) => Ok(PlanBody::Event(e.clone())),
            Control::Seq | Control::Try => {
                let cons = only(t, Kind::Cons)?;
                let a = self.forest(&rest(t, &[Kind::Cons]))?;
                let b = self.forest(&cons.children.iter().collect::<Vec<_>>())?;
                Ok(if t.kind() == Kind::Seq { PlanBody::seq(a, b) } else { PlanBody::try_(a, b) })
            }
            Control::Conc => {
                let l = only(t, Kind::L)?;
                let r = only(t, Kind::R)?;
                if t.children.len() != 2 {
                    return bad("Conc needs exactly L and R");
                }
                let a = self.forest(&l.children.iter().collect::<Vec<_>>())?;
                let b = self.forest(&r.children.iter().collect::<Vec<_>>())?;
                Ok(PlanBody::conc(a, b))
            }
            Control::Goal => {
                let s = decode_formula(&only(t, Kind::SC)?.children)?;
                let f = decode_formula(&only(t, Kind::FC)?.children)?;
                let q = self.forest(&rest(t, &[Kind::SC, Kind::FC]))?;
                Ok(PlanBody::goal(s, q, f))
            }
            Control::PlanSet(e) => {
                let mut ps = self.plan_set(t, e)?;
                ps.sort_by_key(|(o, _)| *o);
                Ok(PlanBody::PlanSet(e.clone(), ps.into_iter().map(|(_, p)| p).collect()))
            }
            c => bad(format!("{} is not a program", c.kind())),
        }
    }
}

/// Inverse of `encode_config` on auxiliary-free states. Declared actions are
/// static and not part of the state, so they are passed in; named actions
/// found in the term must agree with them.
pub fn decode_config(s: &State, declared: &[ActionSpec]) -> Result<AgentConfig, DecodeError> {
    let mut aux = None;
    s.walk(&mut |t| {
        if aux.is_none() && t.kind().is_auxiliary() {
            aux = Some(t.kind());
        }
    });
    if let Some(k) = aux {
        return Err(DecodeError::Auxiliary(k));
    }
    let d = Decoder { declared };
    let mut cfg = AgentConfig { actions: declared.to_vec(), ..Default::default() };
    cfg.beliefs = decode_lits(&s.regions[BELIEFS].children)?;
    for t in &s.regions[DESIRES].children {
        match &t.ctrl {
            Control::E(e) => cfg.add_event(e.clone()),
            c => return bad(format!("{} in Desires", c.kind())),
        }
    }
    for t in &s.regions[INTENTIONS].children {
        let Control::Intent(id) = t.ctrl else { return bad(format!("{} in Intentions", t.kind())) };
        let body = d.forest(&t.children.iter().collect::<Vec<_>>())?;
        cfg.intentions.push(Intention { id, body });
    }
    cfg.intentions.sort_by_key(|i| i.id);
    let mut plans = Vec::new();
    for t in &s.regions[PLANS].children {
        let Control::PlanSet(e) = &t.ctrl else { return bad(format!("{} in Plans", t.kind())) };
        plans.extend(d.plan_set(t, e)?);
    }
    plans.sort_by_key(|(o, _)| *o);
    cfg.plans = plans.into_iter().map(|(_, p)| p).collect();
    Ok(cfg)
}
