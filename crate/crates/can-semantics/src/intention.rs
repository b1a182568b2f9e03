use std::collections::BTreeSet;
use std::fmt;

use can_syntax::{query_false, ActionKind, Formula, Literal, Plan, PlanBody};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum IRule {
    Act,
    Query,
    Addb,
    Delb,
    Event,
    Select,
    TriSeq,
    TriTop,
    TriBot,
    Seq,
    SeqTop,
    Par1,
    Par2,
    ParTop,
    Gs,
    Gf,
    Ginit,
    Gseq,
    Gtri,
}

impl IRule {
    pub const ALL: [IRule; 19] = [
        IRule::Act,
        IRule::Query,
        IRule::Addb,
        IRule::Delb,
        IRule::Event,
        IRule::Select,
        IRule::TriSeq,
        IRule::TriTop,
        IRule::TriBot,
        IRule::Seq,
        IRule::SeqTop,
        IRule::Par1,
        IRule::Par2,
        IRule::ParTop,
        IRule::Gs,
        IRule::Gf,
        IRule::Ginit,
        IRule::Gseq,
        IRule::Gtri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IRule::Act => "act",
            IRule::Query => "query",
            IRule::Addb => "addb",
            IRule::Delb => "delb",
            IRule::Event => "event",
            IRule::Select => "select",
            IRule::TriSeq => "tri_seq",
            IRule::TriTop => "tri_top",
            IRule::TriBot => "tri_bot",
            IRule::Seq => "seq",
            IRule::SeqTop => "seq_top",
            IRule::Par1 => "par1",
            IRule::Par2 => "par2",
            IRule::ParTop => "par_top",
            IRule::Gs => "Gs",
            IRule::Gf => "Gf",
            IRule::Ginit => "Ginit",
            IRule::Gseq => "Gseq",
            IRule::Gtri => "Gtri",
        }
    }
}

impl fmt::Display for IRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which published form of the try-failure rule to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum TryFailure {
    /// The backup must itself be able to step; the failure and that step are one transition.
    #[default]
    StepBackup,
    /// The blocked left side is dropped in one transition; the backup runs later.
    WaitFree,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Options {
    pub try_failure: TryFailure,
}

/// One derivation. `derivation` lists the rules from the conclusion down to
/// the axiom that fired, so `derivation[0]` is the rule at the root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntentionStep {
    pub derivation: Vec<IRule>,
    pub beliefs: BTreeSet<Literal>,
    pub body: PlanBody,
}

impl IntentionStep {
    pub fn rule(&self) -> IRule {
        self.derivation[0]
    }

    fn wrap(mut self, rule: IRule, f: impl FnOnce(PlanBody) -> PlanBody) -> Self {
        self.derivation.insert(0, rule);
        self.body = f(self.body);
        self
    }
}

pub fn entails(beliefs: &BTreeSet<Literal>, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Conj(ls) => ls.iter().all(|l| beliefs.contains(l)),
    }
}

pub fn revise(beliefs: &BTreeSet<Literal>, add: &BTreeSet<Literal>, del: &BTreeSet<Literal>) -> BTreeSet<Literal> {
    beliefs.difference(del).chain(add.iter()).cloned().collect()
}

fn leaf(rule: IRule, beliefs: BTreeSet<Literal>, body: PlanBody) -> IntentionStep {
    IntentionStep { derivation: vec![rule], beliefs, body }
}

/// Every successor of `⟨B, P⟩` under every applicable rule. Empty means blocked.
pub fn intention_successors(
    b: &BTreeSet<Literal>,
    p: &PlanBody,
    plans: &[Plan],
    opts: Options,
) -> Vec<IntentionStep> {
    let mut out = Vec::new();
    match p {
        PlanBody::Nil => {}
        PlanBody::Act(a) => {
            if entails(b, &a.pre) {
                let rule = match a.kind() {
                    ActionKind::Named => IRule::Act,
                    ActionKind::Query => IRule::Query,
                    ActionKind::AddBelief => IRule::Addb,
                    ActionKind::DelBelief => IRule::Delb,
                };
                out.push(leaf(rule, revise(b, &a.add, &a.del), PlanBody::Nil));
            }
        }
        PlanBody::Event(e) => {
            let delta: Vec<Plan> = plans.iter().filter(|pl| &pl.trigger == e).cloned().collect();
            out.push(leaf(IRule::Event, b.clone(), PlanBody::PlanSet(e.clone(), delta)));
        }
        PlanBody::PlanSet(e, delta) => {
            for (i, pl) in delta.iter().enumerate() {
                if entails(b, &pl.context) {
                    let mut rest = delta.clone();
                    rest.remove(i);
                    let next = PlanBody::try_(pl.body.clone(), PlanBody::PlanSet(e.clone(), rest));
                    out.push(leaf(IRule::Select, b.clone(), next));
                }
            }
        }
        PlanBody::Try(p1, p2) => {
            if p1.is_nil() {
                out.push(leaf(IRule::TriTop, b.clone(), PlanBody::Nil));
            } else {
                let left = intention_successors(b, p1, plans, opts);
                if left.is_empty() {
                    match opts.try_failure {
                        TryFailure::StepBackup => {
                            for s in intention_successors(b, p2, plans, opts) {
                                out.push(s.wrap(IRule::TriBot, |x| x));
                            }
                        }
                        TryFailure::WaitFree => out.push(leaf(IRule::TriBot, b.clone(), (**p2).clone())),
                    }
                } else {
                    for s in left {
                        out.push(s.wrap(IRule::TriSeq, |x| PlanBody::try_(x, (**p2).clone())));
                    }
                }
            }
        }
        PlanBody::Seq(p1, p2) => {
            if p1.is_nil() {
                for s in intention_successors(b, p2, plans, opts) {
                    out.push(s.wrap(IRule::SeqTop, |x| x));
                }
            } else {
                for s in intention_successors(b, p1, plans, opts) {
                    out.push(s.wrap(IRule::Seq, |x| PlanBody::seq(x, (**p2).clone())));
                }
            }
        }
        PlanBody::Conc(p1, p2) => {
            if p1.is_nil() && p2.is_nil() {
                out.push(leaf(IRule::ParTop, b.clone(), PlanBody::Nil));
            }
            for s in intention_successors(b, p1, plans, opts) {
                out.push(s.wrap(IRule::Par1, |x| PlanBody::conc(x, (**p2).clone())));
            }
            for s in intention_successors(b, p2, plans, opts) {
                out.push(s.wrap(IRule::Par2, |x| PlanBody::conc((**p1).clone(), x)));
            }
        }
        PlanBody::Goal(sc, q, fc) => {
            let s_holds = entails(b, sc);
            let f_holds = entails(b, fc);
            if s_holds {
                out.push(leaf(IRule::Gs, b.clone(), PlanBody::Nil));
            }
            if f_holds {
                out.push(leaf(IRule::Gf, b.clone(), PlanBody::act(query_false())));
            }
            if !s_holds && !f_holds {
                let goal = |x| PlanBody::goal(sc.clone(), x, fc.clone());
                match &**q {
                    PlanBody::Try(p1, p2) => {
                        let left = intention_successors(b, p1, plans, opts);
                        if left.is_empty() {
                            let again = PlanBody::try_((**p2).clone(), (**p2).clone());
                            out.push(leaf(IRule::Gtri, b.clone(), goal(again)));
                        }
                        for s in left {
                            out.push(s.wrap(IRule::Gseq, |x| goal(PlanBody::try_(x, (**p2).clone()))));
                        }
                    }
                    other => {
                        let init = PlanBody::try_(other.clone(), other.clone());
                        out.push(leaf(IRule::Ginit, b.clone(), goal(init)));
                    }
                }
            }
        }
    }
    out
}

pub fn is_blocked(b: &BTreeSet<Literal>, p: &PlanBody, plans: &[Plan], opts: Options) -> bool {
    intention_successors(b, p, plans, opts).is_empty()
}
