use std::collections::BTreeSet;

use can_semantics::*;
use can_syntax::*;

fn model(name: &str) -> AgentConfig {
    let p = format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_agent(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn beliefs(names: &[&str]) -> BTreeSet<Literal> {
    names.iter().map(|n| Literal::pos(n)).collect()
}

fn action<'a>(cfg: &'a AgentConfig, name: &str) -> &'a ActionSpec {
    cfg.actions.iter().find(|a| a.name.as_str() == name).unwrap()
}

const OPTS: Options = Options { try_failure: TryFailure::StepBackup };

#[test]
fn entails_examples() {
    let b = beliefs(&["b1", "b2", "b6", "b7"]);
    assert!(entails(&b, &Formula::conj([Literal::pos("b1"), Literal::pos("b2")])));
    assert!(entails(&BTreeSet::new(), &Formula::True));
    assert!(!entails(&b, &Formula::conj([Literal::pos("b3")])));
    assert!(!entails(&b, &Formula::False));
}

#[test]
fn revise_examples() {
    let cfg = model("conference.can");
    let b = beliefs(&["b1", "b2", "b6", "b7"]);
    let a3 = action(&cfg, "act3");
    assert_eq!(revise(&b, &a3.add, &a3.del), beliefs(&["b1", "b2", "b6", "b7", "b8"]));
    let a6 = action(&cfg, "act6");
    let after = revise(&beliefs(&["b1", "b8", "b10"]), &a6.add, &a6.del);
    assert_eq!(after, beliefs(&["b1", "b9"]));
    assert_eq!(revise(&b, &BTreeSet::new(), &BTreeSet::new()), b);
}

#[test]
fn event_expands_to_relevant_plans() {
    let cfg = model("conference.can");
    let s = intention_successors(&cfg.beliefs, &PlanBody::Event(Name::new("e1")), &cfg.plans, OPTS);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].rule(), IRule::Event);
    let want = PlanBody::PlanSet(Name::new("e1"), cfg.plans[..2].to_vec());
    assert_eq!(s[0].body, want);
}

#[test]
fn select_offers_each_applicable_plan() {
    let cfg = model("conference.can");
    let delta = cfg.plans[..2].to_vec();
    let ps = PlanBody::PlanSet(Name::new("e1"), delta.clone());
    let s = intention_successors(&cfg.beliefs, &ps, &cfg.plans, OPTS);
    // Oracle: one successor per plan whose context holds, the rest kept as backup.
    let mut want = Vec::new();
    for (i, pl) in delta.iter().enumerate() {
        if pl.context.literals().iter().all(|l| cfg.beliefs.contains(l)) {
            let mut rest = delta.clone();
            rest.remove(i);
            want.push(PlanBody::try_(pl.body.clone(), PlanBody::PlanSet(Name::new("e1"), rest)));
        }
    }
    assert_eq!(want.len(), 2);
    let got: Vec<PlanBody> = s.iter().map(|x| x.body.clone()).collect();
    assert_eq!(got, want);
    assert!(s.iter().all(|x| x.rule() == IRule::Select));
}

#[test]
fn try_with_finished_left() {
    let p = PlanBody::try_(PlanBody::Nil, PlanBody::Event(Name::new("e")));
    let s = intention_successors(&BTreeSet::new(), &p, &[], OPTS);
    assert_eq!(s.len(), 1);
    assert_eq!((s[0].rule(), s[0].body.clone()), (IRule::TriTop, PlanBody::Nil));
}

#[test]
fn goal_init_duplicates_program() {
    let cfg = model("conference.can");
    let e2 = PlanBody::Event(Name::new("e2"));
    let g = PlanBody::goal(Formula::conj([Literal::pos("b5")]), e2.clone(), Formula::conj([Literal::pos("b4")]));
    let s = intention_successors(&cfg.beliefs, &g, &cfg.plans, OPTS);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].rule(), IRule::Ginit);
    let want = PlanBody::goal(
        Formula::conj([Literal::pos("b5")]),
        PlanBody::try_(e2.clone(), e2),
        Formula::conj([Literal::pos("b4")]),
    );
    assert_eq!(s[0].body, want);
}

#[test]
fn goal_with_both_conditions_true_has_two_outcomes() {
    let g = PlanBody::goal(Formula::True, PlanBody::Event(Name::new("e")), Formula::True);
    let s = intention_successors(&BTreeSet::new(), &g, &[], OPTS);
    let rules: Vec<IRule> = s.iter().map(|x| x.rule()).collect();
    assert_eq!(rules, [IRule::Gs, IRule::Gf]);
    let PlanBody::Act(a) = &s[1].body else { panic!() };
    assert_eq!(a.pre, Formula::False);
}

#[test]
fn blocked_examples() {
    let cfg = model("conference.can");
    let act1 = PlanBody::act(action(&cfg, "act1").clone());
    let act3 = PlanBody::act(action(&cfg, "act3").clone());
    assert!(is_blocked(&cfg.beliefs, &act1, &cfg.plans, OPTS));
    assert!(is_blocked(&cfg.beliefs, &PlanBody::Nil, &cfg.plans, OPTS));
    assert!(!is_blocked(&cfg.beliefs, &act3, &cfg.plans, OPTS));
}

#[test]
fn agent_adopts_pending_event() {
    let cfg = model("conference.can");
    let s = agent_successors(&cfg, OPTS);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].rule, AgentRule::Event);
    assert!(s[0].after.external_events.is_empty());
    assert_eq!(s[0].after.intentions, vec![Intention { id: 1, body: PlanBody::Event(Name::new("e1")) }]);
}

#[test]
fn finished_intention_is_dropped() {
    let cfg = AgentConfig { intentions: vec![Intention { id: 1, body: PlanBody::Nil }], ..Default::default() };
    let s = agent_successors(&cfg, OPTS);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].rule, AgentRule::Update);
    assert!(s[0].after.intentions.is_empty());
}

#[test]
fn sensing_after_adoption_has_one_successor() {
    let cfg = model("sensing.can");
    let adopted = agent_successors(&cfg, OPTS).remove(0).after;
    // Brute force: count pairs (intention, derivation) plus blocked intentions.
    let mut n = 0;
    for it in &adopted.intentions {
        let k = intention_successors(&adopted.beliefs, &it.body, &adopted.plans, OPTS).len();
        n += if k == 0 { 1 } else { k };
    }
    assert_eq!(n, 1);
    assert_eq!(agent_successors(&adopted, OPTS).len(), 1);
}

#[test]
fn conference_reaches_venue_by_air() {
    let cfg = model("conference.can");
    let ex = reachable_configs(&cfg, None, OPTS);
    assert_eq!(ex.status, Status::Closed);
    let b5 = Literal::pos("b5");
    let b4 = Literal::pos("b4");
    assert!(ex.terminals().iter().any(|&i| ex.configs[i].beliefs.contains(&b5)));
    assert!(ex.configs.iter().all(|c| !c.beliefs.contains(&b4)));
}

#[test]
fn quiescent_agent_is_single_state() {
    let ex = reachable_configs(&AgentConfig::default(), Some(5), OPTS);
    assert_eq!(ex.configs.len(), 1);
    assert!(ex.edges.is_empty());
    assert_eq!(ex.status, Status::Closed);
}

#[test]
fn depth_bound_reported() {
    let cfg = model("conference.can");
    let ex = reachable_configs(&cfg, Some(2), OPTS);
    assert_eq!(ex.status, Status::DepthBoundHit);
    assert!(ex.depth.iter().all(|&d| d <= 2));
    let full = reachable_configs(&cfg, Some(1000), OPTS);
    assert_eq!(full.status, Status::Closed);
}

#[test]
fn patrol_never_quiesces() {
    let cfg = model("patrol.can");
    let ex = reachable_configs(&cfg, None, OPTS);
    assert_eq!(ex.status, Status::Closed);
    assert!(ex.terminals().is_empty());
}

#[test]
fn wait_free_failure_drops_left_side() {
    let cfg = model("conference.can");
    let act1 = PlanBody::act(action(&cfg, "act1").clone());
    let backup = PlanBody::Event(Name::new("e2"));
    let p = PlanBody::try_(act1, backup.clone());
    let opts = Options { try_failure: TryFailure::WaitFree };
    let s = intention_successors(&cfg.beliefs, &p, &cfg.plans, opts);
    assert_eq!(s.len(), 1);
    assert_eq!((s[0].rule(), s[0].body.clone()), (IRule::TriBot, backup));
    let s = intention_successors(&cfg.beliefs, &p, &cfg.plans, OPTS);
    assert_eq!(s[0].derivation, [IRule::TriBot, IRule::Event]);
}

#[test]
fn trace_lists_steps() {
    let cfg = model("conference.can");
    let start = PlanBody::Event(Name::new("e1"));
    let s1 = intention_successors(&cfg.beliefs, &start, &cfg.plans, OPTS).remove(0);
    let text = trace::intention_trace(&start, &[s1]);
    assert!(text.starts_with("(1) e1  --event-->  {e1: Pl1: b1 & b2 <- (act1; act2), Pl2:"));
}
