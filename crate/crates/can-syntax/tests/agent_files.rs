use std::collections::BTreeSet;

use can_syntax::*;
use proptest::prelude::*;

fn model(name: &str) -> String {
    let p = format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn conference_agent_shape() {
    let cfg = parse_agent(&model("conference.can")).unwrap();
    assert_eq!(cfg.beliefs.len(), 4);
    assert_eq!(cfg.plans.len(), 3);
    assert_eq!(cfg.external_events, vec![Name::new("e1")]);
    assert_eq!(cfg.actions.len(), 6);
    let ids: Vec<&str> = cfg.plans.iter().map(|p| p.id.as_str()).collect();
    assert_eq!(ids, ["Pl1", "Pl2", "Pl3"]);
    let act6 = cfg.actions.iter().find(|a| a.name.as_str() == "act6").unwrap();
    assert_eq!(act6.pre, Formula::conj([Literal::pos("b10")]));
    assert_eq!(act6.del, [Literal::pos("b8"), Literal::pos("b10")].into_iter().collect());
}

#[test]
fn conference_agent_validates_cleanly() {
    let cfg = parse_agent(&model("conference.can")).unwrap();
    assert!(validate_agent(&cfg).is_empty());
}

#[test]
fn self_loop_is_recursive() {
    let cfg = parse_agent("plan P: e1 : true <- e1\n").unwrap();
    let d = validate_agent(&cfg);
    assert!(d.iter().any(|d| d.is_error() && d.message.contains("recursive")));
}

#[test]
fn indirect_recursion_detected() {
    let cfg = parse_agent("plan P: a : true <- b\nplan Q: b : true <- c || a\nplan R: c : true <- +x\n").unwrap();
    let errs: Vec<_> = validate_agent(&cfg).into_iter().filter(|d| d.is_error()).collect();
    assert_eq!(errs.len(), 2);
}

#[test]
fn unhandled_event_warns() {
    let cfg = parse_agent("events: e9\nplan P: e1 : true <- +x\n").unwrap();
    let d = validate_agent(&cfg);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].severity, Severity::Warning);
    assert!(d[0].message.contains("e9"));
}

#[test]
fn add_del_overlap_warns() {
    let cfg = parse_agent("action a: true <- +{x} -{x}\n").unwrap();
    let d = validate_agent(&cfg);
    assert_eq!(d.len(), 1);
    assert!(!d[0].is_error());
}

#[test]
fn diagnostic_rendering() {
    let errs = parse_agent("beliefs: a,\n").unwrap_err();
    assert_eq!(errs[0].render("x.can"), "x.can:1:12: error: expected belief atom, found end of line");
}

#[test]
fn desugar_table() {
    let q = desugar_basic(&BasicOp::Query(Formula::conj([Literal::pos("a")])));
    assert_eq!((q.pre.clone(), q.add.len(), q.del.len()), (Formula::conj([Literal::pos("a")]), 0, 0));
    let a = desugar_basic(&BasicOp::Add(Literal::neg("b")));
    assert_eq!(a.pre, Formula::True);
    assert_eq!(a.add, BTreeSet::from([Literal::neg("b")]));
    let d = desugar_basic(&BasicOp::Del(Literal::pos("b")));
    assert_eq!(d.del, BTreeSet::from([Literal::pos("b")]));
    assert!(d.add.is_empty());
}

fn lit() -> impl Strategy<Value = Literal> {
    (0..4usize, any::<bool>()).prop_map(|(i, p)| Literal { atom: Name::new(&format!("b{i}")), positive: p })
}

fn formula() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop::collection::vec(lit(), 1..3).prop_map(Formula::conj),
    ]
}

fn actions() -> impl Strategy<Value = Vec<ActionSpec>> {
    prop::collection::vec(
        (formula(), prop::collection::btree_set(lit(), 0..3), prop::collection::btree_set(lit(), 0..3)),
        1..4,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (pre, add, del))| ActionSpec { name: Name::new(&format!("act{i}")), pre, add, del })
            .collect()
    })
}

fn user_body(acts: Vec<ActionSpec>) -> BoxedStrategy<PlanBody> {
    let n = acts.len();
    let leaf = prop_oneof![
        (0..n).prop_map(move |i| PlanBody::act(acts[i].clone())),
        (0..3usize).prop_map(|i| PlanBody::Event(Name::new(&format!("e{i}")))),
        formula().prop_map(|f| PlanBody::act(desugar_basic(&BasicOp::Query(f)))),
        lit().prop_map(|l| PlanBody::act(desugar_basic(&BasicOp::Add(l)))),
        lit().prop_map(|l| PlanBody::act(desugar_basic(&BasicOp::Del(l)))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PlanBody::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PlanBody::conc(a, b)),
            (formula(), inner, formula()).prop_map(|(s, p, f)| PlanBody::goal(s, p, f)),
        ]
    })
    .boxed()
}

fn internal_body(acts: Vec<ActionSpec>) -> impl Strategy<Value = PlanBody> {
    let user = user_body(acts.clone()).boxed();
    let leaf = prop_oneof![Just(PlanBody::Nil), user_body(acts)];
    leaf.prop_recursive(2, 8, 2, move |inner| {
        let alts = prop::collection::vec((formula(), user.clone()), 0..3);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PlanBody::try_(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| PlanBody::seq(a, b)),
            alts.prop_map(|v| {
                let e = Name::new("e0");
                let plans = v
                    .into_iter()
                    .enumerate()
                    .map(|(i, (context, body))| Plan {
                        id: Name::new(&format!("Q{i}")),
                        trigger: e.clone(),
                        context,
                        body,
                    })
                    .collect();
                PlanBody::PlanSet(e, plans)
            }),
        ]
    })
}

fn agent() -> impl Strategy<Value = AgentConfig> {
    actions().prop_flat_map(|acts| {
        let plans = prop::collection::vec((0..3usize, formula(), user_body(acts.clone())), 0..4);
        let ints = prop::collection::vec(internal_body(acts.clone()), 0..3);
        let events = prop::collection::vec(0..3usize, 0..3);
        let beliefs = prop::collection::btree_set(lit(), 0..4);
        (Just(acts), plans, ints, events, beliefs).prop_map(|(actions, plans, ints, events, beliefs)| {
            let mut cfg = AgentConfig { actions, beliefs, ..Default::default() };
            for (i, (t, context, body)) in plans.into_iter().enumerate() {
                cfg.plans.push(Plan {
                    id: Name::new(&format!("Pl{i}")),
                    trigger: Name::new(&format!("e{t}")),
                    context,
                    body,
                });
            }
            for (i, body) in ints.into_iter().enumerate() {
                cfg.intentions.push(Intention { id: 2 * i as u32 + 1, body });
            }
            for e in events {
                cfg.add_event(Name::new(&format!("e{e}")));
            }
            cfg
        })
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(cfg in agent()) {
        let text = print::agent(&cfg);
        let back = parse_agent(&text).map_err(|e| TestCaseError::fail(format!("{e:?}\n{text}")))?;
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn formula_normalized(lits in prop::collection::vec(lit(), 0..6)) {
        let f = Formula::conj(lits.clone());
        if lits.is_empty() {
            prop_assert_eq!(f, Formula::True);
        } else {
            let ls = f.literals();
            prop_assert!(ls.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(lits.iter().all(|l| ls.contains(l)));
        }
    }
}
