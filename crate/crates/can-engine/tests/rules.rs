use std::collections::BTreeSet;

use can_engine::{parse_pattern, parse_rule, find_occurrences, Catalog, ConcMode, Options, Value};
use can_syntax::{parse_agent, Name};
use can_term::{canonical_key, initial_state, lint, parse_state, parse_term, Kind, State, Term};
use proptest::prelude::*;

fn model(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../models/{name}.can", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn encoded(text: &str) -> State {
    initial_state(&parse_agent(text).unwrap())
}

fn matches(pat: &str, s: &State) -> usize {
    let (roots, shape) = parse_pattern(pat).unwrap();
    find_occurrences(&roots, &[], s, shape, None).len()
}

const CATALOG: [&str; 45] = [
    "check_T", "check_end", "check_F", "add_in", "add_notin", "add_end", "del_in", "del_notin", "delete_end",
    "act_check", "act_T", "act_F", "reduce_event", "reduce_event_none",
    "select_plan_check", "select_plan_T", "select_plan_F", "reset_planset",
    "reduce_seq", "seq_succ", "seq_fail", "try_seq", "try_succ", "try_failure",
    "conc_L", "conc_R", "conc_nil_L", "conc_nil_R", "conc_suc", "conc_fail_L", "conc_fail_R",
    "conc_retry_L", "conc_retry_R", "conc_commit",
    "goal_init", "goal_reduce", "goal_check", "goal_fail", "goal_suc", "goal_persist", "goal_persist_nil",
    "A_event", "intention_step", "intention_done_F", "intention_done_succ",
];

#[test]
fn catalog_has_the_expected_rules() {
    let cat = Catalog::standard();
    let names: BTreeSet<&str> = cat.names().into_iter().collect();
    assert_eq!(names, CATALOG.into_iter().collect());
    assert_eq!(cat.rules.len(), 45);
    let short = Catalog::new(Options { conc: ConcMode::ShortCircuit, ..Default::default() });
    assert_eq!(short.rules.len(), 42);
    let dropped = Catalog::new(Options { drop: vec!["try_failure".into()], ..Default::default() });
    assert!(dropped.rule("try_failure").is_none());
    assert_eq!(dropped.rules.len(), 44);
}

#[test]
fn rules_named_in_the_golden_trace_exist() {
    let cat = Catalog::standard();
    for n in [
        "intention_step", "reduce_event", "select_plan_check", "select_plan_T", "reset_planset", "try_seq", "reduce_seq",
        "act_check", "check_T", "check_end", "check_F", "act_T", "act_F", "seq_succ", "seq_fail", "try_failure",
        "add_notin", "add_end", "delete_end",
    ] {
        assert!(cat.rule(n).is_some(), "{n}");
    }
}

#[test]
fn set_ops_outrank_everything_else() {
    let cat = Catalog::standard();
    let set_ops = ["check_T", "check_end", "check_F", "add_in", "add_notin", "add_end", "del_in", "del_notin", "delete_end"];
    let top = cat.rules.iter().filter(|r| set_ops.contains(&r.name.as_str())).map(|r| r.priority).min().unwrap();
    for r in &cat.rules {
        if !set_ops.contains(&r.name.as_str()) {
            assert!(r.priority < top, "{}", r.name);
        }
    }
}

#[test]
fn dump_lists_every_rule_once() {
    let cat = Catalog::standard();
    let d = cat.dump();
    assert_eq!(d.lines().count(), 45);
    assert!(d.lines().next().unwrap().ends_with(cat.rules[0].text.as_str()));
    assert!(d.contains("unless s0 contains Reduce.id"));
}

#[test]
fn intent_site_matches_each_intention() {
    let s = parse_state("Beliefs || Desires || Intentions.(Intent.E{e1} | Intent.E{e2}) || Plans").unwrap();
    assert_eq!(matches("Intent.s0", &s), 2);
    assert_eq!(matches("Goal.s0", &s), 0);
}

#[test]
fn link_variables_bind() {
    let s = parse_state("Beliefs || Desires.E{e1} || Intentions || Plans").unwrap();
    let (roots, shape) = parse_pattern("E{$x}").unwrap();
    let occ = find_occurrences(&roots, &[], &s, shape, None);
    assert_eq!(occ.len(), 1);
    assert_eq!(occ[0].bind.vars, vec![Some(Value::Name(Name::new("e1")))]);
}

#[test]
fn duplicating_rule_copies_site_contents_only_inside_act() {
    // One Pre sits under an Act, another does not: only the first matches,
    // and its contents end up twice.
    let r = parse_rule("copy 0: Act.Pre.s0 -> Act.(s0 | s0)").unwrap();
    let s = parse_state("Beliefs.Pre.B(a) || Desires || Intentions.Intent.Act.Pre.B(b) || Plans").unwrap();
    let occ = r.occurrences(&s);
    assert_eq!(occ.len(), 1);
    let t = r.apply(&s, &occ[0]);
    let want = parse_state("Beliefs.Pre.B(a) || Desires || Intentions.Intent.Act.(B(b) | B(b)) || Plans").unwrap();
    assert_eq!(canonical_key(&t), canonical_key(&want));
}

#[test]
fn identity_rule_leaves_the_state_unchanged() {
    let r = parse_rule("id 0: Intent.s0 -> Intent.s0").unwrap();
    let t = parse_state("Beliefs.B(a) || Desires || Intentions.Intent.E{e} || Plans").unwrap();
    let u = r.apply(&t, &r.occurrences(&t)[0]);
    assert_eq!(u, t);
}

#[test]
fn try_failure_deletes_the_failed_branch() {
    let cat = Catalog::standard();
    let r = cat.rule("try_failure").unwrap();
    let s = parse_state("Beliefs || Desires || Intentions.Intent.Try.(ReduceF | Cons.E{x}) || Plans").unwrap();
    let occ = r.occurrences(&s);
    assert_eq!(occ.len(), 1);
    let t = r.apply(&s, &occ[0]);
    assert_eq!(t.regions[2].children[0].children, vec![parse_term("Reduce.E{x}").unwrap()]);
}

#[test]
fn pending_check_enables_only_set_operations() {
    let cat = Catalog::standard();
    let s = parse_state(
        "Beliefs.(B(a) | Check{0}.(B(a) | B(b))) || Desires.E{e} || \
         Intentions.Intent.Reduce.Act.(CheckRes{0} | Pre.(B(a) | B(b)) | Add | Del) || Plans",
    )
    .unwrap();
    let en = cat.enabled_reactions(&s);
    let names: BTreeSet<&str> = en.iter().map(|r| r.rule.name.as_str()).collect();
    assert_eq!(names, ["check_T", "check_F"].into_iter().collect());
}

#[test]
fn quiescent_agent_with_one_desire_only_adopts_it() {
    let cat = Catalog::standard();
    let s = encoded("events: e1\nplan P: e1 : true <- +x");
    let en = cat.enabled_reactions(&s);
    assert_eq!(en.len(), 1);
    assert_eq!(en[0].rule.name, "A_event");
    let t = en[0].apply(&s);
    assert_eq!(t.regions[2].children[0].children[0].kind(), Kind::E);
}

#[test]
fn empty_agent_has_no_reactions() {
    assert!(Catalog::standard().enabled_reactions(&State::default()).is_empty());
}

#[test]
fn finished_intention_is_removed_alongside_other_steps() {
    let cat = Catalog::standard();
    let s = parse_state("Beliefs || Desires.E{e} || Intentions.(Intent | Intent.E{e}) || Plans").unwrap();
    let names: BTreeSet<&str> = cat.enabled_reactions(&s).iter().map(|r| r.rule.name.as_str()).collect();
    assert_eq!(names, ["A_event", "intention_step", "intention_done_succ"].into_iter().collect());
}

#[test]
fn conditions_see_nested_entities() {
    let cat = Catalog::standard();
    let step = cat.rule("intention_step").unwrap();
    let s = parse_state("Beliefs || Desires || Intentions.Intent.Seq.(Reduce.E{e} | Cons.E{f}) || Plans").unwrap();
    assert_eq!(step.matches(&s).len(), 1);
    assert!(step.occurrences(&s).is_empty());
}

fn check_children(s: &State) -> usize {
    s.regions[0].children.iter().filter(|t| t.kind() == Kind::Check).map(|t| t.children.len()).sum()
}

fn set_op(name: &str) -> bool {
    matches!(name, "check_T" | "check_end" | "check_F" | "add_in" | "add_notin" | "add_end" | "del_in" | "del_notin" | "delete_end")
}

fn pending_updates(s: &State) -> usize {
    s.regions[0].children.iter().filter(|t| matches!(t.kind(), Kind::Add | Kind::Del | Kind::Check)).map(|t| t.children.len() + 1).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Random micro-step walks through the example models: every state is
    // lint-clean, set operations shrink the pending work, and applying the
    // same reaction twice gives the same result.
    #[test]
    fn random_walks_stay_well_formed(model_ix in 0usize..4, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..250)) {
        let name = ["conference", "patrol", "sensing", "retrieval"][model_ix];
        let cat = Catalog::standard();
        let mut s = encoded(&model(name));
        for p in picks {
            let en = cat.enabled_reactions(&s);
            if en.is_empty() {
                break;
            }
            let r = &en[p.index(en.len())];
            let t = r.apply(&s);
            prop_assert_eq!(&t, &r.apply(&s));
            prop_assert!(lint(&t).is_empty(), "{} broke the structure: {:?}", r.rule.name, lint(&t));
            if set_op(&r.rule.name) {
                prop_assert!(pending_updates(&t) < pending_updates(&s), "{}", r.rule.name);
                prop_assert!(check_children(&t) <= check_children(&s));
            }
            s = t;
        }
    }
}

#[test]
fn leaves_are_atomic_after_every_rule() {
    // Every reactum leaf of an atomic kind stays childless.
    let cat = Catalog::standard();
    let s = encoded(&model("sensing"));
    let mut frontier = vec![s];
    for _ in 0..40 {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, t) in cat.successors(s) {
                t.walk(&mut |n: &Term| assert!(!n.kind().is_atomic() || n.children.is_empty()));
                next.push(t);
            }
        }
        next.truncate(64);
        frontier = next;
    }
}
