use std::collections::HashSet;

use can_engine::Catalog;
use can_syntax::{parse_agent, Literal};
use can_term::{canonical_key, decode_config, initial_state, lint, Control, State};
use can_ts::*;

fn model(name: &str) -> can_syntax::AgentConfig {
    let text = std::fs::read_to_string(format!("{}/../../models/{name}.can", env!("CARGO_MANIFEST_DIR"))).unwrap();
    parse_agent(&text).unwrap()
}

fn full(name: &str) -> Ts {
    build_full(&initial_state(&model(name)), &Catalog::standard(), DEFAULT_BUDGET)
}

const MODELS: [&str; 4] = ["conference", "patrol", "sensing", "retrieval"];

#[test]
fn empty_agent_has_one_state() {
    let ts = build_full(&State::default(), &Catalog::standard(), DEFAULT_BUDGET);
    assert_eq!((ts.len(), ts.edges.len(), ts.closed), (1, 0, true));
    let dot = export_dot(&ts);
    assert_eq!(dot, "digraph ts {\n  0 [label=\"0\", shape=doublecircle];\n}\n");
    assert_eq!(export_transitions(&ts).unwrap(), "1 1\n0 0 1\n");
}

#[test]
fn conference_never_believes_b4() {
    let ts = full("conference");
    assert!(ts.closed);
    let b4 = Control::B(Literal::pos("b4"));
    for s in &ts.states {
        assert!(s.regions[0].children.iter().all(|t| t.ctrl != b4));
    }
}

#[test]
fn models_close_without_stuck_micro_states() {
    for m in MODELS {
        let ts = full(m);
        assert!(ts.closed, "{m}");
        assert!(ts.micro_violations().is_empty(), "{m}");
        for s in &ts.states {
            assert!(lint(s).is_empty(), "{m}");
        }
    }
}

#[test]
fn states_are_canonical_and_distinct() {
    for m in MODELS {
        let ts = full(m);
        let keys: HashSet<&String> = ts.keys.iter().collect();
        assert_eq!(keys.len(), ts.len());
        for (s, k) in ts.states.iter().zip(&ts.keys) {
            assert_eq!(&canonical_key(s), k);
        }
    }
}

#[test]
fn every_edge_is_a_prioritised_reaction() {
    let cat = Catalog::standard();
    let ts = full("sensing");
    for e in ts.edges.iter().step_by(7) {
        let succ = cat.successors(&ts.states[e.src]);
        assert!(succ.iter().any(|(r, t)| *r == e.rule && canonical_key(t) == ts.keys[e.dst]));
    }
}

#[test]
fn quotient_states_decode() {
    for m in MODELS {
        let cfg = model(m);
        let q = quotient_agent_level(&full(m));
        assert_eq!(q.mode, Mode::Quotient);
        for s in &q.states {
            assert!(s.is_aux_free());
            decode_config(s, &cfg.actions).unwrap();
        }
        for e in &q.edges {
            assert!(["A_event", "intention_step", "intention_done_succ"].contains(&e.rule.as_str()), "{}", e.rule);
        }
    }
}

#[test]
fn quotient_of_an_aux_free_system_is_the_identity() {
    let q = quotient_agent_level(&full("patrol"));
    let qq = quotient_agent_level(&q);
    assert_eq!(q.keys, qq.keys);
    let e1: Vec<_> = q.edges.iter().map(|e| (e.src, e.dst)).collect();
    let e2: Vec<_> = qq.edges.iter().map(|e| (e.src, e.dst)).collect();
    assert_eq!(e1, e2);
}

#[test]
fn dtmc_rows_are_stochastic() {
    for m in MODELS {
        let ts = full(m);
        let text = export_transitions(&ts).unwrap();
        let mut lines = text.lines();
        let head: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(head[0], ts.len());
        let mut sums = vec![0.0f64; ts.len()];
        let mut n = 0;
        for l in lines {
            let f: Vec<&str> = l.split(' ').collect();
            sums[f[0].parse::<usize>().unwrap()] += f[2].parse::<f64>().unwrap();
            n += 1;
        }
        assert_eq!(n, head[1]);
        for s in sums {
            assert!((s - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn two_successors_split_evenly_and_terminals_loop() {
    let mut ts = build_full(&State::default(), &Catalog::standard(), 10);
    ts.states = vec![State::default(); 3];
    ts.keys = vec!["a".into(), "b".into(), "c".into()];
    ts.edges = vec![
        Edge { src: 0, dst: 1, rule: "x".into() },
        Edge { src: 0, dst: 2, rule: "y".into() },
        Edge { src: 0, dst: 2, rule: "z".into() },
    ];
    assert_eq!(export_transitions(&ts).unwrap(), "3 4\n0 1 0.5\n0 2 0.5\n1 1 1\n2 2 1\n");
    let labels = export_labels(&ts, &[("p".into(), vec![0, 2])]);
    assert_eq!(labels, "0=\"init\" 1=\"deadlock\" 2=\"p\"\n0: 0 2\n1: 1\n2: 1 2\n");
}

#[test]
fn small_budget_leaves_the_system_open() {
    let ts = build_full(&initial_state(&model("sensing")), &Catalog::standard(), 20);
    assert!(!ts.closed);
    assert!(export_transitions(&ts).is_err());
    assert!(!summary(&ts).closed);
}

#[test]
fn dot_output_is_well_formed() {
    let ts = full("conference");
    let dot = export_dot(&ts);
    let cat = Catalog::standard();
    let names: HashSet<&str> = cat.names().into_iter().collect();
    let lines: Vec<&str> = dot.lines().collect();
    assert_eq!(lines[0], "digraph ts {");
    assert_eq!(*lines.last().unwrap(), "}");
    let (mut nodes, mut edges) = (0, 0);
    for l in &lines[1..lines.len() - 1] {
        let l = l.trim().strip_suffix("];").unwrap();
        let (head, attrs) = l.split_once(" [").unwrap();
        if let Some((a, b)) = head.split_once(" -> ") {
            assert!(a.parse::<usize>().unwrap() < ts.len() && b.parse::<usize>().unwrap() < ts.len());
            let label = attrs.strip_prefix("label=\"").unwrap().strip_suffix('"').unwrap();
            assert!(names.contains(label));
            edges += 1;
        } else {
            assert!(head.parse::<usize>().is_ok());
            nodes += 1;
        }
    }
    assert_eq!((nodes, edges), (ts.len(), ts.edges.len()));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let init = initial_state(&model("sensing"));
    let run = |n| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| {
            let ts = build_full(&init, &Catalog::standard(), DEFAULT_BUDGET);
            (export_dot(&ts), export_transitions(&ts).unwrap())
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn budget_comes_from_the_environment() {
    std::env::set_var("CANBRS_BUDGET", "1234");
    assert_eq!(default_budget(), 1234);
    std::env::remove_var("CANBRS_BUDGET");
    assert_eq!(default_budget(), DEFAULT_BUDGET);
}
