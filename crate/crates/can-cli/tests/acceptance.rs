//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use can_engine::{Catalog, Options as RuleOptions};
use can_faith::{compare_quotient, corpus_seeds, crosscheck, golden_trace_file, random_agent, MICRO_BUDGET};
use can_semantics::{reachable_configs, Options, Status};
use can_syntax::{parse_agent, print, AgentConfig, Literal};
use can_term::{decode_config, encode_config, initial_state, lint};
use can_ts::{build_full, export_transitions, quotient_agent_level, DEFAULT_BUDGET};
use can_verify::{check_file, parse_properties};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn model(name: &str) -> AgentConfig {
    parse_agent(&std::fs::read_to_string(root().join(format!("models/{name}.can"))).unwrap()).unwrap()
}

type Check = Result<String, String>;

fn within(t0: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = t0.elapsed();
    if took > limit {
        return Err(format!("{what} took {took:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn golden() -> Check {
    let t0 = Instant::now();
    let pass = golden_trace_file(&root().join("crates/can-faith/fixtures/conference_e1.trace"), &Catalog::standard())
        .map_err(|e| e.to_string())?;
    if pass.snapshots != 16 {
        return Err(format!("{} snapshots", pass.snapshots));
    }
    let text = std::fs::read_to_string(root().join("crates/can-faith/fixtures/conference_e1.trace")).unwrap();
    let bad: String = text.lines().map(|l| if l.starts_with("(12)") { l.replace("CheckRes.F", "CheckRes.T") } else { l.into() } + "\n").collect();
    let dir = root().join("crates/can-faith/fixtures");
    let err = can_faith::golden_trace_check(&bad, &|p| std::fs::read_to_string(dir.join(p)).map_err(|e| e.to_string()), &Catalog::standard());
    if err.as_ref().err().and_then(|e| e.step()) != Some(12) {
        return Err("altered step (12) was not reported at step 12".into());
    }
    within(t0, Duration::from_secs(1), "replay")?;
    Ok(format!("16 snapshots reproduced, altered (12) rejected, {:.0?}", t0.elapsed()))
}

fn ctl() -> Check {
    let expect = [
        ("patrol", vec![true]),
        ("sensing", vec![false, true]),
        ("retrieval", vec![true]),
    ];
    let mut notes = Vec::new();
    for (m, want) in expect {
        let t0 = Instant::now();
        let ts = build_full(&initial_state(&model(m)), &Catalog::standard(), DEFAULT_BUDGET);
        let file = parse_properties(&std::fs::read_to_string(root().join(format!("models/{m}.props"))).unwrap()).unwrap();
        let got: Vec<bool> = check_file(&ts, &file).map_err(|e| e.to_string())?.iter().map(|v| v.verdict).collect();
        if got != want {
            return Err(format!("{m}: verdicts {got:?}, expected {want:?}"));
        }
        within(t0, Duration::from_secs(60), m)?;
        notes.push(format!("{m} {got:?} {:.1?}", t0.elapsed()));
    }
    Ok(notes.join(", "))
}

fn counts() -> Check {
    let mut notes = Vec::new();
    for (m, ps, pt) in [("patrol", 239, 287), ("sensing", 731, 879), ("retrieval", 644, 922)] {
        let ts = build_full(&initial_state(&model(m)), &Catalog::standard(), DEFAULT_BUDGET);
        let (s, t) = (ts.len(), ts.edges.len());
        if !ts.closed {
            return Err(format!("{m} not closed"));
        }
        if s > 10 * ps || ps > 10 * s || t > 10 * pt || pt > 10 * t {
            return Err(format!("{m}: {s}/{t} not within 10x of {ps}/{pt}"));
        }
        notes.push(format!("{m} {s}/{t} (published {ps}/{pt})"));
    }
    Ok(notes.join(", "))
}

fn faithfulness() -> Check {
    let t0 = Instant::now();
    let cat = Catalog::standard();
    let mut agents: Vec<(String, AgentConfig)> =
        ["conference", "patrol", "sensing", "retrieval"].iter().map(|m| (m.to_string(), model(m))).collect();
    for s in corpus_seeds(2024, 20) {
        agents.push((format!("seed {s}"), parse_agent(&random_agent(s)).map_err(|_| format!("seed {s} does not parse"))?));
    }
    let mut configs = 0;
    for (n, cfg) in &agents {
        let r = crosscheck(n, cfg, 6, &cat, Options::default(), MICRO_BUDGET);
        if !r.is_clean() {
            return Err(format!("{}: {:?}", r.summary_line(), r.discrepancies[0]));
        }
        configs += r.configs_checked;
    }
    let mutant = Catalog::new(RuleOptions { drop: vec!["try_failure".into()], ..Default::default() });
    let r = crosscheck("conference", &model("conference"), 6, &mutant, Options::default(), MICRO_BUDGET);
    if r.is_clean() {
        return Err("mutant without try_failure was not detected".into());
    }
    within(t0, Duration::from_secs(300), "crosscheck")?;
    Ok(format!(
        "{} agents, {configs} configs, 0 discrepancies; mutant: {} discrepancies; {:.1?}",
        agents.len(),
        r.discrepancies.len(),
        t0.elapsed()
    ))
}

fn conference() -> Check {
    let t0 = Instant::now();
    let cfg = model("conference");
    let ex = reachable_configs(&cfg, None, Options::default());
    if ex.status != Status::Closed {
        return Err("reference exploration did not close".into());
    }
    let b4 = Literal::pos("b4");
    let b5 = Literal::pos("b5");
    if ex.configs.iter().any(|c| c.beliefs.contains(&b4)) {
        return Err("b4 is reachable".into());
    }
    if !ex.terminals().iter().any(|&i| ex.configs[i].beliefs.contains(&b5)) {
        return Err("no terminal configuration believes b5".into());
    }
    let q = quotient_agent_level(&build_full(&initial_state(&cfg), &Catalog::standard(), DEFAULT_BUDGET));
    let cmp = compare_quotient(&q, &cfg, Options::default());
    if !cmp.isomorphic {
        return Err(format!("quotient differs from reference graph: {cmp:?}"));
    }
    within(t0, Duration::from_secs(10), "conference")?;
    Ok(format!("b5 terminal, b4 unreachable, quotient {}/{} isomorphic, {:.1?}", cmp.quotient_states, cmp.quotient_edges, t0.elapsed()))
}

fn round_trips() -> Check {
    for s in 0..1000u64 {
        let text = random_agent(s);
        let cfg = parse_agent(&text).map_err(|_| format!("seed {s} does not parse"))?;
        let back = decode_config(&encode_config(&cfg), &cfg.actions).map_err(|e| format!("seed {s}: {e}"))?;
        if back != cfg {
            return Err(format!("decode(encode) differs for seed {s}"));
        }
        if decode_config(&initial_state(&cfg), &cfg.actions).as_ref() != Ok(&cfg) {
            return Err(format!("decode of the seeded state differs for seed {s}"));
        }
        if parse_agent(&print::agent(&cfg)).as_ref() != Ok(&cfg) {
            return Err(format!("parse(print) differs for seed {s}"));
        }
    }
    let mut states = 0;
    let mut rows = 0;
    for m in ["conference", "patrol", "sensing", "retrieval"] {
        let full = build_full(&initial_state(&model(m)), &Catalog::standard(), DEFAULT_BUDGET);
        let q = quotient_agent_level(&full);
        for ts in [&full, &q] {
            for (i, s) in ts.states.iter().enumerate() {
                if let Some(e) = lint(s).first() {
                    return Err(format!("{m} state {i}: {e:?}"));
                }
            }
            states += ts.len();
            let dtmc = export_transitions(ts).map_err(|e| e.to_string())?;
            let mut sums = vec![0.0f64; ts.len()];
            for line in dtmc.lines().skip(1) {
                let f: Vec<&str> = line.split(' ').collect();
                sums[f[0].parse::<usize>().unwrap()] += f[2].parse::<f64>().unwrap();
            }
            if let Some((i, x)) = sums.iter().enumerate().find(|(_, x)| (**x - 1.0).abs() > 1e-12) {
                return Err(format!("{m} row {i} sums to {x}"));
            }
            rows += sums.len();
        }
    }
    Ok(format!("1000 agents round-trip, {states} states lint-clean, {rows} DTMC rows stochastic"))
}

fn canbrs(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_canbrs")).args(args).output().expect("canbrs runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("canbrs-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (m, mode) in [("sensing", "full"), ("retrieval", "quotient")] {
        let input = root().join(format!("models/{m}.can"));
        let mut runs = Vec::new();
        for (k, jobs) in ["1", "4"].iter().enumerate() {
            let dot = dir.join(format!("{m}{k}.dot"));
            let dtmc = dir.join(format!("{m}{k}.tra"));
            let (code, stdout) = canbrs(&[
                "build",
                input.to_str().unwrap(),
                "--mode",
                mode,
                "--jobs",
                jobs,
                "--dot",
                dot.to_str().unwrap(),
                "--dtmc",
                dtmc.to_str().unwrap(),
            ]);
            if code != 0 {
                return Err(format!("{m}: build exited {code}"));
            }
            let summary: serde_json::Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
            runs.push((read(&dot)?, read(&dtmc)?, summary["states"].clone()));
        }
        if runs[0] != runs[1] {
            return Err(format!("{m}: outputs differ between runs"));
        }
        notes.push(format!("{m} {mode} {} bytes dot", runs[0].0.len()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(notes.join(", "))
}

fn read(p: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("1 golden trace", golden),
        ("2 CTL verdicts", ctl),
        ("3 state counts", counts),
        ("4 faithfulness", faithfulness),
        ("5 conference behaviour", conference),
        ("6 round trips and structure", round_trips),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(note) => println!("PASS {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of 7 criteria pass", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
