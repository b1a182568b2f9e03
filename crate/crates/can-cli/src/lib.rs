//! Commands behind the `canbrs` binary. JSON goes to standard output and
//! human-readable summaries to standard error.

use std::path::{Path, PathBuf};

use can_engine::{Catalog, ConcMode, Options as RuleOptions, TryFailure};
use can_faith::{
    compare_quotient, corpus_seeds, crosscheck, golden_trace_file, oracle_options, random_agent, CrosscheckReport,
    MICRO_BUDGET,
};
use can_semantics::Options;
use can_syntax::{parse_agent, print, validate_agent, AgentConfig};
use can_term::initial_state;
use can_ts::{build_full, export_dot, export_labels, export_transitions, quotient_agent_level, Mode, Ts, DEFAULT_BUDGET};
use can_verify::{check_file, label_states, parse_properties, VerifyError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_FAITH: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    User(String),
    Io(String),
    Budget(String),
    Faith(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::User(_) => EXIT_USER,
            CliError::Io(_) => EXIT_IO,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Faith(_) => EXIT_FAITH,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::User(m) | CliError::Io(m) | CliError::Budget(m) | CliError::Faith(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "canbrs", version, about = "Parse, explore, model-check and cross-check CAN agents")]
pub struct Cli {
    /// Worker threads for build, check and faithfulness. Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Quotient,
}

#[derive(Args, Debug, Clone)]
pub struct RuleFlags {
    /// Leave a rule out of the catalog (repeatable).
    #[arg(long = "drop-rule", value_name = "RULE")]
    pub drop_rule: Vec<String>,
    /// Recovery drops a failed left branch without stepping the backup.
    #[arg(long)]
    pub wait_free: bool,
    /// Concurrency rules without the interleaving stash.
    #[arg(long)]
    pub short_circuit: bool,
}

impl RuleFlags {
    fn catalog(&self) -> Result<Catalog, CliError> {
        let known = |r: &str| {
            [ConcMode::Interleaved, ConcMode::ShortCircuit]
                .into_iter()
                .any(|conc| Catalog::new(RuleOptions { conc, ..Default::default() }).rule(r).is_some())
        };
        if let Some(r) = self.drop_rule.iter().find(|r| !known(r)) {
            return Err(CliError::User(format!("unknown rule `{r}`")));
        }
        Ok(Catalog::new(RuleOptions {
            conc: if self.short_circuit { ConcMode::ShortCircuit } else { ConcMode::Interleaved },
            try_failure: if self.wait_free { TryFailure::WaitFree } else { TryFailure::StepBackup },
            drop: self.drop_rule.clone(),
        }))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate an agent file.
    Parse { path: PathBuf },
    /// Build the transition system of an agent.
    Build {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// State budget; exceeding it exits with code 3.
        #[arg(long, env = "CANBRS_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the graph in dot format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Write the uniform DTMC as an explicit transition list.
        #[arg(long, value_name = "PATH")]
        dtmc: Option<PathBuf>,
        /// Property file whose patterns label states in `--labels`.
        #[arg(long, value_name = "PATH")]
        props: Option<PathBuf>,
        /// Write a label file (init, deadlock and the patterns of `--props`).
        #[arg(long, value_name = "PATH", requires = "props")]
        labels: Option<PathBuf>,
        /// Write the run manifest as JSON.
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Check the CTL properties of a property file.
    Check {
        path: PathBuf,
        props: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        #[arg(long, env = "CANBRS_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Compare rule-encoded successors with the reference semantics.
    Faithfulness {
        /// Agent file; omit when using `--corpus`.
        #[arg(required_unless_present = "corpus")]
        path: Option<PathBuf>,
        /// Seed of a random agent corpus.
        #[arg(long, conflicts_with = "path")]
        corpus: Option<u64>,
        /// Number of agents in the corpus.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Write the corpus agents to this directory.
        #[arg(long, value_name = "DIR")]
        save_corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Intermediate states allowed per agent step.
        #[arg(long, default_value_t = MICRO_BUDGET)]
        micro_budget: usize,
        /// Also compare the agent-level quotient with the reference graph.
        #[arg(long)]
        graph: bool,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Replay a golden reduction trace.
    Golden {
        trace: PathBuf,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Print the rule catalog.
    Rules {
        #[command(flatten)]
        rules: RuleFlags,
    },
}

/// Everything that determines the outputs of a run.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub input: String,
    pub command: String,
    pub mode: Option<ModeArg>,
    pub drop_rules: Vec<String>,
    pub wait_free: bool,
    pub short_circuit: bool,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub budget: usize,
}

/// Output of a command: JSON for stdout, text for stderr, exit code.
pub struct Outcome {
    pub json: serde_json::Value,
    pub human: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses and validates; warnings are returned rendered.
pub fn load_agent(path: &Path) -> Result<(AgentConfig, Vec<String>), CliError> {
    let text = read(path)?;
    let file = path.display().to_string();
    let cfg = parse_agent(&text)
        .map_err(|ds| CliError::User(ds.iter().map(|d| d.render(&file)).collect::<Vec<_>>().join("\n")))?;
    let diags = validate_agent(&cfg);
    if diags.iter().any(|d| d.is_error()) {
        return Err(CliError::User(diags.iter().map(|d| d.render(&file)).collect::<Vec<_>>().join("\n")));
    }
    Ok((cfg, diags.iter().map(|d| d.render(&file)).collect()))
}

fn build_ts(cfg: &AgentConfig, cat: &Catalog, mode: ModeArg, budget: usize) -> Ts {
    let full = build_full(&initial_state(cfg), cat, budget);
    match mode {
        ModeArg::Full => full,
        ModeArg::Quotient => quotient_agent_level(&full),
    }
}

fn summary_json(path: &Path, ts: &Ts) -> serde_json::Value {
    json!({
        "input": path.display().to_string(),
        "mode": ts.mode,
        "states": ts.len(),
        "transitions": ts.edges.len(),
        "closed": ts.closed,
        "terminals": ts.terminals().len(),
        "micro_violations": if ts.mode == Mode::Full { ts.micro_violations().len() } else { 0 },
    })
}

pub fn cmd_parse(path: &Path) -> Result<Outcome, CliError> {
    let (cfg, warnings) = load_agent(path)?;
    let events: Vec<&str> = cfg.external_events.iter().map(|e| e.as_str()).collect();
    let beliefs: Vec<String> = cfg.beliefs.iter().map(|l| l.to_string()).collect();
    let json = json!({
        "input": path.display().to_string(),
        "beliefs": beliefs,
        "events": events,
        "actions": cfg.actions.iter().map(print::action).collect::<Vec<_>>(),
        "plans": cfg.plans.iter().map(print::plan).collect::<Vec<_>>(),
        "intentions": cfg.intentions.iter().map(|i| json!({"id": i.id, "body": print::body(&i.body)})).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    let mut human = format!(
        "{}: {} beliefs, {} events, {} actions, {} plans, {} intentions\n",
        path.display(),
        cfg.beliefs.len(),
        cfg.external_events.len(),
        cfg.actions.len(),
        cfg.plans.len(),
        cfg.intentions.len()
    );
    for w in &warnings {
        human.push_str(w);
        human.push('\n');
    }
    Ok(Outcome { json, human, code: EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_build(
    path: &Path,
    mode: ModeArg,
    budget: usize,
    dot: Option<&Path>,
    dtmc: Option<&Path>,
    props: Option<&Path>,
    labels: Option<&Path>,
    manifest: Option<&Path>,
    rules: &RuleFlags,
) -> Result<Outcome, CliError> {
    let cat = rules.catalog()?;
    let (cfg, _) = load_agent(path)?;
    let file = match props {
        Some(p) => Some(parse_properties(&read(p)?).map_err(|e| CliError::User(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let ts = build_ts(&cfg, &cat, mode, budget);
    let mut json = summary_json(path, &ts);
    let human = format!(
        "{} [{}]: {} states, {} transitions, closed: {}, {} ms\n",
        path.display(),
        ts.mode,
        ts.len(),
        ts.edges.len(),
        ts.closed,
        ts.build_ms
    );
    if !ts.closed {
        return Ok(Outcome { json, human: human + &format!("state budget of {budget} exceeded\n"), code: EXIT_BUDGET });
    }
    let mut outputs = Vec::new();
    if let Some(p) = dot {
        write(p, &export_dot(&ts))?;
        outputs.push(p.display().to_string());
    }
    if let Some(p) = dtmc {
        write(p, &export_transitions(&ts).expect("closed system"))?;
        outputs.push(p.display().to_string());
    }
    if let (Some(p), Some(file)) = (labels, &file) {
        let l = label_states(&ts, file).map_err(|e| CliError::User(e.to_string()))?;
        let names: Vec<(String, Vec<usize>)> = file.patterns.iter().map(|(n, _)| (n.clone(), l.holding(n))).collect();
        write(p, &export_labels(&ts, &names))?;
        outputs.push(p.display().to_string());
    }
    let m = RunManifest {
        input: path.display().to_string(),
        command: "build".into(),
        mode: Some(mode),
        drop_rules: rules.drop_rule.clone(),
        wait_free: rules.wait_free,
        short_circuit: rules.short_circuit,
        outputs,
        seed: None,
        budget,
    };
    if let Some(p) = manifest {
        write(p, &(serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"))?;
    }
    json["manifest"] = serde_json::to_value(&m).expect("manifest serializes");
    Ok(Outcome { json, human, code: EXIT_OK })
}

pub fn cmd_check(path: &Path, props: &Path, mode: ModeArg, budget: usize, rules: &RuleFlags) -> Result<Outcome, CliError> {
    let cat = rules.catalog()?;
    let (cfg, _) = load_agent(path)?;
    let file = parse_properties(&read(props)?).map_err(|e| CliError::User(format!("{}: {e}", props.display())))?;
    let ts = build_ts(&cfg, &cat, mode, budget);
    if !ts.closed {
        return Err(CliError::Budget(format!("state budget of {budget} exceeded")));
    }
    let verdicts = check_file(&ts, &file).map_err(|e| match e {
        VerifyError::NotClosed => CliError::Budget(e.to_string()),
        e => CliError::User(e.to_string()),
    })?;
    let mut human = format!("{} [{}]: {} states\n", path.display(), ts.mode, ts.len());
    for v in &verdicts {
        human.push_str(&format!("  {:<40} {}\n", v.formula, if v.verdict { "holds" } else { "fails" }));
    }
    Ok(Outcome { json: serde_json::to_value(&verdicts).expect("verdicts serialize"), human, code: EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_faithfulness(
    path: Option<&Path>,
    corpus: Option<u64>,
    count: usize,
    save_corpus: Option<&Path>,
    depth: usize,
    micro_budget: usize,
    graph: bool,
    rules: &RuleFlags,
) -> Result<Outcome, CliError> {
    let cat = rules.catalog()?;
    let opts: Options = oracle_options(&cat);
    let mut agents: Vec<(String, AgentConfig)> = Vec::new();
    if let Some(p) = path {
        agents.push((p.display().to_string(), load_agent(p)?.0));
    }
    if let Some(seed) = corpus {
        if let Some(dir) = save_corpus {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        for s in corpus_seeds(seed, count) {
            let text = random_agent(s);
            if let Some(dir) = save_corpus {
                write(&dir.join(format!("agent_{s}.can")), &text)?;
            }
            let cfg = parse_agent(&text).map_err(|_| CliError::User(format!("generated agent {s} does not parse")))?;
            agents.push((format!("seed {s}"), cfg));
        }
    }
    let reports: Vec<CrosscheckReport> = agents.iter().map(|(n, c)| crosscheck(n, c, depth, &cat, opts, micro_budget)).collect();
    let mut graphs = Vec::new();
    if graph {
        for (n, c) in &agents {
            let full = build_full(&initial_state(c), &cat, DEFAULT_BUDGET);
            if !full.closed {
                return Err(CliError::Budget(format!("{n}: state budget exceeded")));
            }
            graphs.push(json!({"name": n, "comparison": compare_quotient(&quotient_agent_level(&full), c, opts)}));
        }
    }
    let clean = reports.iter().all(CrosscheckReport::is_clean)
        && graphs.iter().all(|g| g["comparison"]["isomorphic"].as_bool() == Some(true));
    let mut human = String::new();
    for r in &reports {
        human.push_str(&r.summary_line());
        human.push('\n');
        for d in r.discrepancies.iter().take(3) {
            human.push_str(&format!("  at {}\n", d.config));
            if let Some(e) = &d.error {
                human.push_str(&format!("    error: {e}\n"));
            }
            for m in &d.missing {
                human.push_str(&format!("    missing {m}\n"));
            }
            for x in &d.extra {
                human.push_str(&format!("    extra   {x}\n"));
            }
        }
    }
    let json = json!({
        "depth": depth,
        "seed": corpus,
        "clean": clean,
        "reports": reports,
        "graphs": graphs,
    });
    Ok(Outcome { json, human, code: if clean { EXIT_OK } else { EXIT_FAITH } })
}

pub fn cmd_golden(trace: &Path, rules: &RuleFlags) -> Result<Outcome, CliError> {
    let cat = rules.catalog()?;
    match golden_trace_file(trace, &cat) {
        Ok(p) => Ok(Outcome {
            json: json!({"trace": trace.display().to_string(), "pass": true, "snapshots": p.snapshots, "fired": p.fired}),
            human: format!("{}: {} snapshots reproduced\n", trace.display(), p.snapshots),
            code: EXIT_OK,
        }),
        Err(e @ can_faith::GoldenError::Format { .. }) | Err(e @ can_faith::GoldenError::Model(_)) => {
            Err(CliError::User(e.to_string()))
        }
        Err(e) => Ok(Outcome {
            json: json!({"trace": trace.display().to_string(), "pass": false, "step": e.step(), "error": e.to_string()}),
            human: format!("{}: {e}\n", trace.display()),
            code: EXIT_FAITH,
        }),
    }
}

pub fn cmd_rules(rules: &RuleFlags) -> Result<Outcome, CliError> {
    let cat = rules.catalog()?;
    Ok(Outcome { json: json!(cat.names()), human: cat.dump(), code: EXIT_OK })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Parse { path } => cmd_parse(path),
        Command::Build { path, mode, budget, dot, dtmc, props, labels, manifest, rules } => cmd_build(
            path,
            *mode,
            *budget,
            dot.as_deref(),
            dtmc.as_deref(),
            props.as_deref(),
            labels.as_deref(),
            manifest.as_deref(),
            rules,
        ),
        Command::Check { path, props, mode, budget, rules } => cmd_check(path, props, *mode, *budget, rules),
        Command::Faithfulness { path, corpus, count, save_corpus, depth, micro_budget, graph, rules } => {
            cmd_faithfulness(path.as_deref(), *corpus, *count, save_corpus.as_deref(), *depth, *micro_budget, *graph, rules)
        }
        Command::Golden { trace, rules } => cmd_golden(trace, rules),
        Command::Rules { rules } => cmd_rules(rules),
    }
}

/// Runs a command line and returns (stdout, stderr, exit code).
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USER } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { (text, String::new(), code) } else { (String::new(), text, code) };
        }
    };
    let go = || match dispatch(&cli) {
        Ok(o) => (serde_json::to_string_pretty(&o.json).expect("json") + "\n", o.human, o.code),
        Err(e) => (String::new(), format!("error: {}\n", e.message()), e.code()),
    };
    match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => (String::new(), format!("error: {e}\n"), EXIT_USER),
        },
        None => go(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(drop: &[&str]) -> RuleFlags {
        RuleFlags { drop_rule: drop.iter().map(|s| s.to_string()).collect(), wait_free: false, short_circuit: false }
    }

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(CliError::User(String::new()).code(), 1);
        assert_eq!(CliError::Io(String::new()).code(), 2);
        assert_eq!(CliError::Budget(String::new()).code(), 3);
        assert_eq!(CliError::Faith(String::new()).code(), 4);
    }

    #[test]
    fn rule_flags_build_the_catalog() {
        assert_eq!(flags(&[]).catalog().unwrap().rules.len(), 45);
        assert_eq!(flags(&["try_failure"]).catalog().unwrap().rules.len(), 44);
        assert!(flags(&["nope"]).catalog().is_err());
        let sc = RuleFlags { short_circuit: true, ..flags(&[]) };
        assert_eq!(sc.catalog().unwrap().rules.len(), 42);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (out, err, code) = run(["canbrs", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("faithfulness") && err.is_empty());
        let (out, err, code) = run(["canbrs", "build"]);
        assert_eq!(code, EXIT_USER);
        assert!(out.is_empty() && !err.is_empty());
    }
}
