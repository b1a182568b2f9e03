//! The reaction rules for CAN agents.

use can_term::State;

use crate::pattern::Occurrence;
use crate::rule::Rule;

/// How a concurrent program picks the branch to reduce.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ConcMode {
    /// The untried branch is saved; if the chosen branch fails the other
    /// one is tried before the whole program fails.
    #[default]
    Interleaved,
    /// A failing branch fails the whole program at once.
    ShortCircuit,
}

/// What happens after the left side of a recovery program fails.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum TryFailure {
    /// The recovery program takes the step.
    #[default]
    StepBackup,
    /// The failed branch is dropped and the step ends.
    WaitFree,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Options {
    pub conc: ConcMode,
    pub try_failure: TryFailure,
    /// Rule names left out of the catalog.
    pub drop: Vec<String>,
}

const SET_OPS: &str = "
check_T 90: Beliefs.(s0 | B($n) | Check{$l}.(B($n) | s1)) -> Beliefs.(s0 | B($n) | Check{$l}.s1)
check_end 90: Beliefs.(s0 | Check{$l}) || CheckRes{$l} -> Beliefs.s0 || CheckRes{$l}.T
check_F 90: Beliefs.(s0 | Check{$l}.([B/False]($n) | s1)) || CheckRes{$l} -> Beliefs.s0 || CheckRes{$l}.F
    ; unless s0 has [B/False]($n)
add_in 90: Beliefs.(s0 | B($n) | Add.(B($n) | s1)) -> Beliefs.(s0 | B($n) | Add.s1)
add_notin 90: Beliefs.(s0 | Add.(B($n) | s1)) -> Beliefs.(s0 | B($n) | Add.s1); unless s0 has B($n)
add_end 90: Beliefs.(s0 | Add) -> Beliefs.s0
del_in 90: Beliefs.(s0 | B($n) | Del.(B($n) | s1)) -> Beliefs.(s0 | Del.s1)
del_notin 90: Beliefs.(s0 | Del.(B($n) | s1)) -> Beliefs.(s0 | Del.s1); unless s0 has B($n)
delete_end 90: Beliefs.(s0 | Del) -> Beliefs.s0
";

const ACTIONS: &str = "
act_T 85: Beliefs.s0 || Reduce.Act.(CheckRes.T | Pre.s1 | Add.s2 | Del.s3) -> Beliefs.(s0 | Add.s2 | Del.s3) || 1
act_F 85: Reduce.Act.(CheckRes.F | s0) -> ReduceF
act_check 80: Beliefs.s0 || Reduce.Act@0.(Pre.s1 | s2)
    -> Beliefs.(s0 | Check{!0}.s1) || Reduce.Act@0.(CheckRes{!0} | Pre.s1 | s2)
    ; unless s2 has CheckRes.id
";

const SELECTION: &str = "
select_plan_T 75: Reduce.PlanSet@0.(Plan.(CheckRes.T | Pre.s0 | PB.s1) | s2) -> Try.(s1 | Cons.PlanSet@0.s2)
select_plan_F 75: Reduce.PlanSet.s0 -> ReduceF; unless s0 has Plan.(CheckToken | id); unless s0 has Plan.(CheckRes.T | id)
reset_planset 75: Try.(s0 | Cons.PlanSet@0.(Plan@1.(CheckRes.s1 | s2) | s3))
    -> Try.(s0 | Cons.PlanSet@0.(Plan@1.(CheckToken | s2) | s3))
select_plan_check 70: Beliefs.s0 || Reduce.PlanSet@0.(Plan@1.(Pre.s1 | CheckToken | s2) | s3)
    -> Beliefs.(s0 | Check{!0}.s1) || Reduce.PlanSet@0.(Plan@1.(Pre.s1 | CheckRes{!0} | s2) | s3)
reduce_event 70: Reduce.E{$p} || Plans.(PlanSet{$p}@0.s0 | s1) -> PlanSet@0.s0 || Plans.(PlanSet@0.s0 | s1)
reduce_event_none 70: Reduce.E{$p} || Plans.s0 -> PlanSet{$p} || Plans.s0; unless s0 has PlanSet{$p}.id
";

const SEQUENCE: &str = "
seq_succ 65: Reduce.Seq.Cons.s0 -> Reduce.s0
seq_fail 65: Seq.(ReduceF | Cons.s0) -> ReduceF
reduce_seq 60: Reduce.Seq.(s0 | Cons.s1) -> Seq.(Reduce.s0 | Cons.s1)
";

const GOALS: &str = "
goal_persist 55: Goal@0.(SC.s0 | Try.(ReduceF | Cons.s1) | FC.s2) -> Goal@0.(SC.s0 | Try.(s1 | Cons.s1) | FC.s2)
goal_persist_nil 55: Reduce.Goal@0.(SC.(CheckRes.F | s0) | Try.Cons.s1 | FC.(CheckRes.F | s2))
    -> Goal@0.(SC.s0 | Try.(s1 | Cons.s1) | FC.s2)
goal_check 50: Beliefs.s0 || Reduce.Goal@0.(SC.s1 | s2 | FC.s3)
    -> Beliefs.(s0 | Check{!0}.s1 | Check{!1}.s3) || Reduce.Goal@0.(SC.(s1 | CheckRes{!0}) | s2 | FC.(s3 | CheckRes{!1}))
    ; unless s1 has CheckRes.id
goal_suc 50: Reduce.Goal.(SC.(CheckRes.T | s0) | s1) -> 1
goal_fail 50: Reduce.Goal.(FC.(CheckRes.T | s0) | s1) -> Act<?false>.(Pre.False | Add | Del)
goal_reduce 50: Reduce.Goal@0.(SC.(CheckRes.F | s0) | Try.(s1 | Cons.s2) | FC.(CheckRes.F | s3))
    -> Goal@0.(SC.s0 | Try.(Reduce.s1 | Cons.s2) | FC.s3)
goal_init 45: Reduce.Goal@0.(SC.(CheckRes.F | s0) | s1 | FC.(CheckRes.F | s2)) -> Goal@0.(SC.s0 | Try.(s1 | Cons.s1) | FC.s2)
";

const RECOVERY_STEP: &str = "
try_succ 40: Reduce.Try.Cons.s0 -> 1
try_failure 40: Try.(ReduceF | Cons.s0) -> Reduce.s0
try_seq 35: Reduce.Try.(s0 | Cons.s1) -> Try.(Reduce.s0 | Cons.s1)
";

const RECOVERY_WAIT: &str = "
try_succ 40: Reduce.Try.Cons.s0 -> 1
try_failure 40: Try.(ReduceF | Cons.s0) -> s0
try_seq 35: Reduce.Try.(s0 | Cons.s1) -> Try.(Reduce.s0 | Cons.s1)
";

const CONC_INTERLEAVED: &str = "
conc_retry_R 30: Conc.(L.ReduceF | R.s0 | Stash.L.s1) -> Conc.(L.s1 | R.Reduce.s0)
conc_retry_L 30: Conc.(L.s0 | R.ReduceF | Stash.R.s1) -> Conc.(L.Reduce.s0 | R.s1)
conc_L 15: Reduce.Conc.(L.s0 | R.s1) -> Conc.(L.Reduce.s0 | R.s1 | Stash.L.s0)
conc_R 15: Reduce.Conc.(L.s0 | R.s1) -> Conc.(L.s0 | R.Reduce.s1 | Stash.R.s1)
conc_commit 10: Conc.(Stash.s0 | s1) -> Conc.s1; unless s1 contains Reduce.id; unless s1 contains ReduceF
";

const CONC_SHORT: &str = "
conc_L 15: Reduce.Conc.(L.s0 | R.s1) -> Conc.(L.Reduce.s0 | R.s1)
conc_R 15: Reduce.Conc.(L.s0 | R.s1) -> Conc.(L.s0 | R.Reduce.s1)
";

const CONC_COMMON: &str = "
conc_suc 25: Reduce.Conc.(L | R) -> 1
conc_fail_L 25: Conc.(L.ReduceF | s0) -> ReduceF
conc_fail_R 25: Conc.(R.ReduceF | s0) -> ReduceF
conc_nil_L 20: Reduce.Conc.(L | R.s0) -> Conc.(L | R.Reduce.s0)
conc_nil_R 20: Reduce.Conc.(L.s0 | R) -> Conc.(L.Reduce.s0 | R)
";

const AGENT: &str = "
intention_done_F 5: Intent.ReduceF -> 1
A_event 0: Desires.(s0 | E@0) || Intentions.s1 -> Desires.s0 || Intentions.(s1 | Intent{!}.E@0)
intention_step 0: Intent@0.[Act/E/Seq/Try/Conc/Goal/PlanSet]@1.s0 -> Intent@0.Reduce.*@1.s0
    ; unless s0 contains Reduce.id; unless s0 contains ReduceF
intention_done_succ 0: Intent -> 1
";

/// Catalog source for `opts`, before dropping rules. Continuation lines
/// start with whitespace.
pub fn catalog_text(opts: &Options) -> String {
    let recovery = match opts.try_failure {
        TryFailure::StepBackup => RECOVERY_STEP,
        TryFailure::WaitFree => RECOVERY_WAIT,
    };
    let conc = match opts.conc {
        ConcMode::Interleaved => CONC_INTERLEAVED,
        ConcMode::ShortCircuit => CONC_SHORT,
    };
    [SET_OPS, ACTIONS, SELECTION, SEQUENCE, GOALS, recovery, conc, CONC_COMMON, AGENT].concat()
}

fn logical_lines(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.push(' ');
                last.push_str(line.trim());
                continue;
            }
        }
        out.push(line.trim().to_string());
    }
    out
}

/// Rule names that only the short-circuit concurrency mode lacks.
pub const INTERLEAVING_RULES: [&str; 3] = ["conc_retry_L", "conc_retry_R", "conc_commit"];

/// The rule set, sorted by descending priority.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub rules: Vec<Rule>,
    pub options: Options,
}

/// One enabled reaction: a rule and where it matches.
#[derive(Clone, Debug)]
pub struct Reaction<'a> {
    pub rule: &'a Rule,
    pub occ: Occurrence,
}

impl<'a> Reaction<'a> {
    pub fn apply(&self, s: &State) -> State {
        self.rule.apply(s, &self.occ)
    }
}

impl Catalog {
    pub fn new(opts: Options) -> Catalog {
        let mut rules: Vec<Rule> = logical_lines(&catalog_text(&opts))
            .iter()
            .map(|l| Rule::parse(l).unwrap_or_else(|e| panic!("built-in rule does not parse: {e}")))
            .filter(|r| !opts.drop.contains(&r.name))
            .collect();
        rules.sort_by_key(|r| -r.priority);
        Catalog { rules, options: opts }
    }

    pub fn standard() -> Catalog {
        Catalog::new(Options::default())
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.rules.iter().map(|r| r.name.as_str()).collect()
    }

    /// Reactions of the highest priority level that has any.
    pub fn enabled_reactions(&self, s: &State) -> Vec<Reaction<'_>> {
        let mut out = Vec::new();
        let mut level = None;
        for r in &self.rules {
            if level.is_some_and(|p| p != r.priority) {
                break;
            }
            for occ in r.occurrences(s) {
                out.push(Reaction { rule: r, occ });
                level = Some(r.priority);
            }
        }
        out
    }

    /// One-step successors with the name of the rule that produced each.
    pub fn successors(&self, s: &State) -> Vec<(&str, State)> {
        self.enabled_reactions(s).into_iter().map(|r| (r.rule.name.as_str(), r.apply(s))).collect()
    }

    /// Listing of the rules, one per line, highest priority first.
    pub fn dump(&self) -> String {
        self.rules.iter().map(|r| format!("{r}\n")).collect()
    }
}
