//! State patterns and property files.

use can_engine::{find_occurrences, parse_pattern, PNode};
use can_term::State;

use crate::ctl::{parse_ctl, Ctl};
use crate::VerifyError;

/// A predicate on states: a term pattern matched anywhere, or a boolean
/// combination of named patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePattern {
    Atom { text: String, roots: Vec<PNode>, shape: (usize, usize, usize) },
    Ref(String),
    Not(Box<StatePattern>),
    And(Box<StatePattern>, Box<StatePattern>),
    Or(Box<StatePattern>, Box<StatePattern>),
}

impl StatePattern {
    pub fn atom(text: &str) -> Result<StatePattern, String> {
        let (roots, shape) = parse_pattern(text)?;
        Ok(StatePattern::Atom { text: text.trim().to_string(), roots, shape })
    }
}

#[derive(Clone, Debug, Default)]
pub struct PropertyFile {
    pub patterns: Vec<(String, StatePattern)>,
    pub properties: Vec<(String, Ctl)>,
}

impl PropertyFile {
    pub fn pattern(&self, name: &str) -> Option<&StatePattern> {
        self.patterns.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }
}

/// True when the pattern occurs in `s`.
pub fn pattern_holds(p: &StatePattern, s: &State, file: &PropertyFile) -> Result<bool, VerifyError> {
    Ok(match p {
        StatePattern::Atom { roots, shape, .. } => !find_occurrences(roots, &[], s, *shape, Some(1)).is_empty(),
        StatePattern::Ref(n) => {
            let q = file.pattern(n).ok_or_else(|| VerifyError::UnknownPattern(n.clone()))?;
            pattern_holds(q, s, file)?
        }
        StatePattern::Not(a) => !pattern_holds(a, s, file)?,
        StatePattern::And(a, b) => pattern_holds(a, s, file)? && pattern_holds(b, s, file)?,
        StatePattern::Or(a, b) => pattern_holds(a, s, file)? || pattern_holds(b, s, file)?,
    })
}

/// Combination syntax after `:=`: names with `!`, `&`, `|` and parentheses.
fn parse_combination(text: &str) -> Result<StatePattern, String> {
    to_pattern(&parse_ctl(text)?)
}

fn to_pattern(c: &Ctl) -> Result<StatePattern, String> {
    Ok(match c {
        Ctl::Atom(n) => StatePattern::Ref(n.clone()),
        Ctl::Not(a) => StatePattern::Not(Box::new(to_pattern(a)?)),
        Ctl::And(a, b) => StatePattern::And(Box::new(to_pattern(a)?), Box::new(to_pattern(b)?)),
        Ctl::Or(a, b) => StatePattern::Or(Box::new(to_pattern(a)?), Box::new(to_pattern(b)?)),
        _ => return Err("only `!`, `&` and `|` combine patterns".into()),
    })
}

/// Parses a property file:
///
/// ```text
/// pattern NAME = <term pattern>
/// pattern NAME := <names combined with ! & |>
/// property <CTL formula>
/// ```
///
/// Errors carry the line number.
pub fn parse_properties(text: &str) -> Result<PropertyFile, VerifyError> {
    let mut f = PropertyFile::default();
    for (i, raw) in text.lines().enumerate() {
        let err = |m: String| VerifyError::Syntax { line: i + 1, message: m };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("pattern ") {
            let (name, body, combined) = match rest.split_once(":=") {
                Some((n, b)) => (n, b, true),
                None => {
                    let (n, b) = rest.split_once('=').ok_or_else(|| err("expected `=`".into()))?;
                    (n, b, false)
                }
            };
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(format!("bad pattern name `{name}`")));
            }
            if f.pattern(name).is_some() {
                return Err(err(format!("pattern `{name}` defined twice")));
            }
            let p = if combined { parse_combination(body) } else { StatePattern::atom(body) }.map_err(err)?;
            f.patterns.push((name.to_string(), p));
        } else if let Some(rest) = line.strip_prefix("property ") {
            let c = parse_ctl(rest).map_err(err)?;
            f.properties.push((rest.trim().to_string(), c));
        } else {
            return Err(err("expected `pattern` or `property`".into()));
        }
    }
    for (_, c) in &f.properties {
        for a in c.atoms() {
            if f.pattern(&a).is_none() {
                return Err(VerifyError::UnknownPattern(a));
            }
        }
    }
    for (_, p) in &f.patterns {
        check_refs(p, &f)?;
    }
    Ok(f)
}

fn check_refs(p: &StatePattern, f: &PropertyFile) -> Result<(), VerifyError> {
    match p {
        StatePattern::Atom { .. } => Ok(()),
        StatePattern::Ref(n) => f.pattern(n).map(|_| ()).ok_or_else(|| VerifyError::UnknownPattern(n.clone())),
        StatePattern::Not(a) => check_refs(a, f),
        StatePattern::And(a, b) | StatePattern::Or(a, b) => {
            check_refs(a, f)?;
            check_refs(b, f)
        }
    }
}
