//! Algebraic text notation for terms: `Ctrl`, `Ctrl.child`, `Ctrl.(a | b)`,
//! `Ctrl.1` for an empty node, `id` for a site in patterns.

use std::fmt::Write;

use can_syntax::{Literal, Name};

use crate::control::{Control, Kind};
use crate::term::{State, Term};

#[derive(Clone, Debug)]
pub struct PrintOpts {
    pub tokens: bool,
    pub corr: bool,
    pub meta: bool,
    /// When set, atoms print as their 1-based position in this table.
    pub atoms: Option<Vec<Name>>,
}

impl Default for PrintOpts {
    fn default() -> Self {
        PrintOpts { tokens: true, corr: true, meta: false, atoms: None }
    }
}

impl PrintOpts {
    /// Program text only: no check tokens, no correlation ids.
    pub fn terse() -> Self {
        PrintOpts { tokens: false, corr: false, meta: false, atoms: None }
    }
}

fn head(c: &Control, o: &PrintOpts, out: &mut String) {
    out.push_str(c.kind().name());
    match c {
        Control::B(l) => {
            let idx = o.atoms.as_ref().and_then(|a| a.iter().position(|x| *x == l.atom));
            let neg = if l.positive { "" } else { "~" };
            match idx {
                Some(i) => {
                    let _ = write!(out, "({neg}{})", i + 1);
                }
                None => {
                    let _ = write!(out, "({l})");
                }
            }
        }
        Control::E(e) | Control::PlanSet(e) => {
            let _ = write!(out, "{{{e}}}");
        }
        Control::Check(l) | Control::CheckRes(l) if o.corr => {
            if *l == crate::canon::DANGLING {
                out.push_str("{_}");
            } else {
                let _ = write!(out, "{{{l}}}");
            }
        }
        Control::Intent(id) if o.meta => {
            let _ = write!(out, "<{id}>");
        }
        Control::Plan(id, _) | Control::Act(id) if o.meta => {
            let _ = write!(out, "<{id}>");
        }
        _ => {}
    }
}

pub fn print_term(t: &Term, o: &PrintOpts) -> String {
    let mut s = String::new();
    write_term(t, o, &mut s);
    s
}

fn write_term(t: &Term, o: &PrintOpts, out: &mut String) {
    head(&t.ctrl, o, out);
    let ch: Vec<&Term> = t.children.iter().filter(|c| o.tokens || c.kind() != Kind::CheckToken).collect();
    match ch.as_slice() {
        [] if t.kind().is_atomic() => {}
        [] => out.push_str(".1"),
        [c] => {
            out.push('.');
            write_term(c, o, out);
        }
        many => {
            out.push_str(".(");
            write_forest(many, o, out);
            out.push(')');
        }
    }
}

fn write_forest(ts: &[&Term], o: &PrintOpts, out: &mut String) {
    for (i, c) in ts.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        write_term(c, o, out);
    }
}

/// A forest in notation; `1` for the empty forest.
pub fn print_forest(ts: &[Term], o: &PrintOpts) -> String {
    let ch: Vec<&Term> = ts.iter().filter(|c| o.tokens || c.kind() != Kind::CheckToken).collect();
    if ch.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    write_forest(&ch, o, &mut s);
    s
}

pub fn print_state(s: &State, o: &PrintOpts) -> String {
    s.regions.iter().map(|r| print_term(r, o)).collect::<Vec<_>>().join(" || ")
}

/// Parsed notation: a node or a site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Node(Control, Vec<Shape>),
    Site,
}

impl Shape {
    /// Converts to a term; fails on sites.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            Shape::Site => None,
            Shape::Node(c, ch) => Some(Term::new(c.clone(), ch.iter().map(Shape::to_term).collect::<Option<_>>()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {message}")]
pub struct NotationError {
    pub col: usize,
    pub message: String,
}

struct P<'a> {
    s: &'a [u8],
    i: usize,
}

impl P<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, m: impl Into<String>) -> Result<T, NotationError> {
        Err(NotationError { col: self.i + 1, message: m.into() })
    }

    fn expect(&mut self, c: u8) -> Result<(), NotationError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn word(&mut self) -> Result<String, NotationError> {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if st == self.i {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.s[st..self.i]).into_owned())
    }

    fn brace_attr(&mut self) -> Result<Option<String>, NotationError> {
        if !self.eat(b'{') {
            return Ok(None);
        }
        let w = if self.eat(b'_') { "_".to_string() } else { self.word()? };
        self.expect(b'}')?;
        Ok(Some(w))
    }

    fn item(&mut self) -> Result<Option<Shape>, NotationError> {
        let w = self.word()?;
        if w == "id" {
            return Ok(Some(Shape::Site));
        }
        if w == "1" {
            return Ok(None);
        }
        let Some(kind) = Kind::from_name(&w) else { return self.err(format!("unknown entity `{w}`")) };
        let mut ctrl = Control::of_kind(kind);
        if kind == Kind::B {
            self.expect(b'(')?;
            let positive = !self.eat(b'~');
            let a = self.word()?;
            self.expect(b')')?;
            ctrl = Control::B(Literal { atom: Name::new(&a), positive });
        }
        if let Some(a) = self.brace_attr()? {
            ctrl = match kind {
                Kind::E => Control::E(Name::new(&a)),
                Kind::PlanSet => Control::PlanSet(Name::new(&a)),
                Kind::Check | Kind::CheckRes => {
                    let l = if a == "_" {
                        crate::canon::DANGLING
                    } else {
                        a.parse().map_err(|_| NotationError { col: self.i, message: "bad correlation id".into() })?
                    };
                    ctrl.with_corr(l)
                }
                _ => return self.err(format!("{kind} takes no link")),
            };
        }
        if self.eat(b'<') {
            let m = self.word()?;
            self.expect(b'>')?;
            ctrl = match kind {
                Kind::Intent => Control::Intent(m.parse().unwrap_or(0)),
                Kind::Plan => Control::Plan(Name::new(&m), 0),
                Kind::Act => Control::Act(Name::new(&m)),
                _ => return self.err(format!("{kind} takes no meta")),
            };
        }
        let mut children = Vec::new();
        if self.peek() == Some(b'.') {
            self.i += 1;
            if self.eat(b'(') {
                children = self.forest()?;
                self.expect(b')')?;
            } else if let Some(c) = self.item()? {
                children.push(c);
            }
        }
        Ok(Some(Shape::Node(ctrl, children)))
    }

    fn forest(&mut self) -> Result<Vec<Shape>, NotationError> {
        let mut out = Vec::new();
        loop {
            if let Some(x) = self.item()? {
                out.push(x);
            }
            self.ws();
            if self.s.get(self.i) == Some(&b'|') && self.s.get(self.i + 1) != Some(&b'|') {
                self.i += 1;
            } else {
                break;
            }
        }
        Ok(out)
    }
}

/// Parses a forest such as `Goal.(SC.(False | id) | Try.id)`.
pub fn parse_forest(text: &str) -> Result<Vec<Shape>, NotationError> {
    let mut p = P { s: text.as_bytes(), i: 0 };
    let f = p.forest()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a single term without sites.
pub fn parse_term(text: &str) -> Result<Term, NotationError> {
    let f = parse_forest(text)?;
    match f.as_slice() {
        [s] => s.to_term().ok_or(NotationError { col: 1, message: "sites are not allowed here".into() }),
        _ => Err(NotationError { col: 1, message: "expected exactly one term".into() }),
    }
}

/// Parses `Beliefs.(..) || Desires.(..) || Intentions.(..) || Plans.(..)`.
pub fn parse_state(text: &str) -> Result<State, NotationError> {
    let parts: Vec<&str> = text.split("||").collect();
    if parts.len() != 4 {
        return Err(NotationError { col: 1, message: "a state has four regions".into() });
    }
    let mut st = State::default();
    for (i, part) in parts.iter().enumerate() {
        let t = parse_term(part)?;
        if t.kind() != st.regions[i].kind() {
            return Err(NotationError { col: 1, message: format!("region {} must be {}", i, st.regions[i].kind()) });
        }
        st.regions[i] = t;
    }
    Ok(st)
}
