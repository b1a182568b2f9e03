//! Line-oriented parser for the agent text format (grammar in docs/agent-format.md).

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::ast::*;
use crate::diag::{Diagnostic, Severity};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Colon,
    Comma,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Amp,
    Tilde,
    Arrow,
    Plus,
    Minus,
    Question,
    Par,
    TryOp,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::End => "end of line".into(),
        other => format!("{other:?}"),
    }
}

struct Lexer;

impl Lexer {
    /// Tokens with their 1-based columns.
    fn run(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, Diagnostic> {
        let chars: Vec<char> = line.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let tok = match two.as_str() {
                "<-" => Some(Tok::Arrow),
                "||" => Some(Tok::Par),
                "|>" => Some(Tok::TryOp),
                _ => None,
            };
            if let Some(t) = tok {
                out.push((t, col));
                i += 2;
                continue;
            }
            let single = match c {
                ':' => Some(Tok::Colon),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '&' | '∧' => Some(Tok::Amp),
                '~' | '¬' => Some(Tok::Tilde),
                '←' => Some(Tok::Arrow),
                '∥' => Some(Tok::Par),
                '▷' => Some(Tok::TryOp),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '?' => Some(Tok::Question),
                _ => None,
            };
            if let Some(t) = single {
                out.push((t, col));
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| {
                    Diagnostic::error(lineno, col, format!("number `{s}` out of range"))
                })?;
                out.push((Tok::Num(n), col));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            return Err(Diagnostic::error(lineno, col, format!("unexpected character `{c}`")));
        }
        out.push((Tok::End, chars.len() + 1));
        Ok(out)
    }
}

/// Body syntax tree before names are resolved to actions or events.
#[derive(Clone, Debug)]
enum RawBody {
    Nil,
    Name(String),
    Basic(BasicOp),
    Seq(Box<RawBody>, Box<RawBody>),
    Conc(Box<RawBody>, Box<RawBody>),
    Try(Box<RawBody>, Box<RawBody>),
    Goal(Formula, Box<RawBody>, Formula),
    PlanSet(String, Vec<(String, Formula, RawBody)>),
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, Diagnostic>;

const KEYWORDS: &[&str] = &["beliefs", "events", "action", "plan", "intention", "goal", "nil", "true", "false"];

impl<'a> Cursor<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::error(self.line, self.col(), msg.into()))
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, usize)> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok((s, col))
            }
            t => self.err(format!("expected {what}, found {}", describe(&t))),
        }
    }

    fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    fn end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected {}", describe(self.peek())))
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        let positive = if *self.peek() == Tok::Tilde {
            self.bump();
            false
        } else {
            true
        };
        let (a, _) = self.ident("belief atom")?;
        Ok(Literal { atom: Name::new(&a), positive })
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            _ => {
                let mut lits = vec![self.literal()?];
                while *self.peek() == Tok::Amp {
                    self.bump();
                    lits.push(self.literal()?);
                }
                Ok(Formula::conj(lits))
            }
        }
    }

    fn lit_set(&mut self) -> PResult<BTreeSet<Literal>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut s = BTreeSet::new();
        if *self.peek() != Tok::RBrace {
            s.insert(self.literal()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                s.insert(self.literal()?);
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(s)
    }

    fn body(&mut self) -> PResult<RawBody> {
        let left = self.par()?;
        if *self.peek() == Tok::TryOp {
            self.bump();
            let right = self.body()?;
            return Ok(RawBody::Try(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn par(&mut self) -> PResult<RawBody> {
        let left = self.seq()?;
        if *self.peek() == Tok::Par {
            self.bump();
            let right = self.par()?;
            return Ok(RawBody::Conc(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn seq(&mut self) -> PResult<RawBody> {
        let left = self.unit()?;
        if *self.peek() == Tok::Semi {
            self.bump();
            let right = self.seq()?;
            return Ok(RawBody::Seq(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn unit(&mut self) -> PResult<RawBody> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let b = self.body()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(b)
            }
            Tok::Question => {
                self.bump();
                let f = if *self.peek() == Tok::LParen {
                    self.bump();
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    f
                } else {
                    match self.peek() {
                        Tok::Ident(s) if s == "true" || s == "false" => self.formula()?,
                        _ => Formula::conj([self.literal()?]),
                    }
                };
                Ok(RawBody::Basic(BasicOp::Query(f)))
            }
            Tok::Plus => {
                self.bump();
                Ok(RawBody::Basic(BasicOp::Add(self.literal()?)))
            }
            Tok::Minus => {
                self.bump();
                Ok(RawBody::Basic(BasicOp::Del(self.literal()?)))
            }
            Tok::LBrace => {
                self.bump();
                let (e, _) = self.ident("event name")?;
                self.expect(Tok::Colon, "`:`")?;
                let mut alts = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        let (id, _) = self.ident("plan id")?;
                        self.expect(Tok::Colon, "`:`")?;
                        let ctx = self.formula()?;
                        self.expect(Tok::Arrow, "`<-`")?;
                        self.expect(Tok::LParen, "`(`")?;
                        let b = self.body()?;
                        self.expect(Tok::RParen, "`)`")?;
                        alts.push((id, ctx, b));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                Ok(RawBody::PlanSet(e, alts))
            }
            Tok::Ident(s) if s == "nil" => {
                self.bump();
                Ok(RawBody::Nil)
            }
            Tok::Ident(s) if s == "goal" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let sc = self.formula()?;
                self.expect(Tok::Comma, "`,`")?;
                let p = self.body()?;
                self.expect(Tok::Comma, "`,`")?;
                let fc = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(RawBody::Goal(sc, Box::new(p), fc))
            }
            Tok::Ident(_) => {
                let (n, _) = self.ident("action or event")?;
                Ok(RawBody::Name(n))
            }
            t => self.err(format!("expected a plan body, found {}", describe(&t))),
        }
    }
}

enum Item {
    Plan { id: (String, usize), trigger: String, context: Formula, body: RawBody },
    Intention { id: Option<u32>, body: RawBody },
}

struct Resolver<'a> {
    actions: &'a HashMap<String, Arc<ActionSpec>>,
    line: usize,
    user: bool,
}

impl Resolver<'_> {
    fn run(&self, b: &RawBody) -> PResult<PlanBody> {
        let internal = |what: &str| {
            Err(Diagnostic::error(self.line, 1, format!("{what} is only allowed in intentions")))
        };
        Ok(match b {
            RawBody::Nil => {
                if self.user {
                    return internal("`nil`");
                }
                PlanBody::Nil
            }
            RawBody::Name(n) => match self.actions.get(n) {
                Some(a) => PlanBody::Act(a.clone()),
                None => PlanBody::Event(Name::new(n)),
            },
            RawBody::Basic(op) => PlanBody::act(desugar_basic(op)),
            RawBody::Seq(a, b) => PlanBody::seq(self.run(a)?, self.run(b)?),
            RawBody::Conc(a, b) => PlanBody::conc(self.run(a)?, self.run(b)?),
            RawBody::Try(a, b) => {
                if self.user {
                    return internal("`|>`");
                }
                PlanBody::try_(self.run(a)?, self.run(b)?)
            }
            RawBody::Goal(s, p, f) => PlanBody::goal(s.clone(), self.run(p)?, f.clone()),
            RawBody::PlanSet(e, alts) => {
                if self.user {
                    return internal("a plan set");
                }
                let e = Name::new(e);
                let mut plans = Vec::new();
                for (id, ctx, body) in alts {
                    plans.push(Plan {
                        id: Name::new(id),
                        trigger: e.clone(),
                        context: ctx.clone(),
                        body: self.run(body)?,
                    });
                }
                PlanBody::PlanSet(e, plans)
            }
        })
    }
}

/// Parses an agent file. All syntax errors are reported, not just the first.
pub fn parse_agent(text: &str) -> Result<AgentConfig, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut cfg = AgentConfig::default();
    let mut actions: HashMap<String, Arc<ActionSpec>> = HashMap::new();
    let mut items: Vec<(usize, Item)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = match Lexer::run(raw, lineno) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.len() == 1 {
            continue;
        }
        let mut c = Cursor { toks: &toks, pos: 0, line: lineno };
        let r = parse_line(&mut c, &mut cfg, &mut actions, &mut items, lineno);
        if let Err(d) = r {
            diags.push(d);
        }
    }

    let mut plan_ids: HashMap<String, usize> = HashMap::new();
    let mut intention_ids: Vec<u32> = Vec::new();
    for (lineno, item) in &items {
        match item {
            Item::Plan { id, trigger, context, body } => {
                if let Some(prev) = plan_ids.get(&id.0) {
                    diags.push(Diagnostic::error(
                        *lineno,
                        id.1,
                        format!("duplicate plan id `{}` (first defined on line {prev})", id.0),
                    ));
                    continue;
                }
                plan_ids.insert(id.0.clone(), *lineno);
                if actions.contains_key(trigger) {
                    diags.push(Diagnostic::error(
                        *lineno,
                        1,
                        format!("`{trigger}` is declared as an action and cannot trigger a plan"),
                    ));
                    continue;
                }
                let res = Resolver { actions: &actions, line: *lineno, user: true };
                match res.run(body) {
                    Ok(b) => cfg.plans.push(Plan {
                        id: Name::new(&id.0),
                        trigger: Name::new(trigger),
                        context: context.clone(),
                        body: b,
                    }),
                    Err(d) => diags.push(d),
                }
            }
            Item::Intention { id, body } => {
                let res = Resolver { actions: &actions, line: *lineno, user: false };
                match res.run(body) {
                    Ok(b) => {
                        let id = id.unwrap_or_else(|| {
                            intention_ids.iter().map(|i| i + 1).max().unwrap_or(1)
                        });
                        if intention_ids.contains(&id) {
                            diags.push(Diagnostic::error(*lineno, 1, format!("duplicate intention id {id}")));
                            continue;
                        }
                        intention_ids.push(id);
                        cfg.intentions.push(Intention { id, body: b });
                    }
                    Err(d) => diags.push(d),
                }
            }
        }
    }
    for e in cfg.external_events.clone() {
        if actions.contains_key(e.as_str()) {
            diags.push(Diagnostic::error(0, 0, format!("`{e}` is declared as an action and cannot be posted as an event")));
        }
    }

    if diags.iter().any(|d| d.severity == Severity::Error) {
        diags.sort_by_key(|d| (d.line, d.col));
        return Err(diags);
    }
    Ok(cfg)
}

fn parse_line(
    c: &mut Cursor<'_>,
    cfg: &mut AgentConfig,
    actions: &mut HashMap<String, Arc<ActionSpec>>,
    items: &mut Vec<(usize, Item)>,
    lineno: usize,
) -> PResult<()> {
    let (kw, _) = match c.peek().clone() {
        Tok::Ident(s) => {
            c.bump();
            (s, ())
        }
        t => return c.err(format!("expected a section keyword, found {}", describe(&t))),
    };
    match kw.as_str() {
        "beliefs" => {
            c.expect(Tok::Colon, "`:`")?;
            if !c.at_end() {
                cfg.beliefs.insert(c.literal()?);
                while *c.peek() == Tok::Comma {
                    c.bump();
                    cfg.beliefs.insert(c.literal()?);
                }
            }
            c.end()
        }
        "events" => {
            c.expect(Tok::Colon, "`:`")?;
            if !c.at_end() {
                let (e, _) = c.ident("event name")?;
                cfg.add_event(Name::new(&e));
                while *c.peek() == Tok::Comma {
                    c.bump();
                    let (e, _) = c.ident("event name")?;
                    cfg.add_event(Name::new(&e));
                }
            }
            c.end()
        }
        "action" => {
            let (name, col) = c.ident("action name")?;
            c.expect(Tok::Colon, "`:`")?;
            let pre = c.formula()?;
            c.expect(Tok::Arrow, "`<-`")?;
            c.expect(Tok::Plus, "`+`")?;
            let add = c.lit_set()?;
            c.expect(Tok::Minus, "`-`")?;
            let del = c.lit_set()?;
            c.end()?;
            if actions.contains_key(&name) {
                return Err(Diagnostic::error(lineno, col, format!("duplicate action name `{name}`")));
            }
            let spec = ActionSpec { name: Name::new(&name), pre, add, del };
            actions.insert(name, Arc::new(spec.clone()));
            cfg.actions.push(spec);
            Ok(())
        }
        "plan" => {
            let id = c.ident("plan id")?;
            c.expect(Tok::Colon, "`:`")?;
            let (trigger, _) = c.ident("triggering event")?;
            c.expect(Tok::Colon, "`:`")?;
            let context = c.formula()?;
            c.expect(Tok::Arrow, "`<-`")?;
            let body = c.body()?;
            c.end()?;
            items.push((lineno, Item::Plan { id, trigger, context, body }));
            Ok(())
        }
        "intention" => {
            let id = if let Tok::Num(n) = c.peek().clone() {
                c.bump();
                Some(n)
            } else {
                None
            };
            c.expect(Tok::Colon, "`:`")?;
            let body = c.body()?;
            c.end()?;
            items.push((lineno, Item::Intention { id, body }));
            Ok(())
        }
        other => Err(Diagnostic::error(lineno, 1, format!("unknown section `{other}`"))),
    }
}
