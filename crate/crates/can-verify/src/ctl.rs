//! CTL formulas and their parser.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ctl {
    True,
    False,
    Atom(String),
    Not(Box<Ctl>),
    And(Box<Ctl>, Box<Ctl>),
    Or(Box<Ctl>, Box<Ctl>),
    EX(Box<Ctl>),
    AX(Box<Ctl>),
    EF(Box<Ctl>),
    AF(Box<Ctl>),
    EG(Box<Ctl>),
    AG(Box<Ctl>),
    EU(Box<Ctl>, Box<Ctl>),
    AU(Box<Ctl>, Box<Ctl>),
    /// `A[G F f]`, the same as `AG AF f`.
    AGF(Box<Ctl>),
    /// `A[F(f & X g)]`: on every path some state satisfies f and its
    /// successor on that path satisfies g.
    AFNext(Box<Ctl>, Box<Ctl>),
    /// `E[F(f & X g)]`, the same as `EF(f & EX g)`.
    EFNext(Box<Ctl>, Box<Ctl>),
}

impl Ctl {
    /// Pattern names used by the formula, in order of appearance.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Ctl::True | Ctl::False => {}
            Ctl::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone())
                }
            }
            Ctl::Not(a) | Ctl::EX(a) | Ctl::AX(a) | Ctl::EF(a) | Ctl::AF(a) | Ctl::EG(a) | Ctl::AG(a) | Ctl::AGF(a) => {
                a.collect(out)
            }
            Ctl::And(a, b) | Ctl::Or(a, b) | Ctl::EU(a, b) | Ctl::AU(a, b) | Ctl::AFNext(a, b) | Ctl::EFNext(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

impl fmt::Display for Ctl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ctl::True => write!(f, "true"),
            Ctl::False => write!(f, "false"),
            Ctl::Atom(a) => write!(f, "{a}"),
            Ctl::Not(a) => write!(f, "!{a}"),
            Ctl::And(a, b) => write!(f, "({a} & {b})"),
            Ctl::Or(a, b) => write!(f, "({a} | {b})"),
            Ctl::EX(a) => write!(f, "EX {a}"),
            Ctl::AX(a) => write!(f, "AX {a}"),
            Ctl::EF(a) => write!(f, "EF {a}"),
            Ctl::AF(a) => write!(f, "AF {a}"),
            Ctl::EG(a) => write!(f, "EG {a}"),
            Ctl::AG(a) => write!(f, "AG {a}"),
            Ctl::EU(a, b) => write!(f, "E[{a} U {b}]"),
            Ctl::AU(a, b) => write!(f, "A[{a} U {b}]"),
            Ctl::AGF(a) => write!(f, "A[G F {a}]"),
            Ctl::AFNext(a, b) => write!(f, "A[F({a} & X {b})]"),
            Ctl::EFNext(a, b) => write!(f, "E[F({a} & X {b})]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Word(cs[st..i].iter().collect()));
        } else if "!&|()[]".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else if c == '¬' {
            out.push(Tok::Sym('!'));
            i += 1;
        } else if c == '∧' {
            out.push(Tok::Sym('&'));
            i += 1;
        } else if c == '∨' {
            out.push(Tok::Sym('|'));
            i += 1;
        } else {
            return Err(format!("unexpected `{c}`"));
        }
    }
    Ok(out)
}

struct P {
    t: Vec<Tok>,
    i: usize,
}

const KEYWORDS: [&str; 13] = ["EX", "AX", "EF", "AF", "EG", "AG", "E", "A", "U", "F", "G", "X", "true"];

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(x)) if x == w) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.sym(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}` at token {}", self.i + 1))
        }
    }

    fn or(&mut self) -> Result<Ctl, String> {
        let mut a = self.and()?;
        while self.sym('|') {
            a = Ctl::Or(Box::new(a), Box::new(self.and()?));
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Ctl, String> {
        let mut a = self.unary()?;
        while self.sym('&') {
            a = Ctl::And(Box::new(a), Box::new(self.unary()?));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Ctl, String> {
        if self.sym('!') {
            return Ok(Ctl::Not(Box::new(self.unary()?)));
        }
        if self.sym('(') {
            let f = self.or()?;
            self.expect(')')?;
            return Ok(f);
        }
        let Some(Tok::Word(w)) = self.peek().cloned() else { return Err(format!("expected a formula at token {}", self.i + 1)) };
        self.i += 1;
        let un = |p: &mut P, k: fn(Box<Ctl>) -> Ctl| Ok(k(Box::new(p.unary()?)));
        match w.as_str() {
            "true" => Ok(Ctl::True),
            "false" => Ok(Ctl::False),
            "EX" => un(self, Ctl::EX),
            "AX" => un(self, Ctl::AX),
            "EF" => un(self, Ctl::EF),
            "AF" => un(self, Ctl::AF),
            "EG" => un(self, Ctl::EG),
            "AG" => un(self, Ctl::AG),
            "E" | "A" => {
                self.expect('[')?;
                let f = self.path(w == "A")?;
                self.expect(']')?;
                Ok(f)
            }
            w if KEYWORDS.contains(&w) => Err(format!("`{w}` needs a path quantifier")),
            w => Ok(Ctl::Atom(w.to_string())),
        }
    }

    /// Inside `A[..]` or `E[..]`.
    fn path(&mut self, all: bool) -> Result<Ctl, String> {
        let b = Box::new;
        if self.word("F") {
            let save = self.i;
            if let Some((f, g)) = self.next_conj()? {
                return Ok(if all { Ctl::AFNext(b(f), b(g)) } else { Ctl::EFNext(b(f), b(g)) });
            }
            self.i = save;
            let f = b(self.unary()?);
            return Ok(if all { Ctl::AF(f) } else { Ctl::EF(f) });
        }
        if self.word("G") {
            if self.word("F") {
                let f = b(self.unary()?);
                return if all { Ok(Ctl::AGF(f)) } else { Err("E[G F ..] is not supported".into()) };
            }
            let f = b(self.unary()?);
            return Ok(if all { Ctl::AG(f) } else { Ctl::EG(f) });
        }
        if self.word("X") {
            let f = b(self.unary()?);
            return Ok(if all { Ctl::AX(f) } else { Ctl::EX(f) });
        }
        let f = b(self.or()?);
        if !self.word("U") {
            return Err("expected `U`, or `F`, `G`, `X` after the path quantifier".into());
        }
        let g = b(self.or()?);
        Ok(if all { Ctl::AU(f, g) } else { Ctl::EU(f, g) })
    }

    /// `(f & X g)`, where f may itself be a conjunction.
    fn next_conj(&mut self) -> Result<Option<(Ctl, Ctl)>, String> {
        if !self.sym('(') {
            return Ok(None);
        }
        let mut fs = Vec::new();
        let mut g = None;
        loop {
            if self.word("X") {
                if g.is_some() {
                    return Err("only one `X` conjunct is supported".into());
                }
                g = Some(self.unary()?);
            } else {
                match self.unary() {
                    Ok(f) => fs.push(f),
                    Err(_) => return Ok(None),
                }
            }
            if !self.sym('&') {
                break;
            }
        }
        if !self.sym(')') {
            return Ok(None);
        }
        let Some(g) = g else { return Ok(None) };
        let f = fs.into_iter().reduce(|a, b| Ctl::And(Box::new(a), Box::new(b))).unwrap_or(Ctl::True);
        Ok(Some((f, g)))
    }
}

/// Parses CTL with `!`, `&`, `|`, `EX`..`AG`, `E[f U g]`, `A[f U g]` and the
/// path forms `A[F f]`, `A[G f]`, `A[X f]`, `A[G F f]` and `A[F(f & X g)]`
/// (likewise with `E`, except `E[G F f]`).
pub fn parse_ctl(text: &str) -> Result<Ctl, String> {
    let mut p = P { t: lex(text)?, i: 0 };
    let f = p.or()?;
    if p.i != p.t.len() {
        return Err(format!("trailing input at token {}", p.i + 1));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_forms() {
        assert_eq!(parse_ctl("A[G F p]").unwrap().to_string(), "A[G F p]");
        assert_eq!(parse_ctl("A[F(a & X b)]").unwrap().to_string(), "A[F(a & X b)]");
        assert_eq!(parse_ctl("E[F(a & X b)]").unwrap().to_string(), "E[F(a & X b)]");
        assert_eq!(parse_ctl("A[F (a | b)]").unwrap().to_string(), "AF (a | b)");
        assert_eq!(parse_ctl("E[a U !b]").unwrap().to_string(), "E[a U !b]");
        assert_eq!(parse_ctl("AG (p -> q)").is_err(), true);
        assert!(parse_ctl("E[G F p]").is_err());
        assert!(parse_ctl("F p").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_ctl("!a & b | c").unwrap().to_string(), "((!a & b) | c)");
        assert_eq!(parse_ctl("EF a & b").unwrap().to_string(), "(EF a & b)");
        assert_eq!(parse_ctl("A[F(a & b & X c)]").unwrap().atoms(), vec!["a", "b", "c"]);
    }
}
