//! Concrete syntax.
//!
//! ```text
//! formula  ::= quant | disj
//! quant    ::= ("E" | "A") var "." formula
//! disj     ::= conj ("or" conj)*
//! conj     ::= unary ("&" unary)*
//! unary    ::= "~" unary | quant | "(" formula ")" | "true" | "false" | atom
//! atom     ::= term rel term | int "|" term | "fin" "(" term ")"
//! rel      ::= "<" | "<=" | "=" | ">=" | ">" | "<*" | "=*"
//! term     ::= summand (("+" | "-") summand)*
//! summand  ::= "-" summand | factor
//! factor   ::= int ["*" factor] | var | "(" term ")"
//! var      ::= [a-z][a-z0-9_]*       (except or, fin, true, false)
//! ```
//!
//! A quantifier scopes as far right as possible. Bound variables that clash
//! with an earlier binder or with a free variable are renamed by appending a
//! number.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Signed;

use super::{fresh_name, Atom, Formula, Rel, Term};
use crate::arith::Int;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(Int),
    Exists,
    Forall,
    Dot,
    Amp,
    Or,
    Tilde,
    Bar,
    Rel(Rel),
    StarLt,
    StarEq,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Fin,
    True,
    False,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let next = bytes.get(i + 1).map(|&b| b as char);
        let (tok, len) = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '.' => (Tok::Dot, 1),
            '&' => (Tok::Amp, 1),
            '~' => (Tok::Tilde, 1),
            '|' => (Tok::Bar, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '<' if next == Some('=') => (Tok::Rel(Rel::Le), 2),
            '<' if next == Some('*') => (Tok::StarLt, 2),
            '<' => (Tok::Rel(Rel::Lt), 1),
            '>' if next == Some('=') => (Tok::Rel(Rel::Ge), 2),
            '>' => (Tok::Rel(Rel::Gt), 1),
            '=' if next == Some('*') => (Tok::StarEq, 2),
            '=' => (Tok::Rel(Rel::Eq), 1),
            'E' => (Tok::Exists, 1),
            'A' => (Tok::Forall, 1),
            _ if c.is_ascii_digit() => {
                let len = bytes[i..].iter().take_while(|b| b.is_ascii_digit()).count();
                let v: Int = text[i..i + len].parse().expect("digits");
                (Tok::Int(v), len)
            }
            _ if c.is_ascii_lowercase() => {
                let len = bytes[i..]
                    .iter()
                    .take_while(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || **b == b'_')
                    .count();
                let word = &text[i..i + len];
                let tok = match word {
                    "or" => Tok::Or,
                    "fin" => Tok::Fin,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                (tok, len)
            }
            _ => return Err(syntax(i, format!("unexpected character {c:?}"))),
        };
        out.push((tok, start));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conj()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one")
        } else {
            Formula::Or(parts)
        })
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one")
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let existential = self.bump() == Some(Tok::Exists);
                let at = self.offset();
                let x = match self.bump() {
                    Some(Tok::Ident(x)) => x,
                    _ => return Err(syntax(at, "expected a variable after quantifier")),
                };
                self.expect(&Tok::Dot, "'.' after quantified variable")?;
                let body = Box::new(self.formula()?);
                Ok(if existential {
                    Formula::Exists(x, body)
                } else {
                    Formula::Forall(x, body)
                })
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                // Either a parenthesised formula or a term such as (x + 1) < y.
                let save = self.pos;
                self.pos += 1;
                if let Ok(f) = self.formula() {
                    if self.eat(&Tok::RParen) && !self.continues_term() {
                        return Ok(f);
                    }
                }
                self.pos = save;
                self.atom()
            }
            _ => self.atom(),
        }
    }

    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Plus | Tok::Minus | Tok::Star | Tok::Rel(_) | Tok::StarLt | Tok::StarEq | Tok::Bar)
        )
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Fin) {
            self.expect(&Tok::LParen, "'(' after fin")?;
            let t = self.term()?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(Formula::Atom(Atom::Fin(t)));
        }
        let at = self.offset();
        let lhs = self.term()?;
        let op_at = self.offset();
        let atom = match self.bump() {
            Some(Tok::Rel(r)) => Atom::Rel(r, lhs, self.term()?),
            Some(Tok::StarLt) => Atom::StarLt(lhs, self.term()?),
            Some(Tok::StarEq) => Atom::StarEq(lhs, self.term()?),
            Some(Tok::Bar) => match lhs {
                Term::Const(d) if d.is_positive() => Atom::Divides(d, self.term()?),
                _ => return Err(syntax(at, "divisibility modulus must be a positive integer")),
            },
            _ => return Err(syntax(op_at, "expected a relation")),
        };
        Ok(Formula::Atom(atom))
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.summand()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Term::add(acc, self.summand()?);
            } else if self.eat(&Tok::Minus) {
                acc = Term::sub(acc, self.summand()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn summand(&mut self) -> Result<Term> {
        if self.eat(&Tok::Minus) {
            if let Some(Tok::Int(k)) = self.peek().cloned() {
                self.pos += 1;
                return self.int_factor(-k);
            }
            return Ok(Term::Neg(Box::new(self.summand()?)));
        }
        self.factor()
    }

    fn int_factor(&mut self, k: Int) -> Result<Term> {
        if self.eat(&Tok::Star) {
            Ok(Term::Mul(k, Box::new(self.factor()?)))
        } else {
            Ok(Term::Const(k))
        }
    }

    fn factor(&mut self) -> Result<Term> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(k)) => self.int_factor(k),
            Some(Tok::Ident(v)) => Ok(Term::Var(v)),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(syntax(at, "expected a term")),
        }
    }
}

/// Parses a formula and alpha-renames clashing binders.
pub fn parse(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(alpha_rename(&f))
}

/// Renames binders so that no two binders share a name and no binder
/// shadows a free variable.
pub fn alpha_rename(f: &Formula) -> Formula {
    let mut used = f.all_vars();
    let mut seen: BTreeSet<String> = f.free_vars();
    rename_rec(f, &mut HashMap::new(), &mut used, &mut seen)
}

fn rename_rec(
    f: &Formula,
    scope: &mut HashMap<String, String>,
    used: &mut BTreeSet<String>,
    seen: &mut BTreeSet<String>,
) -> Formula {
    let rename_term = |t: &Term, scope: &HashMap<String, String>| {
        let mut out = t.clone();
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        for v in vs {
            if let Some(to) = scope.get(&v) {
                if to != &v {
                    out = out.rename(&v, &format!("\u{0}{to}"));
                }
            }
        }
        strip_marks(&out)
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(_) => f.map_terms(&|t| rename_term(t, scope)),
        Formula::Not(g) => Formula::not(rename_rec(g, scope, used, seen)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_rec(g, scope, used, seen)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_rec(g, scope, used, seen)).collect()),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let name = if seen.contains(x) {
                let n = fresh_name(x, used);
                used.insert(n.clone());
                n
            } else {
                x.clone()
            };
            seen.insert(name.clone());
            let prev = scope.insert(x.clone(), name.clone());
            let body = Box::new(rename_rec(g, scope, used, seen));
            match prev {
                Some(p) => scope.insert(x.clone(), p),
                None => scope.remove(x),
            };
            match f {
                Formula::Exists(..) => Formula::Exists(name, body),
                _ => Formula::Forall(name, body),
            }
        }
    }
}

// Renaming is done in two steps (mark, then strip) so that swapping names
// inside one term cannot capture.
fn strip_marks(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.trim_start_matches('\u{0}').to_string()),
        Term::Const(_) => t.clone(),
        Term::Add(a, b) => Term::add(strip_marks(a), strip_marks(b)),
        Term::Sub(a, b) => Term::sub(strip_marks(a), strip_marks(b)),
        Term::Neg(a) => Term::Neg(Box::new(strip_marks(a))),
        Term::Mul(k, a) => Term::Mul(k.clone(), Box::new(strip_marks(a))),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(k) => write!(f, "{k}"),
            Term::Add(a, b) => {
                write!(f, "{a} + ")?;
                write_operand(f, b)
            }
            Term::Sub(a, b) => {
                write!(f, "{a} - ")?;
                write_operand(f, b)
            }
            Term::Neg(a) => match a.as_ref() {
                Term::Var(v) => write!(f, "-{v}"),
                other => write!(f, "-({other})"),
            },
            Term::Mul(k, a) => {
                let bare = match a.as_ref() {
                    Term::Var(_) => true,
                    Term::Const(c) | Term::Mul(c, _) => !c.is_negative(),
                    _ => false,
                };
                if bare {
                    write!(f, "{k}*{a}")
                } else {
                    write!(f, "{k}*({a})")
                }
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Add(..) | Term::Sub(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel(r, a, b) => write!(f, "{a} {} {b}", r.symbol()),
            Atom::Divides(d, t) => write!(f, "{d} | {t}"),
            Atom::StarLt(a, b) => write!(f, "{a} <* {b}"),
            Atom::StarEq(a, b) => write!(f, "{a} =* {b}"),
            Atom::Fin(t) => write!(f, "fin({t})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => match g.as_ref() {
                Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => write!(f, "~{g}"),
                _ => write!(f, "~({g})"),
            },
            Formula::And(gs) => write_joined(f, gs, " & ", |g| {
                matches!(g, Formula::Or(_) | Formula::And(_) | Formula::Exists(..) | Formula::Forall(..))
                    || is_empty_junction(g)
            }),
            Formula::Or(gs) => write_joined(f, gs, " or ", |g| {
                matches!(g, Formula::Or(_) | Formula::Exists(..) | Formula::Forall(..)) || is_empty_junction(g)
            }),
            Formula::Exists(x, g) => write!(f, "E {x}. {g}"),
            Formula::Forall(x, g) => write!(f, "A {x}. {g}"),
        }
    }
}

fn is_empty_junction(g: &Formula) -> bool {
    matches!(g, Formula::And(v) | Formula::Or(v) if v.len() < 2)
}

fn write_joined(
    f: &mut fmt::Formatter<'_>,
    gs: &[Formula],
    sep: &str,
    needs_parens: impl Fn(&Formula) -> bool,
) -> fmt::Result {
    if gs.is_empty() {
        // Only reachable for hand-built values; `Formula::and` never makes these.
        return write!(f, "{}", if sep == " & " { "true" } else { "false" });
    }
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        if needs_parens(g) {
            write!(f, "({g})")?;
        } else {
            write!(f, "{g}")?;
        }
    }
    Ok(())
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse(s)
    }
}
