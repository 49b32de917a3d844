//! First-order formulas over `(+, <, 0, 1)` with divisibility atoms and the
//! starred atoms `<*`, `=*`, `fin` used by the order-to-group translation.
//!
//! The concrete syntax is documented in [`parse`]. Quantifier elimination
//! lives in [`qe`], model evaluation in [`eval`], and the transformations
//! `φ ↦ φ#` and `φ ↦ φ*` in [`sharp`] and [`star`].

pub mod axioms;
pub mod eval;
pub mod linear;
pub mod parse;
pub mod qe;
pub mod sharp;
pub mod star;

use std::collections::BTreeSet;

use crate::arith::Int;

pub use axioms::{check_pr_plain_psi, AxiomsReport};
pub use eval::{eval_formula, eval_qf, Env};
pub use linear::LinTerm;
pub use parse::parse;
pub use qe::{decide_sentence, eliminate_quantifiers};
pub use sharp::substitute_sharp;
pub use star::{eval_in_order, eval_star, phi_n_above, phi_n_between, translate_star};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Int),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Integer multiple `k·t`.
    Mul(Int, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn int(k: i64) -> Term {
        Term::Const(Int::from(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(k: i64, t: Term) -> Term {
        Term::Mul(Int::from(k), Box::new(t))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Neg(a) | Term::Mul(_, a) => a.vars(out),
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(v) if v == from => Term::Var(to.to_string()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.rename(from, to), b.rename(from, to)),
            Term::Sub(a, b) => Term::sub(a.rename(from, to), b.rename(from, to)),
            Term::Neg(a) => Term::Neg(Box::new(a.rename(from, to))),
            Term::Mul(k, a) => Term::Mul(k.clone(), Box::new(a.rename(from, to))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Rel::Lt => ord == Less,
            Rel::Le => ord != Greater,
            Rel::Eq => ord == Equal,
            Rel::Ge => ord != Less,
            Rel::Gt => ord == Greater,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Rel(Rel, Term, Term),
    /// `d | t` with `d > 0`.
    Divides(Int, Term),
    /// `s <* t`: `n·s < t` for every `n ≥ 1`.
    StarLt(Term, Term),
    /// `s =* t`: some `n ≥ 1` has `n·s > t` and `n·t > s`.
    StarEq(Term, Term),
    /// `fin(t)`: `t < n·1` for some `n`.
    Fin(Term),
}

impl Atom {
    pub fn is_starred(&self) -> bool {
        matches!(self, Atom::StarLt(..) | Atom::StarEq(..) | Atom::Fin(_))
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Rel(_, a, b) | Atom::StarLt(a, b) | Atom::StarEq(a, b) => vec![a, b],
            Atom::Divides(_, t) | Atom::Fin(t) => vec![t],
        }
    }

    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Rel(r, a, b) => Atom::Rel(*r, f(a), f(b)),
            Atom::Divides(d, t) => Atom::Divides(d.clone(), f(t)),
            Atom::StarLt(a, b) => Atom::StarLt(f(a), f(b)),
            Atom::StarEq(a, b) => Atom::StarEq(f(a), f(b)),
            Atom::Fin(t) => Atom::Fin(f(t)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn rel(r: Rel, a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Rel(r, a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(body))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    /// Conjunction, flattening nested conjunctions; a single conjunct is
    /// returned as is and an empty one is `true`.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().expect("one element"),
            _ => Formula::And(out),
        }
    }

    /// Disjunction, dual to [`Formula::and`].
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().expect("one element"),
            _ => Formula::Or(out),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                for t in a.terms() {
                    t.vars(&mut vs);
                }
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            for t in a.terms() {
                t.vars(&mut out);
            }
        });
        self.visit_binders(&mut |x| {
            out.insert(x.to_string());
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(g) => g.visit_binders(f),
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                f(x);
                g.visit_binders(f);
            }
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_binders(f)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_depth() == 0
    }

    /// Maximum nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(g) => g.quantifier_depth(),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + g.quantifier_depth(),
        }
    }

    pub fn is_star_free(&self) -> bool {
        let mut ok = true;
        self.visit_atoms(&mut |a| ok &= !a.is_starred());
        ok
    }

    /// Applies `f` to every term of every atom.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        self.map_atoms(&|a| Formula::Atom(a.map_terms(f)))
    }

    /// Replaces every atom by `f(atom)`, keeping the connective structure.
    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Exists(x, g) => Formula::Exists(x.clone(), Box::new(g.map_atoms(f))),
            Formula::Forall(x, g) => Formula::Forall(x.clone(), Box::new(g.map_atoms(f))),
        }
    }
}

/// `base`, or `base` followed by the first number making it unused.
pub(crate) fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !used.contains(n))
        .expect("infinitely many candidates")
}
