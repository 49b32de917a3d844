//! Integer linear terms `Σ cᵢ·xᵢ + c`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Term;
use crate::arith::Int;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinTerm {
    /// Nonzero coefficients only.
    pub coeffs: BTreeMap<String, Int>,
    pub constant: Int,
}

impl LinTerm {
    pub fn constant(c: impl Into<Int>) -> Self {
        LinTerm {
            coeffs: BTreeMap::new(),
            constant: c.into(),
        }
    }

    pub fn var(x: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x.to_string(), Int::one());
        LinTerm {
            coeffs,
            constant: Int::zero(),
        }
    }

    pub fn from_term(t: &Term) -> Self {
        match t {
            Term::Var(v) => LinTerm::var(v),
            Term::Const(k) => LinTerm::constant(k.clone()),
            Term::Add(a, b) => LinTerm::from_term(a).add(&LinTerm::from_term(b)),
            Term::Sub(a, b) => LinTerm::from_term(a).sub(&LinTerm::from_term(b)),
            Term::Neg(a) => LinTerm::from_term(a).scale(&-Int::one()),
            Term::Mul(k, a) => LinTerm::from_term(a).scale(k),
        }
    }

    pub fn coeff(&self, x: &str) -> Int {
        self.coeffs.get(x).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &LinTerm) -> LinTerm {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(Int::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &LinTerm) -> LinTerm {
        self.add(&other.scale(&-Int::one()))
    }

    pub fn scale(&self, k: &Int) -> LinTerm {
        if k.is_zero() {
            return LinTerm::default();
        }
        LinTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_const(&self, c: &Int) -> LinTerm {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    pub fn without_constant(&self) -> LinTerm {
        LinTerm {
            coeffs: self.coeffs.clone(),
            constant: Int::zero(),
        }
    }

    /// The term with `x` removed.
    pub fn without(&self, x: &str) -> LinTerm {
        let mut out = self.clone();
        out.coeffs.remove(x);
        out
    }

    /// Replaces `x` by `s`.
    pub fn substitute(&self, x: &str, s: &LinTerm) -> LinTerm {
        match self.coeffs.get(x) {
            None => self.clone(),
            Some(c) => self.without(x).add(&s.scale(c)),
        }
    }

    /// gcd of the variable coefficients (0 for ground terms).
    pub fn coeff_gcd(&self) -> Int {
        self.coeffs.values().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn eval(&self, env: &impl Fn(&str) -> Option<Int>) -> Option<Int> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * env(v)?;
        }
        Some(acc)
    }

    /// Syntax tree with variables in name order and the constant last.
    pub fn to_term(&self) -> Term {
        let mut acc: Option<Term> = None;
        let mut push = |t: Term, negative: bool| {
            acc = Some(match acc.take() {
                None if negative => Term::Neg(Box::new(t)),
                None => t,
                Some(a) if negative => Term::sub(a, t),
                Some(a) => Term::add(a, t),
            });
        };
        for (v, c) in &self.coeffs {
            let var = Term::Var(v.clone());
            let mag = c.abs();
            let t = if mag.is_one() { var } else { Term::Mul(mag, Box::new(var)) };
            push(t, c.is_negative());
        }
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            let c = &self.constant;
            let negative_tail = c.is_negative() && !self.coeffs.is_empty();
            let t = Term::Const(if negative_tail { -c } else { c.clone() });
            push(t, negative_tail);
        }
        acc.expect("at least one summand")
    }

    /// Splits into `(lhs, rhs)` with `self = lhs − rhs` and no negative
    /// coefficients on either side; used to print `t > 0` as `a > b`.
    pub fn split_sides(&self) -> (LinTerm, LinTerm) {
        let mut lhs = LinTerm::default();
        let mut rhs = LinTerm::default();
        for (v, c) in &self.coeffs {
            if c.is_positive() {
                lhs.coeffs.insert(v.clone(), c.clone());
            } else {
                rhs.coeffs.insert(v.clone(), -c);
            }
        }
        if self.constant.is_positive() {
            lhs.constant = self.constant.clone();
        } else {
            rhs.constant = -&self.constant;
        }
        (lhs, rhs)
    }
}

impl fmt::Display for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}
