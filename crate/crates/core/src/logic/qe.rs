//! Cooper-style quantifier elimination for Presburger arithmetic.
//!
//! Formulas are put in negation normal form over the literals `t > 0`,
//! `t = 0`, `t ≠ 0`, `d | t` and `d ∤ t`. To eliminate `∃x`, every literal
//! is scaled so that `x` has coefficient `±1` (adding `l | x` for the lcm `l`
//! of the old coefficients), and the formula is replaced by a finite
//! disjunction over `x = b + j` for lower bounds `b` and `1 ≤ j ≤ δ`, plus
//! the `x → −∞` limit. When upper bounds are fewer, the mirrored `+∞` form
//! is used instead.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Atom, Formula, LinTerm, Rel};
use crate::arith::Int;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lit {
    Gt(LinTerm),
    Eq(LinTerm),
    Ne(LinTerm),
    Dvd(Int, LinTerm),
    NDvd(Int, LinTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nnf {
    True,
    False,
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Lit {
    pub fn term(&self) -> &LinTerm {
        match self {
            Lit::Gt(t) | Lit::Eq(t) | Lit::Ne(t) | Lit::Dvd(_, t) | Lit::NDvd(_, t) => t,
        }
    }

    fn with_term(&self, t: LinTerm) -> Lit {
        match self {
            Lit::Gt(_) => Lit::Gt(t),
            Lit::Eq(_) => Lit::Eq(t),
            Lit::Ne(_) => Lit::Ne(t),
            Lit::Dvd(d, _) => Lit::Dvd(d.clone(), t),
            Lit::NDvd(d, _) => Lit::NDvd(d.clone(), t),
        }
    }

    fn negate(&self) -> Lit {
        match self {
            Lit::Gt(t) => Lit::Gt(t.scale(&-Int::one()).add_const(&Int::one())),
            Lit::Eq(t) => Lit::Ne(t.clone()),
            Lit::Ne(t) => Lit::Eq(t.clone()),
            Lit::Dvd(d, t) => Lit::NDvd(d.clone(), t.clone()),
            Lit::NDvd(d, t) => Lit::Dvd(d.clone(), t.clone()),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let split = |t: &LinTerm| {
            let (l, r) = t.split_sides();
            (l.to_term(), r.to_term())
        };
        match self {
            Lit::Gt(t) => {
                let (l, r) = split(t);
                Formula::rel(Rel::Gt, l, r)
            }
            Lit::Eq(t) => {
                let (l, r) = split(t);
                Formula::rel(Rel::Eq, l, r)
            }
            Lit::Ne(t) => Formula::not(Lit::Eq(t.clone()).to_formula()),
            Lit::Dvd(d, t) => Formula::Atom(Atom::Divides(d.clone(), t.to_term())),
            Lit::NDvd(d, t) => Formula::not(Lit::Dvd(d.clone(), t.clone()).to_formula()),
        }
    }
}

fn truth(b: bool) -> Nnf {
    if b {
        Nnf::True
    } else {
        Nnf::False
    }
}

fn divide_all(t: &LinTerm, g: &Int) -> LinTerm {
    LinTerm {
        coeffs: t.coeffs.iter().map(|(v, c)| (v.clone(), c / g)).collect(),
        constant: &t.constant / g,
    }
}

fn symmetric_mod(c: &Int, d: &Int) -> Int {
    let r = c.mod_floor(d);
    if &(&r * 2) > d {
        r - d
    } else {
        r
    }
}

/// Normal form of a literal: gcd-reduced, ground literals decided, and
/// equations oriented so the first coefficient is positive.
pub fn mk_lit(lit: Lit) -> Nnf {
    match lit {
        Lit::Gt(t) => {
            if t.is_ground() {
                return truth(t.constant.is_positive());
            }
            let g = t.coeff_gcd();
            if g.is_one() {
                return Nnf::Lit(Lit::Gt(t));
            }
            // g·s + c > 0  iff  s > floor(−c/g)
            let mut s = divide_all(&t.without_constant(), &g);
            s.constant = -(-&t.constant).div_floor(&g);
            Nnf::Lit(Lit::Gt(s))
        }
        Lit::Eq(t) => match normalise_eq(t) {
            Ok(t) => Nnf::Lit(Lit::Eq(t)),
            Err(b) => truth(b),
        },
        Lit::Ne(t) => match normalise_eq(t) {
            Ok(t) => Nnf::Lit(Lit::Ne(t)),
            Err(b) => truth(!b),
        },
        Lit::Dvd(d, t) => match normalise_dvd(d, t) {
            Ok((d, t)) => Nnf::Lit(Lit::Dvd(d, t)),
            Err(b) => truth(b),
        },
        Lit::NDvd(d, t) => match normalise_dvd(d, t) {
            Ok((d, t)) => Nnf::Lit(Lit::NDvd(d, t)),
            Err(b) => truth(!b),
        },
    }
}

/// `Err(truth of t = 0)` when decided outright.
fn normalise_eq(t: LinTerm) -> std::result::Result<LinTerm, bool> {
    if t.is_ground() {
        return Err(t.constant.is_zero());
    }
    let g = t.coeff_gcd();
    if !t.constant.is_multiple_of(&g) {
        return Err(false);
    }
    let t = divide_all(&t, &g);
    Ok(match t.coeffs.values().next() {
        Some(c) if c.is_negative() => t.scale(&-Int::one()),
        _ => t,
    })
}

/// `Err(truth of d | t)` when decided outright.
fn normalise_dvd(d: Int, t: LinTerm) -> std::result::Result<(Int, LinTerm), bool> {
    let mut s = LinTerm::constant(symmetric_mod(&t.constant, &d));
    for (v, c) in &t.coeffs {
        let r = symmetric_mod(c, &d);
        if !r.is_zero() {
            s.coeffs.insert(v.clone(), r);
        }
    }
    if s.is_ground() {
        return Err(s.constant.is_zero());
    }
    let g = s.coeff_gcd().gcd(&s.constant).gcd(&d);
    let d = &d / &g;
    if d.is_one() {
        return Err(true);
    }
    Ok((d, divide_all(&s, &g)))
}

fn and_all(parts: Vec<Nnf>) -> Nnf {
    let mut out = BTreeSet::new();
    for p in parts {
        match p {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(inner) => out.extend(inner),
            other => {
                out.insert(other);
            }
        }
    }
    for p in &out {
        if let Nnf::Lit(l) = p {
            if out.contains(&Nnf::Lit(l.negate())) && !matches!(l, Lit::Gt(_)) {
                return Nnf::False;
            }
        }
    }
    let mut out: Vec<Nnf> = out.into_iter().collect();
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().expect("one"),
        _ => Nnf::And(out),
    }
}

fn or_all(parts: Vec<Nnf>) -> Nnf {
    let mut out = BTreeSet::new();
    for p in parts {
        match p {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(inner) => out.extend(inner),
            other => {
                out.insert(other);
            }
        }
    }
    for p in &out {
        if let Nnf::Lit(l) = p {
            if out.contains(&Nnf::Lit(l.negate())) && !matches!(l, Lit::Gt(_)) {
                return Nnf::True;
            }
        }
    }
    let mut out: Vec<Nnf> = out.into_iter().collect();
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().expect("one"),
        _ => Nnf::Or(out),
    }
}

impl Nnf {
    pub fn negate(&self) -> Nnf {
        match self {
            Nnf::True => Nnf::False,
            Nnf::False => Nnf::True,
            Nnf::Lit(l) => mk_lit(l.negate()),
            Nnf::And(ps) => or_all(ps.iter().map(Nnf::negate).collect()),
            Nnf::Or(ps) => and_all(ps.iter().map(Nnf::negate).collect()),
        }
    }

    fn map_lits(&self, f: &impl Fn(&Lit) -> Nnf) -> Nnf {
        match self {
            Nnf::True | Nnf::False => self.clone(),
            Nnf::Lit(l) => f(l),
            Nnf::And(ps) => and_all(ps.iter().map(|p| p.map_lits(f)).collect()),
            Nnf::Or(ps) => or_all(ps.iter().map(|p| p.map_lits(f)).collect()),
        }
    }

    fn visit_lits<'a>(&'a self, f: &mut impl FnMut(&'a Lit)) {
        match self {
            Nnf::True | Nnf::False => {}
            Nnf::Lit(l) => f(l),
            Nnf::And(ps) | Nnf::Or(ps) => ps.iter().for_each(|p| p.visit_lits(f)),
        }
    }

    fn mentions(&self, x: &str) -> bool {
        let mut found = false;
        self.visit_lits(&mut |l| found |= l.term().coeffs.contains_key(x));
        found
    }

    fn substitute(&self, x: &str, s: &LinTerm) -> Nnf {
        self.map_lits(&|l| {
            if l.term().coeffs.contains_key(x) {
                mk_lit(l.with_term(l.term().substitute(x, s)))
            } else {
                Nnf::Lit(l.clone())
            }
        })
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Nnf::True => Formula::True,
            Nnf::False => Formula::False,
            Nnf::Lit(l) => l.to_formula(),
            Nnf::And(ps) => Formula::and(ps.iter().map(Nnf::to_formula).collect()),
            Nnf::Or(ps) => Formula::or(ps.iter().map(Nnf::to_formula).collect()),
        }
    }
}

fn atom_to_nnf(a: &Atom) -> Result<Nnf> {
    let lin = LinTerm::from_term;
    Ok(match a {
        Atom::Rel(r, s, t) => {
            let d = lin(s).sub(&lin(t));
            let one = Int::one();
            match r {
                Rel::Lt => mk_lit(Lit::Gt(d.scale(&-one.clone()))),
                Rel::Le => mk_lit(Lit::Gt(d.scale(&-one.clone()).add_const(&one))),
                Rel::Eq => mk_lit(Lit::Eq(d)),
                Rel::Ge => mk_lit(Lit::Gt(d.add_const(&one))),
                Rel::Gt => mk_lit(Lit::Gt(d)),
            }
        }
        Atom::Divides(d, t) => {
            if !d.is_positive() {
                return Err(Error::PreconditionViolated(format!("modulus {d} is not positive")));
            }
            mk_lit(Lit::Dvd(d.clone(), lin(t)))
        }
        _ => {
            return Err(Error::PreconditionViolated(format!(
                "starred atom {a} has no Presburger meaning"
            )))
        }
    })
}

/// Quantifier-free equivalent of `f` in negation normal form.
pub fn to_nnf(f: &Formula) -> Result<Nnf> {
    Ok(match f {
        Formula::True => Nnf::True,
        Formula::False => Nnf::False,
        Formula::Atom(a) => atom_to_nnf(a)?,
        Formula::Not(g) => to_nnf(g)?.negate(),
        Formula::And(gs) => and_all(gs.iter().map(to_nnf).collect::<Result<_>>()?),
        Formula::Or(gs) => or_all(gs.iter().map(to_nnf).collect::<Result<_>>()?),
        Formula::Exists(x, g) => exists(x, &to_nnf(g)?),
        Formula::Forall(x, g) => exists(x, &to_nnf(g)?.negate()).negate(),
    })
}

fn exists(x: &str, phi: &Nnf) -> Nnf {
    match phi {
        Nnf::Or(ps) => or_all(ps.iter().map(|p| exists(x, p)).collect()),
        Nnf::And(ps) => {
            let (with, without): (Vec<Nnf>, Vec<Nnf>) = ps.iter().cloned().partition(|p| p.mentions(x));
            if with.is_empty() {
                return phi.clone();
            }
            // x = t with a unit coefficient: substitute directly
            for p in &with {
                if let Nnf::Lit(Lit::Eq(t)) = p {
                    let c = t.coeff(x);
                    if c.abs().is_one() {
                        let solution = t.without(x).scale(&-c);
                        let rest = and_all(with.clone()).substitute(x, &solution);
                        return and_all(without.into_iter().chain([rest]).collect());
                    }
                }
            }
            let inner = cooper(x, &and_all(with));
            and_all(without.into_iter().chain([inner]).collect())
        }
        _ if !phi.mentions(x) => phi.clone(),
        _ => cooper(x, phi),
    }
}

fn cooper(x: &str, phi: &Nnf) -> Nnf {
    let mut l = Int::one();
    phi.visit_lits(&mut |lit| {
        let c = lit.term().coeff(x);
        if !c.is_zero() {
            l = l.lcm(&c);
        }
    });
    // Make every coefficient of x equal to ±1; x now stands for l·x.
    let unit = phi.map_lits(&|lit| {
        let t = lit.term();
        let c = t.coeff(x);
        if c.is_zero() {
            return Nnf::Lit(lit.clone());
        }
        let k = &l / c.abs();
        let mut s = t.scale(&k);
        s.coeffs.insert(x.to_string(), c.signum());
        mk_lit(match lit {
            Lit::Dvd(d, _) => Lit::Dvd(d * &k, s),
            Lit::NDvd(d, _) => Lit::NDvd(d * &k, s),
            other => other.with_term(s),
        })
    });
    let unit = if l.is_one() {
        unit
    } else {
        and_all(vec![unit, mk_lit(Lit::Dvd(l.clone(), LinTerm::var(x)))])
    };
    if !unit.mentions(x) {
        return unit;
    }

    let mut delta = Int::one();
    let mut lower = BTreeSet::new();
    let mut upper = BTreeSet::new();
    unit.visit_lits(&mut |lit| {
        let t = lit.term();
        let c = t.coeff(x);
        if c.is_zero() {
            return;
        }
        let rest = t.without(x);
        // c·x + rest with c = ±1; the root of the equation is −c·rest
        let root = rest.scale(&-&c);
        match lit {
            Lit::Gt(_) if c.is_positive() => {
                lower.insert(root);
            }
            Lit::Gt(_) => {
                upper.insert(root);
            }
            Lit::Eq(_) => {
                lower.insert(root.add_const(&-Int::one()));
                upper.insert(root.add_const(&Int::one()));
            }
            Lit::Ne(_) => {
                lower.insert(root.clone());
                upper.insert(root);
            }
            Lit::Dvd(d, _) | Lit::NDvd(d, _) => delta = delta.lcm(d),
        }
    });

    let from_below = lower.len() <= upper.len();
    let limit = unit.map_lits(&|lit| {
        let c = lit.term().coeff(x);
        if c.is_zero() {
            return Nnf::Lit(lit.clone());
        }
        match lit {
            Lit::Gt(_) => truth(c.is_positive() != from_below),
            Lit::Eq(_) => Nnf::False,
            Lit::Ne(_) => Nnf::True,
            _ => Nnf::Lit(lit.clone()),
        }
    });
    let steps = delta.to_u64().expect("modulus fits in u64");
    let mut out = Vec::new();
    for j in 1..=steps {
        let j = Int::from(j);
        out.push(limit.substitute(x, &LinTerm::constant(j.clone())));
        let bounds = if from_below { &lower } else { &upper };
        for b in bounds {
            let shift = if from_below { j.clone() } else { -j.clone() };
            out.push(unit.substitute(x, &b.add_const(&shift)));
        }
        if out.last() == Some(&Nnf::True) {
            return Nnf::True;
        }
    }
    or_all(out)
}

/// A quantifier-free formula equivalent to `f` in every model of
/// Presburger arithmetic.
pub fn eliminate_quantifiers(f: &Formula) -> Result<Formula> {
    Ok(to_nnf(f)?.to_formula())
}

/// Truth value of a closed star-free sentence.
pub fn decide_sentence(f: &Formula) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::PreconditionViolated(format!(
            "sentence has free variables {}",
            free.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    match to_nnf(f)? {
        Nnf::True => Ok(true),
        Nnf::False => Ok(false),
        other => unreachable!("closed formula left residue {other:?}"),
    }
}
