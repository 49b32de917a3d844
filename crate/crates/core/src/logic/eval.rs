//! Evaluation of formulas in a model.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};

use super::{qe, star, Atom, Formula, Term};
use crate::arch::{arch_compare, class_of, ArchClass, ArchOrdering};
use crate::error::{Error, Result};
use crate::models::{Element, Model};

pub type Env = HashMap<String, Element>;

pub fn eval_term(m: &Model, t: &Term, env: &Env) -> Result<Element> {
    Ok(match t {
        Term::Var(v) => {
            let x = env.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            m.validate(x)?;
            x.clone()
        }
        Term::Const(k) if k.is_zero() => m.zero(),
        Term::Const(k) => m.from_int(k.clone())?,
        Term::Add(a, b) => m.add(&eval_term(m, a, env)?, &eval_term(m, b, env)?)?,
        Term::Sub(a, b) => m.sub(&eval_term(m, a, env)?, &eval_term(m, b, env)?)?,
        Term::Neg(a) => m.neg(&eval_term(m, a, env)?)?,
        Term::Mul(k, a) => m.mul_int(k, &eval_term(m, a, env)?)?,
    })
}

/// `x <* y`: `n·x < y` for every `n ≥ 1`.
pub fn star_less(m: &Model, x: &Element, y: &Element) -> Result<bool> {
    if m.sign(x)? != Ordering::Greater {
        return Ok(m.compare(x, y)? == Ordering::Less);
    }
    Ok(m.sign(y)? == Ordering::Greater && arch_compare(m, x, y)? == ArchOrdering::MuchLess)
}

/// `x =* y`: both positive and Archimedean equivalent.
pub fn star_equiv(m: &Model, x: &Element, y: &Element) -> Result<bool> {
    Ok(m.sign(x)? == Ordering::Greater
        && m.sign(y)? == Ordering::Greater
        && arch_compare(m, x, y)? == ArchOrdering::Equiv)
}

/// `fin(x)`: `x < n·1` for some `n`. Without a `1` this reduces to `x ≤ 0`.
pub fn finite(m: &Model, x: &Element) -> Result<bool> {
    if m.sign(x)? != Ordering::Greater {
        return Ok(true);
    }
    Ok(m.is_presburger() && class_of(m, x)? == ArchClass::Standard)
}

fn eval_atom(m: &Model, a: &Atom, env: &Env) -> Result<bool> {
    match a {
        Atom::Rel(r, s, t) => Ok(r.holds(m.compare(&eval_term(m, s, env)?, &eval_term(m, t, env)?)?)),
        Atom::Divides(d, t) => {
            let d = d
                .to_u64()
                .ok_or_else(|| Error::OutOfDomain(format!("modulus {d} out of range")))?;
            Ok(m.residue(&eval_term(m, t, env)?, d)? == 0)
        }
        Atom::StarLt(s, t) => star_less(m, &eval_term(m, s, env)?, &eval_term(m, t, env)?),
        Atom::StarEq(s, t) => star_equiv(m, &eval_term(m, s, env)?, &eval_term(m, t, env)?),
        Atom::Fin(t) => finite(m, &eval_term(m, t, env)?),
    }
}

/// Evaluates a quantifier-free formula.
pub fn eval_qf(m: &Model, f: &Formula, env: &Env) -> Result<bool> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(a) => eval_atom(m, a, env),
        Formula::Not(g) => Ok(!eval_qf(m, g, env)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval_qf(m, g, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_qf(m, g, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(..) | Formula::Forall(..) => Err(Error::PreconditionViolated(
            "eval_qf needs a quantifier-free formula".into(),
        )),
    }
}

/// Evaluates any formula. Star-free formulas in Presburger models go through
/// quantifier elimination; starred ones need a `P_L` over a finite order.
pub fn eval_formula(m: &Model, f: &Formula, env: &Env) -> Result<bool> {
    if f.is_quantifier_free() {
        return eval_qf(m, f, env);
    }
    if !f.is_star_free() {
        return star::eval_star(m, f, env);
    }
    if !m.is_presburger() {
        return Err(Error::PreconditionViolated(format!(
            "quantified formulas are only evaluated in Presburger models, not {m}"
        )));
    }
    eval_qf(m, &qe::eliminate_quantifiers(f)?, env)
}
