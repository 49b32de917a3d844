//! Order sentences as statements about Archimedean classes.
//!
//! `translate_star` maps a formula about a linear order `L` to a starred
//! formula about `P_L`: `<` becomes `<*`, `=` becomes `=*`, universals are
//! guarded by `fin(y)` and existentials are restricted to `¬fin(y) ∧ y > 0`.
//! Over `P_L` these range, up to `=*`, over the classes `[π(l)]`, so
//! `L ⊨ φ` iff `P_L ⊨ φ*`.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::eval::{eval_qf, Env};
use super::{Atom, Formula, Rel, Term};
use crate::arch::{class_of, compare_classes, ArchClass};
use crate::error::{Error, Result};
use crate::models::{Divisible, Element, Model, ModelKind};
use crate::orders::{Card, Index, Order};

fn order_var(t: &Term) -> Result<Term> {
    match t {
        Term::Var(_) => Ok(t.clone()),
        other => Err(Error::PreconditionViolated(format!(
            "{other} is not a variable; order formulas only compare variables"
        ))),
    }
}

/// The starred translation `φ*` of an order formula.
pub fn translate_star(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(Atom::Rel(r, a, b)) => {
            let (a, b) = (order_var(a)?, order_var(b)?);
            let lt = |a: &Term, b: &Term| Formula::Atom(Atom::StarLt(a.clone(), b.clone()));
            let eq = Formula::Atom(Atom::StarEq(a.clone(), b.clone()));
            match r {
                Rel::Lt => lt(&a, &b),
                Rel::Gt => lt(&b, &a),
                Rel::Eq => eq,
                Rel::Le => Formula::Or(vec![lt(&a, &b), eq]),
                Rel::Ge => Formula::Or(vec![lt(&b, &a), eq]),
            }
        }
        Formula::Atom(a) => {
            return Err(Error::PreconditionViolated(format!(
                "{a} is not in the language of linear orders"
            )))
        }
        Formula::Not(g) => Formula::not(translate_star(g)?),
        Formula::And(gs) => Formula::And(gs.iter().map(translate_star).collect::<Result<_>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(translate_star).collect::<Result<_>>()?),
        Formula::Forall(y, g) => {
            let guard = Formula::Atom(Atom::Fin(Term::Var(y.clone())));
            Formula::forall(y, Formula::or(vec![guard, translate_star(g)?]))
        }
        Formula::Exists(y, g) => {
            let unbounded = Formula::not(Formula::Atom(Atom::Fin(Term::Var(y.clone()))));
            let positive = Formula::rel(Rel::Gt, Term::Var(y.clone()), Term::int(0));
            Formula::exists(y, Formula::and(vec![unbounded, positive, translate_star(g)?]))
        }
    })
}

fn finite_lex_order(m: &Model) -> Result<&Order> {
    match m.kind() {
        ModelKind::Product(Divisible::Lex(order)) => {
            if order.is_finite() {
                Ok(order)
            } else {
                Err(Error::NotFiniteOrder(order.to_string()))
            }
        }
        _ => Err(Error::PreconditionViolated(format!("{m} is not a P_L"))),
    }
}

/// Evaluates a starred formula in `P_L` for finite `L`.
///
/// Starred atoms only see the sign of an element, whether it is finite, and
/// its class, so quantifiers can range over a finite domain that realizes
/// every such type: several non-positive and finite elements, and for each
/// class a few distinct positive members.
pub fn eval_star(m: &Model, f: &Formula, env: &Env) -> Result<bool> {
    let order = finite_lex_order(m)?;
    let mut domain = Vec::new();
    for k in [-2i64, 0, 1, 5] {
        domain.push(m.from_int(k)?);
    }
    let mut prev: Option<Element> = None;
    for l in order.ascending()? {
        let p = m.pi_embed(l)?;
        domain.push(m.neg(&p)?);
        domain.push(p.clone());
        domain.push(m.sub(&m.mul_int(&2.into(), &p)?, &m.from_int(3)?)?);
        if let Some(q) = &prev {
            domain.push(m.add(&p, &m.neg(q)?)?);
        }
        prev = Some(p);
    }
    eval_star_over(m, f, env, &domain)
}

/// Like [`eval_star`] but quantifying over an explicit finite domain.
pub fn eval_star_over(m: &Model, f: &Formula, env: &Env, domain: &[Element]) -> Result<bool> {
    match f {
        Formula::Exists(y, g) | Formula::Forall(y, g) => {
            let want = matches!(f, Formula::Exists(..));
            let mut env = env.clone();
            for d in domain {
                env.insert(y.clone(), d.clone());
                if eval_star_over(m, g, &env, domain)? == want {
                    return Ok(want);
                }
            }
            Ok(!want)
        }
        Formula::Not(g) => Ok(!eval_star_over(m, g, env, domain)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval_star_over(m, g, env, domain)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_star_over(m, g, env, domain)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => eval_qf(m, f, env),
    }
}

/// Direct evaluation of an order formula in a finite order.
pub fn eval_in_order(order: &Order, f: &Formula, env: &HashMap<String, Index>) -> Result<bool> {
    let points = order.ascending()?;
    eval_order_rec(order, f, &mut env.clone(), &points)
}

fn eval_order_rec(
    order: &Order,
    f: &Formula,
    env: &mut HashMap<String, Index>,
    points: &[Index],
) -> Result<bool> {
    let lookup = |t: &Term, env: &HashMap<String, Index>| -> Result<Index> {
        match t {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::UnboundVariable(v.clone())),
            other => Err(Error::PreconditionViolated(format!("{other} is not a variable"))),
        }
    };
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::Rel(r, a, b)) => r.holds(order.compare(lookup(a, env)?, lookup(b, env)?)?),
        Formula::Atom(a) => {
            return Err(Error::PreconditionViolated(format!(
                "{a} is not in the language of linear orders"
            )))
        }
        Formula::Not(g) => !eval_order_rec(order, g, env, points)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_order_rec(order, g, env, points)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_order_rec(order, g, env, points)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(y, g) | Formula::Forall(y, g) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.get(y).copied();
            let mut result = !want;
            for &p in points {
                env.insert(y.clone(), p);
                if eval_order_rec(order, g, env, points)? == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(v) => env.insert(y.clone(), v),
                None => env.remove(y),
            };
            result
        }
    })
}

fn positive_class(m: &Model, x: &Element) -> Result<ArchClass> {
    if m.sign(x)? != Ordering::Greater {
        return Err(Error::NonPositive(x.to_string()));
    }
    class_of(m, x)
}

/// Number of Archimedean classes strictly between `a < b`.
fn classes_between(m: &Model, a: &ArchClass, b: &ArchClass) -> Result<Card> {
    use ArchClass::*;
    Ok(match (a, b) {
        (Standard, Lex(j)) => m.order().expect("lex classes").intervals(&[*j])?[0],
        (Lex(i), Lex(j)) => m.order().expect("lex classes").intervals(&[*i, *j])?[1],
        (Standard, Quad(j)) => Card::Fin(*j),
        (Quad(i), Quad(j)) => Card::Fin(j - i - 1),
        _ => Card::Fin(0),
    })
}

/// Number of Archimedean classes strictly above `a`.
fn classes_above(m: &Model, a: &ArchClass) -> Result<Card> {
    use ArchClass::*;
    Ok(match (m.kind(), a) {
        (_, Lex(i)) => *m.order().expect("lex classes").intervals(&[*i])?.last().expect("two intervals"),
        (ModelKind::Product(Divisible::Lex(order)), Standard) => order.size(),
        (_, Quad(_)) | (ModelKind::Product(Divisible::Quad(_)), Standard) => Card::Inf,
        (ModelKind::ZAdjoin(_), Standard) | (ModelKind::Product(Divisible::Cut(_)), Standard) => Card::Fin(1),
        _ => Card::Fin(0),
    })
}

/// `φ_n(x, y)`: at least `n` classes lie strictly between `[x] < [y]`.
/// For `n = 0` this says `[x] < [y]`.
pub fn phi_n_between(m: &Model, n: u64, x: &Element, y: &Element) -> Result<bool> {
    let cx = positive_class(m, x)?;
    let cy = positive_class(m, y)?;
    if compare_classes(m, &cx, &cy) != Ordering::Less {
        return Ok(false);
    }
    Ok(classes_between(m, &cx, &cy)? >= Card::Fin(n))
}

/// At least `n` classes lie strictly above `[x]`.
pub fn phi_n_above(m: &Model, n: u64, x: &Element) -> Result<bool> {
    let cx = positive_class(m, x)?;
    Ok(classes_above(m, &cx)? >= Card::Fin(n))
}
