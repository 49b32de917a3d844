//! `φ ↦ φ#_p`: replace `x` by `q₁x₁ + … + q_kx_k + z` and clear denominators.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{fresh_name, Atom, Formula, LinTerm, Term};
use crate::arith::{Int, Rat};
use crate::models::Tau;

/// Linear term with rational coefficients.
#[derive(Default)]
struct RatLin {
    coeffs: BTreeMap<String, Rat>,
    constant: Rat,
}

impl RatLin {
    fn from_lin(t: &LinTerm) -> Self {
        RatLin {
            coeffs: t.coeffs.iter().map(|(v, c)| (v.clone(), Rat::from_integer(c.clone()))).collect(),
            constant: Rat::from_integer(t.constant.clone()),
        }
    }

    fn substitute(mut self, x: &str, vars: &[String], tau: &Tau) -> Self {
        let Some(c) = self.coeffs.remove(x) else {
            return self;
        };
        for (v, q) in vars.iter().zip(&tau.coeffs) {
            let e = self.coeffs.entry(v.clone()).or_insert_with(Rat::zero);
            *e += &c * q;
        }
        self.coeffs.retain(|_, q| !q.is_zero());
        self.constant += &c * Rat::from_integer(tau.z.clone());
        self
    }

    fn denominator_lcm(&self) -> Int {
        self.coeffs
            .values()
            .chain([&self.constant])
            .fold(Int::one(), |acc, q| acc.lcm(q.denom()))
    }

    fn scaled(&self, d: &Int) -> LinTerm {
        let to_int = |q: &Rat| (q * Rat::from_integer(d.clone())).to_integer();
        LinTerm {
            coeffs: self.coeffs.iter().map(|(v, q)| (v.clone(), to_int(q))).collect(),
            constant: to_int(&self.constant),
        }
    }
}

/// Names of the fresh variables `x1 … xk` used by [`substitute_sharp`].
pub fn sharp_variables(f: &Formula, x: &str, k: usize) -> Vec<String> {
    let mut used = f.all_vars();
    (1..=k)
        .map(|i| {
            let name = fresh_name(&format!("{x}{i}"), &used);
            used.insert(name.clone());
            name
        })
        .collect()
}

/// `φ#_p` for the decomposition `p = Σ qᵢ·π(lᵢ) + z`. Atoms mentioning the
/// free variable `x` are multiplied through by the lcm `D` of the resulting
/// denominators; divisibility `d | t` becomes `dD | Dt`. Quantifier
/// structure is unchanged.
pub fn substitute_sharp(f: &Formula, x: &str, tau: &Tau) -> Formula {
    let vars = sharp_variables(f, x, tau.coeffs.len());
    rewrite(f, x, &vars, tau)
}

fn mentions(t: &Term, x: &str) -> bool {
    let mut vs = std::collections::BTreeSet::new();
    t.vars(&mut vs);
    vs.contains(x)
}

fn rewrite(f: &Formula, x: &str, vars: &[String], tau: &Tau) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(rewrite_atom(a, x, vars, tau)),
        Formula::Not(g) => Formula::not(rewrite(g, x, vars, tau)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rewrite(g, x, vars, tau)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rewrite(g, x, vars, tau)).collect()),
        // x rebound: no free occurrences below
        Formula::Exists(y, _) | Formula::Forall(y, _) if y == x => f.clone(),
        Formula::Exists(y, g) => Formula::Exists(y.clone(), Box::new(rewrite(g, x, vars, tau))),
        Formula::Forall(y, g) => Formula::Forall(y.clone(), Box::new(rewrite(g, x, vars, tau))),
    }
}

fn rewrite_atom(a: &Atom, x: &str, vars: &[String], tau: &Tau) -> Atom {
    let sides: Vec<&Term> = match a {
        Atom::Rel(_, s, t) | Atom::StarLt(s, t) | Atom::StarEq(s, t) => vec![s, t],
        Atom::Divides(_, t) | Atom::Fin(t) => vec![t],
    };
    if !sides.iter().any(|t| mentions(t, x)) {
        return a.clone();
    }
    let subst: Vec<RatLin> = sides
        .iter()
        .map(|t| RatLin::from_lin(&LinTerm::from_term(t)).substitute(x, vars, tau))
        .collect();
    let d = subst.iter().fold(Int::one(), |acc, s| acc.lcm(&s.denominator_lcm()));
    let ts: Vec<Term> = subst.iter().map(|s| s.scaled(&d).to_term()).collect();
    match a {
        Atom::Rel(r, ..) => Atom::Rel(*r, ts[0].clone(), ts[1].clone()),
        Atom::StarLt(..) => Atom::StarLt(ts[0].clone(), ts[1].clone()),
        Atom::StarEq(..) => Atom::StarEq(ts[0].clone(), ts[1].clone()),
        Atom::Divides(m, _) => Atom::Divides(m * &d, ts[0].clone()),
        Atom::Fin(_) => Atom::Fin(ts[0].clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::logic::parse;

    fn tau(coeffs: Vec<Rat>, z: i64) -> Tau {
        Tau {
            indices: (0..coeffs.len() as u64).collect(),
            coeffs,
            z: Int::from(z),
        }
    }

    #[test]
    fn positive_shift() {
        let f = parse("x > 0").unwrap();
        let g = substitute_sharp(&f, "x", &tau(vec![rat(2, 1)], 3));
        assert_eq!(g.to_string(), "2*x1 + 3 > 0");
    }

    #[test]
    fn halves_clear_into_the_modulus() {
        let f = parse("2 | x").unwrap();
        let g = substitute_sharp(&f, "x", &tau(vec![rat(1, 2)], 0));
        assert_eq!(g.to_string(), "4 | x1");
    }

    #[test]
    fn bound_occurrences_and_depth_untouched() {
        let f = parse("E y. x < y & 3 | y").unwrap();
        let g = substitute_sharp(&f, "x", &tau(vec![rat(1, 3), rat(-2, 1)], 1));
        assert_eq!(g.to_string(), "E y. x1 - 6*x2 + 3 < 3*y & 3 | y");
        assert_eq!(g.quantifier_depth(), f.quantifier_depth());
    }

    #[test]
    fn fresh_names_avoid_existing_ones() {
        let f = parse("x < x1").unwrap();
        let g = substitute_sharp(&f, "x", &tau(vec![rat(1, 1)], 0));
        assert_eq!(g.to_string(), "x11 < x1");
    }
}
