//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::Rng;

use presburger::logic::{self, Atom, Formula, Rel, Term};

/// `Σ cᵥ·v + k` over machine integers.
#[derive(Clone, Debug, Default)]
pub struct Lin {
    pub coeffs: HashMap<String, i128>,
    pub constant: i128,
}

pub fn linearize(t: &Term) -> Lin {
    let mut out = Lin::default();
    walk(t, 1, &mut out);
    out
}

fn walk(t: &Term, k: i128, out: &mut Lin) {
    match t {
        Term::Var(v) => *out.coeffs.entry(v.clone()).or_default() += k,
        Term::Const(c) => out.constant += k * c.to_i128().expect("small constant"),
        Term::Add(a, b) => {
            walk(a, k, out);
            walk(b, k, out);
        }
        Term::Sub(a, b) => {
            walk(a, k, out);
            walk(b, -k, out);
        }
        Term::Neg(a) => walk(a, -k, out),
        Term::Mul(c, a) => walk(a, k * c.to_i128().expect("small coefficient"), out),
    }
}

pub fn eval_term(t: &Term, env: &HashMap<String, i128>) -> i128 {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => c.to_i128().unwrap(),
        Term::Add(a, b) => eval_term(a, env) + eval_term(b, env),
        Term::Sub(a, b) => eval_term(a, env) - eval_term(b, env),
        Term::Neg(a) => -eval_term(a, env),
        Term::Mul(c, a) => c.to_i128().unwrap() * eval_term(a, env),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Brute-force evaluation over Z. Each quantifier `Q x. ψ` ranges over
/// `[-P-D, P+D]`, where, in the quantifier-free equivalent of `ψ`, `D` is the
/// lcm of the moduli and `P` bounds `|t|` over the atoms `c·x + t ⋈ 0`. Past
/// that window every atom is constant or `D`-periodic in `x`, so a witness
/// (or counterexample) can always be shifted into it.
#[derive(Default)]
pub struct ZOracle {
    windows: HashMap<String, (Vec<Lin>, i128)>,
    pub max_window: i128,
}

impl ZOracle {
    fn window(&mut self, x: &str, body: &Formula, env: &HashMap<String, i128>) -> i128 {
        let key = format!("{x}.{body}");
        let (rests, d) = self.windows.entry(key).or_insert_with(|| {
            let nf = logic::eliminate_quantifiers(body).expect("qe on body");
            let mut rests = Vec::new();
            let mut d = 1i128;
            nf.visit_atoms(&mut |a| match a {
                Atom::Rel(_, s, t) => {
                    let mut l = linearize(&Term::Sub(Box::new(s.clone()), Box::new(t.clone())));
                    if l.coeffs.remove(x).is_some_and(|c| c != 0) {
                        rests.push(l);
                    }
                }
                Atom::Divides(m, _) => {
                    let m = m.to_i128().unwrap().abs();
                    d = d / gcd(d, m) * m;
                }
                _ => panic!("starred atom in a Presburger normal form"),
            });
            (rests, d)
        });
        let p = rests
            .iter()
            .map(|l| (l.constant + l.coeffs.iter().map(|(v, c)| c * env[v]).sum::<i128>()).abs())
            .max()
            .unwrap_or(0);
        let w = p + *d;
        self.max_window = self.max_window.max(w);
        w
    }

    pub fn eval(&mut self, f: &Formula, env: &mut HashMap<String, i128>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(Atom::Rel(r, s, t)) => r.holds(eval_term(s, env).cmp(&eval_term(t, env))),
            Formula::Atom(Atom::Divides(m, t)) => eval_term(t, env) % m.to_i128().unwrap() == 0,
            Formula::Atom(a) => panic!("unsupported atom {a:?}"),
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                let want = matches!(f, Formula::Exists(..));
                let w = self.window(x, g, env);
                let saved = env.get(x).copied();
                let mut result = !want;
                for v in -w..=w {
                    env.insert(x.clone(), v);
                    if self.eval(g, env) == want {
                        result = want;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(x.clone(), s),
                    None => env.remove(x),
                };
                result
            }
        }
    }
}

const RELS: [Rel; 5] = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];

/// `Σ cᵢvᵢ + k ⋈ 0`-shaped atom (split over both sides) or `d | Σ cᵢvᵢ + k`,
/// over one or two of `scope`.
pub fn random_atom(rng: &mut StdRng, scope: &[String], max_coeff: i64, max_mod: i64) -> Formula {
    let n = rng.gen_range(1..=scope.len().min(2));
    let mut lhs = Term::int(rng.gen_range(-6..=6));
    let mut rhs = Term::int(0);
    for _ in 0..n {
        let v = Term::var(&scope[rng.gen_range(0..scope.len())]);
        let mut c = rng.gen_range(1..=max_coeff);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let t = if c == 1 { v } else { Term::mul(c, v) };
        if rng.gen_bool(0.5) {
            lhs = Term::add(t, lhs);
        } else {
            rhs = Term::add(rhs, t);
        }
    }
    if rng.gen_bool(0.25) {
        let d = rng.gen_range(2..=max_mod);
        Formula::Atom(Atom::Divides(d.into(), Term::sub(lhs, rhs)))
    } else {
        Formula::rel(RELS[rng.gen_range(0..5)], lhs, rhs)
    }
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// A Presburger formula over `scope` with at most `depth` nested quantifiers.
pub fn random_formula(rng: &mut StdRng, scope: &mut Vec<String>, depth: usize) -> Formula {
    let roll = rng.gen_range(0..10);
    if depth > 0 && (roll < 4 || scope.is_empty()) {
        let x = NAMES[scope.len() % NAMES.len()].to_string();
        let x = if scope.contains(&x) { format!("{x}{}", scope.len()) } else { x };
        scope.push(x.clone());
        let body = random_formula(rng, scope, depth - 1);
        scope.pop();
        return if rng.gen_bool(0.5) {
            Formula::exists(&x, body)
        } else {
            Formula::forall(&x, body)
        };
    }
    match roll {
        4 | 5 if depth > 0 || !scope.is_empty() => {
            let parts = (0..rng.gen_range(2..=3)).map(|_| random_formula(rng, scope, depth)).collect();
            if roll == 4 {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        6 => Formula::not(random_formula(rng, scope, depth)),
        _ => random_atom(rng, scope, 4, 6),
    }
}

/// A sentence of quantifier depth between 1 and `depth`.
pub fn random_sentence(rng: &mut StdRng, depth: usize) -> Formula {
    let mut scope = Vec::new();
    let x = NAMES[0].to_string();
    scope.push(x.clone());
    let body = random_formula(rng, &mut scope, depth - 1);
    if rng.gen_bool(0.5) {
        Formula::exists(&x, body)
    } else {
        Formula::forall(&x, body)
    }
}

/// Order sentences used for the starred translation.
pub const ORDER_CORPUS: [&str; 20] = [
    "E x. x = x",
    "A x. A y. x < y or y < x or x = y",
    "E x. A y. x <= y",
    "E x. A y. y <= x",
    "E x. E y. x < y",
    "E x. E y. E z. x < y & y < z",
    "A x. A y. ~(x < y) or (E z. x < z & z < y)",
    "A x. (E y. x < y) or (A y. y <= x)",
    "A x. ~(E y. x < y) or (E y. x < y & (A z. ~(x < z) or y <= z))",
    "E x. E y. x < y & ~(E z. x < z & z < y)",
    "A x. E y. y < x",
    "A x. E y. x < y",
    "E x. (E y. y < x) & (E y. x < y)",
    "E x. E y. x < y & (A z. z <= x or y <= z)",
    "A x. A y. x <= y or (E z. y < z & z < x)",
    "E x. E y. E z. E w. x < y & y < z & z < w",
    "~(E x. E y. E z. E w. x < y & y < z & z < w)",
    "A x. A y. x = y or (E z. z < x & z < y) or (A z. x <= z or y <= z)",
    "E x. A y. x = y or x < y",
    "A x. E y. (x < y & (A z. ~(x < z) or y <= z)) or (A z. z <= x)",
];

/// An order formula over `scope` (atoms `<`, `=`, `<=`) with at most
/// `depth` nested quantifiers.
pub fn random_order_formula(rng: &mut StdRng, scope: &mut Vec<String>, depth: usize) -> Formula {
    let roll = rng.gen_range(0..10);
    if depth > 0 && (roll < 4 || scope.is_empty()) {
        let x = format!("v{}", scope.len());
        scope.push(x.clone());
        let body = random_order_formula(rng, scope, depth - 1);
        scope.pop();
        return if rng.gen_bool(0.5) {
            Formula::exists(&x, body)
        } else {
            Formula::forall(&x, body)
        };
    }
    match roll {
        4 | 5 => {
            let parts = (0..2).map(|_| random_order_formula(rng, scope, depth)).collect();
            if roll == 4 {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        6 => Formula::not(random_order_formula(rng, scope, depth)),
        _ => {
            let a = Term::var(&scope[rng.gen_range(0..scope.len())]);
            let b = Term::var(&scope[rng.gen_range(0..scope.len())]);
            Formula::rel([Rel::Lt, Rel::Eq, Rel::Le][rng.gen_range(0..3)], a, b)
        }
    }
}

/// Models of Presburger arithmetic used across the property tests.
pub fn presburger_models() -> Vec<(&'static str, presburger::Model)> {
    use presburger::models::{CutOracle, NatSet};
    use presburger::{Model, Order, ResidueSequence};
    vec![
        ("Z", Model::standard()),
        ("PL(finite:3)", Model::pl(Order::finite(3))),
        ("PL(omega)", Model::pl(Order::omega())),
        ("PL(zeta)", Model::pl(Order::zeta())),
        ("Z[enc{0,3}]", Model::zadjoin(ResidueSequence::encode_set([0, 3]))),
        ("Z[rho(7)]", Model::zadjoin(ResidueSequence::of_integer(7))),
        ("V_{1} x Z", Model::quad_sum(NatSet::finite([1]))),
        ("C(1,sqrt 2) x Z", Model::product(Model::cut(CutOracle::sqrt(2).unwrap())).unwrap()),
    ]
}

/// Divisible ordered groups (no `1`).
pub fn divisible_models() -> Vec<(&'static str, presburger::Model)> {
    use presburger::models::{CutOracle, NatSet};
    use presburger::{Model, Order};
    vec![
        ("VL(finite:2)", Model::vl(Order::finite(2))),
        ("VL(eta)", Model::vl(Order::eta())),
        ("V_{0,2}", Model::vs(NatSet::finite([0, 2]))),
        ("C(1,sqrt 3)", Model::cut(CutOracle::sqrt(3).unwrap())),
    ]
}
