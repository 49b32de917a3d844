//! Bounded checks of the division axioms, Plain and Ψ on a sample.
//!
//! * Pr: for `2 ≤ n ≤ N`, exactly one `0 ≤ i < n` has `n | x − i`.
//! * Plain: every `x` shares its residues with some integer. Only the
//!   necessary condition up to `N` is checkable, so a pass is one-sided.
//! * Ψ: two positive residue-zero elements in the same class are
//!   commensurable up to a smaller class, i.e. `n|x| − m|y| ≪ x` for some
//!   `n, m ≥ 1`. The report also counts pairs failing the stronger literal
//!   form `n|x| = m|y|`, which `P_L` with two or more classes already fails.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::super::arch::{self, class_of};
use crate::arith::{Int, Rat};
use crate::error::Error;
use crate::models::{zadjoin, Divisible, Element, Model, ModelKind, NatSet, VecElem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            passed: true,
            checked: 0,
            failure: None,
        }
    }

    fn fail(&mut self, why: String) {
        if self.passed {
            self.passed = false;
            self.failure = Some(why);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlainCandidate {
    pub element: String,
    /// `z` with `z ≡ x (mod n)` for every `n ≤ N`, in `[0, modulus)`.
    pub z: String,
    pub modulus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlainCheck {
    pub passed: bool,
    /// Always true: a finite bound cannot refute Plain.
    pub bounded: bool,
    pub candidates: Vec<PlainCandidate>,
    pub caveat: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiWitness {
    pub x: String,
    pub y: String,
    pub n: String,
    pub m: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiCheck {
    pub passed: bool,
    pub pairs_checked: usize,
    pub witnesses: Vec<PsiWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<(String, String)>,
    /// Pairs with no exact `n|x| = m|y|`.
    pub literal_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomsReport {
    pub bound: u64,
    pub pr: Check,
    pub plain: PlainCheck,
    pub psi: PsiCheck,
    /// Every sampled element is `±n·1` for some `n ≤ N`.
    pub z_scott: Check,
}

pub fn check_pr_plain_psi(m: &Model, sample: &[Element], bound: u64) -> AxiomsReport {
    AxiomsReport {
        bound,
        pr: check_pr(m, sample, bound),
        plain: check_plain(m, sample, bound),
        psi: check_psi(m, sample),
        z_scott: check_z_scott(m, sample, bound),
    }
}

fn check_pr(m: &Model, sample: &[Element], bound: u64) -> Check {
    let mut c = Check::new();
    if !m.is_presburger() {
        c.fail(format!("{m} has no 1"));
        return c;
    }
    for x in sample {
        for n in 2..=bound {
            c.checked += 1;
            let mut hits = 0;
            for i in 0..n {
                let shifted = m.from_int(i).and_then(|i| m.sub(x, &i));
                let ok = shifted.and_then(|s| {
                    Ok(match m.solve_div(&s, n)? {
                        Some(y) => m.mul_int(&Int::from(n), &y)? == s,
                        None => false,
                    })
                });
                match ok {
                    Ok(true) => hits += 1,
                    Ok(false) => {}
                    Err(e) => c.fail(format!("{x}: {e}")),
                }
            }
            if hits != 1 {
                c.fail(format!("{x}: {hits} remainders mod {n}"));
            }
        }
    }
    c
}

/// Combines `z ≡ r (mod n)` congruences; `None` when inconsistent.
fn crt_combine(a: (Int, Int), b: (Int, Int)) -> Option<(Int, Int)> {
    let (r1, n1) = a;
    let (r2, n2) = b;
    let e = n1.extended_gcd(&n2);
    let g = e.gcd;
    if !(&r2 - &r1).is_multiple_of(&g) {
        return None;
    }
    let l = &n1 / &g * &n2;
    let k = ((&r2 - &r1) / &g * e.x).mod_floor(&(&n2 / &g));
    Some(((r1 + n1 * k).mod_floor(&l), l))
}

fn check_plain(m: &Model, sample: &[Element], bound: u64) -> PlainCheck {
    let mut out = PlainCheck {
        passed: true,
        bounded: true,
        candidates: Vec::new(),
        caveat: format!("bounded: residues agree with an integer for every modulus up to {bound}; larger moduli are not checked"),
        failure: None,
    };
    if !m.is_presburger() {
        out.passed = false;
        out.failure = Some(format!("{m} has no 1"));
        return out;
    }
    let mut non_plain = Vec::new();
    for x in sample {
        let mut acc = Some((Int::zero(), Int::one()));
        for n in 2..=bound.max(1) {
            let r = match m.residue(x, n) {
                Ok(r) => r,
                Err(e) => {
                    out.failure.get_or_insert(format!("{x}: {e}"));
                    out.passed = false;
                    acc = None;
                    break;
                }
            };
            acc = acc.and_then(|a| crt_combine(a, (Int::from(r), Int::from(n))));
            if acc.is_none() {
                out.passed = false;
                out.failure.get_or_insert(format!("{x}: residues up to {n} are incoherent"));
                break;
            }
        }
        if let Some((z, l)) = acc {
            out.candidates.push(PlainCandidate {
                element: x.to_string(),
                z: z.to_string(),
                modulus: l.to_string(),
            });
        }
        if matches!(m.decompose_plain(x), Err(Error::NotPlain(_))) {
            non_plain.push(x.to_string());
        }
    }
    if !non_plain.is_empty() {
        out.caveat.push_str(&format!(
            "; structurally non-plain: {} (the bound cannot see this)",
            non_plain.join(", ")
        ));
    }
    out
}

/// Coordinates of `x` inside its own Archimedean class: the leading part
/// that `n|x| − m|y| ≪ x` depends on.
fn leading_part(m: &Model, x: &Element) -> Vec<Rat> {
    let lead_vec = |v: &VecElem, d: &Divisible| -> Option<Vec<Rat>> {
        match (v, d) {
            (VecElem::Lex(c), Divisible::Lex(order)) => {
                Divisible::leading_index(order, c).map(|l| vec![c[&l].clone()])
            }
            (VecElem::Quad(c), _) => c.values().next_back().map(|(a, b)| vec![a.clone(), b.clone()]),
            (VecElem::Cut(a, b), _) => (!v.is_zero()).then(|| vec![a.clone(), b.clone()]),
            _ => None,
        }
    };
    match (m.kind(), x) {
        (_, Element::Int(a)) => vec![Rat::from_integer(a.clone())],
        (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
            let (c, w) = zadjoin::formal(r, (a, z, *n));
            vec![if w.is_zero() { c } else { w }]
        }
        (ModelKind::Divisible(d), Element::Vec(v)) => lead_vec(v, d).unwrap_or_default(),
        (ModelKind::Product(d), Element::Product(v, a)) => {
            lead_vec(v, d).unwrap_or_else(|| vec![Rat::from_integer(a.clone())])
        }
        _ => Vec::new(),
    }
}

/// `q` with `v = q·u`, if any; both nonzero.
fn ratio(u: &[Rat], v: &[Rat]) -> Option<Rat> {
    if u.len() != v.len() {
        return None;
    }
    let i = u.iter().position(|q| !q.is_zero())?;
    let q = &v[i] / &u[i];
    u.iter().zip(v).all(|(a, b)| &(a * &q) == b).then_some(q)
}

fn full_coords(m: &Model, x: &Element) -> Option<(Vec<arch::Generator>, Vec<Rat>)> {
    let c = arch::coordinates(m, x).ok()?;
    Some((c.keys().cloned().collect(), c.values().cloned().collect()))
}

fn check_psi(m: &Model, sample: &[Element]) -> PsiCheck {
    let mut out = PsiCheck {
        passed: true,
        pairs_checked: 0,
        witnesses: Vec::new(),
        failure: None,
        literal_failures: 0,
    };
    let pool: Vec<Element> = sample
        .iter()
        .filter(|x| m.is_residue_zero(x).unwrap_or(false) && m.sign(x).map(|s| s != Ordering::Equal).unwrap_or(false))
        .filter_map(|x| m.abs(x).ok())
        .collect();
    for (i, x) in pool.iter().enumerate() {
        for y in &pool[i + 1..] {
            let same = matches!((class_of(m, x), class_of(m, y)), (Ok(a), Ok(b)) if a == b);
            if !same {
                continue;
            }
            out.pairs_checked += 1;
            let exact = match (full_coords(m, x), full_coords(m, y)) {
                (Some((gx, cx)), Some((gy, cy))) if gx == gy => ratio(&cx, &cy),
                _ => None,
            };
            if exact.is_none() {
                out.literal_failures += 1;
            }
            match ratio(&leading_part(m, x), &leading_part(m, y)) {
                // |y| ≈ q|x| with q = n/m, so n|x| − m|y| ≪ x
                Some(q) if q.is_positive() => {
                    if out.witnesses.len() < 16 {
                        out.witnesses.push(PsiWitness {
                            x: x.to_string(),
                            y: y.to_string(),
                            n: q.numer().to_string(),
                            m: q.denom().to_string(),
                        });
                    }
                }
                _ => {
                    if out.passed {
                        out.passed = false;
                        out.failure = Some((x.to_string(), y.to_string()));
                    }
                }
            }
        }
    }
    out
}

fn check_z_scott(m: &Model, sample: &[Element], bound: u64) -> Check {
    let mut c = Check::new();
    let limit = Int::from(bound);
    for x in sample {
        c.checked += 1;
        let standard = match x {
            Element::Int(a) => a.abs() <= limit,
            _ => {
                let zero = m.zero();
                (0..=bound).any(|n| {
                    let k = Int::from(n);
                    let target = if n == 0 { Ok(zero.clone()) } else { m.from_int(k) };
                    matches!(target.and_then(|t| Ok(m.abs(x)? == t)), Ok(true))
                })
            }
        };
        if !standard {
            c.fail(format!("{x} is not ±n for any n ≤ {bound}"));
        }
    }
    c
}

/// A sample that includes the structurally interesting elements of each
/// model (unit and `√p` coordinates, `X`, basis vectors) plus random ones.
pub fn axiom_sample(m: &Model, n: usize, seed: u64) -> Vec<Element> {
    let mut out = arch::default_sample(m, n, seed);
    let quad = |set: &NatSet| -> Vec<VecElem> {
        let mut v = Vec::new();
        for k in 0..8u64 {
            v.push(VecElem::quad([(k, (Rat::one(), Rat::zero()))]));
            if set.contains(k) {
                v.push(VecElem::quad([(k, (Rat::zero(), Rat::one()))]));
            }
        }
        v
    };
    let cut = || vec![VecElem::Cut(Rat::one(), Rat::zero()), VecElem::Cut(Rat::zero(), Rat::one())];
    match m.kind() {
        ModelKind::ZAdjoin(_) => {
            if let Ok(x) = m.x() {
                out.insert(0, x.clone());
                if let Ok(y) = m.add(&x, &x) {
                    out.insert(1, y);
                }
            }
        }
        ModelKind::Divisible(Divisible::Quad(s)) => out.extend(quad(s).into_iter().map(Element::Vec)),
        ModelKind::Product(Divisible::Quad(s)) => {
            out.extend(quad(s).into_iter().map(|v| Element::Product(v, Int::zero())))
        }
        ModelKind::Divisible(Divisible::Cut(_)) => out.extend(cut().into_iter().map(Element::Vec)),
        ModelKind::Product(Divisible::Cut(_)) => {
            out.extend(cut().into_iter().map(|v| Element::Product(v, Int::zero())))
        }
        _ => {}
    }
    out.retain(|x| m.validate(x).is_ok());
    out
}
