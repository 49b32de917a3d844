//! Archimedean analysis.
//!
//! Classes are read off the representations directly: the leading support
//! index in `V_L`, the leading coordinate in `V_S`, `[1]` or `[X]` in
//! `Z[r̂]`. Linear algebra runs over rational coordinates with respect to
//! formal generators (see [`Generator`]), so independence and dependence
//! equations are exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::models::{zadjoin, Divisible, Element, Model, ModelKind, VecElem};
use crate::orders::{Index, Order};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ArchOrdering {
    MuchLess,
    Equiv,
    MuchGreater,
}

/// A nonzero Archimedean class, named structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArchClass {
    /// The class of `1`.
    Standard,
    /// The class of `X` in `Z[r̂]`.
    X,
    /// `[f_l]` in `V_L`.
    Lex(Index),
    /// The class of coordinate `n` in `V_S`.
    Quad(u64),
    /// The single class of `C({1, α})`.
    Cut,
}

impl fmt::Display for ArchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArchClass::Standard => write!(f, "[1]"),
            ArchClass::X => write!(f, "[X]"),
            ArchClass::Lex(l) => write!(f, "[f_{l}]"),
            ArchClass::Quad(n) => write!(f, "[U_{n}]"),
            ArchClass::Cut => write!(f, "[α]"),
        }
    }
}

fn vec_class(v: &VecElem, d: &Divisible) -> Option<ArchClass> {
    match (v, d) {
        (VecElem::Lex(m), Divisible::Lex(order)) => {
            Divisible::leading_index(order, m).map(ArchClass::Lex)
        }
        (VecElem::Quad(m), _) => m.keys().next_back().map(|n| ArchClass::Quad(*n)),
        (VecElem::Cut(..), _) => (!v.is_zero()).then_some(ArchClass::Cut),
        _ => None,
    }
}

/// The Archimedean class of a nonzero element.
pub fn class_of(m: &Model, x: &Element) -> Result<ArchClass> {
    m.validate(x)?;
    let class = match (m.kind(), x) {
        (_, Element::Int(a)) => (!a.is_zero()).then_some(ArchClass::Standard),
        (_, Element::ZAdjoin { a, z, .. }) => {
            if !z.is_zero() {
                Some(ArchClass::X)
            } else {
                (!a.is_zero()).then_some(ArchClass::Standard)
            }
        }
        (ModelKind::Divisible(d), Element::Vec(v)) => vec_class(v, d),
        (ModelKind::Product(d), Element::Product(v, a)) => vec_class(v, d)
            .or_else(|| (!a.is_zero()).then_some(ArchClass::Standard)),
        _ => unreachable!("validated"),
    };
    class.ok_or(Error::ZeroElement)
}

/// Order of classes within one model.
pub fn compare_classes(m: &Model, a: &ArchClass, b: &ArchClass) -> Ordering {
    use ArchClass::*;
    match (a, b) {
        _ if a == b => Ordering::Equal,
        (Standard, _) => Ordering::Less,
        (_, Standard) => Ordering::Greater,
        (Lex(i), Lex(j)) => m
            .order()
            .expect("lex classes live in V_L")
            .compare(*i, *j)
            .expect("validated indices"),
        (Quad(i), Quad(j)) => i.cmp(j),
        _ => unreachable!("classes from different models"),
    }
}

/// `x ≪ y`, `x ∼ y`, or `x ≫ y`.
pub fn arch_compare(m: &Model, x: &Element, y: &Element) -> Result<ArchOrdering> {
    let cx = class_of(m, x)?;
    let cy = class_of(m, y)?;
    Ok(match compare_classes(m, &cx, &cy) {
        Ordering::Less => ArchOrdering::MuchLess,
        Ordering::Equal => ArchOrdering::Equiv,
        Ordering::Greater => ArchOrdering::MuchGreater,
    })
}

/// Definitional check of `x ∼ y` by searching for `N ≤ bound` with
/// `N|x| > |y|` and `N|y| > |x|`. Used as an oracle for [`arch_compare`].
pub fn arch_equiv_bruteforce(m: &Model, x: &Element, y: &Element, bound: i64) -> Result<bool> {
    let ax = m.abs(x)?;
    let ay = m.abs(y)?;
    let n = Int::from(bound);
    let nx = m.mul_int(&n, &ax)?;
    let ny = m.mul_int(&n, &ay)?;
    Ok(m.compare(&nx, &ay)? == Ordering::Greater && m.compare(&ny, &ax)? == Ordering::Greater)
}

/// Formal generators spanning every model's elements over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// The `1` of the `Z` factor or of `Z[r̂]`.
    One,
    X,
    F(Index),
    /// The rational unit of `U_n`.
    E(u64),
    /// `√p_n` in `U_n`.
    S(u64),
    /// The rational unit of `C({1, α})`.
    CutOne,
    Alpha,
}

pub type Coords = BTreeMap<Generator, Rat>;

fn push(c: &mut Coords, g: Generator, q: Rat) {
    if !q.is_zero() {
        c.insert(g, q);
    }
}

fn vec_coords(v: &VecElem, out: &mut Coords) {
    match v {
        VecElem::Lex(m) => {
            for (l, q) in m {
                push(out, Generator::F(*l), q.clone());
            }
        }
        VecElem::Quad(m) => {
            for (n, (a, b)) in m {
                push(out, Generator::E(*n), a.clone());
                push(out, Generator::S(*n), b.clone());
            }
        }
        VecElem::Cut(a, b) => {
            push(out, Generator::CutOne, a.clone());
            push(out, Generator::Alpha, b.clone());
        }
    }
}

/// Rational coordinates of `x` over the formal generators.
pub fn coordinates(m: &Model, x: &Element) -> Result<Coords> {
    m.validate(x)?;
    let mut out = Coords::new();
    match (m.kind(), x) {
        (_, Element::Int(a)) => push(&mut out, Generator::One, arith::rat_int(a)),
        (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
            let (c, w) = zadjoin::formal(r, (a, z, *n));
            push(&mut out, Generator::One, c);
            push(&mut out, Generator::X, w);
        }
        (_, Element::Vec(v)) => vec_coords(v, &mut out),
        (_, Element::Product(v, a)) => {
            vec_coords(v, &mut out);
            push(&mut out, Generator::One, arith::rat_int(a));
        }
        _ => unreachable!("validated"),
    }
    Ok(out)
}

/// Solves `Σ cᵢ·colᵢ = target` over `Q`. Returns the solution with free
/// variables set to 0, or `None` when inconsistent, plus the rank.
fn solve(columns: &[Coords], target: &Coords) -> (Option<Vec<Rat>>, usize) {
    let mut rows: Vec<Generator> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    rows.extend(target.keys().cloned());
    rows.sort();
    rows.dedup();
    let n = columns.len();
    let get = |c: &Coords, g: &Generator| c.get(g).cloned().unwrap_or_else(Rat::zero);
    let mut mat: Vec<Vec<Rat>> = rows
        .iter()
        .map(|g| {
            let mut row: Vec<Rat> = columns.iter().map(|c| get(c, g)).collect();
            row.push(get(target, g));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = Rat::one() / &mat[r][col];
        for v in mat[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                let pivot_row = mat[r].clone();
                for (v, pv) in mat[i].iter_mut().zip(pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let rank = pivots.len();
    if mat[rank..].iter().any(|row| !row[n].is_zero()) {
        return (None, rank);
    }
    let mut sol = vec![Rat::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = mat[i][n].clone();
    }
    (Some(sol), rank)
}

/// A nonzero integer vector in the kernel of the column matrix, if any.
fn kernel_vector(columns: &[Coords]) -> Option<Vec<Int>> {
    for j in 0..columns.len() {
        if let (Some(c), _) = solve(&columns[..j], &columns[j]) {
            // columns[j] = Σ c_i col_i  ⇒  Σ c_i col_i − col_j = 0
            let mut q: Vec<Rat> = c;
            q.push(-Rat::one());
            q.extend(std::iter::repeat_n(Rat::zero(), columns.len() - j - 1));
            let den = arith::common_denominator(q.iter());
            let ints: Vec<Int> = q.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
            let g = arith::gcd_all(ints.iter());
            return Some(ints.into_iter().map(|k| k / &g).collect());
        }
    }
    None
}

/// `m·g = k₁b₁ + ... + k_nb_n` with `m > 0` and `gcd(m, k⃗) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceEquation {
    #[serde(serialize_with = "ser_int")]
    pub m: Int,
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<Int>,
}

fn ser_int<S: serde::Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for k in v {
        seq.serialize_element(&k.to_string())?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dependence {
    Equation(DependenceEquation),
    Independent,
}

/// The reduced dependence equation of `g` over a linearly independent basis.
pub fn dependence(m: &Model, g: &Element, basis: &[Element]) -> Result<Dependence> {
    if m.sign(g)? == Ordering::Equal {
        return Err(Error::ZeroElement);
    }
    let cols: Vec<Coords> = basis.iter().map(|b| coordinates(m, b)).collect::<Result<_>>()?;
    let target = coordinates(m, g)?;
    let (sol, _) = solve(&cols, &target);
    let Some(c) = sol else {
        return Ok(Dependence::Independent);
    };
    let den = arith::common_denominator(c.iter());
    let coeffs = c
        .iter()
        .map(|q| (q * Rat::from_integer(den.clone())).to_integer())
        .collect();
    Ok(Dependence::Equation(DependenceEquation { m: den, coeffs }))
}

/// Evaluates `Σ kᵢ·xᵢ` in the model.
pub fn combine(m: &Model, coeffs: &[Int], elements: &[Element]) -> Result<Element> {
    let mut acc = m.zero();
    for (k, x) in coeffs.iter().zip(elements) {
        if !k.is_zero() {
            acc = m.add(&acc, &m.mul_int(k, x)?)?;
        }
    }
    Ok(acc)
}

/// Verdict of [`is_linearly_independent`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub independent: bool,
    /// A nonzero integer relation, when dependent.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_ints")]
    pub relation: Option<Vec<Int>>,
    /// Result of the bounded brute-force cross-check, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce_agrees: Option<bool>,
}

fn ser_opt_ints<S: serde::Serializer>(
    v: &Option<Vec<Int>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(ks) => ser_ints(ks, s),
        None => s.serialize_none(),
    }
}

/// Exact independence via coordinates. With `bound = Some(B)`, also searches
/// integer relations with `|kᵢ| ≤ B` through model arithmetic and records
/// whether the two answers agree (a bounded search can only confirm
/// dependence).
pub fn is_linearly_independent(
    m: &Model,
    elements: &[Element],
    bound: Option<i64>,
) -> Result<Independence> {
    let cols: Vec<Coords> = elements.iter().map(|x| coordinates(m, x)).collect::<Result<_>>()?;
    let relation = kernel_vector(&cols);
    let independent = relation.is_none();
    let bruteforce_agrees = match bound {
        None => None,
        Some(b) => {
            let found = find_relation_bruteforce(m, elements, b)?;
            Some(match (&found, independent) {
                (Some(_), true) => false,
                (None, false) => relation
                    .as_ref()
                    .is_some_and(|r| r.iter().any(|k| k.abs() > Int::from(b))),
                _ => true,
            })
        }
    };
    Ok(Independence {
        independent,
        relation,
        bruteforce_agrees,
    })
}

/// Smallest-norm-first search for a nonzero `k⃗` with `Σ kᵢxᵢ = 0`, `|kᵢ| ≤ bound`.
pub fn find_relation_bruteforce(
    m: &Model,
    elements: &[Element],
    bound: i64,
) -> Result<Option<Vec<Int>>> {
    let n = elements.len();
    if n == 0 {
        return Ok(None);
    }
    let mut k = vec![-bound; n];
    loop {
        if k.iter().any(|&c| c != 0) {
            let ks: Vec<Int> = k.iter().map(|&c| Int::from(c)).collect();
            if m.sign(&combine(m, &ks, elements)?)? == Ordering::Equal {
                return Ok(Some(ks));
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
            }
            if k[i] < bound {
                k[i] += 1;
                break;
            }
            k[i] = -bound;
            i += 1;
        }
    }
}

/// `cut(g₁ ... g_n)`: the integer vectors with positive combination.
pub struct CutPredicate<'a> {
    model: &'a Model,
    elements: Vec<Element>,
}

impl CutPredicate<'_> {
    pub fn arity(&self) -> usize {
        self.elements.len()
    }

    pub fn decide(&self, k: &[i64]) -> Result<bool> {
        if k.len() != self.elements.len() {
            return Err(Error::PreconditionViolated(format!(
                "cut of arity {} applied to {} coefficients",
                self.elements.len(),
                k.len()
            )));
        }
        let ks: Vec<Int> = k.iter().map(|&c| Int::from(c)).collect();
        let sum = combine(self.model, &ks, &self.elements)?;
        Ok(self.model.sign(&sum)? == Ordering::Greater)
    }
}

pub fn cut_of<'a>(m: &'a Model, elements: &[Element]) -> CutPredicate<'a> {
    CutPredicate {
        model: m,
        elements: elements.to_vec(),
    }
}

/// An order recovered from Archimedean classes, with one positive
/// representative per class in increasing order.
#[derive(Clone, Debug)]
pub struct RecoveredOrder {
    pub order: Order,
    pub representatives: Vec<Element>,
    pub steps: usize,
}

/// Collects the classes of positive, residue-zero elements from `sample`
/// (ignoring `[1]`). Fails when the budget runs out while new classes were
/// still appearing in the second half of the scan.
pub fn recover_order<I>(m: &Model, sample: I, budget: usize) -> Result<RecoveredOrder>
where
    I: IntoIterator<Item = Element>,
{
    let mut reps: Vec<(ArchClass, Element)> = Vec::new();
    let mut last_new = 0;
    let mut steps = 0;
    let mut exhausted = true;
    for x in sample {
        if steps == budget {
            exhausted = false;
            break;
        }
        steps += 1;
        if m.sign(&x)? == Ordering::Equal || !m.is_residue_zero(&x)? {
            continue;
        }
        let x = m.abs(&x)?;
        let c = class_of(m, &x)?;
        if c == ArchClass::Standard {
            continue;
        }
        match reps.binary_search_by(|(rc, _)| compare_classes(m, rc, &c)) {
            Ok(_) => {}
            Err(pos) => {
                reps.insert(pos, (c, x));
                last_new = steps;
            }
        }
    }
    if !exhausted && last_new * 2 > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    Ok(RecoveredOrder {
        order: Order::finite(reps.len() as u64),
        representatives: reps.into_iter().map(|(_, x)| x).collect(),
        steps,
    })
}

/// A default sample for a model: the basis vectors `π(l)` of a `P_L`/`V_L`
/// over the first `n` indices, followed by seeded random elements.
pub fn default_sample(m: &Model, n: usize, seed: u64) -> Vec<Element> {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    if let Some(order) = m.order() {
        for l in order.enumerate(n) {
            let v = VecElem::lex([(l, Rat::one())]);
            out.push(match m.kind() {
                ModelKind::Product(_) => Element::Product(v, Int::zero()),
                _ => Element::Vec(v),
            });
        }
    }
    for _ in 0..n {
        out.push(m.random_element(&mut rng, 5));
    }
    out
}

/// An automorphism of `P_L` given by its action on finitely many basis
/// vectors `f_l` (identity elsewhere, and on the `Z` part).
#[derive(Clone, Debug)]
pub struct Automorphism {
    /// `f_l ↦ image`, for the moved basis vectors.
    images: BTreeMap<Index, BTreeMap<Index, Rat>>,
    /// Inverse images of the same basis vectors.
    inverse: BTreeMap<Index, BTreeMap<Index, Rat>>,
    /// The index `l` with `G(p) = π(l)`.
    pub target: Index,
}

fn apply_linear(
    map: &BTreeMap<Index, BTreeMap<Index, Rat>>,
    m: &Model,
    x: &Element,
) -> Result<Element> {
    m.validate(x)?;
    let Element::Product(VecElem::Lex(v), z) = x else {
        return Err(Error::PreconditionViolated(format!("{m} is not a P_L")));
    };
    let mut out: BTreeMap<Index, Rat> = BTreeMap::new();
    for (l, q) in v {
        match map.get(l) {
            None => *out.entry(*l).or_insert_with(Rat::zero) += q,
            Some(img) => {
                for (k, c) in img {
                    *out.entry(*k).or_insert_with(Rat::zero) += q * c;
                }
            }
        }
    }
    Ok(Element::Product(VecElem::lex(out), z.clone()))
}

impl Automorphism {
    pub fn apply(&self, m: &Model, x: &Element) -> Result<Element> {
        apply_linear(&self.images, m, x)
    }

    pub fn apply_inverse(&self, m: &Model, x: &Element) -> Result<Element> {
        apply_linear(&self.inverse, m, x)
    }

    /// Basis vectors moved by the map.
    pub fn moved(&self) -> impl Iterator<Item = Index> + '_ {
        self.images.keys().copied()
    }
}

/// An automorphism `G` of `P_L` fixing each `π(a)`, `a ∈ fix`, and sending
/// `p` to `π(l)` for the leading index `l` of `p`.
///
/// With `p = Σ qᵢ·f_{lᵢ}` and leading index `l`, the map is
/// `f_l ↦ (f_l − Σ_{i≠l} qᵢ·f_{lᵢ})/q_l`. It is order preserving because it
/// only rescales the leading coordinate by `1/q_l > 0` and perturbs lower ones.
/// When `l` itself is fixed no such automorphism exists: `G` would have to
/// send both `π(l)` and `p ≠ π(l)` to `π(l)`.
pub fn build_automorphism(m: &Model, fix: &[Index], p: &Element) -> Result<Automorphism> {
    let Some(order) = m.order().filter(|_| matches!(m.kind(), ModelKind::Product(_))) else {
        return Err(Error::PreconditionViolated(format!("{m} is not a P_L")));
    };
    for &a in fix {
        if !order.contains(a) {
            return Err(Error::OutOfDomain(format!("{a} in {order}")));
        }
    }
    m.validate(p)?;
    let Element::Product(VecElem::Lex(v), z) = p else {
        unreachable!("validated");
    };
    if !z.is_zero() {
        return Err(Error::PreconditionViolated(format!("{p} has nonzero residues")));
    }
    let Some(lead) = Divisible::leading_index(order, v) else {
        return Err(Error::PreconditionViolated("p is standard".into()));
    };
    let q_lead = &v[&lead];
    if !q_lead.is_positive() {
        return Err(Error::PreconditionViolated(format!("{p} is negative")));
    }
    if v.keys().all(|l| fix.contains(l)) {
        return Err(Error::PreconditionViolated(format!(
            "{p} is a rational combination of the fixed vectors"
        )));
    }
    if fix.contains(&lead) {
        return Err(Error::PreconditionViolated(format!(
            "leading index {lead} of {p} is fixed, so no automorphism can send p to a basis vector"
        )));
    }
    let mut image = BTreeMap::new();
    for (l, q) in v {
        if *l == lead {
            image.insert(*l, Rat::one() / q_lead);
        } else {
            image.insert(*l, -(q / q_lead));
        }
    }
    let mut images = BTreeMap::new();
    images.insert(lead, image);
    let mut inverse = BTreeMap::new();
    inverse.insert(lead, v.clone());
    Ok(Automorphism {
        images,
        inverse,
        target: lead,
    })
}

/// Options for [`build_isomorphism`].
#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Residues of basis elements are compared for moduli `1..=residue_bound`.
    pub residue_bound: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { residue_bound: 64 }
    }
}

/// The graph of the isomorphism determined by `1 ↦ 1` and
/// `basis_src[i] ↦ basis_dst[i]`, evaluated on `probes`.
///
/// Each probe `p` is written as `m·p = k₀ + Σ kᵢ·bᵢ` over `(1, basis_src)`;
/// its image is the unique `a` in `dst` with `m·a = k₀ + Σ kᵢ·b′ᵢ`. Residue
/// agreement is checked up to the bound, cut agreement on the unit box and on
/// every probe's coefficient vector.
pub fn build_isomorphism(
    src: &Model,
    dst: &Model,
    basis_src: &[Element],
    basis_dst: &[Element],
    probes: &[Element],
    opts: IsoOptions,
) -> Result<Vec<(Element, Element)>> {
    if basis_src.len() != basis_dst.len() {
        return Err(Error::PreconditionViolated(format!(
            "bases have different sizes ({} vs {})",
            basis_src.len(),
            basis_dst.len()
        )));
    }
    let full_src: Vec<Element> = std::iter::once(src.one()).chain(basis_src.iter().cloned().map(Ok)).collect::<Result<_>>()?;
    let full_dst: Vec<Element> = std::iter::once(dst.one()).chain(basis_dst.iter().cloned().map(Ok)).collect::<Result<_>>()?;
    for (model, full, side) in [(src, &full_src, "source"), (dst, &full_dst, "target")] {
        if !is_linearly_independent(model, full, None)?.independent {
            return Err(Error::PreconditionViolated(format!(
                "{side} basis together with 1 is dependent"
            )));
        }
    }

    for (bs, bd) in basis_src.iter().zip(basis_dst) {
        for n in 1..=opts.residue_bound {
            let (rs, rd) = (src.residue(bs, n)?, dst.residue(bd, n)?);
            if rs != rd {
                return Err(Error::ResidueMismatch {
                    modulus: n,
                    detail: format!("{bs} ≡ {rs} but {bd} ≡ {rd}"),
                });
            }
        }
    }

    let src_cut = cut_of(src, &full_src);
    let dst_cut = cut_of(dst, &full_dst);
    let check_cut = |k: &[Int]| -> Result<()> {
        let ks: Vec<i64> = k
            .iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::PreconditionViolated("coefficient overflow".into())))
            .collect::<Result<_>>()?;
        if src_cut.decide(&ks)? != dst_cut.decide(&ks)? {
            return Err(Error::CutMismatch { coeffs: ks });
        }
        Ok(())
    };
    for k in unit_box(full_src.len()) {
        check_cut(&k)?;
    }

    let mut graph = Vec::with_capacity(probes.len());
    for p in probes {
        if src.sign(p)? == Ordering::Equal {
            graph.push((p.clone(), dst.zero()));
            continue;
        }
        let eq = match dependence(src, p, &full_src)? {
            Dependence::Equation(eq) => eq,
            Dependence::Independent => return Err(Error::ProbeIndependent(p.to_string())),
        };
        check_cut(&eq.coeffs)?;
        let rhs = combine(dst, &eq.coeffs, &full_dst)?;
        let m_u64 = u64::try_from(&eq.m)
            .map_err(|_| Error::DivisionFailed(format!("modulus {} too large", eq.m)))?;
        let image = dst.solve_div(&rhs, m_u64)?.ok_or_else(|| {
            Error::DivisionFailed(format!("{rhs} is not divisible by {} in {dst}", eq.m))
        })?;
        graph.push((p.clone(), image));
    }
    Ok(graph)
}

fn unit_box(n: usize) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-1..=1).map(move |c| {
                    let mut w = v.clone();
                    w.push(Int::from(c));
                    w
                })
            })
            .collect();
    }
    out
}

/// Exhaustive search for reduced `(m, k⃗)` with `m·g = Σ kᵢbᵢ`, `1 ≤ m ≤ bound`,
/// `|kᵢ| ≤ bound`, using only model arithmetic. Meet in the middle on the
/// last coordinate keeps this at `O(bound^{n})` additions.
pub fn dependence_bruteforce(
    m: &Model,
    g: &Element,
    basis: &[Element],
    bound: i64,
) -> Result<Vec<DependenceEquation>> {
    let n = basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (last, rest) = basis.split_last().expect("nonempty");
    // m·g − k_n·b_n ↦ list of (m, k_n)
    let mut table: HashMap<Element, Vec<(i64, i64)>> = HashMap::new();
    for mm in 1..=bound {
        let mg = m.mul_int(&Int::from(mm), g)?;
        for kn in -bound..=bound {
            let key = m.sub(&mg, &m.mul_int(&Int::from(kn), last)?)?;
            table.entry(key).or_default().push((mm, kn));
        }
    }
    let mut found = Vec::new();
    let mut k = vec![-bound; rest.len()];
    loop {
        let ks: Vec<Int> = k.iter().map(|&c| Int::from(c)).collect();
        let s = combine(m, &ks, rest)?;
        if let Some(hits) = table.get(&s) {
            for &(mm, kn) in hits {
                let mut coeffs = ks.clone();
                coeffs.push(Int::from(kn));
                let g_all = coeffs.iter().fold(Int::from(mm), |acc, c| acc.gcd(c));
                if g_all.is_one() {
                    found.push(DependenceEquation {
                        m: Int::from(mm),
                        coeffs,
                    });
                }
            }
        }
        let mut i = 0;
        loop {
            if i == rest.len() {
                return Ok(found);
            }
            if k[i] < bound {
                k[i] += 1;
                break;
            }
            k[i] = -bound;
            i += 1;
        }
    }
}
