//! Concrete Presburger groups and divisible ordered abelian groups.
//!
//! A [`Model`] fixes one structure (standard `Z`, `Z[r̂]`, a divisible group
//! `V`, or `V × Z`), and [`Element`] is the tagged exact representation of
//! its points. Every model answers the same operation set: `add`, `neg`,
//! `compare`, `residue`, `solve_div`, and friends.

pub mod diagram;
pub mod literal;
pub mod zadjoin;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::orders::{Index, Order};
use crate::residues::{ResidueSequence, SetOracle};

pub use diagram::{complete_diagram, Fact};

/// A decidable set of naturals.
#[derive(Clone)]
pub struct NatSet {
    members: Option<BTreeSet<u64>>,
    oracle: SetOracle,
}

impl NatSet {
    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Self {
        let members: BTreeSet<u64> = members.into_iter().collect();
        let lookup = members.clone();
        NatSet {
            members: Some(members),
            oracle: Arc::new(move |k| lookup.contains(&k)),
        }
    }

    pub fn from_oracle(oracle: SetOracle) -> Self {
        NatSet {
            members: None,
            oracle,
        }
    }

    pub fn contains(&self, k: u64) -> bool {
        (self.oracle)(k)
    }

    pub fn members(&self) -> Option<&BTreeSet<u64>> {
        self.members.as_ref()
    }
}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.members {
            Some(m) => {
                let items: Vec<String> = m.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            None => write!(f, "{{oracle}}"),
        }
    }
}

/// The lower cut `{q ∈ Q : q < α}` of an irrational real `α`.
#[derive(Clone)]
pub struct CutOracle {
    label: String,
    below: Arc<dyn Fn(&Rat) -> bool + Send + Sync>,
}

impl CutOracle {
    /// `α = √p` for a positive non-square `p`.
    pub fn sqrt(p: u64) -> Result<Self> {
        let pi = Int::from(p);
        if arith::is_perfect_square(&pi) {
            return Err(Error::Config(format!("sqrt:{p} is rational")));
        }
        let pr = Rat::from_integer(pi);
        Ok(CutOracle {
            label: format!("sqrt:{p}"),
            below: Arc::new(move |q: &Rat| q.is_negative() || q * q < pr),
        })
    }

    /// An arbitrary cut. The caller promises it is the cut of an irrational.
    pub fn custom(label: impl Into<String>, below: Arc<dyn Fn(&Rat) -> bool + Send + Sync>) -> Self {
        CutOracle {
            label: label.into(),
            below,
        }
    }

    pub fn below(&self, q: &Rat) -> bool {
        (self.below)(q)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for CutOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CutOracle({})", self.label)
    }
}

/// The divisible ordered abelian groups we can compute in.
#[derive(Clone, Debug)]
pub enum Divisible {
    /// `V_L = ⊕_{l∈L} Q`.
    Lex(Order),
    /// `V_S = ⊕_n U_n` with `U_n = C({1, √p_n})` for `n ∈ S`, else `Q`.
    Quad(NatSet),
    /// `C({1, α})`.
    Cut(CutOracle),
}

/// Element of a divisible group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VecElem {
    /// Finite-support coefficients, keyed by order index; no zero values.
    Lex(BTreeMap<Index, Rat>),
    /// `n ↦ (a, b)` meaning `a + b·√p_n` in coordinate `n`; no `(0, 0)` values.
    Quad(BTreeMap<u64, (Rat, Rat)>),
    /// `a + b·α`.
    Cut(Rat, Rat),
}

impl VecElem {
    pub fn lex<I: IntoIterator<Item = (Index, Rat)>>(coords: I) -> Self {
        let mut m = BTreeMap::new();
        for (k, q) in coords {
            if !q.is_zero() {
                m.insert(k, q);
            }
        }
        VecElem::Lex(m)
    }

    pub fn quad<I: IntoIterator<Item = (u64, (Rat, Rat))>>(coords: I) -> Self {
        let mut m = BTreeMap::new();
        for (k, (a, b)) in coords {
            if !(a.is_zero() && b.is_zero()) {
                m.insert(k, (a, b));
            }
        }
        VecElem::Quad(m)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VecElem::Lex(m) => m.is_empty(),
            VecElem::Quad(m) => m.is_empty(),
            VecElem::Cut(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    fn add(&self, other: &VecElem) -> VecElem {
        match (self, other) {
            (VecElem::Lex(x), VecElem::Lex(y)) => {
                let mut out = x.clone();
                for (k, q) in y {
                    let e = out.entry(*k).or_insert_with(Rat::zero);
                    *e += q;
                    if e.is_zero() {
                        out.remove(k);
                    }
                }
                VecElem::Lex(out)
            }
            (VecElem::Quad(x), VecElem::Quad(y)) => {
                let mut out = x.clone();
                for (k, (a, b)) in y {
                    let e = out.entry(*k).or_insert_with(|| (Rat::zero(), Rat::zero()));
                    e.0 += a;
                    e.1 += b;
                    if e.0.is_zero() && e.1.is_zero() {
                        out.remove(k);
                    }
                }
                VecElem::Quad(out)
            }
            (VecElem::Cut(a, b), VecElem::Cut(c, d)) => VecElem::Cut(a + c, b + d),
            _ => unreachable!("shapes checked by the caller"),
        }
    }

    /// `q·self`.
    pub fn scale(&self, q: &Rat) -> VecElem {
        if q.is_zero() {
            return self.zero_like();
        }
        match self {
            VecElem::Lex(m) => VecElem::Lex(m.iter().map(|(k, v)| (*k, v * q)).collect()),
            VecElem::Quad(m) => {
                VecElem::Quad(m.iter().map(|(k, (a, b))| (*k, (a * q, b * q))).collect())
            }
            VecElem::Cut(a, b) => VecElem::Cut(a * q, b * q),
        }
    }

    fn zero_like(&self) -> VecElem {
        match self {
            VecElem::Lex(_) => VecElem::Lex(BTreeMap::new()),
            VecElem::Quad(_) => VecElem::Quad(BTreeMap::new()),
            VecElem::Cut(..) => VecElem::Cut(Rat::zero(), Rat::zero()),
        }
    }

    fn neg(&self) -> VecElem {
        self.scale(&-Rat::one())
    }
}

impl Divisible {
    pub fn zero(&self) -> VecElem {
        match self {
            Divisible::Lex(_) => VecElem::Lex(BTreeMap::new()),
            Divisible::Quad(_) => VecElem::Quad(BTreeMap::new()),
            Divisible::Cut(_) => VecElem::Cut(Rat::zero(), Rat::zero()),
        }
    }

    /// Shape and invariant check.
    pub fn validate(&self, v: &VecElem) -> Result<()> {
        match (self, v) {
            (Divisible::Lex(order), VecElem::Lex(m)) => {
                for (k, q) in m {
                    if !order.contains(*k) {
                        return Err(Error::OutOfDomain(format!("{k} in {order}")));
                    }
                    if q.is_zero() {
                        return Err(Error::InvalidElement(format!("zero coefficient at l{k}")));
                    }
                }
                Ok(())
            }
            (Divisible::Quad(s), VecElem::Quad(m)) => {
                for (k, (a, b)) in m {
                    if a.is_zero() && b.is_zero() {
                        return Err(Error::InvalidElement(format!("zero coordinate at {k}")));
                    }
                    if !b.is_zero() && !s.contains(*k) {
                        return Err(Error::InvalidElement(format!(
                            "coordinate {k} is Q but has a √p part"
                        )));
                    }
                }
                Ok(())
            }
            (Divisible::Cut(_), VecElem::Cut(..)) => Ok(()),
            _ => Err(Error::TagMismatch {
                model: self.to_string(),
                element: v.to_string(),
            }),
        }
    }

    /// The largest support index of a `Lex` element, under the order.
    pub fn leading_index(order: &Order, m: &BTreeMap<Index, Rat>) -> Option<Index> {
        m.keys().copied().reduce(|best, k| {
            if order.compare(k, best).expect("validated") == Ordering::Greater {
                k
            } else {
                best
            }
        })
    }

    pub fn sign(&self, v: &VecElem) -> Ordering {
        match (self, v) {
            (Divisible::Lex(order), VecElem::Lex(m)) => match Self::leading_index(order, m) {
                None => Ordering::Equal,
                Some(l) => m[&l].cmp(&Rat::zero()),
            },
            (Divisible::Quad(_), VecElem::Quad(m)) => match m.iter().next_back() {
                None => Ordering::Equal,
                Some((n, (a, b))) => {
                    let p = Int::from(arith::nth_prime(*n as usize));
                    arith::sign_quadratic(a, b, &p)
                }
            },
            (Divisible::Cut(cut), VecElem::Cut(a, b)) => cut_sign(cut, a, b),
            _ => unreachable!("validated"),
        }
    }

    fn random(&self, rng: &mut impl Rng, size: i64) -> VecElem {
        let q = |rng: &mut dyn rand::RngCore| {
            let num = rng.gen_range(-size..=size);
            let den = rng.gen_range(1..=4);
            arith::rat(num, den)
        };
        match self {
            Divisible::Lex(order) => {
                let dom = order.enumerate(6);
                let mut coords = Vec::new();
                if !dom.is_empty() {
                    for _ in 0..rng.gen_range(0..=3) {
                        let l = dom[rng.gen_range(0..dom.len())];
                        coords.push((l, q(rng)));
                    }
                }
                VecElem::lex(coords)
            }
            Divisible::Quad(s) => {
                let mut coords = Vec::new();
                for _ in 0..rng.gen_range(0..=3) {
                    let n = rng.gen_range(0..4u64);
                    let b = if s.contains(n) { q(rng) } else { Rat::zero() };
                    coords.push((n, (q(rng), b)));
                }
                // duplicates: later draws win
                VecElem::quad(coords.into_iter().collect::<BTreeMap<_, _>>())
            }
            Divisible::Cut(_) => VecElem::Cut(q(rng), q(rng)),
        }
    }
}

/// Sign of `a + b·α` from the cut of `α`.
fn cut_sign(cut: &CutOracle, a: &Rat, b: &Rat) -> Ordering {
    if b.is_zero() {
        return a.cmp(&Rat::zero());
    }
    let t = -(a / b);
    // a + bα > 0  ⟺  α > −a/b (b > 0) or α < −a/b (b < 0)
    let alpha_above = cut.below(&t);
    match (b.is_positive(), alpha_above) {
        (true, true) | (false, false) => Ordering::Greater,
        _ => Ordering::Less,
    }
}

impl fmt::Display for Divisible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisible::Lex(o) => write!(f, "V_L[{o}]"),
            Divisible::Quad(s) => write!(f, "V_S{s}"),
            Divisible::Cut(c) => write!(f, "C(1,{})", c.label),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    StandardZ,
    ZAdjoin(ResidueSequence),
    Divisible(Divisible),
    /// `V × Z` ordered lexicographically, `V` first.
    Product(Divisible),
}

#[derive(Clone, Debug)]
pub struct Model {
    kind: ModelKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Int(Int),
    /// Canonical `(a, z, n)`, see [`zadjoin`].
    ZAdjoin {
        a: Int,
        z: Int,
        n: u64,
    },
    Vec(VecElem),
    Product(VecElem, Int),
}

impl Element {
    pub fn int(v: i64) -> Self {
        Element::Int(Int::from(v))
    }

    fn za(&self) -> Option<(&Int, &Int, u64)> {
        match self {
            Element::ZAdjoin { a, z, n } => Some((a, z, *n)),
            _ => None,
        }
    }

    fn from_za(t: (Int, Int, u64)) -> Self {
        Element::ZAdjoin {
            a: t.0,
            z: t.1,
            n: t.2,
        }
    }
}

/// `τ(p)`: the unique `(l₁ < ... < l_k, q₁ ... q_k, z)` with
/// `p = Σ qᵢ·π(lᵢ) + z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    pub indices: Vec<Index>,
    pub coeffs: Vec<Rat>,
    pub z: Int,
}

impl Tau {
    /// `t_p(x₁ ... x_k) = Σ qᵢ·π(xᵢ) + z`.
    pub fn apply(&self, model: &Model, xs: &[Index]) -> Result<Element> {
        if xs.len() != self.coeffs.len() {
            return Err(Error::PreconditionViolated(format!(
                "t_p takes {} arguments, got {}",
                self.coeffs.len(),
                xs.len()
            )));
        }
        let mut acc = model.from_int(self.z.clone())?;
        for (x, q) in xs.iter().zip(&self.coeffs) {
            let term = model.scalar_q(q, &model.pi_embed(*x)?)?;
            acc = model.add(&acc, &term)?;
        }
        Ok(acc)
    }
}

impl Model {
    pub fn new(kind: ModelKind) -> Self {
        Model { kind }
    }

    pub fn standard() -> Self {
        Self::new(ModelKind::StandardZ)
    }

    pub fn zadjoin(r: ResidueSequence) -> Self {
        Self::new(ModelKind::ZAdjoin(r))
    }

    /// `P_L = V_L × Z`.
    pub fn pl(order: Order) -> Self {
        Self::new(ModelKind::Product(Divisible::Lex(order)))
    }

    pub fn vl(order: Order) -> Self {
        Self::new(ModelKind::Divisible(Divisible::Lex(order)))
    }

    /// `V_S × Z`.
    pub fn quad_sum(set: NatSet) -> Self {
        Self::new(ModelKind::Product(Divisible::Quad(set)))
    }

    pub fn vs(set: NatSet) -> Self {
        Self::new(ModelKind::Divisible(Divisible::Quad(set)))
    }

    /// `C({1, α})`.
    pub fn cut(cut: CutOracle) -> Self {
        Self::new(ModelKind::Divisible(Divisible::Cut(cut)))
    }

    /// `V × Z` for a divisible model `V`.
    pub fn product(inner: Model) -> Result<Self> {
        match inner.kind {
            ModelKind::Divisible(d) => Ok(Self::new(ModelKind::Product(d))),
            other => Err(Error::Config(format!(
                "product needs a divisible inner model, got {}",
                Model::new(other)
            ))),
        }
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Models of Presburger arithmetic (everything except bare divisible groups).
    pub fn is_presburger(&self) -> bool {
        !matches!(self.kind, ModelKind::Divisible(_))
    }

    pub fn order(&self) -> Option<&Order> {
        match &self.kind {
            ModelKind::Divisible(Divisible::Lex(o)) | ModelKind::Product(Divisible::Lex(o)) => {
                Some(o)
            }
            _ => None,
        }
    }

    pub fn residue_sequence(&self) -> Option<&ResidueSequence> {
        match &self.kind {
            ModelKind::ZAdjoin(r) => Some(r),
            _ => None,
        }
    }

    fn mismatch(&self, x: &Element) -> Error {
        Error::TagMismatch {
            model: self.to_string(),
            element: x.to_string(),
        }
    }

    /// Tag and invariant check.
    pub fn validate(&self, x: &Element) -> Result<()> {
        match (&self.kind, x) {
            (ModelKind::StandardZ, Element::Int(_)) => Ok(()),
            (ModelKind::ZAdjoin(_), Element::ZAdjoin { a, z, n }) => {
                if zadjoin::is_canonical((a, z, *n)) {
                    Ok(())
                } else {
                    Err(Error::InvalidElement(format!("{x} is not canonical")))
                }
            }
            (ModelKind::Divisible(d), Element::Vec(v)) => d.validate(v),
            (ModelKind::Product(d), Element::Product(v, _)) => d.validate(v),
            _ => Err(self.mismatch(x)),
        }
    }

    fn check2(&self, x: &Element, y: &Element) -> Result<()> {
        self.validate(x)?;
        self.validate(y)
    }

    pub fn zero(&self) -> Element {
        match &self.kind {
            ModelKind::StandardZ => Element::int(0),
            ModelKind::ZAdjoin(_) => Element::from_za((Int::zero(), Int::zero(), 1)),
            ModelKind::Divisible(d) => Element::Vec(d.zero()),
            ModelKind::Product(d) => Element::Product(d.zero(), Int::zero()),
        }
    }

    /// `k·1`. Bare divisible groups have no `1`.
    pub fn from_int(&self, k: impl Into<Int>) -> Result<Element> {
        let k = k.into();
        match &self.kind {
            ModelKind::StandardZ => Ok(Element::Int(k)),
            ModelKind::ZAdjoin(_) => Ok(Element::from_za((k, Int::zero(), 1))),
            ModelKind::Divisible(_) => Err(Error::PreconditionViolated(format!(
                "{self} has no distinguished 1"
            ))),
            ModelKind::Product(d) => Ok(Element::Product(d.zero(), k)),
        }
    }

    pub fn one(&self) -> Result<Element> {
        self.from_int(1)
    }

    /// The adjoined element `X` of `Z[r̂]`.
    pub fn x(&self) -> Result<Element> {
        match &self.kind {
            ModelKind::ZAdjoin(_) => Ok(Element::from_za((Int::zero(), Int::one(), 1))),
            _ => Err(Error::PreconditionViolated(format!("{self} has no X"))),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check2(x, y)?;
        Ok(match (&self.kind, x, y) {
            (ModelKind::StandardZ, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (ModelKind::ZAdjoin(r), _, _) => Element::from_za(zadjoin::add(
                r,
                x.za().expect("validated"),
                y.za().expect("validated"),
            )?),
            (ModelKind::Divisible(_), Element::Vec(u), Element::Vec(v)) => Element::Vec(u.add(v)),
            (ModelKind::Product(_), Element::Product(u, a), Element::Product(v, b)) => {
                Element::Product(u.add(v), a + b)
            }
            _ => unreachable!("validated"),
        })
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.validate(x)?;
        Ok(match x {
            Element::Int(a) => Element::Int(-a),
            Element::ZAdjoin { a, z, n } => Element::from_za(zadjoin::neg((a, z, *n))),
            Element::Vec(v) => Element::Vec(v.neg()),
            Element::Product(v, a) => Element::Product(v.neg(), -a),
        })
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.add(x, &self.neg(y)?)
    }

    /// `k·x` for an integer `k`.
    pub fn mul_int(&self, k: &Int, x: &Element) -> Result<Element> {
        self.validate(x)?;
        Ok(match (&self.kind, x) {
            (_, Element::Int(a)) => Element::Int(k * a),
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
                Element::from_za(zadjoin::scale(r, k, (a, z, *n)))
            }
            (_, Element::Vec(v)) => Element::Vec(v.scale(&arith::rat_int(k))),
            (_, Element::Product(v, a)) => Element::Product(v.scale(&arith::rat_int(k)), k * a),
            _ => unreachable!("validated"),
        })
    }

    /// Sign of `x` relative to `0`.
    pub fn sign(&self, x: &Element) -> Result<Ordering> {
        self.validate(x)?;
        Ok(self.sign_unchecked(x))
    }

    fn sign_unchecked(&self, x: &Element) -> Ordering {
        match (&self.kind, x) {
            (_, Element::Int(a)) => a.cmp(&Int::zero()),
            (_, Element::ZAdjoin { a, z, n }) => zadjoin::sign((a, z, *n)),
            (ModelKind::Divisible(d), Element::Vec(v)) => d.sign(v),
            (ModelKind::Product(d), Element::Product(v, a)) => {
                d.sign(v).then_with(|| a.cmp(&Int::zero()))
            }
            _ => unreachable!("validated"),
        }
    }

    pub fn compare(&self, x: &Element, y: &Element) -> Result<Ordering> {
        self.sign(&self.sub(x, y)?)
    }

    /// `|x|`.
    pub fn abs(&self, x: &Element) -> Result<Element> {
        if self.sign(x)? == Ordering::Less {
            self.neg(x)
        } else {
            Ok(x.clone())
        }
    }

    /// The residue of `x` modulo `n`. Divisible groups have residue 0 everywhere.
    pub fn residue(&self, x: &Element, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::PreconditionViolated("modulus 0".into()));
        }
        self.validate(x)?;
        match (&self.kind, x) {
            (_, Element::Int(a)) | (_, Element::Product(_, a)) => Ok(arith::mod_u64(a, n)),
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n: k }) => {
                zadjoin::residue(r, (a, z, *k), n)
            }
            (_, Element::Vec(_)) => Ok(0),
            _ => unreachable!("validated"),
        }
    }

    /// The unique `y` with `n·y = c`, or `None` when `c ≢ 0 (mod n)`.
    pub fn solve_div(&self, c: &Element, n: u64) -> Result<Option<Element>> {
        if n == 0 {
            return Err(Error::PreconditionViolated("modulus 0".into()));
        }
        self.validate(c)?;
        let nq = Rat::from_integer(Int::from(n));
        let inv = Rat::one() / &nq;
        Ok(match (&self.kind, c) {
            (_, Element::Int(a)) => {
                let (q, r) = num_integer::Integer::div_mod_floor(a, &Int::from(n));
                r.is_zero().then_some(Element::Int(q))
            }
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n: k }) => {
                zadjoin::solve_div(r, (a, z, *k), n)?.map(Element::from_za)
            }
            (_, Element::Vec(v)) => Some(Element::Vec(v.scale(&inv))),
            (_, Element::Product(v, a)) => {
                let (q, r) = num_integer::Integer::div_mod_floor(a, &Int::from(n));
                r.is_zero().then(|| Element::Product(v.scale(&inv), q))
            }
            _ => unreachable!("validated"),
        })
    }

    /// Whether `x` has the residue sequence of 0, decided from its representation.
    pub fn is_residue_zero(&self, x: &Element) -> Result<bool> {
        self.validate(x)?;
        Ok(match (&self.kind, x) {
            (_, Element::Int(a)) | (_, Element::Product(_, a)) => a.is_zero(),
            (_, Element::Vec(_)) => true,
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
                let (c, w) = zadjoin::formal(r, (a, z, *n));
                if w.is_zero() {
                    c.is_zero()
                } else {
                    // w·(X − z₀) only exists when r̂ is the integer z₀
                    match r.as_integer() {
                        Some(z0) => c == -(&w * arith::rat_int(&z0)),
                        None => false,
                    }
                }
            }
            _ => unreachable!("validated"),
        })
    }

    /// `q·x`: the unique `y` with `b·y = a·x` for `q = a/b`; needs `ρ(x) = ρ(0)`.
    pub fn scalar_q(&self, q: &Rat, x: &Element) -> Result<Element> {
        if !self.is_residue_zero(x)? {
            return Err(Error::NotDivisible(x.to_string()));
        }
        Ok(match (&self.kind, x) {
            (_, Element::Int(_)) => x.clone(),
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
                let (c, w) = zadjoin::formal(r, (a, z, *n));
                Element::from_za(
                    zadjoin::from_formal(r, &(c * q), &(w * q)).expect("residue-zero elements divide"),
                )
            }
            (_, Element::Vec(v)) => Element::Vec(v.scale(q)),
            (_, Element::Product(v, a)) => Element::Product(v.scale(q), a.clone()),
            _ => unreachable!("validated"),
        })
    }

    /// `x = v + z` with `ρ(v) = ρ(0)` and `z` the integer sharing `x`'s residues.
    pub fn decompose_plain(&self, x: &Element) -> Result<(Element, Int)> {
        self.validate(x)?;
        match (&self.kind, x) {
            (_, Element::Int(a)) => Ok((Element::int(0), a.clone())),
            (_, Element::Product(v, a)) => Ok((Element::Product(v.clone(), Int::zero()), a.clone())),
            (ModelKind::ZAdjoin(r), Element::ZAdjoin { a, z, n }) => {
                let Some(z0) = r.as_integer() else {
                    return Err(Error::NotPlain(format!("Z[{r}] adjoins a non-integer residue sequence")));
                };
                let (c, w) = zadjoin::formal(r, (a, z, *n));
                let std_part = c + w * arith::rat_int(&z0);
                debug_assert!(std_part.is_integer());
                let k = std_part.to_integer();
                let v = self.sub(x, &self.from_int(k.clone())?)?;
                Ok((v, k))
            }
            (ModelKind::Divisible(_), _) => Err(Error::NotPlain(format!("{self} is not a Presburger group"))),
            _ => unreachable!("validated"),
        }
    }

    /// Images of `elements` in `B/⟨1⟩ ≅ V` for a product `V × Z`.
    pub fn quotient_by_standard(&self, elements: &[Element]) -> Result<Vec<Element>> {
        let ModelKind::Product(_) = &self.kind else {
            return Err(Error::NotPlain(format!("{self} is not of the form V × Z")));
        };
        elements
            .iter()
            .map(|x| {
                self.validate(x)?;
                match x {
                    Element::Product(v, _) => Ok(Element::Vec(v.clone())),
                    _ => unreachable!("validated"),
                }
            })
            .collect()
    }

    /// The divisible model `V` of a product `V × Z`.
    pub fn divisible_part(&self) -> Result<Model> {
        match &self.kind {
            ModelKind::Product(d) => Ok(Model::new(ModelKind::Divisible(d.clone()))),
            _ => Err(Error::NotPlain(format!("{self} is not of the form V × Z"))),
        }
    }

    /// `π(l) = (f_l, 0)` in `P_L`.
    pub fn pi_embed(&self, l: Index) -> Result<Element> {
        match &self.kind {
            ModelKind::Product(Divisible::Lex(order)) => {
                if !order.contains(l) {
                    return Err(Error::OutOfDomain(format!("{l} in {order}")));
                }
                Ok(Element::Product(
                    VecElem::lex([(l, Rat::one())]),
                    Int::zero(),
                ))
            }
            _ => Err(Error::PreconditionViolated(format!("{self} is not a P_L"))),
        }
    }

    /// [`Tau`] for an element of `P_L`, indices ascending in the order.
    pub fn tau_decompose(&self, p: &Element) -> Result<Tau> {
        self.validate(p)?;
        match (&self.kind, p) {
            (ModelKind::Product(Divisible::Lex(order)), Element::Product(VecElem::Lex(m), z)) => {
                let mut pairs: Vec<(Index, Rat)> = m.iter().map(|(k, q)| (*k, q.clone())).collect();
                pairs.sort_by(|a, b| order.compare(a.0, b.0).expect("validated"));
                Ok(Tau {
                    indices: pairs.iter().map(|p| p.0).collect(),
                    coeffs: pairs.into_iter().map(|p| p.1).collect(),
                    z: z.clone(),
                })
            }
            _ => Err(Error::PreconditionViolated(format!("{self} is not a P_L"))),
        }
    }

    /// A random element; `size` bounds integer parts and numerators.
    pub fn random_element(&self, rng: &mut impl Rng, size: i64) -> Element {
        match &self.kind {
            ModelKind::StandardZ => Element::int(rng.gen_range(-size..=size)),
            ModelKind::ZAdjoin(r) => {
                let a = Int::from(rng.gen_range(-size..=size));
                let z = Int::from(rng.gen_range(-3..=3));
                let n = rng.gen_range(1..=6);
                Element::from_za(zadjoin::canonical(r, a, z, n))
            }
            ModelKind::Divisible(d) => Element::Vec(d.random(rng, size)),
            ModelKind::Product(d) => {
                Element::Product(d.random(rng, size), Int::from(rng.gen_range(-size..=size)))
            }
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::StandardZ => write!(f, "Z"),
            ModelKind::ZAdjoin(r) => write!(f, "Z[{r}]"),
            ModelKind::Divisible(d) => write!(f, "{d}"),
            ModelKind::Product(d) => write!(f, "{d}×Z"),
        }
    }
}

impl fmt::Display for VecElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VecElem::Lex(m) => {
                let items: Vec<String> = m.iter().map(|(k, q)| format!("l{k}:{q}")).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            VecElem::Quad(m) => {
                let items: Vec<String> = m.iter().map(|(k, (a, b))| format!("{k}:({a},{b})")).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            VecElem::Cut(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(a) => write!(f, "{a}"),
            Element::ZAdjoin { a, z, n } => write!(f, "a={a},z={z},n={n}"),
            Element::Vec(v) => write!(f, "{v}"),
            Element::Product(v, z) => write!(f, "{v};z={z}"),
        }
    }
}

/// JSON model configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelConfig {
    /// Standard integers.
    Z,
    /// `P_L` over an order spec string.
    Pl { order: String },
    /// `V_L`.
    Vl { order: String },
    /// `Z[r̂]` for `r̂ = encode_set(set)`, or `ρ(int)`.
    Zadjoin {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        set: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        int: Option<i64>,
    },
    /// `V_S × Z`.
    Quadsum { set: Vec<u64> },
    /// `V_S`.
    Vs { set: Vec<u64> },
    /// `C({1, α})`, with `alpha` of the form `sqrt:N`.
    Cut { alpha: String },
    /// `V × Z` for a divisible inner config.
    Product { inner: Box<ModelConfig> },
}

impl ModelConfig {
    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            ModelConfig::Z => Model::standard(),
            ModelConfig::Pl { order } => Model::pl(order.parse()?),
            ModelConfig::Vl { order } => Model::vl(order.parse()?),
            ModelConfig::Zadjoin { set, int } => match (set, int) {
                (Some(s), None) => Model::zadjoin(ResidueSequence::encode_set(s.iter().copied())),
                (None, Some(z)) => Model::zadjoin(ResidueSequence::of_integer(*z)),
                _ => return Err(Error::Config("zadjoin needs exactly one of set, int".into())),
            },
            ModelConfig::Quadsum { set } => Model::quad_sum(NatSet::finite(set.iter().copied())),
            ModelConfig::Vs { set } => Model::vs(NatSet::finite(set.iter().copied())),
            ModelConfig::Cut { alpha } => {
                let p = alpha
                    .strip_prefix("sqrt:")
                    .and_then(|s| s.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::Config(format!("unsupported alpha {alpha:?}")))?;
                Model::cut(CutOracle::sqrt(p)?)
            }
            ModelConfig::Product { inner } => Model::product(inner.build()?)?,
        })
    }

    /// Accepts JSON or the compact spec form, e.g. `pl:finite:3`,
    /// `zadjoin:{0,3}`, `zadjoin:-7`, `quadsum:{1}`, `cut:sqrt:2`,
    /// `product:vl:omega`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::Config(e.to_string()));
        }
        let (head, rest) = t.split_once(':').unwrap_or((t, ""));
        let need_rest = || {
            if rest.is_empty() {
                Err(Error::Config(format!("{head} needs an argument")))
            } else {
                Ok(rest.to_string())
            }
        };
        Ok(match head {
            "z" if rest.is_empty() => ModelConfig::Z,
            "pl" => ModelConfig::Pl { order: need_rest()? },
            "vl" => ModelConfig::Vl { order: need_rest()? },
            "zadjoin" if rest.starts_with('{') => ModelConfig::Zadjoin {
                set: Some(parse_set(rest)?),
                int: None,
            },
            "zadjoin" => ModelConfig::Zadjoin {
                set: None,
                int: Some(
                    rest.parse()
                        .map_err(|_| Error::Config(format!("expected {{set}} or integer, got {rest:?}")))?,
                ),
            },
            "quadsum" => ModelConfig::Quadsum { set: parse_set(rest)? },
            "vs" => ModelConfig::Vs { set: parse_set(rest)? },
            "cut" => ModelConfig::Cut { alpha: need_rest()? },
            "product" => ModelConfig::Product {
                inner: Box::new(ModelConfig::parse(&need_rest()?)?),
            },
            _ => return Err(Error::Config(format!("unknown model {t:?}"))),
        })
    }
}

fn parse_set(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Config(format!("expected {{a,b,...}}, got {s:?}")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Config(format!("bad set member {p:?}"))))
        .collect()
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &[u64]) -> fmt::Result {
    let parts: Vec<String> = set.iter().map(u64::to_string).collect();
    write!(f, "{{{}}}", parts.join(","))
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelConfig::Z => write!(f, "z"),
            ModelConfig::Pl { order } => write!(f, "pl:{order}"),
            ModelConfig::Vl { order } => write!(f, "vl:{order}"),
            ModelConfig::Zadjoin { set: Some(s), .. } => {
                write!(f, "zadjoin:")?;
                write_set(f, s)
            }
            ModelConfig::Zadjoin { int, .. } => write!(f, "zadjoin:{}", int.unwrap_or(0)),
            ModelConfig::Quadsum { set } => {
                write!(f, "quadsum:")?;
                write_set(f, set)
            }
            ModelConfig::Vs { set } => {
                write!(f, "vs:")?;
                write_set(f, set)
            }
            ModelConfig::Cut { alpha } => write!(f, "cut:{alpha}"),
            ModelConfig::Product { inner } => write!(f, "product:{inner}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn za(a: i64, z: i64, n: u64) -> Element {
        Element::ZAdjoin {
            a: Int::from(a),
            z: Int::from(z),
            n,
        }
    }

    fn pl_elem(coords: &[(Index, Rat)], z: i64) -> Element {
        Element::Product(VecElem::lex(coords.iter().cloned()), Int::from(z))
    }

    #[test]
    fn zadjoin_examples() {
        let m = Model::zadjoin(ResidueSequence::encode_set([0]));
        let x = m.x().unwrap();
        assert_eq!(m.add(&x, &x).unwrap(), za(0, 2, 1));
        let h = za(0, 1, 2);
        assert_eq!(m.add(&h, &h).unwrap(), za(-1, 1, 1));
        assert_eq!(m.compare(&x, &m.from_int(1_000_000).unwrap()).unwrap(), Ordering::Greater);
        assert_eq!(m.residue(&x, 6).unwrap(), 3);
        let x_minus_1 = m.sub(&x, &m.one().unwrap()).unwrap();
        assert_eq!(m.solve_div(&x_minus_1, 2).unwrap(), Some(h));
    }

    #[test]
    fn pl_examples() {
        let m = Model::pl(Order::finite(3));
        let a = pl_elem(&[(1, rat(1, 2))], 3);
        let b = pl_elem(&[(1, rat(-1, 2))], 4);
        assert_eq!(m.add(&a, &b).unwrap(), pl_elem(&[], 7));
        assert_eq!(m.residue(&pl_elem(&[(0, rat(5, 3))], 7), 5).unwrap(), 2);
        assert_eq!(
            m.solve_div(&pl_elem(&[(2, rat(1, 1))], 0), 4).unwrap(),
            Some(pl_elem(&[(2, rat(1, 4))], 0))
        );
        assert_eq!(
            m.scalar_q(&rat(1, 2), &pl_elem(&[(0, rat(3, 1))], 0)).unwrap(),
            pl_elem(&[(0, rat(3, 2))], 0)
        );
        assert_eq!(
            m.scalar_q(&rat(-2, 1), &pl_elem(&[(0, rat(1, 1))], 0)).unwrap(),
            pl_elem(&[(0, rat(-2, 1))], 0)
        );
        assert!(matches!(
            m.scalar_q(&rat(1, 2), &pl_elem(&[], 1)),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn config_spec_strings() {
        for text in ["z", "pl:finite:3", "vl:omega", "zadjoin:{0,3}", "zadjoin:-7", "quadsum:{1}", "cut:sqrt:2", "product:vs:{0}"] {
            let c = ModelConfig::parse(text).unwrap();
            assert_eq!(c.to_string(), text);
            assert!(c.build().is_ok(), "{text}");
        }
        let json = ModelConfig::parse(r#"{"kind":"pl","order":"finite:3"}"#).unwrap();
        assert_eq!(json, ModelConfig::parse("pl:finite:3").unwrap());
        assert!(ModelConfig::parse("zadjoin:x").is_err());
    }

    #[test]
    fn standard_examples() {
        let m = Model::standard();
        assert_eq!(m.residue(&Element::int(-1), 4).unwrap(), 3);
        assert_eq!(m.solve_div(&Element::int(6), 3).unwrap(), Some(Element::int(2)));
        assert_eq!(m.solve_div(&Element::int(7), 3).unwrap(), None);
    }

    #[test]
    fn quad_and_cut_signs() {
        let q = Model::quad_sum(NatSet::finite([0]));
        let e = Element::Product(VecElem::quad([(0, (rat(1, 1), rat(-1, 1)))]), Int::zero());
        assert_eq!(q.compare(&e, &q.zero()).unwrap(), Ordering::Less);
        let third = Element::Product(VecElem::quad([(1, (rat(0, 1), rat(1, 3)))]), Int::zero());
        let vs = Model::quad_sum(NatSet::finite([1]));
        let one_root = Element::Product(VecElem::quad([(1, (rat(0, 1), rat(1, 1)))]), Int::zero());
        assert_eq!(vs.scalar_q(&rat(1, 3), &one_root).unwrap(), third);

        let c = Model::cut(CutOracle::sqrt(2).unwrap());
        let e = Element::Vec(VecElem::Cut(rat(3, 1), rat(-2, 1)));
        assert_eq!(c.sign(&e).unwrap(), Ordering::Greater);
    }

    #[test]
    fn quad_rejects_root_outside_set() {
        let q = Model::quad_sum(NatSet::finite([0]));
        let bad = Element::Product(VecElem::quad([(1, (rat(0, 1), rat(1, 1)))]), Int::zero());
        assert!(matches!(q.validate(&bad), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn decompose_examples() {
        let m = Model::pl(Order::finite(2));
        let x = pl_elem(&[(0, rat(2, 1))], 7);
        assert_eq!(
            m.decompose_plain(&x).unwrap(),
            (pl_elem(&[(0, rat(2, 1))], 0), Int::from(7))
        );
        let q = Model::quad_sum(NatSet::finite([0]));
        let x = Element::Product(VecElem::quad([(0, (rat(1, 1), rat(1, 1)))]), Int::from(4));
        let (v, z) = q.decompose_plain(&x).unwrap();
        assert_eq!(z, Int::from(4));
        assert_eq!(q.add(&v, &q.from_int(4).unwrap()).unwrap(), x);

        let za_model = Model::zadjoin(ResidueSequence::encode_set([0]));
        assert!(matches!(
            za_model.decompose_plain(&za_model.x().unwrap()),
            Err(Error::NotPlain(_))
        ));
        let plain = Model::zadjoin(ResidueSequence::of_integer(5));
        let x = plain.x().unwrap();
        let (v, k) = plain.decompose_plain(&x).unwrap();
        assert_eq!(k, Int::from(5));
        assert!(plain.is_residue_zero(&v).unwrap());
    }

    #[test]
    fn tau_examples() {
        let m = Model::pl(Order::finite(3));
        let tau = m.tau_decompose(&m.pi_embed(1).unwrap()).unwrap();
        assert_eq!(tau.indices, vec![1]);
        assert_eq!(tau.coeffs, vec![rat(1, 1)]);
        let p = pl_elem(&[(2, rat(-1, 1)), (0, rat(1, 2))], 0);
        let tau = m.tau_decompose(&p).unwrap();
        assert_eq!(tau.indices, vec![0, 2]);
        assert_eq!(tau.coeffs, vec![rat(1, 2), rat(-1, 1)]);
        assert_eq!(tau.apply(&m, &tau.indices).unwrap(), p);
    }

    #[test]
    fn pl_over_reversed_order_uses_order_not_index() {
        // sum(omega, finite:1): the finite point (index 0) sits above all of omega
        let m = Model::pl("sum(omega,finite:1)".parse().unwrap());
        let top = m.pi_embed(0).unwrap();
        let big = m.mul_int(&Int::from(1000), &m.pi_embed(5).unwrap()).unwrap();
        assert_eq!(m.compare(&top, &big).unwrap(), Ordering::Greater);
    }

    #[test]
    fn config_parsing() {
        let m = ModelConfig::parse(r#"{"kind":"pl","order":"finite:3"}"#).unwrap().build().unwrap();
        assert_eq!(m.to_string(), "V_L[finite:3]×Z");
        let m = ModelConfig::parse(r#"{"kind":"zadjoin","set":[0,3]}"#).unwrap().build().unwrap();
        assert_eq!(m.to_string(), "Z[enc{0,3}]");
        let m = ModelConfig::parse(r#"{"kind":"product","inner":{"kind":"cut","alpha":"sqrt:2"}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert!(m.is_presburger());
        assert!(ModelConfig::parse(r#"{"kind":"cut","alpha":"sqrt:4"}"#).unwrap().build().is_err());
    }
}
