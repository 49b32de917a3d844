//! Computable presentations of countable linear orders.
//!
//! Every order has domain `{0, 1, 2, ...}` (or `0..k` when finite) and a
//! decidable comparison on those indices. Infinite constructions encode their
//! points through fixed pairings, documented on each [`OrderKind`] variant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a point in an order's domain.
pub type Index = u64;

/// A cardinality in `ℕ ∪ {ℵ₀}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Card {
    Fin(u64),
    Inf,
}

impl Card {
    pub fn is_finite(self) -> bool {
        matches!(self, Card::Fin(_))
    }
}

impl std::ops::Add for Card {
    type Output = Card;
    fn add(self, rhs: Card) -> Card {
        match (self, rhs) {
            (Card::Fin(a), Card::Fin(b)) => Card::Fin(a + b),
            _ => Card::Inf,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Fin(n) => write!(f, "{n}"),
            Card::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// `0 < 1 < ... < k-1`.
    Finite(u64),
    /// The naturals.
    Omega,
    /// The integers; index `2z` is `z ≥ 0` and index `2|z|-1` is `z < 0`.
    Zeta,
    /// The rationals. Index 0 is 0, odd `2i-1` is the `i`-th Calkin–Wilf
    /// rational, even `2i` is its negation.
    Eta,
    /// All of the first summand, then all of the second.
    Sum(Box<Order>, Box<Order>),
    /// `A·B`: pairs `(a, b)` compared on `b` in `B` first, then `a` in `A`.
    LexPairs(Box<Order>, Box<Order>),
    /// `ω^k`: `k`-tuples of naturals, most significant coordinate first,
    /// compared lexicographically.
    OmegaPower(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    kind: OrderKind,
}

impl Order {
    pub fn new(kind: OrderKind) -> Self {
        Order { kind }
    }
    pub fn finite(k: u64) -> Self {
        Self::new(OrderKind::Finite(k))
    }
    pub fn omega() -> Self {
        Self::new(OrderKind::Omega)
    }
    pub fn zeta() -> Self {
        Self::new(OrderKind::Zeta)
    }
    pub fn eta() -> Self {
        Self::new(OrderKind::Eta)
    }
    pub fn sum(a: Order, b: Order) -> Self {
        Self::new(OrderKind::Sum(Box::new(a), Box::new(b)))
    }
    pub fn lex_pairs(a: Order, b: Order) -> Self {
        Self::new(OrderKind::LexPairs(Box::new(a), Box::new(b)))
    }
    pub fn omega_power(k: u32) -> Self {
        Self::new(OrderKind::OmegaPower(k))
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn size(&self) -> Card {
        match &self.kind {
            OrderKind::Finite(k) => Card::Fin(*k),
            OrderKind::Omega | OrderKind::Zeta | OrderKind::Eta => Card::Inf,
            OrderKind::OmegaPower(0) => Card::Fin(1),
            OrderKind::OmegaPower(_) => Card::Inf,
            OrderKind::Sum(a, b) => a.size() + b.size(),
            OrderKind::LexPairs(a, b) => match (a.size(), b.size()) {
                (Card::Fin(0), _) | (_, Card::Fin(0)) => Card::Fin(0),
                (Card::Fin(x), Card::Fin(y)) => Card::Fin(x * y),
                _ => Card::Inf,
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_finite()
    }

    pub fn contains(&self, i: Index) -> bool {
        match self.size() {
            Card::Fin(k) => i < k,
            Card::Inf => true,
        }
    }

    fn check(&self, i: Index) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!("{i} in {self}")))
        }
    }

    /// Strict comparison of two domain indices; `Equal` iff `i == j`.
    pub fn compare(&self, i: Index, j: Index) -> Result<Ordering> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.cmp_unchecked(i, j))
    }

    fn cmp_unchecked(&self, i: Index, j: Index) -> Ordering {
        if i == j {
            return Ordering::Equal;
        }
        match &self.kind {
            OrderKind::Finite(_) | OrderKind::Omega => i.cmp(&j),
            OrderKind::Zeta => zeta_decode(i).cmp(&zeta_decode(j)),
            OrderKind::Eta => eta_decode(i).cmp(&eta_decode(j)),
            OrderKind::OmegaPower(k) => omega_power_decode(*k, i).cmp(&omega_power_decode(*k, j)),
            OrderKind::Sum(a, b) => {
                let (si, ii) = sum_split(a, b, i);
                let (sj, ij) = sum_split(a, b, j);
                match (si, sj) {
                    (Side::Left, Side::Left) => a.cmp_unchecked(ii, ij),
                    (Side::Right, Side::Right) => b.cmp_unchecked(ii, ij),
                    (Side::Left, Side::Right) => Ordering::Less,
                    (Side::Right, Side::Left) => Ordering::Greater,
                }
            }
            OrderKind::LexPairs(a, b) => {
                let (ai, bi) = lex_split(a, b, i);
                let (aj, bj) = lex_split(a, b, j);
                b.cmp_unchecked(bi, bj).then_with(|| a.cmp_unchecked(ai, aj))
            }
        }
    }

    /// First `limit` indices of the domain (or all of them, if fewer).
    pub fn enumerate(&self, limit: usize) -> Vec<Index> {
        let n = match self.size() {
            Card::Fin(k) => (k as usize).min(limit),
            Card::Inf => limit,
        };
        (0..n as u64).collect()
    }

    /// Domain indices sorted in the order, for finite orders.
    pub fn ascending(&self) -> Result<Vec<Index>> {
        let Card::Fin(k) = self.size() else {
            return Err(Error::NotFiniteOrder(self.to_string()));
        };
        let mut v: Vec<Index> = (0..k).collect();
        v.sort_by(|&x, &y| self.cmp_unchecked(x, y));
        Ok(v)
    }

    /// Sizes of `(-∞,a₁), (a₁,a₂), ..., (a_k,∞)` for a strictly ascending tuple.
    pub fn intervals(&self, tuple: &[Index]) -> Result<Vec<Card>> {
        for &i in tuple {
            self.check(i)?;
        }
        for w in tuple.windows(2) {
            if self.cmp_unchecked(w[0], w[1]) != Ordering::Less {
                return Err(Error::PreconditionViolated(format!(
                    "tuple {tuple:?} is not strictly ascending in {self}"
                )));
            }
        }
        self.intervals_unchecked(tuple)
    }

    fn intervals_unchecked(&self, tuple: &[Index]) -> Result<Vec<Card>> {
        match &self.kind {
            OrderKind::Finite(k) => Ok(gaps(tuple.iter().map(|&i| i as i128), Some(*k as i128))),
            OrderKind::Omega => Ok(gaps(tuple.iter().map(|&i| i as i128), None)),
            OrderKind::Zeta => {
                let mut out = vec![Card::Inf];
                for w in tuple.windows(2) {
                    let d = zeta_decode(w[1]) - zeta_decode(w[0]);
                    out.push(Card::Fin((d - 1) as u64));
                }
                if !tuple.is_empty() {
                    out.push(Card::Inf);
                }
                Ok(out)
            }
            OrderKind::Eta => Ok(vec![Card::Inf; tuple.len() + 1]),
            OrderKind::OmegaPower(0) => Ok(gaps(tuple.iter().map(|&i| i as i128), Some(1))),
            OrderKind::OmegaPower(k) => {
                let pts: Vec<Vec<u64>> = tuple.iter().map(|&i| omega_power_decode(*k, i)).collect();
                let mut out = Vec::with_capacity(pts.len() + 1);
                // Everything strictly below t is finite iff only the last coordinate is nonzero.
                let below = |t: &[u64]| -> Card {
                    if t[..t.len() - 1].iter().all(|&c| c == 0) {
                        Card::Fin(t[t.len() - 1])
                    } else {
                        Card::Inf
                    }
                };
                match pts.first() {
                    None => return Ok(vec![Card::Inf]),
                    Some(t) => out.push(below(t)),
                }
                for w in pts.windows(2) {
                    let n = w[0].len();
                    if w[0][..n - 1] == w[1][..n - 1] {
                        out.push(Card::Fin(w[1][n - 1] - w[0][n - 1] - 1));
                    } else {
                        out.push(Card::Inf);
                    }
                }
                out.push(Card::Inf);
                Ok(out)
            }
            OrderKind::Sum(a, b) => {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for &i in tuple {
                    match sum_split(a, b, i) {
                        (Side::Left, ii) => left.push(ii),
                        (Side::Right, ii) => right.push(ii),
                    }
                }
                let mut la = a.intervals_unchecked(&left)?;
                let lb = b.intervals_unchecked(&right)?;
                let joined = la.pop().expect("nonempty") + lb[0];
                la.push(joined);
                la.extend_from_slice(&lb[1..]);
                Ok(la)
            }
            OrderKind::LexPairs(..) => {
                if let Card::Fin(_) = self.size() {
                    self.intervals_by_counting(tuple)
                } else {
                    Err(Error::NotComputable(self.to_string()))
                }
            }
        }
    }

    fn intervals_by_counting(&self, tuple: &[Index]) -> Result<Vec<Card>> {
        let asc = self.ascending()?;
        let pos = |i: Index| asc.iter().position(|&x| x == i).expect("in domain") as i128;
        Ok(gaps(tuple.iter().map(|&i| pos(i)), Some(asc.len() as i128)))
    }
}

fn gaps(positions: impl Iterator<Item = i128>, size: Option<i128>) -> Vec<Card> {
    let mut out = Vec::new();
    let mut prev: i128 = -1;
    for p in positions {
        out.push(Card::Fin((p - prev - 1) as u64));
        prev = p;
    }
    out.push(match size {
        Some(k) => Card::Fin((k - prev - 1) as u64),
        None => Card::Inf,
    });
    out
}

enum Side {
    Left,
    Right,
}

fn sum_split(a: &Order, b: &Order, i: Index) -> (Side, Index) {
    match (a.size(), b.size()) {
        (Card::Fin(k), _) => {
            if i < k {
                (Side::Left, i)
            } else {
                (Side::Right, i - k)
            }
        }
        (Card::Inf, Card::Fin(m)) => {
            if i < m {
                (Side::Right, i)
            } else {
                (Side::Left, i - m)
            }
        }
        (Card::Inf, Card::Inf) => {
            if i.is_multiple_of(2) {
                (Side::Left, i / 2)
            } else {
                (Side::Right, i / 2)
            }
        }
    }
}

/// Index of `i` from the left summand of `sum(a, b)`.
pub fn sum_left(a: &Order, b: &Order, i: Index) -> Index {
    match (a.size(), b.size()) {
        (Card::Fin(_), _) => i,
        (Card::Inf, Card::Fin(m)) => i + m,
        (Card::Inf, Card::Inf) => 2 * i,
    }
}

/// Index of `j` from the right summand of `sum(a, b)`.
pub fn sum_right(a: &Order, b: &Order, j: Index) -> Index {
    match (a.size(), b.size()) {
        (Card::Fin(k), _) => k + j,
        (Card::Inf, Card::Fin(_)) => j,
        (Card::Inf, Card::Inf) => 2 * j + 1,
    }
}

fn lex_split(a: &Order, b: &Order, i: Index) -> (Index, Index) {
    match (a.size(), b.size()) {
        (Card::Fin(k), _) => (i % k, i / k),
        (Card::Inf, Card::Fin(m)) => (i / m, i % m),
        (Card::Inf, Card::Inf) => cantor_unpair(i),
    }
}

/// Index of the pair `(x, y)` in `lex(a, b)`.
pub fn lex_index(a: &Order, b: &Order, x: Index, y: Index) -> Index {
    match (a.size(), b.size()) {
        (Card::Fin(k), _) => y * k + x,
        (Card::Inf, Card::Fin(m)) => x * m + y,
        (Card::Inf, Card::Inf) => cantor_pair(x, y),
    }
}

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    let s = (x + y) as u128;
    (s * (s + 1) / 2 + y as u128) as u64
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    // largest w with w(w+1)/2 ≤ z
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let y = z - w * (w + 1) / 2;
    ((w - y) as u64, y as u64)
}

pub fn zeta_encode(z: i64) -> Index {
    if z >= 0 {
        2 * z as u64
    } else {
        (-2 * z - 1) as u64
    }
}

pub fn zeta_decode(i: Index) -> i64 {
    if i.is_multiple_of(2) {
        (i / 2) as i64
    } else {
        -(i.div_ceil(2) as i64)
    }
}

/// Stern's diatomic sequence.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// The rational named by an `eta` index.
pub fn eta_decode(i: Index) -> BigRational {
    if i == 0 {
        return BigRational::from_integer(BigInt::from(0));
    }
    let k = i.div_ceil(2);
    let q = BigRational::new(BigInt::from(fusc(k)), BigInt::from(fusc(k + 1)));
    if i % 2 == 1 {
        q
    } else {
        -q
    }
}

/// The `ω^k` tuple named by an index.
pub fn omega_power_decode(k: u32, mut i: Index) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(k as usize);
    for _ in 1..k {
        let (x, rest) = cantor_unpair(i);
        out.push(x);
        i = rest;
    }
    out.push(i);
    out
}

pub fn omega_power_encode(coords: &[u64]) -> Index {
    match coords.split_first() {
        None => 0,
        Some((&x, [])) => x,
        Some((&x, rest)) => cantor_pair(x, omega_power_encode(rest)),
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OrderKind::Finite(k) => write!(f, "finite:{k}"),
            OrderKind::Omega => write!(f, "omega"),
            OrderKind::Zeta => write!(f, "zeta"),
            OrderKind::Eta => write!(f, "eta"),
            OrderKind::Sum(a, b) => write!(f, "sum({a},{b})"),
            OrderKind::LexPairs(a, b) => write!(f, "lex({a},{b})"),
            OrderKind::OmegaPower(k) => write!(f, "omega^{k}"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser {
            src: s,
            pos: 0,
        };
        let order = p.order()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(order)
    }
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: format!("order spec: {msg}"),
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let n = self.rest()[..len]
            .parse()
            .map_err(|_| self.error("number too large"))?;
        self.pos += len;
        Ok(n)
    }

    fn order(&mut self) -> Result<Order> {
        if self.eat("finite:") {
            return Ok(Order::finite(self.number()?));
        }
        if self.eat("omega") {
            if self.eat("^") {
                let k = self.number()?;
                let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
                return Ok(Order::omega_power(k));
            }
            return Ok(Order::omega());
        }
        if self.eat("zeta") {
            return Ok(Order::zeta());
        }
        if self.eat("eta") {
            return Ok(Order::eta());
        }
        for (name, ctor) in [
            ("sum", Order::sum as fn(Order, Order) -> Order),
            ("lex", Order::lex_pairs),
        ] {
            if self.eat(name) {
                self.expect("(")?;
                let a = self.order()?;
                self.expect(",")?;
                let b = self.order()?;
                self.expect(")")?;
                return Ok(ctor(a, b));
            }
        }
        Err(self.error("expected finite:N, omega, omega^K, zeta, eta, sum(..) or lex(..)"))
    }
}
