//! Back-and-forth relations `(A, ā) ≤_α (B, b̄)` between linear orders.
//!
//! `≤_1` is decided by comparing the interval sizes cut out by the tuples
//! (every interval of `A` at least as large as the matching one of `B`).
//! For `α ≥ 2` the definition is unfolded: for every `β < α` and every
//! extension `d̄` in `B` there must be `c̄` in `A` with
//! `(B, b̄d̄) ≤_β (A, āc̄)`. Because the relations only depend on the order
//! pattern of a tuple, extensions range over ascending sets of fresh points.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orders::{Index, Order};

/// Pairwise comparisons `t_i ? t_j` for `i < j`.
fn pattern(order: &Order, t: &[Index]) -> Result<Vec<Ordering>> {
    let mut out = Vec::with_capacity(t.len() * t.len().saturating_sub(1) / 2);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            out.push(order.compare(t[i], t[j])?);
        }
    }
    Ok(out)
}

/// Distinct points of `a` in ascending order, with their partners in `b`.
/// Assumes equal patterns.
fn canonical(a_order: &Order, a: &[Index], b: &[Index]) -> (Vec<Index>, Vec<Index>) {
    let mut pairs: Vec<(Index, Index)> = a.iter().copied().zip(b.iter().copied()).collect();
    pairs.sort_by(|x, y| a_order.compare(x.0, y.0).expect("validated"));
    pairs.dedup_by_key(|p| p.0);
    pairs.into_iter().unzip()
}

fn check_shape(a_order: &Order, a: &[Index], b_order: &Order, b: &[Index]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if pattern(a_order, a)? != pattern(b_order, b)? {
        return Err(Error::PatternMismatch);
    }
    Ok(())
}

/// `(A, ā) ≤_1 (B, b̄)`. Works for infinite orders whose interval sizes are
/// computable.
pub fn leq_one(a_order: &Order, a: &[Index], b_order: &Order, b: &[Index]) -> Result<bool> {
    check_shape(a_order, a, b_order, b)?;
    let (ca, cb) = canonical(a_order, a, b);
    let ia = a_order.intervals(&ca)?;
    let ib = b_order.intervals(&cb)?;
    Ok(ia.iter().zip(&ib).all(|(x, y)| x >= y))
}

/// Ascending subsets of `order` avoiding `used`.
fn fresh_subsets(order: &Order, used: &[Index]) -> Result<Vec<Vec<Index>>> {
    let free: Vec<Index> = order.ascending()?.into_iter().filter(|i| !used.contains(i)).collect();
    let n = free.len();
    let mut out: Vec<Vec<Index>> = (0u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| free[i]).collect())
        .collect();
    out.sort_by_key(Vec::len);
    Ok(out)
}

/// `(A, ā) ≤_1 (B, b̄)` straight from the definition: every finite
/// extension of `b̄` is matched, with the same order pattern, by one of `ā`.
pub fn leq_one_bruteforce(a_order: &Order, a: &[Index], b_order: &Order, b: &[Index]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let a_points = a_order.ascending()?;
    let b_points = b_order.ascending()?;
    let subsets = |pts: &[Index]| -> Vec<Vec<Index>> {
        (0u64..1 << pts.len())
            .map(|mask| (0..pts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pts[i]).collect())
            .collect()
    };
    let a_subsets = subsets(&a_points);
    for d in subsets(&b_points) {
        let bd: Vec<Index> = b.iter().chain(&d).copied().collect();
        let want = pattern(b_order, &bd)?;
        let mut found = false;
        for c in a_subsets.iter().filter(|c| c.len() == d.len()) {
            let ac: Vec<Index> = a.iter().chain(c).copied().collect();
            if pattern(a_order, &ac)? == want {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Response {
    pub d: Vec<Index>,
    pub c: Vec<Index>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// For a failure at `α ≥ 2`: the level `β` and extension `d̄` of `b̄`
    /// that `A` cannot answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted_by: Option<(u32, Vec<Index>)>,
    /// For success at `α ≥ 2`: `A`'s answer to each extension at `β = α − 1`.
    pub strategy: Vec<Response>,
    pub positions: usize,
}

type Key = (u32, bool, Vec<Index>, Vec<Index>);

/// A pair of finite orders with a shared memo table.
pub struct Game {
    a: Order,
    b: Order,
    memo: Mutex<HashMap<Key, bool>>,
}

impl Game {
    pub fn new(a: Order, b: Order) -> Self {
        Game {
            a,
            b,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn orders(&self, swapped: bool) -> (&Order, &Order) {
        if swapped {
            (&self.b, &self.a)
        } else {
            (&self.a, &self.b)
        }
    }

    /// `(L, l̄) ≤_α (R, r̄)` where `(L, R)` is `(A, B)`, or `(B, A)` when
    /// `swapped`.
    fn leq(&self, alpha: u32, swapped: bool, l: &[Index], r: &[Index]) -> Result<bool> {
        let (lo, ro) = self.orders(swapped);
        if pattern(lo, l)? != pattern(ro, r)? {
            return Ok(false);
        }
        let (l, r) = canonical(lo, l, r);
        if alpha == 1 {
            return leq_one(lo, &l, ro, &r);
        }
        let key = (alpha, swapped, l.clone(), r.clone());
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v);
        }
        let v = self.refute(alpha, swapped, &l, &r)?.is_none();
        self.memo.lock().expect("memo lock").insert(key, v);
        Ok(v)
    }

    /// An answer `c̄` to `d̄` at level `β`, if one exists.
    fn answer(&self, beta: u32, swapped: bool, l: &[Index], r: &[Index], d: &[Index]) -> Result<Option<Vec<Index>>> {
        let (lo, _) = self.orders(swapped);
        let rd: Vec<Index> = r.iter().chain(d).copied().collect();
        for c in fresh_subsets(lo, l)?.into_iter().filter(|c| c.len() == d.len()) {
            let lc: Vec<Index> = l.iter().chain(&c).copied().collect();
            if self.leq(beta, !swapped, &rd, &lc)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn refute(&self, alpha: u32, swapped: bool, l: &[Index], r: &[Index]) -> Result<Option<(u32, Vec<Index>)>> {
        let (_, ro) = self.orders(swapped);
        let extensions = fresh_subsets(ro, r)?;
        for beta in (1..alpha).rev() {
            for d in &extensions {
                if self.answer(beta, swapped, l, r, d)?.is_none() {
                    return Ok(Some((beta, d.clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn verdict(&self, alpha: u32, a: &[Index], b: &[Index]) -> Result<Verdict> {
        if alpha == 0 {
            return Err(Error::PreconditionViolated("alpha must be at least 1".into()));
        }
        check_shape(&self.a, a, &self.b, b)?;
        if alpha == 1 {
            return Ok(Verdict {
                holds: leq_one(&self.a, a, &self.b, b)?,
                refuted_by: None,
                strategy: Vec::new(),
                positions: 1,
            });
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::NotFinite(alpha));
        }
        let (ca, cb) = canonical(&self.a, a, b);
        let refuted_by = self.refute(alpha, false, &ca, &cb)?;
        let mut strategy = Vec::new();
        if refuted_by.is_none() {
            for d in fresh_subsets(&self.b, &cb)? {
                let c = self
                    .answer(alpha - 1, false, &ca, &cb, &d)?
                    .expect("every extension is answered");
                strategy.push(Response { d, c });
            }
        }
        Ok(Verdict {
            holds: refuted_by.is_none(),
            refuted_by,
            strategy,
            positions: self.memo.lock().expect("memo lock").len(),
        })
    }
}

/// `(A, ā) ≤_α (B, b̄)`. For `α ≥ 2` both orders must be finite.
pub fn leq_alpha(a_order: &Order, a: &[Index], b_order: &Order, b: &[Index], alpha: u32) -> Result<bool> {
    match check_shape(a_order, a, b_order, b) {
        Err(Error::PatternMismatch) => return Ok(false),
        other => other?,
    }
    Ok(Game::new(a_order.clone(), b_order.clone()).verdict(alpha, a, b)?.holds)
}
