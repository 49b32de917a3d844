//! Arithmetic in `Z[r̂]`.
//!
//! A triple `(a, z, n)` stands for `a + (X − r_n)·z/n`, where `X` is the new
//! element with residue sequence `r̂`. Triples are kept canonical: `z = 0`
//! forces `n = 1`, otherwise `gcd(z, n) = 1`.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::residues::ResidueSequence;

fn big(n: u64) -> Int {
    Int::from(n)
}

fn mul_mod(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| Error::InvalidElement(format!("modulus {a}·{b} overflows")))
}

/// `(r_m − r_n)/n` where `n | m`; exact by coherence.
fn lift(r: &ResidueSequence, n: u64, m: u64) -> Int {
    let diff = Int::from(r.query(m)) - Int::from(r.query(n));
    debug_assert!((&diff % big(n)).is_zero(), "incoherent residues at {n} | {m}");
    diff / big(n)
}

/// The representative of `a + (X − r_n)·z/n` with `z/n` in lowest terms.
pub fn canonical(r: &ResidueSequence, a: Int, z: Int, n: u64) -> (Int, Int, u64) {
    assert!(n > 0, "denominator must be positive");
    if z.is_zero() {
        return (a, z, 1);
    }
    let g = z.gcd(&big(n));
    let g64 = u64::try_from(&g).expect("gcd divides n");
    let n2 = n / g64;
    // a' = a + z(r_{n'} − r_n)/n keeps the constant part a − r_n·z/n fixed
    let shift = Int::from(r.query(n2)) - Int::from(r.query(n));
    let a2 = a + (&z * shift) / big(n);
    (a2, z / g, n2)
}

/// The defining equations of `~`:
/// `m·z₁ = n·z₂` and `nm·a₁ − m·r_n·z₁ = nm·a₂ − n·r_m·z₂`.
pub fn equivalent(r: &ResidueSequence, x: (&Int, &Int, u64), y: (&Int, &Int, u64)) -> bool {
    let (a1, z1, n) = x;
    let (a2, z2, m) = y;
    let (bn, bm) = (big(n), big(m));
    &bm * z1 == &bn * z2
        && &bn * &bm * a1 - &bm * big(r.query(n)) * z1
            == &bn * &bm * a2 - &bn * big(r.query(m)) * z2
}

/// Sum by the closed formula
/// `(a₁+a₂ + (r_{nm}−r_n)z₁/n + (r_{nm}−r_m)z₂/m) + (X − r_{nm})(m·z₁ + n·z₂)/nm`,
/// followed by canonicalisation.
pub fn add(
    r: &ResidueSequence,
    x: (&Int, &Int, u64),
    y: (&Int, &Int, u64),
) -> Result<(Int, Int, u64)> {
    let (a1, z1, n) = x;
    let (a2, z2, m) = y;
    let nm = mul_mod(n, m)?;
    let a = a1 + a2 + lift(r, n, nm) * z1 + lift(r, m, nm) * z2;
    let z = big(m) * z1 + big(n) * z2;
    Ok(canonical(r, a, z, nm))
}

pub fn neg(x: (&Int, &Int, u64)) -> (Int, Int, u64) {
    (-x.0, -x.1, x.2)
}

pub fn scale(r: &ResidueSequence, k: &Int, x: (&Int, &Int, u64)) -> (Int, Int, u64) {
    canonical(r, k * x.0, k * x.1, x.2)
}

/// Positive iff `z > 0`, or `z = 0` and `a > 0`.
pub fn sign(x: (&Int, &Int, u64)) -> std::cmp::Ordering {
    let zero = Int::zero();
    if x.1.is_zero() {
        x.0.cmp(&zero)
    } else {
        x.1.cmp(&zero)
    }
}

/// `(a + z(r_{kN} − r_k)/k) mod N`.
pub fn residue(r: &ResidueSequence, x: (&Int, &Int, u64), modulus: u64) -> Result<u64> {
    let (a, z, k) = x;
    let kn = mul_mod(k, modulus)?;
    Ok(arith::mod_u64(&(a + z * lift(r, k, kn)), modulus))
}

/// The unique `y` with `N·y = x`, if `x ≡ 0 (mod N)`.
pub fn solve_div(
    r: &ResidueSequence,
    x: (&Int, &Int, u64),
    modulus: u64,
) -> Result<Option<(Int, Int, u64)>> {
    let (a, z, k) = x;
    let kn = mul_mod(k, modulus)?;
    let top = a + z * lift(r, k, kn);
    if !(&top % big(modulus)).is_zero() {
        return Ok(None);
    }
    Ok(Some(canonical(r, top / big(modulus), z.clone(), kn)))
}

/// `x = c + w·X` with rational `c = a − r_n·z/n` and `w = z/n`.
pub fn formal(r: &ResidueSequence, x: (&Int, &Int, u64)) -> (Rat, Rat) {
    let (a, z, n) = x;
    let w = Rat::new(z.clone(), big(n));
    let c = arith::rat_int(a) - &w * Rat::from_integer(big(r.query(n)));
    (c, w)
}

/// Inverse of [`formal`]: the triple for `c + w·X`, if it lies in `Z[r̂]`.
pub fn from_formal(r: &ResidueSequence, c: &Rat, w: &Rat) -> Option<(Int, Int, u64)> {
    let z = w.numer().clone();
    let n = u64::try_from(w.denom()).ok()?;
    let a = c + w * Rat::from_integer(big(r.query(n)));
    if !a.is_integer() {
        return None;
    }
    Some(canonical(r, a.to_integer(), z, n))
}

/// Whether the triple is already canonical.
pub fn is_canonical(x: (&Int, &Int, u64)) -> bool {
    let (_, z, n) = x;
    if z.is_zero() {
        n == 1
    } else {
        n >= 1 && z.abs().gcd(&big(n)) == Int::from(1)
    }
}
