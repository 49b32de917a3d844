//! Integer and rational helpers shared by every module: mathematical modulus,
//! prime enumeration, factorisation and the Chinese remainder theorem.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// `x mod n` in `[0, n)`.
pub fn mod_u64(x: &Int, n: u64) -> u64 {
    assert!(n > 0, "modulus must be positive");
    x.mod_floor(&Int::from(n))
        .to_u64()
        .expect("residue fits the modulus")
}

pub fn mod_i64(x: i64, n: u64) -> u64 {
    assert!(n > 0, "modulus must be positive");
    (x as i128).rem_euclid(n as i128) as u64
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    a.lcm(b)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values
        .into_iter()
        .fold(Int::zero(), |acc, v| acc.gcd(v))
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, q| lcm_int(&acc, q.denom()))
}

/// `lcm(1, 2, ..., n)`.
pub fn lcm_upto(n: u64) -> Int {
    (1..=n).fold(Int::one(), |acc, k| lcm_int(&acc, &Int::from(k)))
}

static PRIMES: RwLock<Vec<u64>> = RwLock::new(Vec::new());

fn extend_primes_until(pred: impl Fn(&[u64]) -> bool) {
    if pred(&PRIMES.read().expect("prime table poisoned")) {
        return;
    }
    let mut table = PRIMES.write().expect("prime table poisoned");
    if table.is_empty() {
        table.push(2);
    }
    let mut candidate = *table.last().expect("nonempty") + 1;
    while !pred(&table) {
        if table
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            table.push(candidate);
        }
        candidate += 1;
    }
}

/// The `k`-th prime, counting from `p_0 = 2`.
pub fn nth_prime(k: usize) -> u64 {
    extend_primes_until(|t| t.len() > k);
    PRIMES.read().expect("prime table poisoned")[k]
}

/// Index of `p` in the prime enumeration, or `None` when `p` is not prime.
pub fn prime_index(p: u64) -> Option<usize> {
    if p < 2 {
        return None;
    }
    extend_primes_until(|t| t.last().is_some_and(|&last| last >= p));
    PRIMES
        .read()
        .expect("prime table poisoned")
        .binary_search(&p)
        .ok()
}

/// Prime-power factorisation `n = p_1^{m_1} ... p_i^{m_i}` in increasing order of primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = 0;
            while n.is_multiple_of(p) {
                n /= p;
                m += 1;
            }
            out.push((p, m));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "CRT moduli must be coprime");
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Unique `r` in `[0, ∏ m_i)` with `r ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(congruences: &[(u64, u64)]) -> u64 {
    let mut acc_r: u128 = 0;
    let mut acc_m: u128 = 1;
    for &(r, m) in congruences {
        let m128 = m as u128;
        // acc_r + acc_m * t ≡ r (mod m)
        let diff = ((r as i128 - acc_r as i128).rem_euclid(m as i128)) as u128;
        let inv = inverse_mod((acc_m % m128) as u64, m) as u128;
        let t = diff * inv % m128;
        acc_r += acc_m * t;
        acc_m *= m128;
        acc_r %= acc_m;
    }
    acc_r as u64
}

/// Sign of `a + b·√p` for rational `a, b` and a non-square positive integer `p`,
/// decided by comparing `a²` with `p·b²`.
pub fn sign_quadratic(a: &Rat, b: &Rat, p: &Int) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let sa = a.signum();
    let sb = b.signum();
    if b.is_zero() {
        return a.cmp(&Rat::zero());
    }
    if a.is_zero() || sa == sb {
        return sb.cmp(&Rat::zero());
    }
    // opposite signs: the term with larger magnitude wins
    let a2 = a * a;
    let pb2 = rat_int(p) * b * b;
    match a2.cmp(&pb2) {
        Greater => sa.cmp(&Rat::zero()),
        Less => sb.cmp(&Rat::zero()),
        Equal => unreachable!("a + b√p = 0 with b ≠ 0 needs p to be a square"),
    }
}

pub fn is_perfect_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
