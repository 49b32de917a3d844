//! Profinite residue sequences.
//!
//! A [`ResidueSequence`] is a coherent choice of `r_n ∈ [0, n)` for every
//! modulus `n ≥ 1`. Sequences are intensional: each one carries a rule for
//! computing `r_n` plus a memo table, so equality can only ever be checked up
//! to an explicit bound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{self, Int};
use crate::error::{Error, Result};

/// Membership oracle for a set of naturals.
pub type SetOracle = Arc<dyn Fn(u64) -> bool + Send + Sync>;
/// Raw residue rule for custom sequences.
pub type QueryFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Integer(Int),
    Set {
        members: Option<BTreeSet<u64>>,
        oracle: SetOracle,
    },
    Shift {
        inner: Box<ResidueSequence>,
        by: Int,
    },
    Negate(Box<ResidueSequence>),
    Custom {
        label: String,
        query: QueryFn,
    },
}

/// Where a sequence came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Integer(Int),
    EncodedSet(Option<Vec<u64>>),
    Derived(String),
    Custom(String),
}

#[derive(Clone)]
pub struct ResidueSequence {
    source: Source,
    memo: Arc<RwLock<HashMap<u64, u64>>>,
}

impl ResidueSequence {
    fn from_source(source: Source) -> Self {
        ResidueSequence {
            source,
            memo: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// `ρ(z)`: the residues of a standard integer.
    pub fn of_integer(z: impl Into<Int>) -> Self {
        Self::from_source(Source::Integer(z.into()))
    }

    /// CRT encoding of a finite set: `r_{p_k^m} = 1` iff `k ∈ S`.
    pub fn encode_set<I: IntoIterator<Item = u64>>(members: I) -> Self {
        let members: BTreeSet<u64> = members.into_iter().collect();
        let lookup = members.clone();
        Self::from_source(Source::Set {
            members: Some(members),
            oracle: Arc::new(move |k| lookup.contains(&k)),
        })
    }

    /// CRT encoding of a set given only by a membership oracle.
    pub fn encode_oracle(oracle: SetOracle) -> Self {
        Self::from_source(Source::Set {
            members: None,
            oracle,
        })
    }

    /// A sequence defined by an arbitrary rule. Nothing is checked here; use
    /// [`check_coherence`](Self::check_coherence) to validate it.
    pub fn custom(label: impl Into<String>, query: QueryFn) -> Self {
        Self::from_source(Source::Custom {
            label: label.into(),
            query,
        })
    }

    /// `r̂ + c`, the residues of `X + c` when `X` realizes `self`.
    pub fn shift(&self, by: impl Into<Int>) -> Self {
        Self::from_source(Source::Shift {
            inner: Box::new(self.clone()),
            by: by.into(),
        })
    }

    /// `−r̂`, the residues of `−X`.
    pub fn negate(&self) -> Self {
        Self::from_source(Source::Negate(Box::new(self.clone())))
    }

    pub fn provenance(&self) -> Provenance {
        match &self.source {
            Source::Integer(z) => Provenance::Integer(z.clone()),
            Source::Set { members, .. } => {
                Provenance::EncodedSet(members.as_ref().map(|m| m.iter().copied().collect()))
            }
            Source::Shift { inner, by } => Provenance::Derived(format!("{inner} + {by}")),
            Source::Negate(inner) => Provenance::Derived(format!("-({inner})")),
            Source::Custom { label, .. } => Provenance::Custom(label.clone()),
        }
    }

    /// The standard integer realizing this sequence, when that is known
    /// structurally.
    pub fn as_integer(&self) -> Option<Int> {
        match &self.source {
            Source::Integer(z) => Some(z.clone()),
            Source::Set { members, .. } if members.as_ref().is_some_and(|m| m.is_empty()) => {
                Some(Int::from(0))
            }
            Source::Shift { inner, by } => inner.as_integer().map(|z| z + by),
            Source::Negate(inner) => inner.as_integer().map(|z| -z),
            _ => None,
        }
    }

    /// `r_n`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn query(&self, n: u64) -> u64 {
        assert!(n >= 1, "moduli start at 1");
        if let Some(&r) = self.memo.read().expect("memo poisoned").get(&n) {
            return r;
        }
        let r = self.compute(n);
        self.memo.write().expect("memo poisoned").insert(n, r);
        r
    }

    fn compute(&self, n: u64) -> u64 {
        match &self.source {
            Source::Integer(z) => arith::mod_u64(z, n),
            Source::Set { oracle, .. } => {
                let congruences: Vec<(u64, u64)> = arith::factorize(n)
                    .into_iter()
                    .map(|(p, m)| {
                        let k = arith::prime_index(p).expect("factor is prime") as u64;
                        (u64::from(oracle(k)), p.pow(m))
                    })
                    .collect();
                arith::crt(&congruences)
            }
            Source::Shift { inner, by } => {
                arith::mod_u64(&(Int::from(inner.query(n)) + by), n)
            }
            Source::Negate(inner) => (n - inner.query(n)) % n,
            Source::Custom { query, .. } => query(n),
        }
    }

    /// Reads the set back from an encoded sequence: `{k ≤ k_max : r_{p_k} = 1}`.
    pub fn decode_set(&self, k_max: u64) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for k in 0..=k_max {
            let p = arith::nth_prime(k as usize);
            match self.query(p) {
                0 => {}
                1 => {
                    out.insert(k);
                }
                value => return Err(Error::MalformedSequence { modulus: p, value }),
            }
        }
        Ok(out)
    }

    /// Checks range, `r_1 = 0`, and `r_j ≡ r_i (mod i)` for all `i | j ≤ bound`.
    pub fn check_coherence(&self, bound: u64) -> Coherence {
        for j in 1..=bound {
            let rj = self.query(j);
            if rj >= j {
                return Coherence::OutOfRange { modulus: j, value: rj };
            }
        }
        for j in 1..=bound {
            let rj = self.query(j);
            for i in 1..j {
                if j % i == 0 && rj % i != self.query(i) {
                    return Coherence::Violation { i, j };
                }
            }
        }
        Coherence::Pass
    }

    /// Agreement of two sequences on every modulus up to `bound`; returns the
    /// first disagreeing modulus.
    pub fn first_difference(&self, other: &ResidueSequence, bound: u64) -> Option<u64> {
        (1..=bound).find(|&n| self.query(n) != other.query(n))
    }

    /// Rows `(n, r_n)` for `n = 1..=bound`.
    pub fn table(&self, bound: u64) -> Vec<(u64, u64)> {
        (1..=bound).map(|n| (n, self.query(n))).collect()
    }

    pub fn to_json(&self) -> Option<ResidueJson> {
        match &self.source {
            Source::Integer(z) => Some(ResidueJson::Int {
                value: z.to_string(),
            }),
            Source::Set {
                members: Some(m), ..
            } => Some(ResidueJson::Set {
                members: m.iter().copied().collect(),
            }),
            _ => None,
        }
    }

    pub fn from_json(json: &ResidueJson) -> Result<Self> {
        match json {
            ResidueJson::Set { members } => Ok(Self::encode_set(members.iter().copied())),
            ResidueJson::Int { value } => value
                .parse::<Int>()
                .map(Self::of_integer)
                .map_err(|_| Error::Config(format!("bad integer {value:?}"))),
        }
    }
}

impl fmt::Debug for ResidueSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueSequence({self})")
    }
}

impl fmt::Display for ResidueSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Integer(z) => write!(f, "ρ({z})"),
            Source::Set {
                members: Some(m), ..
            } => {
                let items: Vec<String> = m.iter().map(u64::to_string).collect();
                write!(f, "enc{{{}}}", items.join(","))
            }
            Source::Set { members: None, .. } => write!(f, "enc(oracle)"),
            Source::Shift { inner, by } => write!(f, "{inner}+{by}"),
            Source::Negate(inner) => write!(f, "-{inner}"),
            Source::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

/// JSON form of a residue sequence. Integers are carried as strings so that
/// values beyond 64 bits survive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ResidueJson {
    Set { members: Vec<u64> },
    Int {
        #[serde(with = "int_string")]
        value: String,
    },
}

mod int_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &str, s: S) -> Result<S::Ok, S::Error> {
        match v.parse::<i64>() {
            Ok(i) => s.serialize_i64(i),
            Err(_) => s.serialize_str(v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Num(i64),
            Str(String),
        }
        Ok(match Either::deserialize(d)? {
            Either::Num(i) => i.to_string(),
            Either::Str(s) => s,
        })
    }
}

/// Result of [`ResidueSequence::check_coherence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Coherence {
    Pass,
    /// `r_j ≢ r_i (mod i)` although `i | j`.
    Violation { i: u64, j: u64 },
    OutOfRange { modulus: u64, value: u64 },
}

impl Coherence {
    pub fn passed(&self) -> bool {
        matches!(self, Coherence::Pass)
    }
}
