//! Deciding atomic sentences from an enumeration of a divisible group's
//! atomic diagram.
//!
//! A stream that lists the positive facts `a=0`, `a<b` and `a+b=c` of a
//! genuine diagram settles every atomic query: `a=0` once the unique zero
//! fact appears, `a+b=c` once any `a+b=c'` appears, and `a<b` once either
//! `a<b` or `b<a` appears.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fact {
    IsZero(String),
    Less(String, String),
    Sum(String, String, String),
}

/// Answer plus the number of stream items consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub value: bool,
    pub steps: usize,
}

/// Scans `stream` until `query` is settled. Queries about `a = a` or `a < a`
/// are settled without reading anything.
pub fn complete_diagram<I>(stream: I, query: &Fact, budget: usize) -> Result<Completion>
where
    I: IntoIterator<Item = Fact>,
{
    match query {
        Fact::Less(a, b) if a == b => return Ok(Completion { value: false, steps: 0 }),
        _ => {}
    }
    for (i, fact) in stream.into_iter().enumerate() {
        let steps = i + 1;
        if steps > budget {
            return Err(Error::Diverges(budget));
        }
        let settled = match (query, &fact) {
            (Fact::IsZero(a), Fact::IsZero(b)) => Some(a == b),
            (Fact::Sum(a, b, c), Fact::Sum(x, y, w)) if a == x && b == y => Some(c == w),
            (Fact::Less(a, b), Fact::Less(x, y)) if a == x && b == y => Some(true),
            (Fact::Less(a, b), Fact::Less(x, y)) if a == y && b == x => Some(false),
            _ => None,
        };
        if let Some(value) = settled {
            log::trace!("{query} settled at step {steps} by {fact}");
            return Ok(Completion { value, steps });
        }
    }
    Err(Error::Diverges(budget))
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::IsZero(a) => write!(f, "{a}=0"),
            Fact::Less(a, b) => write!(f, "{a}<{b}"),
            Fact::Sum(a, b, c) => write!(f, "{a}+{b}={c}"),
        }
    }
}

fn name(s: &str, pos: usize) -> Result<String> {
    let t = s.trim();
    let ok = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(t.to_string())
    } else {
        Err(Error::Syntax {
            pos,
            msg: format!("bad element name {t:?}"),
        })
    }
}

impl FromStr for Fact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fact> {
        let s = s.trim();
        if let Some((lhs, rhs)) = s.split_once('<') {
            return Ok(Fact::Less(name(lhs, 0)?, name(rhs, lhs.len() + 1)?));
        }
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: "expected a=0, a<b or a+b=c".into(),
        })?;
        let rpos = lhs.len() + 1;
        match lhs.split_once('+') {
            Some((a, b)) => Ok(Fact::Sum(name(a, 0)?, name(b, a.len() + 1)?, name(rhs, rpos)?)),
            None if rhs.trim() == "0" => Ok(Fact::IsZero(name(lhs, 0)?)),
            None => Err(Error::Syntax {
                pos: rpos,
                msg: "equations other than a=0 need a sum on the left".into(),
            }),
        }
    }
}
