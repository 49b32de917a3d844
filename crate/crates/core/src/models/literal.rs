//! Element literals.
//!
//! ```text
//! 7                      integer multiple of 1 (any model with a 1)
//! X  | -X                the adjoined element of Z[r̂]
//! a=1,z=2,n=4            a + (X − r_4)·2/4, canonicalised
//! {l1:1/2,l3:-2};z=3     P_L / V_L (the z part only for products)
//! {0:(1,-1)};z=0         V_S × Z / V_S
//! (1/2,3);z=1            C({1,α}) (× Z)
//! ```

use num_traits::Zero;

use super::{zadjoin, Divisible, Element, Model, ModelKind, VecElem};
use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn parse_rat(s: &str, pos: usize) -> Result<Rat> {
    let t = s.trim();
    let q: Rat = t.parse().map_err(|_| syntax(pos, format!("bad rational {t:?}")))?;
    Ok(q)
}

fn parse_int(s: &str, pos: usize) -> Result<Int> {
    let t = s.trim();
    t.parse().map_err(|_| syntax(pos, format!("bad integer {t:?}")))
}

impl Model {
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let s = text.trim();
        if let Ok(k) = s.parse::<Int>() {
            return self.from_int(k);
        }
        match &self.kind {
            ModelKind::StandardZ => Err(syntax(0, format!("expected an integer, got {s:?}"))),
            ModelKind::ZAdjoin(r) => {
                if s == "X" {
                    return self.x();
                }
                if s == "-X" {
                    return self.neg(&self.x()?);
                }
                let (mut a, mut z, mut n) = (None, None, None);
                let mut pos = 0;
                for part in s.split(',') {
                    let (key, value) = part
                        .split_once('=')
                        .ok_or_else(|| syntax(pos, "expected key=value"))?;
                    match key.trim() {
                        "a" => a = Some(parse_int(value, pos)?),
                        "z" => z = Some(parse_int(value, pos)?),
                        "n" => {
                            let v: u64 = value
                                .trim()
                                .parse()
                                .map_err(|_| syntax(pos, "n must be a positive integer"))?;
                            if v == 0 {
                                return Err(syntax(pos, "n must be positive"));
                            }
                            n = Some(v);
                        }
                        other => return Err(syntax(pos, format!("unknown key {other:?}"))),
                    }
                    pos += part.len() + 1;
                }
                let (a, z, n) = (
                    a.unwrap_or_else(Int::zero),
                    z.unwrap_or_else(Int::zero),
                    n.unwrap_or(1),
                );
                Ok(Element::from_za(zadjoin::canonical(r, a, z, n)))
            }
            ModelKind::Divisible(d) => {
                if s.contains(";z=") {
                    return Err(syntax(0, "divisible groups have no Z part"));
                }
                let v = parse_vec(d, s)?;
                let e = Element::Vec(v);
                self.validate(&e)?;
                Ok(e)
            }
            ModelKind::Product(d) => {
                let (vpart, zpart) = match s.find(";z=") {
                    Some(i) => (&s[..i], Some((&s[i + 3..], i + 3))),
                    None => (s, None),
                };
                let v = parse_vec(d, vpart.trim())?;
                let z = match zpart {
                    Some((t, pos)) => parse_int(t, pos)?,
                    None => Int::zero(),
                };
                let e = Element::Product(v, z);
                self.validate(&e)?;
                Ok(e)
            }
        }
    }
}

fn parse_vec(d: &Divisible, s: &str) -> Result<VecElem> {
    match d {
        Divisible::Cut(_) => {
            let inner = s
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| syntax(0, "expected (a,b)"))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| syntax(1, "expected (a,b)"))?;
            Ok(VecElem::Cut(parse_rat(a, 1)?, parse_rat(b, a.len() + 2)?))
        }
        Divisible::Lex(_) | Divisible::Quad(_) => {
            let body = s
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| syntax(0, "expected {...}"))?;
            let entries = split_top_level(body);
            let quad = matches!(d, Divisible::Quad(_));
            let mut lex = Vec::new();
            let mut coords = Vec::new();
            for (entry, off) in entries {
                let pos = off + 1;
                if entry.trim().is_empty() {
                    continue;
                }
                let (key, value) = entry
                    .split_once(':')
                    .ok_or_else(|| syntax(pos, "expected key:value"))?;
                let key = key.trim();
                let idx: u64 = key
                    .strip_prefix('l')
                    .unwrap_or(key)
                    .parse()
                    .map_err(|_| syntax(pos, format!("bad index {key:?}")))?;
                if quad {
                    let value = value.trim();
                    let pair = value
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| syntax(pos, "expected (a,b)"))?;
                    let (a, b) = pair.split_once(',').ok_or_else(|| syntax(pos, "expected (a,b)"))?;
                    coords.push((idx, (parse_rat(a, pos)?, parse_rat(b, pos)?)));
                } else {
                    lex.push((idx, parse_rat(value, pos)?));
                }
            }
            if quad {
                Ok(VecElem::quad(coords))
            } else {
                Ok(VecElem::lex(lex))
            }
        }
    }
}

/// Splits on commas that are not inside parentheses, keeping byte offsets.
fn split_top_level(s: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((&s[start..i], start));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((&s[start..], start));
    out
}
