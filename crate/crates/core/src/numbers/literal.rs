//! Text literals for cyclotomic numbers.
//!
//! Grammar: a sum of terms, each either a rational `p` / `p/q` or
//! `[<rat>*]z<N>[^<k>]` meaning `rat · ζ_N^k`. Example: `1/2*z8^3 - z8`.
//! The printer emits the canonical power-basis coordinates in this grammar.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{lcm, CycNum, Rat};
use crate::error::Error;

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.conductor();
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if k == 1 {
                write!(f, "z{n}")?;
            } else {
                write!(f, "z{n}^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn lit_err(s: &str, reason: impl Into<String>) -> Error {
    Error::Literal { literal: s.to_string(), reason: reason.into() }
}

fn parse_rat(src: &str, tok: &str) -> Result<Rat, Error> {
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        let t = t.trim();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(lit_err(src, format!("bad integer {t:?}")));
        }
        t.parse::<BigInt>().map_err(|e| lit_err(src, e.to_string()))
    };
    match tok.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(lit_err(src, "zero denominator"));
            }
            Ok(Rat::new(parse_int(p)?, q))
        }
        None => Ok(Rat::from_integer(parse_int(tok)?)),
    }
}

/// Parses a single unsigned term: `rat`, `z<N>[^k]` or `rat*z<N>[^k]`.
fn parse_term(src: &str, term: &str) -> Result<(Rat, u64, i64), Error> {
    let term = term.trim();
    let (coef, root) = match term.split_once('*') {
        Some((c, r)) => (Some(c.trim()), Some(r.trim())),
        None if term.starts_with('z') => (None, Some(term)),
        None => (Some(term), None),
    };
    let coef = match coef {
        Some(c) => parse_rat(src, c)?,
        None => Rat::one(),
    };
    let Some(root) = root else {
        return Ok((coef, 1, 0));
    };
    let body = root
        .strip_prefix('z')
        .ok_or_else(|| lit_err(src, format!("expected z<N> in {root:?}")))?;
    let (n, k) = match body.split_once('^') {
        Some((n, k)) => (n.trim(), k.trim()),
        None => (body.trim(), "1"),
    };
    let n: u64 = n.parse().map_err(|_| lit_err(src, format!("bad conductor {n:?}")))?;
    if n == 0 {
        return Err(lit_err(src, "conductor must be positive"));
    }
    let k: i64 = k.parse().map_err(|_| lit_err(src, format!("bad exponent {k:?}")))?;
    Ok((coef, n, k))
}

impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(lit_err(s, "empty literal"));
        }
        // Split into signed terms at top-level '+' / '-'.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut current = String::new();
        let mut expect_term = true;
        for ch in trimmed.chars() {
            match ch {
                '+' | '-' if expect_term && current.trim().is_empty() => {
                    if ch == '-' {
                        negative = !negative;
                    }
                }
                '+' | '-' if !current.trim().is_empty() && !current.trim_end().ends_with('^') => {
                    terms.push((negative, std::mem::take(&mut current)));
                    negative = ch == '-';
                    expect_term = true;
                }
                _ => {
                    current.push(ch);
                    if !ch.is_whitespace() {
                        expect_term = false;
                    }
                }
            }
        }
        if current.trim().is_empty() {
            return Err(lit_err(s, "dangling sign"));
        }
        terms.push((negative, current));

        let mut parsed = Vec::with_capacity(terms.len());
        let mut conductor = 1u64;
        for (neg, t) in &terms {
            let (c, n, k) = parse_term(s, t)?;
            conductor = lcm(conductor, n);
            parsed.push((if *neg { -c } else { c }, n, k));
        }
        let mut acc = CycNum::zero_in(conductor)?;
        for (c, n, k) in parsed {
            let term = CycNum::root_of_unity(n, k)?.scale(&c);
            acc = acc.try_add(&term.lift(conductor)?)?;
        }
        Ok(acc)
    }
}
