//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields in the power basis modulo the cyclotomic polynomial.

mod cyclotomic;
mod literal;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::CycNum;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = num_rational::BigRational;

/// Default upper bound on conductors (overridable through `EQDSING_MAX_CONDUCTOR`).
pub const DEFAULT_CONDUCTOR_CAP: u64 = 10_000;

pub fn conductor_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("EQDSING_MAX_CONDUCTOR")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&c: &u64| c >= 1)
            .unwrap_or(DEFAULT_CONDUCTOR_CAP)
    })
}

pub(crate) fn check_conductor(n: u64) -> Result<()> {
    let cap = conductor_cap();
    if n == 0 || n > cap {
        Err(Error::ConductorOverflow(n, cap))
    } else {
        Ok(())
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Converts a rational to `i64`, failing if it is not an integer or out of range.
pub fn rat_to_i64(r: &Rat) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::NonIntegral(r.to_string()));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::NonIntegral(r.to_string()))
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let mut upper: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&q| q * q != n).collect();
    out.append(&mut upper);
    out
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
///
/// Computed by exact division of `x^n - 1` by the cyclotomic polynomials of
/// every proper divisor; results are cached for the lifetime of the process.
pub fn cyclotomic_polynomial(n: u64) -> Result<Arc<Vec<BigInt>>> {
    check_conductor(n)?;
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d)?;
        poly = exact_poly_div(&poly, &phi_d);
    }
    let poly = Arc::new(poly);
    cache
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(n, Arc::clone(&poly));
    Ok(poly)
}

/// Quotient of `num` by the monic `den`; the remainder must vanish.
fn exact_poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    quot
}

/// Multiplies two integer polynomials (lowest degree first).
pub fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(2).unwrap(), ints(&[1, 1]));
        assert_eq!(*cyclotomic_polynomial(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6).unwrap(), ints(&[1, -1, 1]));
    }

    #[test]
    fn phi_12_by_hand_division() {
        // x^12 - 1 divided by Phi_1 Phi_2 Phi_3 Phi_4 Phi_6 written out explicitly.
        let mut p = vec![BigInt::zero(); 13];
        p[0] = BigInt::from(-1);
        p[12] = BigInt::one();
        for d in [ints(&[-1, 1]), ints(&[1, 1]), ints(&[1, 1, 1]), ints(&[1, 0, 1]), ints(&[1, -1, 1])] {
            p = exact_poly_div(&p, &d);
        }
        assert_eq!(p.len() as u64 - 1, euler_phi(12));
        assert_eq!(*cyclotomic_polynomial(12).unwrap(), p);
        assert_eq!(p, ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn divisor_products_recover_x_n_minus_one() {
        for n in 1..=60u64 {
            let mut prod = ints(&[1]);
            for d in divisors(n) {
                prod = int_poly_mul(&prod, &cyclotomic_polynomial(d).unwrap());
            }
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = BigInt::from(-1);
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, expect, "n = {n}");
            let phi = cyclotomic_polynomial(n).unwrap();
            assert_eq!(phi.len() as u64 - 1, euler_phi(n));
            assert!(phi.last().unwrap().is_one());
        }
    }

    #[test]
    fn conductor_cap_is_enforced() {
        assert!(matches!(
            cyclotomic_polynomial(conductor_cap() + 1),
            Err(Error::ConductorOverflow(_, _))
        ));
    }
}
