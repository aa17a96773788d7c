use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_conductor, cyclotomic_polynomial, euler_phi, lcm, Rat};
use crate::error::{Error, Result};

/// An element of the cyclotomic field `Q(ζ_N)`.
///
/// Coordinates are taken in the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo the
/// `N`-th cyclotomic polynomial, so two elements of the same conductor are
/// equal exactly when their coordinate vectors agree. Elements of different
/// conductors are compared inside the field of the least common multiple.
#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u64,
    coeffs: Vec<Rat>,
}

/// Reduces `poly` (lowest degree first) modulo the monic `modulus` in place.
fn reduce(poly: &mut Vec<Rat>, modulus: &[BigInt]) {
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let c = poly.pop().expect("non-empty");
        if c.is_zero() {
            continue;
        }
        let base = poly.len() - deg;
        for (j, m) in modulus.iter().take(deg).enumerate() {
            if m.is_zero() {
                continue;
            }
            poly[base + j] -= &c * Rat::from_integer(m.clone());
        }
    }
    poly.resize(deg, Rat::zero());
}

impl CycNum {
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycNum { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(v)))
    }

    /// `ζ_n^k` in the field of conductor `n`.
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self> {
        check_conductor(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rat::zero(); e + 1];
        poly[e] = Rat::one();
        Self::from_poly(n, poly)
    }

    /// Reduces an arbitrary polynomial in `ζ_n` to canonical form.
    pub fn from_poly(n: u64, mut poly: Vec<Rat>) -> Result<Self> {
        let modulus = cyclotomic_polynomial(n)?;
        if poly.is_empty() {
            poly.push(Rat::zero());
        }
        reduce(&mut poly, &modulus);
        Ok(CycNum { conductor: n, coeffs: poly })
    }

    pub fn zero_in(n: u64) -> Result<Self> {
        check_conductor(n)?;
        Ok(CycNum { conductor: n, coeffs: vec![Rat::zero(); euler_phi(n) as usize] })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    ///
    /// In the power basis an element is rational iff only its constant
    /// coordinate is non-zero.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses the element in the field of conductor `m`, a multiple of
    /// the current conductor.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if m == self.conductor {
            return Ok(self.clone());
        }
        if m % self.conductor != 0 {
            return Err(Error::InvalidParameter(format!(
                "conductor {} does not divide {}",
                self.conductor, m
            )));
        }
        check_conductor(m)?;
        if let Some(r) = self.as_rat() {
            let mut out = CycNum::zero_in(m)?;
            out.coeffs[0] = r.clone();
            return Ok(out);
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_poly(m, poly)
    }

    fn common(a: &CycNum, b: &CycNum) -> Result<(CycNum, CycNum)> {
        let m = lcm(a.conductor, b.conductor);
        check_conductor(m)?;
        Ok((a.lift(m)?, b.lift(m)?))
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^k` (`k` coprime to the conductor).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor as i64;
        if n <= 2 {
            return self.clone();
        }
        let mut poly = vec![Rat::zero(); n as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = (e as i64 * k).rem_euclid(n) as usize;
            poly[t] += c;
        }
        Self::from_poly(self.conductor, poly).expect("conductor already validated")
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Ok(CycNum { conductor: self.conductor, coeffs });
        }
        if let Some(r) = other.as_rat() {
            let mut out = self.clone();
            out.coeffs[0] += r;
            return Ok(out);
        }
        if let Some(r) = self.as_rat() {
            let mut out = other.clone();
            out.coeffs[0] += r;
            return Ok(out);
        }
        let (a, b) = Self::common(self, other)?;
        a.try_add(&b)
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        if let Some(r) = other.as_rat() {
            return Ok(self.scale(r));
        }
        if let Some(r) = self.as_rat() {
            return Ok(other.scale(r));
        }
        if self.conductor != other.conductor {
            let (a, b) = Self::common(self, other)?;
            return a.try_mul(&b);
        }
        let mut prod = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_poly(self.conductor, prod)
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse, obtained by solving `self · v = 1` against the
    /// multiplication-by-`self` matrix over `Q`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            let mut out = self.clone();
            out.coeffs[0] = r.recip();
            return Ok(out);
        }
        let n = self.conductor;
        let d = self.coeffs.len();
        // Column k holds the coordinates of self * ζ^k.
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let mut poly = vec![Rat::zero(); k];
            poly.extend(self.coeffs.iter().cloned());
            cols.push(Self::from_poly(n, poly)?.coeffs);
        }
        // Augmented system rows: [M | e_0].
        let mut rows: Vec<Vec<Rat>> = (0..d)
            .map(|i| {
                let mut row: Vec<Rat> = (0..d).map(|k| cols[k][i].clone()).collect();
                row.push(if i == 0 { Rat::one() } else { Rat::zero() });
                row
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !rows[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            rows.swap(c, p);
            let piv = rows[c][c].recip();
            for x in rows[c].iter_mut() {
                *x *= &piv;
            }
            for r in 0..d {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    let pivot_row = rows[c].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Ok(CycNum { conductor: n, coeffs: rows.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            base = base.try_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Fixed-conductor key used for hashing group elements; only meaningful
    /// when comparing elements that share a conductor.
    pub fn key(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&c.to_string());
        }
        s
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rat(), other.as_rat()) {
            (Some(a), Some(b)) => return a == b,
            (Some(_), None) | (None, Some(_)) => return false,
            _ => {}
        }
        match CycNum::common(self, other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycNum {}

impl From<i64> for CycNum {
    fn from(v: i64) -> Self {
        CycNum::from_int(v)
    }
}

impl From<Rat> for CycNum {
    fn from(r: Rat) -> Self {
        CycNum::from_rat(r)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

// Operator impls panic only when mixing conductors whose lcm exceeds the
// configured cap; use the `try_*` methods to surface that as an error.
macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$f(rhs).expect("conductor overflow in cyclotomic arithmetic")
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.conductor == rhs.conductor {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        if self.conductor == rhs.conductor {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat;

    fn z(n: u64, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn i_squared() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(-1));
    }

    #[test]
    fn cube_roots_sum() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let a = &CycNum::one() + &z(5, 1);
        let v = a.inv().unwrap();
        assert!((&v * &a).is_one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(CycNum::zero_in(7).unwrap().inv(), Err(Error::DivisionByZero));
        assert_eq!(z(3, 1).try_div(&CycNum::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn conjugates() {
        assert_eq!(z(4, 1).conjugate(), -z(4, 1));
        let half = CycNum::from_rat(rat(3, 2));
        assert_eq!(half.conjugate(), half);
        let a = &z(8, 1) + &z(8, 3);
        assert_eq!(a.conjugate(), &z(8, 5) + &z(8, 7));
    }

    #[test]
    fn mixed_conductors_meet_in_lcm() {
        let s = &z(4, 1) + &z(3, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(z(6, 2), z(3, 1));
        assert_eq!(z(12, 4), z(3, 1));
        assert_ne!(z(4, 1), z(3, 1));
    }

    #[test]
    fn conductor_overflow_is_reported() {
        let big = CycNum::root_of_unity(9973, 1).unwrap();
        let other = CycNum::root_of_unity(9967, 1).unwrap();
        assert!(matches!(big.try_mul(&other), Err(Error::ConductorOverflow(_, _))));
    }

    #[test]
    fn pow_and_roots() {
        assert!(z(7, 3).pow(7).unwrap().is_one());
        assert_eq!(z(7, 3).pow(-1).unwrap(), z(7, 4));
    }
}
