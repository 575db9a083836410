//! Real quadratic fields `Q(sqrt D0)` with exact rational coordinates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::error::ExactError;
use super::field::{squarefree_part, Field, Rational, RationalAlgebra, Ring};
use super::serial::RationalJson;

/// `a + b * sqrt(D0)` with `D0` squarefree.
///
/// Rationals are encoded with `b = 0`; a rational may carry any `D0`
/// (including 1) and compares equal to the same rational over another field.
#[derive(Clone)]
pub struct QuadElt {
    pub a: Rational,
    pub b: Rational,
    d0: u64,
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadElt {
    pub fn new(a: Rational, b: Rational, d0: u64) -> Result<Self, ExactError> {
        if !is_squarefree(d0) || (d0 == 1 && !b.is_zero()) {
            return Err(ExactError::InvalidDiscriminant(d0));
        }
        Ok(QuadElt { a, b, d0 })
    }

    pub fn rational(q: Rational, d0: u64) -> Self {
        QuadElt { a: q, b: Rational::zero(), d0 }
    }

    /// `sqrt(D0)` itself.
    pub fn sqrt_d(d0: u64) -> Self {
        QuadElt::new(Rational::zero(), Rational::one(), d0).expect("squarefree discriminant")
    }

    /// `(p + q sqrt(D0)) / r` with integer inputs, convenient for tables.
    pub fn from_ints(p: i64, q: i64, r: i64, d0: u64) -> Self {
        let den = BigInt::from(r);
        QuadElt::new(Rational::new(BigInt::from(p), den.clone()), Rational::new(BigInt::from(q), den), d0)
            .expect("valid quadratic element")
    }

    pub fn d0(&self) -> u64 {
        self.d0
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b sqrt(D0)`.
    pub fn conj(&self) -> Self {
        QuadElt { a: self.a.clone(), b: -&self.b, d0: self.d0 }
    }

    /// Field norm `a^2 - D0 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.d0)) * &self.b * &self.b
    }

    /// Field trace `2a`.
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    /// Monic minimal polynomial coefficients `(c0, c1)` of `x^2 + c1 x + c0`
    /// (meaningful when `b != 0`).
    pub fn min_poly_coeffs(&self) -> (Rational, Rational) {
        (self.norm(), -self.trace())
    }

    fn common_d0(&self, other: &Self) -> Result<u64, ExactError> {
        if self.d0 == other.d0 || other.b.is_zero() {
            Ok(self.d0)
        } else if self.b.is_zero() {
            Ok(other.d0)
        } else {
            Err(ExactError::DiscriminantMismatch(self.d0, other.d0))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d0 = self.common_d0(other)?;
        Ok(QuadElt { a: &self.a + &other.a, b: &self.b + &other.b, d0 })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        let d0 = self.common_d0(other)?;
        Ok(QuadElt { a: &self.a - &other.a, b: &self.b - &other.b, d0 })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d0 = self.common_d0(other)?;
        let d = Rational::from_integer(BigInt::from(d0));
        Ok(QuadElt {
            a: &self.a * &other.a + d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            d0,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        let inv = other.inverse().ok_or(ExactError::DivisionByZero)?;
        self.try_mul(&inv)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QuadElt { a: &self.a * q, b: &self.b * q, d0: self.d0 }
    }

    /// Sign of the real number `a + b sqrt(D0)` with `sqrt(D0) > 0`.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with D0 b^2
        let lhs = &self.a * &self.a;
        let rhs = Rational::from_integer(BigInt::from(self.d0)) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Exact comparison of real values (fields must agree unless one side is rational).
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering, ExactError> {
        Ok(self.try_sub(other)?.signum().cmp(&0))
    }

    /// Exact floor of the real value.
    pub fn floor(&self) -> BigInt {
        let guess = self.approx().floor();
        let mut n = if guess.is_finite() { BigInt::from(guess as i64) } else { BigInt::zero() };
        let at = |n: &BigInt| self.try_sub(&QuadElt::rational(Rational::from_integer(n.clone()), self.d0)).unwrap().signum();
        while at(&n) < 0 {
            n -= 1;
        }
        while at(&(&n + 1)) >= 0 {
            n += 1;
        }
        n
    }

    /// Representative of `self` modulo `m > 0` in `[0, m)`.
    pub fn rem_euclid(&self, m: &QuadElt) -> Result<QuadElt, ExactError> {
        let k = self.try_div(m)?.floor();
        self.try_sub(&m.scale(&Rational::from_integer(k)))
    }

    /// Floating approximation, for display only.
    pub fn approx(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d0 as f64).sqrt()
    }

    /// Total order key used for canonical sorting: the real value, then D0.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        if let Ok(c) = self.cmp_value(other) {
            return c;
        }
        // different fields: order by discriminant, then coordinates
        self.d0.cmp(&other.d0).then_with(|| self.a.cmp(&other.a)).then_with(|| self.b.cmp(&other.b))
    }

    /// Root of `x^2 + p x + q` with positive discriminant, as a quadratic
    /// element: `plus` selects `(-p + sqrt(disc)) / 2`.
    pub fn root_of_monic(p: &Rational, q: &Rational, plus: bool) -> Option<Self> {
        let disc = p * p - Rational::from_integer(BigInt::from(4)) * q;
        if !disc.is_positive() {
            return None;
        }
        let (d, s) = squarefree_part(&disc);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = -p * &half;
        if d.is_one() {
            let r = &s * &half;
            return Some(QuadElt::rational(if plus { a + r } else { a - r }, 1));
        }
        let d0 = d.to_u64()?;
        let b = &s * &half;
        Some(QuadElt { a, b: if plus { b } else { -b }, d0 })
    }
}

impl PartialEq for QuadElt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.d0 == other.d0 || self.b.is_zero())
    }
}

impl Eq for QuadElt {}

impl std::hash::Hash for QuadElt {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.a.hash(h);
        self.b.hash(h);
        if !self.b.is_zero() {
            self.d0.hash(h);
        }
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl Ring for QuadElt {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.d0
    }
    fn zero_in(d0: &u64) -> Self {
        QuadElt::rational(Rational::zero(), *d0)
    }
    fn one_in(d0: &u64) -> Self {
        QuadElt::rational(Rational::one(), *d0)
    }
    fn from_int_in(d0: &u64, n: i64) -> Self {
        QuadElt::rational(Rational::from_integer(BigInt::from(n)), *d0)
    }
    fn is_zero_elt(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("same quadratic field")
    }
    fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("same quadratic field")
    }
    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("same quadratic field")
    }
    fn negated(&self) -> Self {
        QuadElt { a: -&self.a, b: -&self.b, d0: self.d0 }
    }
}

impl Field for QuadElt {
    fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadElt { a: &self.a / &n, b: -&self.b / &n, d0: self.d0 })
    }
}

impl RationalAlgebra for QuadElt {
    fn from_rational_in(d0: &u64, q: &Rational) -> Self {
        QuadElt::rational(q.clone(), *d0)
    }
}

impl fmt::Debug for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        // (p + q sqrt(D)) / r with r the common denominator
        let r = num_integer::Integer::lcm(self.a.denom(), self.b.denom());
        let p = (&self.a * Rational::from_integer(r.clone())).to_integer();
        let q = (&self.b * Rational::from_integer(r.clone())).to_integer();
        let surd = if q.is_one() {
            format!("√{}", self.d0)
        } else if q == -BigInt::one() {
            format!("-√{}", self.d0)
        } else {
            format!("{}√{}", q, self.d0)
        };
        let num = if p.is_zero() {
            surd
        } else if q.is_negative() {
            format!("{}{}", p, surd)
        } else {
            format!("{}+{}", p, surd)
        };
        if r.is_one() {
            write!(f, "{}", num)
        } else if p.is_zero() {
            write!(f, "{}/{}", num, r)
        } else {
            write!(f, "({})/{}", num, r)
        }
    }
}

/// JSON form `{a, b, D0}` with rationals as `{num, den}`.
#[derive(Serialize, Deserialize)]
struct QuadJson {
    a: RationalJson,
    b: RationalJson,
    #[serde(rename = "D0")]
    d0: u64,
}

impl Serialize for QuadElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadJson { a: (&self.a).into(), b: (&self.b).into(), d0: self.d0 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = QuadJson::deserialize(d)?;
        let a = j.a.to_rational().map_err(serde::de::Error::custom)?;
        let b = j.b.to_rational().map_err(serde::de::Error::custom)?;
        QuadElt::new(a, b, j.d0).map_err(serde::de::Error::custom)
    }
}
