//! Ring and field abstractions shared by the polynomial and resultant code.
//!
//! Elements of `Q(sqrt D0)`, `Q(zeta_N)` and `F_p` only make sense relative to
//! some context (the discriminant, the conductor, the prime), so the traits
//! carry an explicit context type instead of relying on `num_traits::Zero`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Commutative ring with unit whose elements know their context.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_int_in(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero_elt(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    fn is_one_elt(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }

    fn pow_elt(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;

    fn divide(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.times(&inv))
    }
}

/// Fields of characteristic zero, i.e. containing a copy of Q.
pub trait RationalAlgebra: Field {
    fn from_rational_in(ctx: &Self::Ctx, q: &Rational) -> Self;
}

impl Ring for Rational {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}
    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_int_in(_: &(), n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn is_zero_elt(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl RationalAlgebra for Rational {
    fn from_rational_in(_: &(), q: &Rational) -> Self {
        q.clone()
    }
}

/// Shorthand constructor `p/q` for tests and tables.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Squarefree decomposition `q = s^2 * d` with `d` a squarefree integer
/// (sign carried by `d`), for a nonzero rational `q`.
///
/// Only trial division is used, so this is meant for the small
/// discriminants that occur here.
pub fn squarefree_part(q: &Rational) -> (BigInt, Rational) {
    assert!(!Zero::is_zero(q), "squarefree part of zero");
    let prod = q.numer() * q.denom();
    let negative = prod.is_negative();
    let mut n = prod.abs();
    let mut d = BigInt::one();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            d *= &p;
        }
        p += 1u32;
    }
    d *= n;
    if negative {
        d = -d;
    }
    // q = num/den = (num*den)/den^2 = s^2 d / den^2
    let scale = Rational::new(s, q.denom().clone());
    (d, scale)
}
