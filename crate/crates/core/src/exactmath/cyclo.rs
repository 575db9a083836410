//! Cyclotomic fields `Q(zeta_N)` in the power basis modulo `Phi_N`.
//!
//! Throughout, `zeta_N` is the complex number `exp(2 pi i / N)`; this fixes
//! the sign conventions of [`sqrt_in_cyclotomic`] and of [`as_quadratic`].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::error::ExactError;
use super::field::{squarefree_part, Field, Rational, RationalAlgebra, Ring};
use super::poly::UniPoly;
use super::quad::QuadElt;
use super::serial::RationalJson;

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

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Integer coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_coeffs(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply the positive factors,
    // then divide exactly by the negative ones.
    let mut num = vec![BigInt::one()];
    let mut den_factors = Vec::new();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => num = mul_xd_minus_one(&num, d as usize),
            -1 => den_factors.push(d as usize),
            _ => {}
        }
    }
    for d in den_factors {
        num = div_xd_minus_one(&num, d);
    }
    num
}

fn mobius(n: u64) -> i32 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn mul_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    // p = q (x^d - 1): q_i = q_{i-d} - p_i, i.e. q_i = -p_i + q_{i-d}
    let n = p.len() - d;
    let mut q = vec![BigInt::zero(); n];
    for i in 0..n {
        let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
        q[i] = prev - &p[i];
    }
    debug_assert!({
        let back = mul_xd_minus_one(&q, d);
        back == p
    });
    q
}

/// `Phi_N` as a rational polynomial.
pub fn cyclotomic_polynomial(n: u64) -> UniPoly<Rational> {
    UniPoly::new(&(), cyclotomic_coeffs(n).into_iter().map(Rational::from_integer).collect())
}

/// Shared data for one conductor.
pub struct CycloCtx {
    n: u64,
    phi: usize,
    /// `Phi_N` coefficients, monic, lowest degree first.
    modulus: Vec<Rational>,
}

impl CycloCtx {
    pub fn new(n: u64) -> Arc<CycloCtx> {
        assert!(n >= 1, "conductor must be positive");
        let modulus: Vec<Rational> = cyclotomic_coeffs(n).into_iter().map(Rational::from_integer).collect();
        let phi = modulus.len() - 1;
        Arc::new(CycloCtx { n, phi, modulus })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Reduce a coefficient vector of arbitrary length modulo `Phi_N`.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let phi = self.phi;
        while v.len() > phi {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - phi;
            for (i, m) in self.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    v[shift + i] -= &top * m;
                }
            }
        }
        v.resize(phi, Rational::zero());
        v
    }
}

impl PartialEq for CycloCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl fmt::Debug for CycloCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

/// Element of `Q(zeta_N)`; `coeffs` has length `phi(N)`.
#[derive(Clone)]
pub struct CycloElt {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<Rational>,
}

impl CycloElt {
    pub fn from_coeffs(ctx: &Arc<CycloCtx>, coeffs: Vec<Rational>) -> Self {
        CycloElt { ctx: ctx.clone(), coeffs: ctx.reduce(coeffs) }
    }

    pub fn rational(ctx: &Arc<CycloCtx>, q: Rational) -> Self {
        let mut v = vec![Rational::zero(); ctx.phi];
        v[0] = q;
        CycloElt { ctx: ctx.clone(), coeffs: v }
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(ctx: &Arc<CycloCtx>, k: i64) -> Self {
        let n = ctx.n as i64;
        let e = k.rem_euclid(n) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coeffs(ctx, v)
    }

    pub fn zeta(ctx: &Arc<CycloCtx>) -> Self {
        Self::zeta_pow(ctx, 1)
    }

    pub fn n(&self) -> u64 {
        self.ctx.n
    }

    pub fn context(&self) -> &Arc<CycloCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.ctx.n != other.ctx.n {
            Err(ExactError::ConductorMismatch(self.ctx.n, other.ctx.n))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let v = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloElt { ctx: self.ctx.clone(), coeffs: v })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let v = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloElt { ctx: self.ctx.clone(), coeffs: v })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let phi = self.ctx.phi;
        if phi == 0 {
            return Ok(self.clone());
        }
        let mut v = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Ok(CycloElt { ctx: self.ctx.clone(), coeffs: self.ctx.reduce(v) })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let inv = other.inverse().ok_or(ExactError::DivisionByZero)?;
        self.try_mul(&inv)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloElt { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    fn as_poly(&self) -> UniPoly<Rational> {
        UniPoly::new(&(), self.coeffs.clone())
    }

    /// Image under the automorphism `zeta_N -> zeta_N^j`.
    pub fn galois(&self, j: i64) -> Result<Self, ExactError> {
        let n = self.ctx.n;
        if (j.rem_euclid(n as i64) as u64).gcd(&n) != 1 {
            return Err(ExactError::NotCoprime { j, n });
        }
        let jj = j.rem_euclid(n as i64) as u64;
        let mut v = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = ((i as u64 * jj) % n) as usize;
                v[e] += c;
            }
        }
        Ok(Self::from_coeffs(&self.ctx, v))
    }

    /// Complex conjugate, i.e. `galois(-1)`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Re-express in `Q(zeta_M)` for a multiple `M` of `N`.
    pub fn lift(&self, target: &Arc<CycloCtx>) -> Result<Self, ExactError> {
        let (n, m) = (self.ctx.n, target.n);
        if m % n != 0 {
            return Err(ExactError::ConductorMismatch(n, m));
        }
        let step = (m / n) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::from_coeffs(target, v))
    }

    /// Monic minimal polynomial over Q, by the first linear dependence among powers.
    pub fn min_poly(&self) -> UniPoly<Rational> {
        let phi = self.ctx.phi;
        // echelon rows: (pivot, vector, combination of powers)
        let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
        let mut power = CycloElt::rational(&self.ctx, Rational::one());
        for k in 0..=phi {
            let mut vec = power.coeffs.clone();
            let mut comb = vec![Rational::zero(); k + 1];
            comb[k] = Rational::one();
            for (piv, rv, rc) in &rows {
                let f = vec[*piv].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in vec.iter_mut().zip(rv) {
                    *x -= &f * y;
                }
                for (x, y) in comb.iter_mut().zip(rc) {
                    *x -= &f * y;
                }
            }
            match vec.iter().position(|c| !c.is_zero()) {
                None => return UniPoly::new(&(), comb),
                Some(piv) => {
                    let inv = vec[piv].recip();
                    for x in vec.iter_mut() {
                        *x *= &inv;
                    }
                    for x in comb.iter_mut() {
                        *x *= &inv;
                    }
                    rows.push((piv, vec, comb));
                }
            }
            power = power.try_mul(self).unwrap();
        }
        unreachable!("degree of an element is at most phi(N)")
    }
}

/// `sqrt(d0)` as an element of `Q(zeta_N)` (positive square root), if the
/// conductor of `Q(sqrt d0)` divides `N`.  Built from quadratic Gauss sums.
pub fn sqrt_in_cyclotomic(ctx: &Arc<CycloCtx>, d0: u64) -> Option<CycloElt> {
    let n = ctx.n;
    if d0 == 1 {
        return Some(CycloElt::one_in(ctx));
    }
    let conductor = if d0 % 4 == 1 { d0 } else { 4 * d0 };
    if n % conductor != 0 {
        return None;
    }
    let mut g = CycloElt::one_in(ctx);
    let mut m = 0u64;
    for p in prime_factors(d0) {
        if p == 2 {
            let z8 = (n / 8) as i64;
            let s2 = CycloElt::zeta_pow(ctx, z8).plus(&CycloElt::zeta_pow(ctx, -z8));
            g = g.times(&s2);
            continue;
        }
        let step = (n / p) as i64;
        let mut gp = vec![Rational::zero(); n as usize];
        for a in 1..p {
            let e = ((a as i64 * step) % n as i64) as usize;
            gp[e] += Rational::from_integer(BigInt::from(legendre(a, p)));
        }
        g = g.times(&CycloElt::from_coeffs(ctx, gp));
        if p % 4 == 3 {
            m += 1;
        }
    }
    // g = i^m sqrt(d0)
    if m % 2 == 0 {
        if (m / 2) % 2 == 1 {
            g = g.negated();
        }
    } else {
        let q = (n / 4) as i64;
        g = g.times(&CycloElt::zeta_pow(ctx, -(m as i64) * q));
    }
    Some(g)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

/// Embed a quadratic element into `Q(zeta_N)` (positive `sqrt(D0)`).
pub fn embed_quadratic(ctx: &Arc<CycloCtx>, x: &QuadElt) -> Option<CycloElt> {
    if x.is_rational() {
        return Some(CycloElt::rational(ctx, x.a.clone()));
    }
    let s = sqrt_in_cyclotomic(ctx, x.d0())?;
    Some(CycloElt::rational(ctx, x.a.clone()).plus(&s.scale(&x.b)))
}

/// Quadratic-subfield detection: the element as `a + b sqrt(D0)` if its
/// minimal polynomial has degree one, or degree two with positive
/// discriminant.  The root is identified exactly through the Gauss sum,
/// never numerically.
pub fn as_quadratic(x: &CycloElt) -> Option<QuadElt> {
    let mp = x.min_poly();
    match mp.degree()? {
        1 => Some(QuadElt::rational(-mp.coeff(0), 1)),
        2 => {
            let (q, p) = (mp.coeff(0), mp.coeff(1));
            let disc = &p * &p - Rational::from_integer(BigInt::from(4)) * &q;
            if !disc.is_positive() {
                return None;
            }
            let (d, _) = squarefree_part(&disc);
            let d0 = d.to_u64()?;
            let plus = QuadElt::root_of_monic(&p, &q, true)?;
            let emb = embed_quadratic(x.context(), &plus);
            debug_assert!(emb.is_some(), "sqrt({d0}) must lie in Q(zeta_{})", x.n());
            let emb = emb?;
            Some(if emb == *x { plus } else { QuadElt::root_of_monic(&p, &q, false)? })
        }
        _ => None,
    }
}

impl PartialEq for CycloElt {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.n == other.ctx.n && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElt {}

impl Ring for CycloElt {
    type Ctx = Arc<CycloCtx>;

    fn ctx(&self) -> Arc<CycloCtx> {
        self.ctx.clone()
    }
    fn zero_in(ctx: &Arc<CycloCtx>) -> Self {
        CycloElt::rational(ctx, Rational::zero())
    }
    fn one_in(ctx: &Arc<CycloCtx>) -> Self {
        CycloElt::rational(ctx, Rational::one())
    }
    fn from_int_in(ctx: &Arc<CycloCtx>, n: i64) -> Self {
        CycloElt::rational(ctx, Rational::from_integer(BigInt::from(n)))
    }
    fn is_zero_elt(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("same conductor")
    }
    fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("same conductor")
    }
    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("same conductor")
    }
    fn negated(&self) -> Self {
        CycloElt { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Field for CycloElt {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero_elt() {
            return None;
        }
        let modulus = UniPoly::new(&(), self.ctx.modulus.clone());
        let (g, s, _) = self.as_poly().ext_gcd(&modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Some(CycloElt::from_coeffs(&self.ctx, s.coeffs().to_vec()))
    }
}

impl RationalAlgebra for CycloElt {
    fn from_rational_in(ctx: &Arc<CycloCtx>, q: &Rational) -> Self {
        CycloElt::rational(ctx, q.clone())
    }
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { format!("{c}") } else { format!("{c}*z^{i}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0 in Q(z_{})", self.ctx.n)
        } else {
            write!(f, "{} in Q(z_{})", terms.join(" + "), self.ctx.n)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    #[serde(rename = "N")]
    n: u64,
    coeffs: Vec<RationalJson>,
}

impl Serialize for CycloElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloJson { n: self.ctx.n, coeffs: self.coeffs.iter().map(Into::into).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        if j.n == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let ctx = CycloCtx::new(j.n);
        if j.coeffs.len() != ctx.phi {
            return Err(serde::de::Error::custom("coefficient count must equal phi(N)"));
        }
        let coeffs = j.coeffs.iter().map(|c| c.to_rational()).collect::<Result<Vec<_>, _>>();
        Ok(CycloElt { ctx, coeffs: coeffs.map_err(serde::de::Error::custom)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::field::{rat, rat_int};

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_polynomial(1), UniPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(6), UniPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), UniPoly::from_ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(105).degree(), Some(48));
        assert_eq!(cyclotomic_coeffs(105)[7], BigInt::from(-2));
    }

    #[test]
    fn arithmetic_examples() {
        let c6 = CycloCtx::new(6);
        let z = CycloElt::zeta(&c6);
        assert_eq!(z.times(&z), z.minus(&CycloElt::one_in(&c6)));
        let c4 = CycloCtx::new(4);
        let i = CycloElt::zeta(&c4);
        assert_eq!(i.times(&i), CycloElt::from_int_in(&c4, -1));
        assert_eq!(z.galois(5).unwrap(), CycloElt::one_in(&c6).minus(&z));
        assert!(z.galois(2).is_err());
        assert!(z.try_add(&i).is_err());
    }

    #[test]
    fn min_poly_examples() {
        let c12 = CycloCtx::new(12);
        let z3 = CycloElt::zeta_pow(&c12, 3);
        assert_eq!(z3.min_poly(), UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(CycloElt::from_int_in(&c12, 5).min_poly(), UniPoly::from_ints(&[-5, 1]));
        let s = CycloElt::zeta_pow(&c12, 1).plus(&CycloElt::zeta_pow(&c12, -1));
        assert_eq!(s.min_poly(), UniPoly::from_ints(&[-3, 0, 1]));
        assert_eq!(as_quadratic(&s), Some(QuadElt::from_ints(0, 1, 1, 3)));
        let c6 = CycloCtx::new(6);
        let t = CycloElt::zeta_pow(&c6, 1).plus(&CycloElt::zeta_pow(&c6, 5));
        assert_eq!(as_quadratic(&t), Some(QuadElt::rational(rat_int(1), 1)));
        let c5 = CycloCtx::new(5);
        assert_eq!(as_quadratic(&CycloElt::zeta(&c5)), None);
    }

    #[test]
    fn gauss_sum_signs() {
        // sqrt(d) squared is d, and it is the positive root: compare with
        // 2 cos(2 pi k / N) style elements of known sign.
        for (n, d0) in [(5u64, 5u64), (12, 3), (8, 2), (24, 6), (132, 33), (13, 13), (28, 7), (21 * 4, 21)] {
            let ctx = CycloCtx::new(n);
            let s = sqrt_in_cyclotomic(&ctx, d0).unwrap();
            assert_eq!(s.times(&s), CycloElt::from_int_in(&ctx, d0 as i64), "N={n} d0={d0}");
            assert_eq!(as_quadratic(&s), Some(QuadElt::sqrt_d(d0)), "N={n} d0={d0}");
        }
        // 2cos(pi/6) = sqrt 3 > 0, 2cos(5pi/6) = -sqrt 3
        let c12 = CycloCtx::new(12);
        let s = sqrt_in_cyclotomic(&c12, 3).unwrap();
        let c = CycloElt::zeta_pow(&c12, 1).plus(&CycloElt::zeta_pow(&c12, 11));
        assert_eq!(s, c);
        // zeta_5 + zeta_5^-1 = 2cos(72deg) = (sqrt5 - 1)/2
        let c5 = CycloCtx::new(5);
        let c = CycloElt::zeta_pow(&c5, 1).plus(&CycloElt::zeta_pow(&c5, 4));
        assert_eq!(as_quadratic(&c), Some(QuadElt::new(rat(-1, 2), rat(1, 2), 5).unwrap()));
    }

    #[test]
    fn lift_keeps_value() {
        let c6 = CycloCtx::new(6);
        let c12 = CycloCtx::new(12);
        let z = CycloElt::zeta(&c6);
        assert_eq!(z.lift(&c12).unwrap(), CycloElt::zeta_pow(&c12, 2));
    }
}
