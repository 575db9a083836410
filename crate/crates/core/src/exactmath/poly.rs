//! Dense univariate polynomials over a [`Ring`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::error::ExactError;
use super::field::{Field, Rational, Ring};

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    ctx: R::Ctx,
    coeffs: Vec<R>,
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

impl<R: Ring> UniPoly<R> {
    pub fn new(ctx: &R::Ctx, coeffs: Vec<R>) -> Self {
        let mut p = UniPoly { ctx: ctx.clone(), coeffs };
        p.trim();
        p
    }

    pub fn zero(ctx: &R::Ctx) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        let ctx = c.ctx();
        Self::new(&ctx, vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![R::zero_in(&ctx); k];
        v.push(c);
        Self::new(&ctx, v)
    }

    /// The polynomial `x`.
    pub fn x(ctx: &R::Ctx) -> Self {
        Self::monomial(R::one_in(ctx), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_elt()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| R::zero_in(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).plus(&other.coeff(i))).collect();
        Self::new(&self.ctx, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).minus(&other.coeff(i))).collect();
        Self::new(&self.ctx, v)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| c.negated()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut v = vec![R::zero_in(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elt() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        Self::new(&self.ctx, v)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_in(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// Evaluation at an element of a larger ring, given the coefficient embedding.
    pub fn eval_with<S: Ring>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = S::zero_in(&x.ctx());
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(&embed(c));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&R::from_int_in(&self.ctx, i as i64)))
            .collect();
        Self::new(&self.ctx, v)
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(ctx, self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> UniPoly<F> {
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ExactError> {
        let dd = d.degree().ok_or(ExactError::ZeroPolynomial)?;
        let lead_inv = d.lead().unwrap().inverse().ok_or(ExactError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![F::zero_in(&self.ctx); n - dd];
        for i in (dd..n).rev() {
            if r[i].is_zero_elt() {
                continue;
            }
            let c = r[i].times(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::new(&self.ctx, q), Self::new(&self.ctx, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, ExactError> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = self.ctx.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(F::one_in(&ctx)), Self::zero(&ctx));
        let (mut t0, mut t1) = (Self::zero(&ctx), Self::constant(F::one_in(&ctx)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inverse().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Resultant `lead(f)^deg(g) * prod_{f(a)=0} g(a)`, computed by the
    /// Euclidean recursion.
    pub fn resultant(&self, g: &Self) -> Result<F, ExactError> {
        let m = self.degree().ok_or(ExactError::ZeroPolynomial)?;
        let n = g.degree().ok_or(ExactError::ZeroPolynomial)?;
        let ctx = self.ctx.clone();
        if n == 0 {
            return Ok(g.coeffs[0].pow_elt(m as u64));
        }
        if m == 0 {
            return Ok(self.coeffs[0].pow_elt(n as u64));
        }
        let r = self.rem(g)?;
        let Some(k) = r.degree() else {
            return Ok(F::zero_in(&ctx));
        };
        let sign = if (m * n) % 2 == 1 { F::from_int_in(&ctx, -1) } else { F::one_in(&ctx) };
        let lc = g.lead().unwrap().pow_elt((m - k) as u64);
        Ok(sign.times(&lc).times(&g.resultant(&r)?))
    }
}

impl UniPoly<Rational> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(&(), coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// Primitive integer polynomial with positive leading coefficient
    /// proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            for c in v.iter_mut() {
                *c /= &g;
            }
        }
        if v.last().is_some_and(|c| c.is_negative()) {
            for c in v.iter_mut() {
                *c = -&*c;
            }
        }
        v
    }

    fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while let Some(last) = chain.last() {
            if last.is_zero() {
                chain.pop();
                break;
            }
            let prev = &chain[chain.len() - 2];
            let r = prev.rem(last).unwrap();
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    fn sign_changes(chain: &[Self], x: &Rational) -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Squarefree part `self / gcd(self, self')` (monic).
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).unwrap().0.monic()
    }

    /// Disjoint intervals `(lo, hi]`, each containing exactly one real root
    /// of the squarefree part, and of width at most `width`.
    pub fn isolate_real_roots(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        let f = self.squarefree();
        let Some(d) = f.degree() else { return Vec::new() };
        if d == 0 {
            return Vec::new();
        }
        // Cauchy bound for the monic squarefree part.
        let mut bound = Rational::one();
        for c in &f.coeffs[..d] {
            bound += c.abs();
        }
        let chain = f.sturm_chain();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = Self::sign_changes(&chain, &lo) - Self::sign_changes(&chain, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo <= *width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort();
        out
    }

    /// All rational roots, repeated according to multiplicity, in increasing order.
    ///
    /// A rational root `p/q` of a primitive integer polynomial with leading
    /// coefficient `l` has `q | l`, so `l * root` is an integer root of the
    /// monic transform.  Integer roots are located by Sturm isolation to
    /// width below one and then tested exactly.
    pub fn rational_roots(&self) -> Vec<Rational> {
        assert!(!self.is_zero(), "rational roots of the zero polynomial");
        let ints = self.primitive_integer();
        let n = ints.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        let l = ints[n].clone();
        // g(y) = l^(n-1) f(y/l) = sum ints[i] l^(n-1-i) y^i, monic.
        let mut g = Vec::with_capacity(n + 1);
        for (i, c) in ints.iter().enumerate() {
            if i == n {
                g.push(Rational::one());
            } else {
                g.push(Rational::from_integer(c * num_traits::pow(l.clone(), n - 1 - i)));
            }
        }
        let g = UniPoly::new(&(), g);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut candidates = Vec::new();
        for (lo, hi) in g.isolate_real_roots(&half) {
            let k = hi.floor();
            if k > lo {
                candidates.push(k);
            }
        }
        let lq = Rational::from_integer(l);
        let mut roots = Vec::new();
        for k in candidates {
            if !g.eval(&k).is_zero() {
                continue;
            }
            let r = &k / &lq;
            let lin = UniPoly::new(&(), vec![-r.clone(), Rational::one()]);
            let mut f = self.clone();
            loop {
                let (q, rem) = f.div_rem(&lin).unwrap();
                if !rem.is_zero() {
                    break;
                }
                roots.push(r.clone());
                f = q;
            }
        }
        roots.sort();
        roots
    }
}
