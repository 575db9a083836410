//! Sparse multivariate polynomials and Sylvester resultants over any ring.

use std::collections::BTreeMap;
use std::fmt;

use super::field::Ring;

/// Sparse polynomial in `nvars` indeterminates; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<R: Ring> {
    nvars: usize,
    ctx: R::Ctx,
    terms: BTreeMap<Vec<u32>, R>,
}

impl<R: Ring> fmt::Debug for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c:?}*{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(nvars: usize, ctx: &R::Ctx) -> Self {
        MultiPoly { nvars, ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let ctx = c.ctx();
        let mut p = Self::zero(nvars, &ctx);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn from_int(nvars: usize, ctx: &R::Ctx, n: i64) -> Self {
        Self::constant(nvars, R::from_int_in(ctx, n))
    }

    /// The indeterminate with index `i`.
    pub fn var(nvars: usize, ctx: &R::Ctx, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, ctx);
        p.add_term(e, R::one_in(ctx));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: R) {
        if c.is_zero_elt() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old.plus(&c);
                if !s.is_zero_elt() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars, &self.ctx);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.times(c2));
            }
        }
        p
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut p = Self::zero(self.nvars, &self.ctx);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x.times(c));
        }
        p
    }

    pub fn pow_n(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, R::one_in(&self.ctx));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Coefficients with respect to `var`, lowest degree first.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let Some(d) = self.degree_in(var) else { return Vec::new() };
        let mut out = vec![Self::zero(self.nvars, &self.ctx); d as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Substitute a rational function `p/q` for `var` and clear the
    /// denominator: returns `q^d * self(var = p/q)` with `d = deg_var(self)`.
    pub fn substitute_fraction(&self, var: usize, p: &Self, q: &Self) -> Self {
        let coeffs = self.coeffs_in(var);
        let Some(d) = coeffs.len().checked_sub(1) else { return self.clone() };
        let mut acc = Self::zero(self.nvars, &self.ctx);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&p.pow_n(k as u32)).mul(&q.pow_n((d - k) as u32)));
        }
        acc
    }
}

impl<R: Ring> Ring for MultiPoly<R> {
    type Ctx = (usize, R::Ctx);

    fn ctx(&self) -> Self::Ctx {
        (self.nvars, self.ctx.clone())
    }
    fn zero_in(ctx: &Self::Ctx) -> Self {
        Self::zero(ctx.0, &ctx.1)
    }
    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::constant(ctx.0, R::one_in(&ctx.1))
    }
    fn from_int_in(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_int(ctx.0, &ctx.1, n)
    }
    fn is_zero_elt(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

/// Determinant over a commutative ring by expansion along rows, memoized
/// over the set of used columns (no division needed).
pub fn determinant<R: Ring>(m: &[Vec<R>], ctx: &R::Ctx) -> R {
    let n = m.len();
    assert!(n <= 20, "determinant size");
    if n == 0 {
        return R::one_in(ctx);
    }
    // dp[mask] = signed sum over assignments of rows 0..popcount(mask) to the columns in mask
    let mut dp: Vec<Option<R>> = vec![None; 1 << n];
    dp[0] = Some(R::one_in(ctx));
    for mask in 0usize..(1 << n) {
        let Some(val) = dp[mask].clone() else { continue };
        if val.is_zero_elt() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].is_zero_elt() {
                continue;
            }
            // sign: number of used columns to the right of col
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = val.times(&m[row][col]);
            if inversions % 2 == 1 {
                term = term.negated();
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                None => term,
                Some(old) => old.plus(&term),
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| R::zero_in(ctx))
}

/// Resultant from the Sylvester matrix, for coefficient lists (lowest degree
/// first, nonzero leading coefficient) over any commutative ring.
pub fn sylvester_resultant<R: Ring>(f: &[R], g: &[R], ctx: &R::Ctx) -> R {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![R::zero_in(ctx); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![R::zero_in(ctx); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(&rows, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::field::{rat_int, Rational};
    use crate::exactmath::poly::UniPoly;

    #[test]
    fn sylvester_agrees_with_euclid() {
        let f = UniPoly::from_ints(&[3, -1, 0, 2]);
        let g = UniPoly::from_ints(&[-5, 4, 1]);
        let e = f.resultant(&g).unwrap();
        let s = sylvester_resultant(f.coeffs(), g.coeffs(), &());
        assert_eq!(e, s);
    }

    #[test]
    fn quadratic_resultant_formula() {
        // Res(a x^2 + b x + c, x^2 + beta x + gamma) = (a gamma - c)^2 - (a beta - b)(b gamma - c beta)
        let ctx = (5usize, ());
        let v = |i| MultiPoly::<Rational>::var(5, &(), i);
        let (a, b, c, beta, gamma) = (v(0), v(1), v(2), v(3), v(4));
        let res = sylvester_resultant(&[c.clone(), b.clone(), a.clone()], &[gamma.clone(), beta.clone(), MultiPoly::one_in(&ctx)], &ctx);
        let ag_c = a.mul(&gamma).sub(&c);
        let expected = ag_c.mul(&ag_c).sub(&a.mul(&beta).sub(&b).mul(&b.mul(&gamma).sub(&c.mul(&beta))));
        assert_eq!(res, expected);
        let _ = rat_int(0);
    }
}
