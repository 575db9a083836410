//! Coefficients of the torsion equations as quadratics in `r`.
//!
//! Each coefficient is a signed integer times a monomial in `Z = zeta_XY`,
//! `U = zeta_U` times factors `(V^k + s)` with `s = +-1`.  Keeping them in
//! factored form gives exact zero tests straight from the exponents and a
//! cheap evaluation modulo primes.

use std::sync::Arc;

use crate::exactmath::{CycloCtx, CycloElt, MultiPoly, Rational, Ring};

use super::Stratum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    U,
}

/// The factor `V^k + sign`.
#[derive(Clone, Copy, Debug)]
pub struct Binomial {
    pub var: Var,
    pub k: u32,
    pub sign: i64,
}

#[derive(Clone, Debug)]
pub struct FactoredCoeff {
    pub scalar: i64,
    pub z_pow: u32,
    pub u_pow: u32,
    pub factors: Vec<Binomial>,
}

const fn bin(var: Var, k: u32, sign: i64) -> Binomial {
    Binomial { var, k, sign }
}

/// `(a, b, c)` with `a r^2 + b r + c` equal to the torsion polynomial.
pub fn factored_coefficients(stratum: Stratum) -> [FactoredCoeff; 3] {
    use Var::*;
    match stratum {
        Stratum::Prym211 => [
            FactoredCoeff { scalar: 1, z_pow: 1, u_pow: 0, factors: vec![bin(U, 1, -1), bin(U, 1, 1), bin(U, 1, 1)] },
            FactoredCoeff { scalar: -1, z_pow: 0, u_pow: 1, factors: vec![bin(U, 1, 1), bin(Z, 1, -1), bin(Z, 1, 1)] },
            FactoredCoeff { scalar: 2, z_pow: 0, u_pow: 1, factors: vec![bin(U, 1, -1), bin(Z, 1, -1), bin(Z, 1, -1)] },
        ],
        Stratum::Prym22 => [
            FactoredCoeff { scalar: 1, z_pow: 1, u_pow: 0, factors: vec![bin(Z, 1, 1), bin(U, 2, -1), bin(U, 2, -1)] },
            FactoredCoeff { scalar: -1, z_pow: 1, u_pow: 0, factors: vec![bin(Z, 1, -1), bin(U, 4, -1)] },
            FactoredCoeff { scalar: -2, z_pow: 0, u_pow: 2, factors: vec![bin(Z, 1, -1), bin(Z, 1, -1), bin(Z, 1, 1)] },
        ],
    }
}

/// Whether `zeta_N^(k e) + sign` vanishes.
fn binomial_vanishes(n: u64, e: u64, k: u32, sign: i64) -> bool {
    let t = (e * k as u64) % n;
    match sign {
        -1 => t == 0,
        1 => n % 2 == 0 && t == n / 2,
        _ => false,
    }
}

impl FactoredCoeff {
    /// Exact zero test at `Z = zeta_N^ez`, `U = zeta_N^eu`.
    pub fn vanishes(&self, n: u64, ez: u64, eu: u64) -> bool {
        self.scalar == 0
            || self.factors.iter().any(|f| {
                let e = if f.var == Var::Z { ez } else { eu };
                binomial_vanishes(n, e, f.k, f.sign)
            })
    }

    /// Split into the part depending on `Z` (with the scalar) and on `U`,
    /// each given as `(scalar, power, factors)`; used by the modular filters.
    pub fn part(&self, var: Var) -> (i64, u32, Vec<(u32, i64)>) {
        let fs = self.factors.iter().filter(|f| f.var == var).map(|f| (f.k, f.sign)).collect();
        match var {
            Var::Z => (self.scalar, self.z_pow, fs),
            Var::U => (1, self.u_pow, fs),
        }
    }

    /// Value in `Q(zeta_N)`.
    pub fn to_cyclo(&self, ctx: &Arc<CycloCtx>, ez: u64, eu: u64) -> CycloElt {
        let mono = (self.z_pow as u64 * ez + self.u_pow as u64 * eu) as i64;
        let mut acc = CycloElt::zeta_pow(ctx, mono).scale(&Rational::from_integer(self.scalar.into()));
        for f in &self.factors {
            let e = if f.var == Var::Z { ez } else { eu };
            let t = CycloElt::zeta_pow(ctx, (e * f.k as u64) as i64).plus(&CycloElt::from_int_in(ctx, f.sign));
            acc = acc.times(&t);
        }
        acc
    }

    /// As a polynomial in `(Z, U)` embedded in `nvars` indeterminates with
    /// `Z`, `U` at indices `zi`, `ui`.
    pub fn to_multipoly(&self, nvars: usize, zi: usize, ui: usize) -> MultiPoly<Rational> {
        let var = |i| MultiPoly::<Rational>::var(nvars, &(), i);
        let one = MultiPoly::<Rational>::from_int(nvars, &(), 1);
        let mut acc = MultiPoly::from_int(nvars, &(), self.scalar)
            .mul(&var(zi).pow_n(self.z_pow))
            .mul(&var(ui).pow_n(self.u_pow));
        for f in &self.factors {
            let v = if f.var == Var::Z { var(zi) } else { var(ui) };
            acc = acc.mul(&v.pow_n(f.k).add(&one.scale(&Rational::from_integer(f.sign.into()))));
        }
        acc
    }
}

/// `(a, b, c)` in `Q(zeta_N)` for `zeta_XY = zeta_N^eXY`, `zeta_U = zeta_N^eU`.
pub fn quadratic_coefficients(stratum: Stratum, n: u64, e_xy: u64, e_u: u64) -> (CycloElt, CycloElt, CycloElt) {
    let ctx = CycloCtx::new(n);
    quadratic_coefficients_in(stratum, &ctx, e_xy, e_u)
}

pub fn quadratic_coefficients_in(
    stratum: Stratum,
    ctx: &Arc<CycloCtx>,
    e_xy: u64,
    e_u: u64,
) -> (CycloElt, CycloElt, CycloElt) {
    let [a, b, c] = factored_coefficients(stratum);
    (a.to_cyclo(ctx, e_xy, e_u), b.to_cyclo(ctx, e_xy, e_u), c.to_cyclo(ctx, e_xy, e_u))
}

/// Integer terms `(coefficient, deg r, deg Z, deg U)` of the torsion
/// polynomial, transcribed term by term from the relation as written.
pub fn torsion_terms(stratum: Stratum) -> Vec<(i64, u32, u32, u32)> {
    match stratum {
        // r^2 Z U^3 - r^2 Z + (4 - r^2) Z U + (r^2 - 4) Z U^2 + (2 - r) Z^2 U^2
        //   + (r + 2) U^2 - (r + 2) Z^2 U + (r - 2) U
        Stratum::Prym211 => vec![
            (1, 2, 1, 3),
            (-1, 2, 1, 0),
            (4, 0, 1, 1),
            (-1, 2, 1, 1),
            (1, 2, 1, 2),
            (-4, 0, 1, 2),
            (2, 0, 2, 2),
            (-1, 1, 2, 2),
            (1, 1, 0, 2),
            (2, 0, 0, 2),
            (-1, 1, 2, 1),
            (-2, 0, 2, 1),
            (1, 1, 0, 1),
            (-2, 0, 0, 1),
        ],
        // r(r-1) Z + r(r-1) Z^2 U^4 - 2(r^2-1) Z U^2 - 2(r^2-1) Z^2 U^2
        //   + r(r+1) Z^2 + r(r+1) Z U^4 - 2 Z^3 U^2 - 2 U^2
        Stratum::Prym22 => vec![
            (1, 2, 1, 0),
            (-1, 1, 1, 0),
            (1, 2, 2, 4),
            (-1, 1, 2, 4),
            (-2, 2, 1, 2),
            (2, 0, 1, 2),
            (-2, 2, 2, 2),
            (2, 0, 2, 2),
            (1, 2, 2, 0),
            (1, 1, 2, 0),
            (1, 2, 1, 4),
            (1, 1, 1, 4),
            (-2, 0, 3, 2),
            (-2, 0, 0, 2),
        ],
    }
}

/// Torsion polynomial in the indeterminates `(Z, U, r)` (indices 0, 1, 2).
pub fn torsion_polynomial(stratum: Stratum) -> MultiPoly<Rational> {
    torsion_polynomial_from_terms(&torsion_terms(stratum))
}

pub fn torsion_polynomial_from_terms(terms: &[(i64, u32, u32, u32)]) -> MultiPoly<Rational> {
    let var = |i| MultiPoly::<Rational>::var(3, &(), i);
    let mut p = MultiPoly::zero(3, &());
    for &(c, dr, dz, du) in terms {
        let t = MultiPoly::from_int(3, &(), c).mul(&var(0).pow_n(dz)).mul(&var(1).pow_n(du)).mul(&var(2).pow_n(dr));
        p = p.add(&t);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_forms_match_term_collection() {
        for s in [Stratum::Prym211, Stratum::Prym22] {
            let t = torsion_polynomial(s);
            let [a, b, c] = factored_coefficients(s);
            let r = MultiPoly::<Rational>::var(3, &(), 2);
            let q = a.to_multipoly(3, 0, 1).mul(&r.mul(&r)).add(&b.to_multipoly(3, 0, 1).mul(&r)).add(&c.to_multipoly(3, 0, 1));
            assert_eq!(q, t, "{s:?}");
        }
    }

    #[test]
    fn prym211_leading_coefficient_nonzero() {
        let [a, _, _] = factored_coefficients(Stratum::Prym211);
        for n in 3..40u64 {
            for ez in 1..n {
                for eu in 1..n {
                    if 2 * eu != n {
                        assert!(!a.vanishes(n, ez, eu));
                    }
                }
            }
        }
    }

    #[test]
    fn prym22_linear_branch_at_minus_one() {
        let (a, b, c) = quadratic_coefficients(Stratum::Prym22, 6, 3, 1);
        assert!(a.is_zero_elt() && c.is_zero_elt() && !b.is_zero_elt());
        let [fa, _, fc] = factored_coefficients(Stratum::Prym22);
        assert!(fa.vanishes(6, 3, 1) && fc.vanishes(6, 3, 1));
    }

    #[test]
    fn exact_zero_flags_agree_with_cyclotomic_values() {
        for s in [Stratum::Prym211, Stratum::Prym22] {
            let fs = factored_coefficients(s);
            for n in [4u64, 6, 8, 12] {
                let ctx = CycloCtx::new(n);
                for ez in 1..n {
                    for eu in 1..n {
                        for f in &fs {
                            assert_eq!(f.vanishes(n, ez, eu), f.to_cyclo(&ctx, ez, eu).is_zero_elt());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn n4_example_reproduces_relation() {
        // (Z, U) = (-1, i): a r^2 + b r + c equals the relation evaluated at r
        let ctx = CycloCtx::new(4);
        let (a, b, c) = quadratic_coefficients_in(Stratum::Prym211, &ctx, 2, 1);
        let t = torsion_polynomial(Stratum::Prym211);
        for rv in [-3i64, 1, 5] {
            let r = CycloElt::from_int_in(&ctx, rv);
            let lhs = a.times(&r).times(&r).plus(&b.times(&r)).plus(&c);
            let mut rhs = CycloElt::zero_in(&ctx);
            for (e, coef) in t.terms() {
                let m = CycloElt::zeta_pow(&ctx, (2 * e[0] + e[1]) as i64)
                    .times(&r.pow_elt(e[2] as u64))
                    .scale(coef);
                rhs = rhs.plus(&m);
            }
            assert_eq!(lhs, rhs);
        }
    }
}
