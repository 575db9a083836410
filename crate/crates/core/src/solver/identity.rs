//! Symbolic self-test: the torsion polynomials follow from the opposite
//! residue equations after the substitution `x = (1-X)/(1+X)`,
//! `y = (1-ZX)/(1+ZX)`, `u = (1-U)/(1+U)` (with `r1 = 1`, `r2 = r`).

use crate::exactmath::{sylvester_resultant, MultiPoly, Rational};

use super::coeffs::{torsion_polynomial_from_terms, torsion_terms};
use super::Stratum;

// indeterminates: x, y, u, r, X, Z, U
const NV: usize = 7;
const XS: usize = 0;
const YS: usize = 1;
const US: usize = 2;
const R: usize = 3;
const BX: usize = 4;
const BZ: usize = 5;
const BU: usize = 6;

type P = MultiPoly<Rational>;

fn v(i: usize) -> P {
    P::var(NV, &(), i)
}

fn k(n: i64) -> P {
    P::from_int(NV, &(), n)
}

fn substitute(e: &P) -> P {
    let (one, bx, bz, bu) = (k(1), v(BX), v(BZ), v(BU));
    let e = e.substitute_fraction(XS, &one.sub(&bx), &one.add(&bx));
    let zx = bz.mul(&bx);
    let e = e.substitute_fraction(YS, &one.sub(&zx), &one.add(&zx));
    e.substitute_fraction(US, &one.sub(&bu), &one.add(&bu))
}

/// Opposite residue equations `(e1, e2)`.
fn residue_equations(stratum: Stratum) -> (P, P) {
    let (x, y, u, r) = (v(XS), v(YS), v(US), v(R));
    match stratum {
        Stratum::Prym211 => {
            let e1 = u.mul(&y.sub(&x)).add(&r.mul(&x).mul(&y));
            let u2 = u.mul(&u);
            let e2 = y
                .mul(&x.mul(&x))
                .add(&y.mul(&y).neg().add(&k(1)).sub(&u2).mul(&x))
                .add(&u2.sub(&k(1)).mul(&y))
                .sub(&r.mul(&u).mul(&x.mul(&x).add(&y.mul(&y)).sub(&k(1))));
            (e1, e2)
        }
        Stratum::Prym22 => {
            let xy = x.mul(&y);
            let u2 = u.mul(&u);
            let e1 = x
                .sub(&y)
                .mul(&xy.mul(&u2).add(&k(1)))
                .sub(&u.mul(&xy.sub(&k(1))).mul(&xy.add(&k(1))).mul(&r));
            let e2 = y
                .sub(&x)
                .mul(&xy.neg().add(&u2).sub(&k(2)))
                .sub(&u.mul(&x.mul(&x).add(&y.mul(&y)).sub(&k(2))).mul(&r));
            (e1, e2)
        }
    }
}

/// The torsion polynomial from its term list, moved into the seven
/// indeterminates used here.
fn lifted(terms: &[(i64, u32, u32, u32)]) -> P {
    let t = torsion_polynomial_from_terms(terms);
    let mut out = P::zero(NV, &());
    for (e, c) in t.terms() {
        let m = v(BZ).pow_n(e[0]).mul(&v(BU).pow_n(e[1])).mul(&v(R).pow_n(e[2])).scale(c);
        out = out.add(&m);
    }
    out
}

/// Check the identity for the stratum's torsion polynomial as transcribed.
pub fn verify_resultant_identity(stratum: Stratum) -> bool {
    verify_resultant_identity_for(stratum, &torsion_terms(stratum))
}

/// Same check against an arbitrary candidate term list.
///
/// Prym(2,1,1): `Res_X(n1, n2) = 256 Z^2 r^2 (U+1)^2 T^2`.
/// Prym(2,2): `lc(m2) m1 - lc(m1) m2 = -64 X^2 Z T`, leading coefficients in `X`.
pub fn verify_resultant_identity_for(stratum: Stratum, terms: &[(i64, u32, u32, u32)]) -> bool {
    let (e1, e2) = residue_equations(stratum);
    let (n1, n2) = (substitute(&e1), substitute(&e2));
    let t = lifted(terms);
    match stratum {
        Stratum::Prym211 => {
            let f = n1.coeffs_in(BX);
            let g = n2.coeffs_in(BX);
            let res = sylvester_resultant(&f, &g, &(NV, ()));
            let up1 = v(BU).add(&k(1));
            let expected = k(256).mul(&v(BZ).pow_n(2)).mul(&v(R).pow_n(2)).mul(&up1.pow_n(2)).mul(&t.mul(&t));
            res == expected
        }
        Stratum::Prym22 => {
            let l1 = n1.coeffs_in(BX).pop().expect("nonzero");
            let l2 = n2.coeffs_in(BX).pop().expect("nonzero");
            let comb = l2.mul(&n1).sub(&l1.mul(&n2));
            let expected = k(-64).mul(&v(BX).pow_n(2)).mul(&v(BZ)).mul(&t);
            comb == expected
        }
    }
}
