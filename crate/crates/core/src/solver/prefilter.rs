//! Modular necessary condition, run before any exact arithmetic.
//!
//! Reduction is modulo a prime ideal `(p, zeta_N - w)` of `Z[zeta_N]` with
//! `p = 1 mod N` a 61-bit prime and `w` of order `N` in `F_p`, so
//! `sigma_j(x)` reduces to `x` evaluated at `w^j`.
//!
//! Testing that `Res(Q, conj Q)` vanishes is useless here: both strata
//! satisfy `conj Q = -zeta_U^-3 zeta_XY^-2 Q` identically.
//!
//! Either `b/a` and `c/a` are
//! rational (then every Galois conjugate of `Q` is proportional to `Q`), or
//! `r` lies in a real quadratic subfield `Q(sqrt d)` of `Q(zeta_N)`.  In the
//! second case `sigma_j(Q)` vanishes at `r` when the character of `Q(sqrt d)`
//! is `+1` at `j` and at `r' != r` when it is `-1`.  Rejection here is only
//! certain up to the chance that the prime divides some nonzero norm.

use crate::exactmath::fp::{mul_mod, pow_mod, prime_one_mod, root_of_unity, sqrt_mod};

use super::instance::real_quadratic_subfields;
use super::coeffs::{factored_coefficients, FactoredCoeff, Var};
use super::Stratum;

/// Degenerate pairs that carry no information.
pub fn excluded(stratum: Stratum, n: u64, e_xy: u64, e_u: u64) -> bool {
    let (e_xy, e_u) = (e_xy % n, e_u % n);
    if e_xy == 0 || e_u == 0 || 2 * e_u == n {
        return true;
    }
    stratum == Stratum::Prym22 && 2 * e_xy == n && n % 4 == 0 && (4 * e_u == n || 4 * e_u == 3 * n)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Generators of `(Z/N)^*`, chosen greedily.
pub fn unit_generators(n: u64) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut in_group = vec![false; n as usize];
    in_group[(1 % n) as usize] = true;
    for u in 2..n {
        if gcd(u, n) != 1 || in_group[u as usize] {
            continue;
        }
        gens.push(u);
        in_group.iter_mut().for_each(|b| *b = false);
        in_group[(1 % n) as usize] = true;
        let mut stack = vec![1 % n];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = x * g % n;
                if !in_group[y as usize] {
                    in_group[y as usize] = true;
                    stack.push(y);
                }
            }
        }
    }
    gens
}

/// The modular test at one order.  The verdict only depends on the Galois
/// orbit of `(eXY, eU)`, since a solution `r` at one pair gives `sigma_j(r)`
/// at `(j eXY, j eU)`.
pub struct ModularTest {
    n: u64,
    p: u64,
    pw: Vec<u64>,
    js: Vec<u64>,
    coeffs: [FactoredCoeff; 3],
    /// values of each real quadratic character on `js`
    characters: Vec<Vec<i8>>,
    /// every unit, first one being 1, for pairs that pass the sampled test
    units: Vec<u64>,
    unit_characters: Vec<Vec<i8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reject,
    Survive,
}

impl ModularTest {
    pub fn new(stratum: Stratum, n: u64) -> Self {
        let p = prime_one_mod(n, 1 << 61);
        let w = root_of_unity(n, p);
        let mut pw = Vec::with_capacity(n as usize);
        let mut x = 1u64;
        for _ in 0..n {
            pw.push(x);
            x = mul_mod(x, w, p);
        }
        let mut js = vec![1 % n, n - 1];
        js.extend(unit_generators(n));
        // a few further units strengthen the test at no real cost
        js.extend((2..n).filter(|&u| gcd(u, n) == 1).take(6));
        js.sort_unstable();
        js.dedup();
        // keep j = 1 first
        js.sort_by_key(|&j| j != 1 % n);
        let fields = real_quadratic_subfields(n);
        let table = |js: &[u64]| -> Vec<Vec<i8>> {
            fields.iter().map(|&d| js.iter().map(|&j| quadratic_character(d, j)).collect()).collect()
        };
        let units: Vec<u64> = (1..=n).map(|u| u % n).filter(|&u| gcd(u, n) == 1).collect();
        ModularTest {
            n,
            p,
            pw,
            characters: table(&js),
            unit_characters: table(&units),
            js,
            units,
            coeffs: factored_coefficients(stratum),
        }
    }

    fn coeff_at(&self, i: usize, ez: u64, eu: u64) -> u64 {
        let f = &self.coeffs[i];
        let (n, p, pw) = (self.n, self.p, &self.pw);
        let mut acc = f.scalar.rem_euclid(p as i64) as u64;
        acc = mul_mod(acc, pw[((f.z_pow as u64 * ez + f.u_pow as u64 * eu) % n) as usize], p);
        for b in &f.factors {
            let e = if b.var == Var::Z { ez } else { eu };
            let t = (pw[((b.k as u64 * e) % n) as usize] + b.sign.rem_euclid(p as i64) as u64) % p;
            acc = mul_mod(acc, t, p);
        }
        acc
    }

    pub fn test(&self, ez: u64, eu: u64) -> Verdict {
        match self.verdict(&self.js, &self.characters, ez, eu) {
            Verdict::Reject => Verdict::Reject,
            Verdict::Survive => self.verdict(&self.units, &self.unit_characters, ez, eu),
        }
    }

    fn verdict(&self, js: &[u64], characters: &[Vec<i8>], ez: u64, eu: u64) -> Verdict {
        let (n, p) = (self.n, self.p);
        let [fa, fb, fc] = &self.coeffs;
        let linear = fa.vanishes(n, ez, eu);
        if linear && (fb.vanishes(n, ez, eu) || fc.vanishes(n, ez, eu)) {
            // b = c = 0 has no root, c = 0 gives r = 0
            return Verdict::Reject;
        }
        let q: Vec<[u64; 3]> = js
            .iter()
            .map(|&j| {
                let (z, u) = (j * ez % n, j * eu % n);
                [self.coeff_at(0, z, u), self.coeff_at(1, z, u), self.coeff_at(2, z, u)]
            })
            .collect();
        let [a1, b1, c1] = q[0];
        if !linear {
            if a1 == 0 {
                return Verdict::Survive;
            }
            let case_a = q.iter().all(|[a, b, c]| {
                mul_mod(*b, a1, p) == mul_mod(b1, *a, p) && mul_mod(*c, a1, p) == mul_mod(c1, *a, p)
            });
            if case_a {
                return rational_case(a1, b1, c1, p);
            }
        }
        // r lies in Q(zeta_N), hence in a real quadratic subfield Q(sqrt D);
        // sigma_j fixes r exactly when the character (D/j) is +1
        let roots: Vec<Option<Vec<u64>>> = q.iter().map(|c| roots_mod(c, p)).collect();
        let has = |i: usize, x: u64| roots[i].as_ref().is_none_or(|rs| rs.contains(&x));
        let Some(Some(alphas)) = roots.first() else { return Verdict::Survive };
        for chi in characters {
            let Some(k0) = chi.iter().position(|&v| v < 0) else { continue };
            let betas: Vec<u64> = match &roots[k0] {
                Some(rs) => rs.clone(),
                None => return Verdict::Survive,
            };
            for &alpha in alphas {
                if !(0..q.len()).filter(|&i| chi[i] > 0).all(|i| has(i, alpha)) {
                    continue;
                }
                for &beta in &betas {
                    if beta != alpha && (0..q.len()).filter(|&i| chi[i] < 0).all(|i| has(i, beta)) {
                        return Verdict::Survive;
                    }
                }
            }
        }
        Verdict::Reject
    }
}

/// `Q` proportional to a rational quadratic: it needs a positive non-square
/// discriminant.  Survives whenever the ratios do not lift to small rationals.
fn rational_case(a: u64, b: u64, c: u64, p: u64) -> Verdict {
    let inv = pow_mod(a, p - 2, p);
    let (Some((bn, bd)), Some((cn, cd))) = (lift_rational(mul_mod(b, inv, p), p), lift_rational(mul_mod(c, inv, p), p))
    else {
        return Verdict::Survive;
    };
    // disc = bn^2/bd^2 - 4 cn/cd, over the common denominator bd^2 cd
    let num = bn * bn * cd - 4 * cn * bd * bd;
    let den = bd * bd * cd;
    if num <= 0 || is_square_i128(num * den) {
        Verdict::Reject
    } else {
        Verdict::Survive
    }
}

/// Rational `n/d` with `|n|, d < sqrt(p/2)` congruent to `x`, if any.
fn lift_rational(x: u64, p: u64) -> Option<(i128, i128)> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(if t1 < 0 { (-r1, -t1) } else { (r1, t1) })
}

fn is_square_i128(v: i128) -> bool {
    if v < 0 {
        return false;
    }
    let r = (v as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == v)
}

/// Roots in `F_p` of `a x^2 + b x + c`; `None` when the polynomial is zero.
fn roots_mod(&[a, b, c]: &[u64; 3], p: u64) -> Option<Vec<u64>> {
    if a == 0 {
        if b == 0 {
            return if c == 0 { None } else { Some(Vec::new()) };
        }
        let inv = pow_mod(b, p - 2, p);
        return Some(vec![mul_mod((p - c) % p, inv, p)]);
    }
    let disc = (mul_mod(b, b, p) + p - mul_mod(4, mul_mod(a, c, p), p)) % p;
    let Some(s) = sqrt_mod(disc, p) else { return Some(Vec::new()) };
    let inv2a = pow_mod(mul_mod(2, a, p), p - 2, p);
    let r1 = mul_mod((p - b + s) % p, inv2a, p);
    let r2 = mul_mod((2 * p - b - s) % p, inv2a, p);
    Some(if r1 == r2 { vec![r1] } else { vec![r1, r2] })
}

/// Jacobi symbol `(a/m)` for odd positive `m`.
fn jacobi(mut a: u64, mut m: u64) -> i8 {
    a %= m;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                t = -t;
            }
        }
        (a, m) = (m, a);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 { t } else { 0 }
}

/// Kronecker character `(D/j)` of the real quadratic field `Q(sqrt d)`.
fn quadratic_character(d: u64, j: u64) -> i8 {
    if d % 4 == 1 {
        jacobi(j, d)
    } else {
        // D = 4d, and j is odd because 4 | N
        jacobi(4 * d, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_generate() {
        for n in [5u64, 8, 12, 24, 35, 120, 1560] {
            let gens = unit_generators(n);
            let mut seen = vec![false; n as usize];
            let mut stack = vec![1u64];
            seen[1] = true;
            while let Some(x) = stack.pop() {
                for &g in &gens {
                    let y = x * g % n;
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            let units = (1..n).filter(|&u| gcd(u, n) == 1).count();
            assert_eq!(seen.iter().filter(|&&b| b).count(), units, "n={n}");
        }
    }

    #[test]
    fn table_rows_survive() {
        for (n, ez, eu) in [(6u64, 1u64, 1u64), (6, 3, 1), (6, 3, 2), (12, 6, 1), (24, 3, 4)] {
            assert_eq!(ModularTest::new(Stratum::Prym211, n).test(ez, eu), Verdict::Survive, "{n} {ez} {eu}");
        }
        for (n, ez, eu) in [(12u64, 2u64, 3u64), (12, 4, 1), (48, 16, 21)] {
            assert_eq!(ModularTest::new(Stratum::Prym22, n).test(ez, eu), Verdict::Survive);
        }
    }

    #[test]
    fn characters_match_legendre() {
        // (5/j) is +1 on squares mod 5
        assert_eq!([1u64, 2, 3, 4].map(|j| quadratic_character(5, j)), [1, -1, -1, 1]);
        // (12/j) is +1 for j = 1, 11 mod 12
        assert_eq!([1u64, 5, 7, 11].map(|j| quadratic_character(3, j)), [1, -1, -1, 1]);
        // (8/j) is +1 for j = 1, 7 mod 8
        assert_eq!([1u64, 3, 5, 7].map(|j| quadratic_character(2, j)), [1, -1, -1, 1]);
    }

    #[test]
    fn rational_common_root_family_rejected() {
        // Z = U^2 factors with the rational root r = 2 and no quadratic partner
        let st = ModularTest::new(Stratum::Prym211, 29);
        assert_eq!(st.test(2, 1), Verdict::Reject);
    }

    #[test]
    fn rational_lift() {
        let p = prime_one_mod(12, 1 << 61);
        let x = mul_mod(p - 3, pow_mod(7, p - 2, p), p);
        assert_eq!(lift_rational(x, p), Some((-3, 7)));
        // r^2 - r - 2 has rational roots, r^2 - r - 1 does not
        assert_eq!(rational_case(1, p - 1, p - 2, p), Verdict::Reject);
        assert_eq!(rational_case(1, p - 1, p - 1, p), Verdict::Survive);
        assert_eq!(rational_case(1, 0, 1, p), Verdict::Reject);
    }
}
