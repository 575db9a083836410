//! Exact solution of one instance `a r^2 + b r + c = 0` over `Q(zeta_N)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactmath::cyclo::prime_factors;
use crate::exactmath::field::squarefree_part;
use crate::exactmath::quad::is_squarefree;
use crate::exactmath::{as_quadratic, sqrt_in_cyclotomic, CycloCtx, CycloElt, Field, QuadElt, Rational, Ring, UniPoly};

use super::SolverError;

/// Coefficient rows over the monomials `[u^2, v^2, uv, u, v, 1]`.
pub type QuadricRow = [Rational; 6];

fn row_is_zero(r: &QuadricRow) -> bool {
    r.iter().all(|c| c.is_zero())
}

/// Reduced row echelon basis of the span of `rows`.
fn echelon(rows: &[QuadricRow]) -> Vec<QuadricRow> {
    let mut basis: Vec<QuadricRow> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for k in 0..6 {
                    v[k] -= &f * &b[k];
                }
            }
        }
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else { continue };
        let inv = v[pc].recip();
        for c in v.iter_mut() {
            *c *= &inv;
        }
        for b in basis.iter_mut() {
            if !b[pc].is_zero() {
                let f = b[pc].clone();
                for k in 0..6 {
                    b[k] -= &f * &v[k];
                }
            }
        }
        basis.push(v);
        pivots.push(pc);
    }
    basis
}

fn upoly(c: Vec<Rational>) -> UniPoly<Rational> {
    UniPoly::new(&(), c)
}

/// Coefficients in `u` (lowest first) with polynomial coefficients in `v`.
fn in_u(r: &QuadricRow) -> [UniPoly<Rational>; 3] {
    [
        upoly(vec![r[5].clone(), r[4].clone(), r[1].clone()]),
        upoly(vec![r[3].clone(), r[2].clone()]),
        upoly(vec![r[0].clone()]),
    ]
}

fn trim(c: &[UniPoly<Rational>]) -> Vec<UniPoly<Rational>> {
    let mut v = c.to_vec();
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

/// Resultant in `u` of two rows, as a polynomial in `v`.
fn resultant_u(f: &QuadricRow, g: &QuadricRow) -> UniPoly<Rational> {
    let (f, g) = (trim(&in_u(f)), trim(&in_u(g)));
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 && n == 0 {
        return upoly(vec![Rational::one()]);
    }
    // Sylvester matrix of size m + n over Q[v], determinant by cofactor expansion
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![upoly(vec![]); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![upoly(vec![]); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    det(&rows)
}

fn det(m: &[Vec<UniPoly<Rational>>]) -> UniPoly<Rational> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = upoly(vec![]);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<UniPoly<Rational>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][col].mul(&det(&minor));
        acc = if col % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

fn eval_row(r: &QuadricRow, u: &Rational, v: &Rational) -> Rational {
    &r[0] * u * u + &r[1] * v * v + &r[2] * u * v + &r[3] * u + &r[4] * v + &r[5]
}

fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let (d, _) = squarefree_part(q);
    d.is_one()
}

/// Rational points of one conic, when they are forced to be finite.
fn single_conic(r: &QuadricRow) -> Result<Vec<(Rational, Rational)>, SolverError> {
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let [a, b, c, d, e, _] = r.clone();
    if a.is_zero() && b.is_zero() && c.is_zero() {
        if d.is_zero() && e.is_zero() {
            return Ok(Vec::new());
        }
        return Err(SolverError::Underdetermined);
    }
    // center: [[2a, c], [c, 2b]] (u, v) = -(d, e)
    let m_det = &four * &a * &b - &c * &c;
    if m_det.is_zero() {
        return Err(SolverError::Underdetermined);
    }
    let u0 = (&c * &e - &two * &b * &d) / &m_det;
    let v0 = (&c * &d - &two * &a * &e) / &m_det;
    if !eval_row(r, &u0, &v0).is_zero() {
        // smooth conic: no rational point or infinitely many
        return Err(SolverError::Underdetermined);
    }
    let disc = &c * &c - &four * &a * &b;
    if disc.is_positive() && is_rational_square(&disc) {
        return Err(SolverError::Underdetermined);
    }
    Ok(vec![(u0, v0)])
}

/// All rational common zeros of a system of quadrics in two unknowns.
pub fn solve_quadric_system(rows: &[QuadricRow]) -> Result<Vec<(Rational, Rational)>, SolverError> {
    let basis = echelon(rows);
    match basis.len() {
        0 => return Err(SolverError::Underdetermined),
        1 => return single_conic(&basis[0]),
        _ => {}
    }
    // candidates for v: from a row free of u, or from a nonzero resultant in u
    let mut v_cands: Option<Vec<Rational>> = None;
    for r in &basis {
        if r[0].is_zero() && r[2].is_zero() && r[3].is_zero() {
            v_cands = Some(upoly(vec![r[5].clone(), r[4].clone(), r[1].clone()]).rational_roots());
            break;
        }
    }
    if v_cands.is_none() {
        'outer: for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let res = resultant_u(&basis[i], &basis[j]);
                if !res.is_zero() {
                    v_cands = Some(res.rational_roots());
                    break 'outer;
                }
            }
        }
    }
    let Some(mut vs) = v_cands else { return Err(SolverError::Underdetermined) };
    vs.sort();
    vs.dedup();
    let mut out = Vec::new();
    for v in vs {
        let mut g: Option<UniPoly<Rational>> = None;
        for r in &basis {
            let p = upoly(vec![&r[5] + &r[4] * &v + &r[1] * &v * &v, &r[3] + &r[2] * &v, r[0].clone()]);
            if p.is_zero() {
                continue;
            }
            g = Some(match g {
                None => p,
                Some(h) => h.gcd(&p),
            });
        }
        let Some(g) = g else { return Err(SolverError::Underdetermined) };
        let mut us = g.rational_roots();
        us.sort();
        us.dedup();
        for u in us {
            if basis.iter().all(|r| eval_row(r, &u, &v).is_zero()) {
                out.push((u, v.clone()));
            }
        }
    }
    Ok(out)
}

/// Rows of `Res(a x^2 + b x + c, x^2 + beta x + gamma)` in the power basis.
fn beta_gamma_rows(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Vec<QuadricRow> {
    let ac = a.times(c);
    let monos = [
        ac.clone(),                                                   // beta^2
        a.times(a),                                                   // gamma^2
        a.times(b).negated(),                                         // beta gamma
        b.times(c).negated(),                                         // beta
        b.times(b).minus(&ac.plus(&ac)),                              // gamma
        c.times(c),                                                   // 1
    ];
    (0..a.context().phi())
        .map(|i| std::array::from_fn(|k| monos[k].coeffs()[i].clone()))
        .filter(|r: &QuadricRow| !row_is_zero(r))
        .collect()
}

/// Rational `(beta, gamma)` such that `x^2 + beta x + gamma` shares a root
/// with `a x^2 + b x + c` in `Q(zeta_N)`.
pub fn beta_gamma_candidates(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Result<Vec<(Rational, Rational)>, SolverError> {
    if a.is_zero_elt() {
        return Err(SolverError::ZeroLeading);
    }
    solve_quadric_system(&beta_gamma_rows(a, b, c))
}

/// Real quadratic `r` with `[Q(r):Q] = 2` given by an irreducible rational
/// monic quadratic, both roots.
fn roots_of_rational_monic(p: &Rational, q: &Rational) -> Vec<QuadElt> {
    let disc = p * p - Rational::from_integer(4.into()) * q;
    if !disc.is_positive() || is_rational_square(&disc) {
        return Vec::new();
    }
    [true, false].iter().filter_map(|&s| QuadElt::root_of_monic(p, q, s)).collect()
}

fn check_all_zero(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Result<(), SolverError> {
    if a.is_zero_elt() && b.is_zero_elt() && c.is_zero_elt() {
        Err(SolverError::AllZero)
    } else {
        Ok(())
    }
}

/// Cases that do not need the quadratic-subfield search: `a = 0`, and
/// rational ratios `b/a`, `c/a`.
fn easy_cases(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Option<Vec<QuadElt>> {
    if a.is_zero_elt() {
        if b.is_zero_elt() {
            return Some(Vec::new());
        }
        let r = c.negated().times(&b.inverse().expect("nonzero"));
        return Some(as_quadratic(&r).filter(|q| !q.is_rational()).into_iter().collect());
    }
    let inv = a.inverse().expect("nonzero");
    let (p, q) = (b.times(&inv), c.times(&inv));
    match (p.as_rational(), q.as_rational()) {
        (Some(p), Some(q)) => Some(roots_of_rational_monic(&p, &q)),
        _ => None,
    }
}

fn finish(mut out: Vec<QuadElt>) -> Vec<QuadElt> {
    out.sort_by(|x, y| x.canonical_cmp(y));
    out.dedup();
    out
}

/// All real `r` with `[Q(r):Q] = 2` solving `a r^2 + b r + c = 0`, both signs.
///
/// Ratios `b/a`, `c/a` in `Q` are factored directly; otherwise `r` must lie
/// in `Q(zeta_N)` and is found from the rational `(beta, gamma)` with
/// `r^2 + beta r + gamma = 0`.  If that system does not pin down finitely
/// many pairs, the search over real quadratic subfields decides.
pub fn solve_relation_instance(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Result<Vec<QuadElt>, SolverError> {
    check_all_zero(a, b, c)?;
    if let Some(v) = easy_cases(a, b, c) {
        return Ok(finish(v));
    }
    let cands = match beta_gamma_candidates(a, b, c) {
        Ok(v) => v,
        Err(SolverError::Underdetermined) => {
            log::debug!("beta/gamma system underdetermined at N={}, using subfield search", a.n());
            return solve_by_subfields(a, b, c);
        }
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    for (beta, gamma) in cands {
        let l = b.minus(&a.scale(&beta));
        if l.is_zero_elt() {
            continue;
        }
        let k = a.scale(&gamma).minus(c);
        let r = k.times(&l.inverse().expect("nonzero"));
        let mp = r.min_poly();
        if mp.degree() != Some(2) || mp.coeff(1) != beta || mp.coeff(0) != gamma {
            continue;
        }
        if roots_of_rational_monic(&beta, &gamma).is_empty() {
            continue;
        }
        if let Some(q) = as_quadratic(&r) {
            out.push(q);
        }
    }
    Ok(finish(out))
}

/// Squarefree `d > 1` with `Q(sqrt d)` inside `Q(zeta_N)`.
pub fn real_quadratic_subfields(n: u64) -> Vec<u64> {
    let ps = prime_factors(n);
    let mut out = Vec::new();
    for mask in 1u32..(1 << ps.len()) {
        let d: u64 = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
        let conductor = if d % 4 == 1 { d } else { 4 * d };
        if d > 1 && is_squarefree(d) && n % conductor == 0 {
            out.push(d);
        }
    }
    out.sort_unstable();
    out
}

/// Same contract as [`solve_relation_instance`], by writing `r = x + y sqrt d`
/// for every real quadratic subfield and solving for rational `x, y`.
pub fn solve_by_subfields(a: &CycloElt, b: &CycloElt, c: &CycloElt) -> Result<Vec<QuadElt>, SolverError> {
    check_all_zero(a, b, c)?;
    if let Some(v) = easy_cases(a, b, c) {
        return Ok(finish(v));
    }
    let ctx: &Arc<CycloCtx> = a.context();
    let mut out = Vec::new();
    for d in real_quadratic_subfields(ctx.n()) {
        let s = sqrt_in_cyclotomic(ctx, d).expect("subfield");
        let dq = Rational::from_integer(BigInt::from(d));
        let two = Rational::from_integer(2.into());
        let monos = [a.clone(), a.scale(&dq), a.times(&s).scale(&two), b.clone(), b.times(&s), c.clone()];
        let rows: Vec<QuadricRow> = (0..ctx.phi())
            .map(|i| std::array::from_fn(|k| monos[k].coeffs()[i].clone()))
            .filter(|r: &QuadricRow| !row_is_zero(r))
            .collect();
        for (x, y) in solve_quadric_system(&rows)? {
            if !y.is_zero() {
                out.push(QuadElt::new(x, y, d).expect("squarefree"));
            }
        }
    }
    Ok(finish(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_int};
    use crate::solver::coeffs::quadratic_coefficients;
    use crate::solver::Stratum;

    fn cst(ctx: &Arc<CycloCtx>, n: i64) -> CycloElt {
        CycloElt::from_int_in(ctx, n)
    }

    #[test]
    fn sqrt_two() {
        let ctx = CycloCtx::new(8);
        let r = solve_relation_instance(&cst(&ctx, 1), &cst(&ctx, 0), &cst(&ctx, -2)).unwrap();
        assert_eq!(r, vec![QuadElt::from_ints(0, -1, 1, 2), QuadElt::from_ints(0, 1, 1, 2)]);
        let pos: Vec<_> = r.into_iter().filter(|q| q.is_positive()).collect();
        assert_eq!(pos, vec![QuadElt::sqrt_d(2)]);
    }

    #[test]
    fn complex_roots_rejected() {
        let ctx = CycloCtx::new(3);
        assert!(solve_relation_instance(&cst(&ctx, 1), &cst(&ctx, 0), &cst(&ctx, 1)).unwrap().is_empty());
    }

    #[test]
    fn all_zero_is_an_error() {
        let ctx = CycloCtx::new(5);
        let z = cst(&ctx, 0);
        assert!(matches!(solve_relation_instance(&z, &z, &z), Err(SolverError::AllZero)));
    }

    #[test]
    fn table_row_6_3_2() {
        let (a, b, c) = quadratic_coefficients(Stratum::Prym211, 6, 3, 2);
        let r = solve_relation_instance(&a, &b, &c).unwrap();
        assert!(r.contains(&QuadElt::from_ints(0, 2, 1, 2)), "{r:?}");
    }

    #[test]
    fn beta_gamma_rational_input() {
        let ctx = CycloCtx::new(1);
        let v = beta_gamma_candidates(&cst(&ctx, 1), &cst(&ctx, 0), &cst(&ctx, -2)).unwrap();
        assert_eq!(v, vec![(rat_int(0), rat_int(-2))]);
    }

    #[test]
    fn beta_gamma_contains_min_poly_of_table_value() {
        let (a, b, c) = quadratic_coefficients(Stratum::Prym211, 6, 1, 1);
        let v = beta_gamma_candidates(&a, &b, &c).unwrap();
        assert!(v.contains(&(rat(-1, 1), rat(-2, 3))), "{v:?}");
    }

    #[test]
    fn beta_gamma_no_solution() {
        let ctx = CycloCtx::new(7);
        let z = CycloElt::zeta(&ctx);
        let (a, b, c) = (cst(&ctx, 1), z.clone(), z.times(&z).times(&z));
        let v = beta_gamma_candidates(&a, &b, &c).unwrap();
        assert!(v.iter().all(|(be, ga)| roots_of_rational_monic(be, ga).is_empty()), "{v:?}");
        assert!(solve_relation_instance(&a, &b, &c).unwrap().is_empty());
    }

    #[test]
    fn subfield_path_agrees() {
        for (s, n, ez, eu) in [(Stratum::Prym211, 6u64, 1u64, 1u64), (Stratum::Prym211, 24, 3, 4), (Stratum::Prym22, 12, 4, 1), (Stratum::Prym22, 12, 2, 3)] {
            let (a, b, c) = quadratic_coefficients(s, n, ez, eu);
            assert_eq!(solve_relation_instance(&a, &b, &c).unwrap(), solve_by_subfields(&a, &b, &c).unwrap());
        }
    }

    #[test]
    fn subfields_of_24() {
        assert_eq!(real_quadratic_subfields(24), vec![2, 3, 6]);
        assert_eq!(real_quadratic_subfields(12), vec![3]);
        assert_eq!(real_quadratic_subfields(5), vec![5]);
    }

    #[test]
    fn degenerate_conic_single_point() {
        // -2 u^2 + (v + 2)^2 = 0 has only (0, -2)
        let row: QuadricRow = [rat_int(-2), rat_int(1), rat_int(0), rat_int(0), rat_int(4), rat_int(4)];
        assert_eq!(solve_quadric_system(&[row]).unwrap(), vec![(rat_int(0), rat_int(-2))]);
    }
}
