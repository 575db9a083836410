//! Brute-force oracles shared by the integration tests and the acceptance
//! runner.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use prymcusp::cuspgeom::ReducedMatrix;
use prymcusp::origami::arith::{enumerate_arithmetic_surfaces, square_counts};
use prymcusp::origami::diagram::{enumerate_separatrix_diagrams, DiagramKey};
use prymcusp::origami::surface::{Direction, Origami};
use prymcusp::solver::{order_set, quadratic_coefficients, solve_by_subfields, Stratum};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Every pair at every order, solved through the subfield route, then
/// normalised to the least order carrying both roots of unity.
pub fn brute_force_solutions(stratum: Stratum, max: u64) -> BTreeSet<(u64, u64, u64, String)> {
    let mut out = BTreeSet::new();
    for n in order_set(stratum).into_iter().filter(|&n| n >= 2 && n <= max) {
        for x in 1..n {
            for u in 1..n {
                let zeta_u_real = 2 * u == n;
                let prym22_skip = stratum == Stratum::Prym22 && 2 * x == n && (4 * u == n || 4 * u == 3 * n);
                if zeta_u_real || prym22_skip {
                    continue;
                }
                let (a, b, c) = quadratic_coefficients(stratum, n, x, u);
                let g = gcd(gcd(x, u), n);
                for r in solve_by_subfields(&a, &b, &c).unwrap() {
                    if !r.is_rational() && r.is_positive() && r.norm().is_negative() {
                        out.insert((n / g, x / g, u / g, r.to_string()));
                    }
                }
            }
        }
    }
    out
}

type Form = (Vec<usize>, Vec<usize>);

const NONE: usize = usize::MAX;

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = combinations(&items[1..], k);
    for mut c in combinations(&items[1..], k - 1) {
        c.insert(0, items[0]);
        out.push(c);
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All `v` on the `rho`-invariant set `free` with `rho v rho = v^-1`,
/// extending the partial `v`.
fn complete(v: &mut [usize], vi: &mut [usize], rho: &[usize], free: &[usize], out: &mut Vec<Vec<usize>>) {
    let Some(&s) = free.iter().find(|&&s| v[s] == NONE) else {
        out.push(v.to_vec());
        return;
    };
    for &t in free {
        if vi[t] != NONE {
            continue;
        }
        let mut undo = Vec::new();
        let mut ok = true;
        // v(s) = t forces v(rho t) = rho s
        for (a, b) in [(s, t), (rho[t], rho[s])] {
            if v[a] == b {
                continue;
            }
            if v[a] != NONE || vi[b] != NONE {
                ok = false;
                break;
            }
            v[a] = b;
            vi[b] = a;
            undo.push(a);
        }
        if ok {
            complete(v, vi, rho, free, out);
        }
        for a in undo {
            vi[v[a]] = NONE;
            v[a] = NONE;
        }
    }
}

/// Canonical forms of all qualifying origamis, keyed by horizontal diagram.
pub fn origami_oracle(stratum: Stratum, m: &ReducedMatrix) -> BTreeMap<DiagramKey, BTreeSet<Form>> {
    let (a1, a2, b1, b2) = square_counts(m).unwrap();
    let (a1, a2, b1, b2) = (a1 as usize, a2 as usize, b1 as usize, b2 as usize);
    let n = 2 * a1 + a2;
    let row = |s: usize| if s < a1 { 0 } else if s < a1 + a2 { 1 } else { 2 };
    let start = [0, a1, a1 + a2];
    let width = [a1, a2, a1];
    let h: Vec<usize> = (0..n)
        .map(|s| {
            let r = row(s);
            start[r] + (s - start[r] + 1) % width[r]
        })
        .collect();
    let mut profile = match stratum {
        Stratum::Prym22 => vec![2, 2],
        Stratum::Prym211 => vec![2, 1, 1],
    };
    profile.sort_unstable_by(|a, b| b.cmp(a));
    let outer: Vec<usize> = (0..n).filter(|&s| row(s) != 1).collect();
    let middle: Vec<usize> = (a1..a1 + a2).collect();
    let mut found: BTreeMap<DiagramKey, BTreeSet<Form>> = BTreeMap::new();
    // rotating rows relabels squares without changing h, so the reflection
    // C1 -> C3 can be centred at 0 and the one of C2 at 0 or 1
    for c2 in 0..a2.min(2) {
        let mut rho = vec![0; n];
        for x in 0..a2 {
            rho[a1 + x] = a1 + (c2 + a2 - x) % a2;
        }
        for x in 0..a1 {
            let y = (a1 - x) % a1;
            rho[x] = a1 + a2 + y;
            rho[a1 + a2 + y] = x;
        }
        for o1 in combinations(&outer, m.m11p13 as usize) {
            for m1 in combinations(&middle, m.m21 as usize) {
                let z1: Vec<usize> = o1.iter().chain(&m1).copied().collect();
                let z3: BTreeSet<usize> = z1.iter().map(|&s| rho[s]).collect();
                if z1.iter().any(|s| z3.contains(s)) || z3.iter().min() < z1.iter().min() {
                    continue;
                }
                let z2: Vec<usize> = (0..n).filter(|s| !z1.contains(s) && !z3.contains(s)).collect();
                debug_assert_eq!((z1.len(), z2.len()), (b1, b2));
                for tail in permutations(&z1[1..]) {
                    let cycle: Vec<usize> = std::iter::once(z1[0]).chain(tail).collect();
                    let (mut v, mut vi) = (vec![NONE; n], vec![NONE; n]);
                    for k in 0..b1 {
                        let (s, t) = (cycle[k], cycle[(k + 1) % b1]);
                        v[s] = t;
                        v[rho[t]] = rho[s];
                    }
                    for s in 0..n {
                        if v[s] != NONE {
                            vi[v[s]] = s;
                        }
                    }
                    let mut vs = Vec::new();
                    complete(&mut v, &mut vi, &rho, &z2, &mut vs);
                    for v in vs {
                        let o = Origami { h: h.clone(), v, rho: rho.clone() };
                        if !o.involution_ok() || o.zero_profile() != profile || !o.is_connected() {
                            continue;
                        }
                        if o.cylinder_decomposition(Direction::Horizontal).len() != 3 {
                            continue;
                        }
                        let vc = o.cylinder_decomposition(Direction::Vertical);
                        if vc.len() != 3 || vc.iter().any(|c| c.height != 1) || vc.iter().map(|c| c.width).ne([b1, b2, b1]) {
                            continue;
                        }
                        found.entry(o.horizontal_diagram_key()).or_default().insert(o.canonical_form());
                    }
                }
            }
        }
    }
    found
}

/// Compares the enumeration on every listed diagram with the oracle and
/// returns the number of surfaces found.
pub fn check_origami(stratum: Stratum, m: ReducedMatrix) -> Result<usize, String> {
    let diagrams = enumerate_separatrix_diagrams(stratum);
    let want = origami_oracle(stratum, &m);
    // diagrams whose lengths force a rational ratio w(C2)/w(C1) are not
    // listed, so only the listed ones are compared
    let mut total = 0;
    for (i, d) in diagrams.iter().enumerate() {
        let got: BTreeSet<Form> = enumerate_arithmetic_surfaces(d, &m).iter().map(|s| s.origami.canonical_form()).collect();
        let expected = want.get(&d.key()).cloned().unwrap_or_default();
        if got != expected {
            return Err(format!("{stratum} {m} diagram {i}: {} enumerated, {} by brute force", got.len(), expected.len()));
        }
        total += got.len();
    }
    Ok(total)
}

