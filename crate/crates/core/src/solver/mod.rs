//! Solutions `(zeta_XY, zeta_U, r)` of the two torsion equations with `r`
//! real quadratic.

pub mod coeffs;
pub mod identity;
pub mod instance;
pub mod orders;
pub mod prefilter;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{CycloCtx, QuadElt};

pub use coeffs::{quadratic_coefficients, torsion_polynomial};
pub use identity::verify_resultant_identity;
pub use instance::{beta_gamma_candidates, solve_by_subfields, solve_relation_instance};
pub use orders::{admissible_orders, admissible_orders_with, GcdReading};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "2-1-1")]
    Prym211,
    #[serde(rename = "2-2")]
    Prym22,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stratum::Prym211 => "2-1-1",
            Stratum::Prym22 => "2-2",
        })
    }
}

impl FromStr for Stratum {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['(', ')', ',', ' '], "-").trim_matches('-') {
            "2-1-1" | "prym211" | "prym-2-1-1" => Ok(Stratum::Prym211),
            "2-2" | "prym22" | "prym-2-2" => Ok(Stratum::Prym22),
            other => Err(format!("unknown stratum `{other}` (expected 2-1-1 or 2-2)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("all three coefficients vanish")]
    AllZero,
    #[error("leading coefficient vanishes")]
    ZeroLeading,
    #[error("the (beta, gamma) system does not determine finitely many pairs")]
    Underdetermined,
    #[error("exact solve failed at N={n}, eXY={e_xy}, eU={e_u}: {source}")]
    Instance { n: u64, e_xy: u64, e_u: u64, source: Box<SolverError> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSolution {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "eXY")]
    pub e_xy: u64,
    #[serde(rename = "eU")]
    pub e_u: u64,
    pub r: QuadElt,
    pub stratum: Stratum,
}

impl RelationSolution {
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        (self.stratum, self.n, self.e_xy, self.e_u)
            .cmp(&(other.stratum, other.n, other.e_xy, other.e_u))
            .then_with(|| self.r.canonical_cmp(&other.r))
    }

    /// Partner under complex conjugation `(eXY, eU) -> (N - eXY, N - eU)`.
    pub fn conjugate(&self) -> Self {
        RelationSolution { e_xy: self.n - self.e_xy, e_u: self.n - self.e_u, ..self.clone() }
    }

    /// Of a conjugate pair, the member with the smaller `eXY` (then `eU`).
    pub fn is_representative(&self) -> bool {
        let c = self.conjugate();
        (self.e_xy, self.e_u) <= (c.e_xy, c.e_u)
    }
}

/// Orders `N` looped over for a stratum, closed under divisors.
pub fn order_set(stratum: Stratum) -> BTreeSet<u64> {
    let n8 = admissible_orders(8, 2);
    let set = match stratum {
        Stratum::Prym211 => n8,
        Stratum::Prym22 => {
            let n4 = admissible_orders(4, 2);
            let mut s = n8;
            s.extend(n4.iter().map(|n| 2 * n));
            s.extend(n4.iter().map(|n| 4 * n));
            s
        }
    };
    orders::divisor_closure(&set)
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    /// Solve one pair per surviving orbit and expand only orbits whose
    /// representative has a real quadratic root.  Off by default: every pair
    /// of a surviving orbit is then solved on its own.
    pub galois_reduction: bool,
    /// Only orders up to this bound.
    pub max_order: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SolveStats {
    pub orders: usize,
    /// Galois orbits of pairs with `gcd(eXY, eU, N) = 1`
    pub orbits_tested: u64,
    pub orbits_surviving: u64,
    /// pairs handed to the exact solver (without Galois reduction)
    pub pairs_solved: u64,
}

fn keep(stratum: Stratum, n: u64, e_xy: u64, e_u: u64, roots: Vec<QuadElt>) -> Vec<RelationSolution> {
    roots
        .into_iter()
        .filter(|r| !r.is_rational() && r.is_positive() && r.norm().is_negative())
        .map(|r| RelationSolution { n, e_xy, e_u, r, stratum })
        .collect()
}

fn solve_pair(stratum: Stratum, ctx: &Arc<CycloCtx>, e_xy: u64, e_u: u64) -> Result<Vec<QuadElt>, SolverError> {
    let (a, b, c) = coeffs::quadratic_coefficients_in(stratum, ctx, e_xy, e_u);
    solve_relation_instance(&a, &b, &c).map_err(|e| SolverError::Instance {
        n: ctx.n(),
        e_xy,
        e_u,
        source: Box::new(e),
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One pair per orbit of `(Z/N)^*` acting diagonally on pairs with
/// `gcd(eXY, eU, N) = 1`: the first entry is normalised to a divisor `g` of
/// `N`, the second runs over orbits of the units fixing `g`.
pub fn galois_orbit_representatives(n: u64) -> Vec<(u64, u64)> {
    let units: Vec<u64> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
    let mut reps = Vec::new();
    for g in crate::exactmath::cyclo::divisors(n) {
        if g == n {
            continue;
        }
        let stab: Vec<u64> = units.iter().copied().filter(|&j| j * g % n == g).collect();
        let mut seen = vec![false; n as usize];
        for e in 1..n {
            if seen[e as usize] {
                continue;
            }
            for &j in &stab {
                seen[(j * e % n) as usize] = true;
            }
            if gcd(gcd(g, e), n) == 1 {
                reps.push((g, e));
            }
        }
    }
    reps
}

fn orbit(n: u64, e_xy: u64, e_u: u64) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = (1..n).filter(|&j| gcd(j, n) == 1).map(|j| (j * e_xy % n, j * e_u % n)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// All solutions with negative norm and `r > 0`, canonically sorted.
pub fn enumerate_solutions(stratum: Stratum) -> Result<Vec<RelationSolution>, SolverError> {
    enumerate_solutions_with(stratum, &SolverOptions::default()).map(|(s, _)| s)
}

pub fn enumerate_solutions_with(
    stratum: Stratum,
    opts: &SolverOptions,
) -> Result<(Vec<RelationSolution>, SolveStats), SolverError> {
    let orders: Vec<u64> = order_set(stratum)
        .into_iter()
        .filter(|&n| n >= 3 && opts.max_order.is_none_or(|m| n <= m))
        .collect();
    let mut stats = SolveStats { orders: orders.len(), ..Default::default() };
    let mut all = Vec::new();
    for &n in &orders {
        let test = prefilter::ModularTest::new(stratum, n);
        // the exclusions are unions of orbits
        let reps: Vec<(u64, u64)> = galois_orbit_representatives(n)
            .into_iter()
            .filter(|&(x, u)| !prefilter::excluded(stratum, n, x, u))
            .collect();
        stats.orbits_tested += reps.len() as u64;
        let surviving: Vec<(u64, u64)> =
            reps.into_par_iter().filter(|&(x, u)| test.test(x, u) == prefilter::Verdict::Survive).collect();
        stats.orbits_surviving += surviving.len() as u64;
        if surviving.is_empty() {
            continue;
        }
        log::debug!("N={n}: {} orbits reach the exact solver", surviving.len());
        let ctx = CycloCtx::new(n);
        let solved: Vec<Result<Vec<RelationSolution>, SolverError>> = if opts.galois_reduction {
            surviving
                .par_iter()
                .map(|&(x, u)| {
                    // norm sign and positivity are not Galois invariant, so
                    // every member of a hit orbit is solved and filtered
                    if solve_pair(stratum, &ctx, x, u)?.is_empty() {
                        return Ok(Vec::new());
                    }
                    let mut out = Vec::new();
                    for (ox, ou) in orbit(n, x, u) {
                        out.extend(keep(stratum, n, ox, ou, solve_pair(stratum, &ctx, ox, ou)?));
                    }
                    Ok(out)
                })
                .collect()
        } else {
            let pairs: Vec<(u64, u64)> = surviving.iter().flat_map(|&(x, u)| orbit(n, x, u)).collect();
            stats.pairs_solved += pairs.len() as u64;
            pairs
                .par_iter()
                .map(|&(x, u)| Ok(keep(stratum, n, x, u, solve_pair(stratum, &ctx, x, u)?)))
                .collect()
        };
        for s in solved {
            all.extend(s?);
        }
    }
    all.sort_by(|a, b| a.sort_key_cmp(b));
    all.dedup();
    log::info!(
        "stratum {stratum}: {} orders, {} orbits, {} surviving the modular test, {} solutions",
        stats.orders,
        stats.orbits_tested,
        stats.orbits_surviving,
        all.len()
    );
    Ok((all, stats))
}

/// Whether the set is closed under `(eXY, eU) -> (N - eXY, N - eU)`.
pub fn is_conjugation_closed(sols: &[RelationSolution]) -> bool {
    let mut index: HashMap<(u64, u64, u64), Vec<&QuadElt>> = HashMap::new();
    for s in sols {
        index.entry((s.n, s.e_xy, s.e_u)).or_default().push(&s.r);
    }
    sols.iter().all(|s| {
        let c = s.conjugate();
        index.get(&(c.n, c.e_xy, c.e_u)).is_some_and(|rs| rs.contains(&&s.r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratum_parsing() {
        assert_eq!("2-1-1".parse::<Stratum>().unwrap(), Stratum::Prym211);
        assert_eq!("2-2".parse::<Stratum>().unwrap(), Stratum::Prym22);
        assert!("3-1".parse::<Stratum>().is_err());
        assert_eq!(serde_json::to_string(&Stratum::Prym22).unwrap(), "\"2-2\"");
    }

    #[test]
    fn orbit_representatives_cover_all_pairs() {
        for n in [6u64, 8, 12, 15] {
            let mut covered = BTreeSet::new();
            for (x, u) in galois_orbit_representatives(n) {
                covered.extend(orbit(n, x, u));
            }
            let expected: BTreeSet<(u64, u64)> = (1..n)
                .flat_map(|x| (1..n).map(move |u| (x, u)))
                .filter(|&(x, u)| gcd(gcd(x, u), n) == 1)
                .collect();
            assert_eq!(covered, expected, "n={n}");
        }
    }

    #[test]
    fn small_orders_agree_with_and_without_galois_reduction() {
        for s in [Stratum::Prym211, Stratum::Prym22] {
            let plain = enumerate_solutions_with(s, &SolverOptions { galois_reduction: false, max_order: Some(24) }).unwrap().0;
            let red = enumerate_solutions_with(s, &SolverOptions { galois_reduction: true, max_order: Some(24) }).unwrap().0;
            assert_eq!(plain, red);
        }
    }
}
