//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if
//! any fails.  Runs without the libtest harness so the lines always show.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use prymcusp::cuspgeom::{all_pairings, distinct_geometries, enumerate_geometries, height_from_width, relative_periods, Crossing, GeometryPair, ReducedMatrix};
use prymcusp::exactmath::{rat, CycloCtx, CycloElt, Field, Ring};
use prymcusp::origami::{enumerate_separatrix_diagrams, run_cell, run_geometries, CandidateReport};
use prymcusp::solver::{
    enumerate_solutions, enumerate_solutions_with, is_conjugation_closed, verify_resultant_identity, RelationSolution, SolverOptions,
    Stratum,
};
use prymcusp::QuadElt;

#[path = "../../core/tests/common/mod.rs"]
mod common;
use common::oracles::{brute_force_solutions, check_origami};
use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn key_set(sols: &[RelationSolution]) -> BTreeSet<(u64, u64, u64, String)> {
    sols.iter().map(|s| (s.n, s.e_xy, s.e_u, s.r.to_string())).collect()
}

fn solver_criterion(sols: &[RelationSolution], table: Vec<Row>) -> Outcome {
    let reps = table.len();
    ensure(sols.len() == 2 * reps, || format!("{} solutions, expected {}", sols.len(), 2 * reps))?;
    ensure(sols.iter().all(|s| s.r.norm() < rat(0, 1)), || "a solution has nonnegative norm".into())?;
    // a table row may list either member of a conjugate pair
    let pair = |n: u64, x: u64, u: u64, r: &QuadElt| (n, x.min(n - x), if x <= n - x { u } else { n - u }, r.to_string());
    let got: BTreeSet<_> = sols.iter().filter(|s| s.is_representative()).map(|s| pair(s.n, s.e_xy, s.e_u, &s.r)).collect();
    let want: BTreeSet<_> = table.iter().map(|(n, x, u, r)| pair(*n, *x, *u, r)).collect();
    ensure(got.len() == reps && got == want, || format!("representatives differ: missing {:?}, extra {:?}", want.difference(&got).collect::<Vec<_>>(), got.difference(&want).collect::<Vec<_>>()))?;
    ensure(key_set(sols) == closed(table), || "conjugates differ from the table".into())?;
    Ok(format!("{} solutions, {reps} representatives match", sols.len()))
}

fn criterion3() -> Outcome {
    for s in [Stratum::Prym211, Stratum::Prym22] {
        ensure(verify_resultant_identity(s), || format!("identity fails for {s}"))?;
    }
    Ok("identity holds for 2-1-1 and 2-2".into())
}

/// The three relations a width `w(Z1)` of the 2-1-1 geometry must satisfy,
/// written out independently of the library's own checks.
fn wz1_identities(g: &GeometryPair, wz1: &QuadElt) -> [bool; 3] {
    let d = g.d0();
    let r2 = &g.vertical.r2;
    let h2 = height_from_width(r2).expect("negative norm");
    let lin = *wz1 == QuadElt::rational(rat(g.mred.m11p13 as i64, 1), d).plus(&h2.scale(&rat(g.mred.m21 as i64, 1)));
    let ratio = g.w_z2.divide(wz1).as_ref() == Some(r2);
    let horizontal = QuadElt::rational(rat(2, 1), d).plus(&r2.times(&h2));
    let vertical = wz1.times(&g.h_z1).scale(&rat(2, 1)).plus(&g.w_z2.times(&g.h_z2));
    [lin, ratio, horizontal == vertical]
}

fn criterion4(s211: &[RelationSolution], s22: &[RelationSolution]) -> Outcome {
    let g22 = enumerate_geometries(Stratum::Prym22, s22);
    let got: BTreeSet<(ReducedMatrix, u64, String)> = g22.iter().map(|g| (g.mred, g.d0(), g.r2().to_string())).collect();
    let want: BTreeSet<_> = geometry_table_22().into_iter().map(|(m, r)| (m, r.d0(), r.to_string())).collect();
    ensure(g22.len() == 7 && got == want, || format!("2-2 geometries {got:?}"))?;
    let all = distinct_geometries(&all_pairings(s211));
    let discarded = all.iter().filter(|g| g.crossing == Crossing::C2).count();
    ensure(discarded == 2, || format!("{discarded} C2-crossing 2-1-1 variants, expected 2"))?;
    let g211 = enumerate_geometries(Stratum::Prym211, s211);
    let m0 = ReducedMatrix::new(0, 6, 3, 3).unwrap();
    ensure(g211.len() == 1 && g211[0].mred == m0 && g211[0].d0() == 33, || format!("2-1-1 geometries {:?}", g211.iter().map(|g| g.mred).collect::<Vec<_>>()))?;
    let g = &g211[0];
    let derived = q(9, 3, 2, 33);
    ensure(g.w_z1 == derived, || format!("w(Z1) = {}", g.w_z1))?;
    ensure(wz1_identities(g, &derived) == [true; 3], || format!("derived w(Z1) identities {:?}", wz1_identities(g, &derived)))?;
    let printed = wz1_identities(g, &q(9, 1, 2, 33));
    ensure(printed == [false; 3], || format!("printed w(Z1) identities {printed:?}"))?;
    Ok("7 matrices with D0 and r2; 1 geometry [[0,6],[3,3]], D0=33; w(Z1)=(9+3√33)/2 consistent, (9+√33)/2 not".into())
}

fn criterion5(report: &CandidateReport) -> Outcome {
    let sd4 = report.diagrams.iter().position(|d| d.is_sd4_analog()).ok_or("no worked diagram")?;
    let mut counts: Vec<usize> = report.matrices.iter().map(|(m, _)| report.cell(m, sd4).map_or(0, |c| c.arithmetic)).collect();
    counts.sort_unstable();
    ensure(counts == [0, 0, 24, 32, 180, 228, 336], || format!("arithmetic counts {counts:?}"))?;
    let m1 = ReducedMatrix::new(72, 48, 24, 18).unwrap();
    let cell = report.cell(&m1, sd4).ok_or("no D0=2 cell")?;
    ensure(cell.admissible == 6 && cell.candidates == 3, || format!("D0=2: {} admissible, {} candidates", cell.admissible, cell.candidates))?;
    let protos: BTreeSet<(i64, i64, i64, i64, String, u64)> = report
        .candidates
        .iter()
        .filter(|c| c.diagram == sd4 && c.matrix == m1)
        .filter_map(|c| c.prototype.as_ref())
        .map(|p| (p.w, p.h, p.t, p.e, p.slit.0.to_string(), p.d))
        .collect();
    let slit = q(3, 2, 6, 2).to_string();
    let want: BTreeSet<_> = [(4, 1, 0, 0, slit.clone(), 32), (12, 3, 1, 0, slit.clone(), 288), (12, 3, 2, 0, slit, 288)].into_iter().collect();
    ensure(protos == want, || format!("D0=2 prototypes {protos:?}"))?;
    Ok(format!("counts {counts:?}; D0=2: 6 admissible, prototypes (4,1,0,0), (12,3,1,0), (12,3,2,0)"))
}

fn criterion6(report: &CandidateReport) -> Outcome {
    let sd4 = report.diagrams.iter().position(|d| d.is_sd4_analog()).ok_or("no worked diagram")?;
    let before = report.per_diagram_candidates();
    let after = report.per_diagram_after_filter();
    let total = report.final_candidates().len();
    let fields = report.trace_fields();
    let detail = format!("per diagram {before:?}, after filter {after:?}, final {total}, fields {fields:?}");
    let mut sorted = before.clone();
    sorted.sort_unstable();
    let mut problems = Vec::new();
    if sorted != [0, 1, 12, 15, 18, 18, 20, 20] {
        problems.push("multiset differs from {20, 1, 0, 15, 12, 18, 18, 20}".to_string());
    }
    if before[sd4] - after[sd4] != 3 {
        problems.push(format!("worked column drops by {}", before[sd4] - after[sd4]));
    }
    if total > 92 {
        problems.push("more than 92 final candidates".into());
    }
    if !fields.is_subset(&[2, 3, 33].into_iter().collect()) {
        problems.push("unexpected trace field".into());
    }
    if problems.is_empty() { Ok(detail) } else { Err(format!("{}; {detail}", problems.join("; "))) }
}

fn criterion7(report: &CandidateReport) -> Outcome {
    let n = report.final_candidates().len();
    ensure(n == 0, || format!("{n} final candidates"))?;
    Ok(format!("{} cells, 0 candidates", report.cells.len()))
}

fn cyclo(n: u64, cs: &[(i64, i64)]) -> CycloElt {
    CycloElt::from_coeffs(&CycloCtx::new(n), cs.iter().map(|&(p, q)| rat(p, q)).collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn field_properties() -> Result<(), String> {
    let quad = |d: u64, (a, b, c, e): (i64, i64, i64, i64)| QuadElt::new(rat(a, b), rat(c, e), d).unwrap();
    let parts = || (-20i64..21, 1i64..7, -20i64..21, 1i64..7);
    let mut runner = TestRunner::new(Config { failure_persistence: None, ..Config::with_cases(64) });
    runner
        .run(&(prop::sample::select(vec![2u64, 3, 6, 33]), parts(), parts(), parts()), |(d, x, y, z)| {
            let (x, y, z) = (quad(d, x), quad(d, y), quad(d, z));
            prop_assert_eq!(x.times(&y), y.times(&x));
            prop_assert_eq!(x.times(&y.plus(&z)), x.times(&y).plus(&x.times(&z)));
            prop_assert_eq!(x.times(&y).norm(), x.norm() * y.norm());
            if !x.is_zero_elt() {
                prop_assert!(x.times(&x.inverse().unwrap()).is_one_elt());
            }
            Ok(())
        })
        .map_err(|e| format!("quadratic field axioms: {e}"))?;
    let coeffs = || prop::collection::vec((-9i64..10, 1i64..5), 1..16);
    let mut runner = TestRunner::new(Config { failure_persistence: None, ..Config::with_cases(32) });
    runner
        .run(&(3u64..=48, coeffs(), coeffs(), 1u64..100), |(n, x, y, j)| {
            prop_assume!(gcd(j, n) == 1);
            let (x, y) = (cyclo(n, &x), cyclo(n, &y));
            let s = |e: &CycloElt| e.galois(j as i64).unwrap();
            prop_assert_eq!(s(&x.times(&y)), s(&x).times(&s(&y)));
            prop_assert_eq!(s(&x.plus(&y)), s(&x).plus(&s(&y)));
            Ok(())
        })
        .map_err(|e| format!("Galois automorphisms: {e}"))
}

fn criterion8(s211: &[RelationSolution], s22: &[RelationSolution]) -> Outcome {
    field_properties()?;
    for sols in [s211, s22] {
        ensure(is_conjugation_closed(sols), || "solution set not closed under conjugation".into())?;
        for t in sols.iter().flat_map(relative_periods) {
            let flux = t.r2.times(&t.h2.conj()).plus(&QuadElt::rational(rat(2, 1), t.r2.d0()));
            ensure(flux.is_zero_elt(), || format!("flux identity fails for r2 = {}", t.r2))?;
        }
    }
    let upto = |s: Stratum| enumerate_solutions_with(s, &SolverOptions { galois_reduction: false, max_order: Some(24) }).unwrap().0;
    for s in [Stratum::Prym211, Stratum::Prym22] {
        ensure(key_set(&upto(s)) == brute_force_solutions(s, 24), || format!("solver differs from brute force for {s}"))?;
    }
    let mut squares = 0;
    for (s, (a, b, c, d)) in [
        (Stratum::Prym22, (1, 2, 1, 1)),
        (Stratum::Prym22, (2, 2, 1, 2)),
        (Stratum::Prym211, (2, 2, 1, 1)),
        (Stratum::Prym211, (1, 2, 1, 3)),
        (Stratum::Prym22, (3, 6, 3, 0)),
        (Stratum::Prym211, (0, 6, 3, 3)),
    ] {
        squares += check_origami(s, ReducedMatrix::new(a, b, c, d).unwrap())?;
    }
    let geoms = enumerate_geometries(Stratum::Prym22, s22);
    let m1 = geoms.iter().find(|g| g.mred == ReducedMatrix::new(72, 48, 24, 18).unwrap()).ok_or("no D0=2 geometry")?;
    let diagrams = enumerate_separatrix_diagrams(Stratum::Prym22);
    let sd4 = diagrams.iter().position(|d| d.is_sd4_analog()).ok_or("no worked diagram")?;
    let run = |jobs: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        pool.install(|| {
            let sols = serde_json::to_string(&upto(Stratum::Prym22)).unwrap();
            let cell = serde_json::to_string(&run_cell(Stratum::Prym22, sd4, &diagrams[sd4], m1)).unwrap();
            sols + &cell
        })
    };
    let one = run(1);
    ensure(one == run(4) && one == run(16), || "output depends on the pool size".into())?;
    Ok(format!("field axioms, Galois, flux, closure, solver oracle N <= 24, origami oracle ({squares} surfaces), pools 1/4/16"))
}

fn report_line(n: usize, outcome: std::thread::Result<Outcome>) -> bool {
    let outcome = outcome.unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
    });
    match outcome {
        Ok(detail) => {
            println!("criterion {n}: PASS ({detail})");
            true
        }
        Err(detail) => {
            println!("criterion {n}: FAIL ({detail})");
            false
        }
    }
}

fn main() -> ExitCode {
    let solve = |s| catch_unwind(|| enumerate_solutions(s).map_err(|e| e.to_string()));
    let flat = |r: std::thread::Result<Result<Vec<RelationSolution>, String>>| {
        r.unwrap_or_else(|_| Err("solver panicked".into()))
    };
    let s211 = flat(solve(Stratum::Prym211));
    let s22 = flat(solve(Stratum::Prym22));
    let need = |r: &Result<Vec<RelationSolution>, String>| r.as_ref().map(|v| v.clone()).map_err(|e| e.clone());
    let mut ok = Vec::new();
    ok.push(report_line(1, Ok(need(&s211).and_then(|s| solver_criterion(&s, table_211())))));
    ok.push(report_line(2, Ok(need(&s22).and_then(|s| solver_criterion(&s, table_22())))));
    ok.push(report_line(3, catch_unwind(criterion3)));
    let both = need(&s211).and_then(|a| need(&s22).map(|b| (a, b)));
    ok.push(report_line(4, catch_unwind(|| both.clone().and_then(|(a, b)| criterion4(&a, &b)))));
    let report = |s: Stratum, sols: &Result<Vec<RelationSolution>, String>| {
        catch_unwind(AssertUnwindSafe(|| need(sols).map(|v| run_geometries(s, &enumerate_geometries(s, &v), None))))
            .unwrap_or_else(|_| Err("pipeline panicked".into()))
    };
    let r22 = report(Stratum::Prym22, &s22);
    ok.push(report_line(5, catch_unwind(|| r22.clone().and_then(|r| criterion5(&r)))));
    ok.push(report_line(6, catch_unwind(|| r22.clone().and_then(|r| criterion6(&r)))));
    let r211 = report(Stratum::Prym211, &s211);
    ok.push(report_line(7, catch_unwind(|| r211.clone().and_then(|r| criterion7(&r)))));
    ok.push(report_line(8, catch_unwind(|| both.clone().and_then(|(a, b)| criterion8(&a, &b)))));
    let passed = ok.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria pass", ok.len());
    if passed == ok.len() { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
