use std::collections::BTreeSet;

use prymcusp::cuspgeom::*;
use prymcusp::exactmath::{rat, Field, Ring};
use prymcusp::solver::Stratum;
use prymcusp::QuadElt;

mod common;
use common::*;

fn m(a: u64, b: u64, c: u64, d: u64) -> ReducedMatrix {
    ReducedMatrix::new(a, b, c, d).unwrap()
}

/// `(M^red, r2, w(Z1), w(Z2), h(Z1), h(Z2))` as printed for the seven 2-2 matrices.
fn printed_22() -> Vec<(ReducedMatrix, QuadElt, [QuadElt; 4])> {
    vec![
        (m(72, 48, 24, 18), q(0, 1, 2, 2), [q(72, 48, 1, 2), q(48, 36, 1, 2), q(3, -2, 24, 2), q(-4, 3, 12, 2)]),
        (m(72, 24, 12, 6), q(-1, 1, 2, 3), [q(48, 24, 1, 3), q(12, 12, 1, 3), q(2, -1, 24, 3), q(-5, 3, 12, 3)]),
        (m(72, 24, 48, 18), q(1, 1, 2, 3), [q(168, 96, 1, 3), q(60, 36, 1, 3), q(2, -1, 24, 3), q(-5, 3, 12, 3)]),
        (m(36, 12, 30, 12), q(0, 1, 1, 3), [q(36, 20, 1, 3), q(12, 8, 1, 3), q(2, -1, 12, 3), q(-5, 3, 6, 3)]),
        (m(6, 24, 12, 54), q(3, 1, 2, 33), [q(12, 2, 1, 33), q(51, 9, 1, 33), q(6, -1, 6, 33), q(-5, 1, 12, 33)]),
        (m(6, 24, 3, 18), q(-3, 1, 2, 33), [q(9, 1, 2, 33), q(15, 3, 1, 33), q(6, -1, 6, 33), q(-5, 1, 12, 33)]),
        (m(3, 6, 3, 0), q(-3, 1, 2, 33), [q(3, 1, 2, 33), q(6, 0, 1, 33), q(-3, 1, 12, 33), q(7, -1, 12, 33)]),
    ]
}

#[test]
fn prym22_has_the_seven_tabulated_matrices() {
    let geoms = enumerate_geometries(Stratum::Prym22, &solutions(Stratum::Prym22));
    let got: BTreeSet<(ReducedMatrix, String)> = geoms.iter().map(|g| (g.mred, g.r2().to_string())).collect();
    let want: BTreeSet<(ReducedMatrix, String)> = printed_22().into_iter().map(|(m, r, _)| (m, r.to_string())).collect();
    assert_eq!(got, want);
    assert_eq!(geoms.len(), 7);
}

#[test]
fn prym22_widths_and_heights_match_print() {
    let geoms = enumerate_geometries(Stratum::Prym22, &solutions(Stratum::Prym22));
    for (mred, r2, [wz1, wz2, hz1, hz2]) in printed_22() {
        let g = geoms.iter().find(|g| g.mred == mred && *g.r2() == r2).unwrap();
        assert_eq!((&g.w_z1, &g.w_z2, &g.h_z1, &g.h_z2), (&wz1, &wz2, &hz1, &hz2), "{mred}");
    }
}

#[test]
fn prym211_three_matrices_one_kept() {
    let sols = solutions(Stratum::Prym211);
    let all = distinct_geometries(&all_pairings(&sols));
    let mut by_crossing: Vec<(Crossing, ReducedMatrix)> = all.iter().map(|g| (g.crossing, g.mred)).collect();
    by_crossing.sort();
    assert_eq!(
        by_crossing,
        vec![(Crossing::C1, m(0, 6, 3, 3)), (Crossing::C2, m(18, 18, 0, 6)), (Crossing::C2, m(18, 18, 9, 15))]
    );
    assert!(all.iter().all(|g| g.d0() == 33));
    let kept = enumerate_geometries(Stratum::Prym211, &sols);
    assert_eq!(kept.len(), 1);
    let g = &kept[0];
    assert_eq!(g.full_m, [[0, 3, 0], [3, 3, 3], [0, 3, 0]]);
    assert_eq!(g.h_z1, q(-3, 1, 36, 33));
    assert_eq!(g.h_z2, QuadElt::rational(rat(1, 3), 33));
    assert_eq!(g.w_z2, q(21, 3, 2, 33));
}

#[test]
fn printed_wz1_of_211_example_is_inconsistent() {
    let g = enumerate_geometries(Stratum::Prym211, &solutions(Stratum::Prym211)).remove(0);
    let derived = q(9, 3, 2, 33);
    let printed = q(9, 1, 2, 33);
    assert_eq!(g.w_z1, derived);
    let r2 = q(3, 1, 6, 33);
    let h2 = height_from_width(&r2).unwrap();
    let w_z2 = q(21, 3, 2, 33);
    let (hz1, hz2) = (q(-3, 1, 36, 33), QuadElt::rational(rat(1, 3), 33));
    let identities = |wz1: &QuadElt| {
        // w(Z1) = (M11+M13) h1 + M21 h2 with M^red = [[0,6],[3,3]]
        let lin = *wz1 == h2.scale(&rat(3, 1));
        let ratio = w_z2.divide(wz1).unwrap() == r2;
        let area = q(2, 0, 1, 33).plus(&r2.times(&h2)) == wz1.times(&hz1).scale(&rat(2, 1)).plus(&w_z2.times(&hz2));
        [lin, ratio, area]
    };
    assert_eq!(identities(&derived), [true; 3]);
    assert_eq!(identities(&printed), [false; 3]);
}

#[test]
fn flux_identity_on_every_tuple() {
    for s in [Stratum::Prym211, Stratum::Prym22] {
        for sol in solutions(s) {
            for t in relative_periods(&sol) {
                // 2 h1^sigma r1 + r2 h2^sigma = 0 with h1 = r1 = 1
                let flux = t.r2.times(&t.h2.conj()).plus(&QuadElt::rational(rat(2, 1), t.r2.d0()));
                assert!(flux.is_zero_elt());
                assert!(t.gamma.is_positive());
            }
        }
    }
}

#[test]
fn every_geometry_satisfies_both_matrix_identities() {
    for s in [Stratum::Prym211, Stratum::Prym22] {
        for g in all_pairings(&solutions(s)) {
            assert!(g.widths_identity_holds() && g.heights_identity_holds(), "{}", g.mred);
            let (a, b) = g.areas();
            assert_eq!(a, b);
            assert_eq!(g.w_z2.divide(&g.w_z1).unwrap(), g.vertical.r2);
            assert_eq!(g.h_z2.divide(&g.h_z1), height_from_width(&g.vertical.r2));
            assert!(g.r2().norm() < rat(0, 1));
            for split in full_matrix_splits(&g.mred) {
                assert_eq!(GeometryPair { full_m: split, ..g.clone() }.heights_identity_holds(), true);
            }
        }
    }
}

#[test]
fn small_discriminants_give_nothing() {
    let only = |s: Stratum, d: &[u64]| {
        let sols: Vec<_> = solutions(s).into_iter().filter(|x| d.contains(&x.r.d0())).collect();
        enumerate_geometries(s, &sols)
    };
    assert!(only(Stratum::Prym22, &[6]).is_empty());
    assert!(only(Stratum::Prym211, &[2, 3, 6]).is_empty());
}

#[test]
fn deterministic_across_pool_sizes() {
    let run = |jobs: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        pool.install(|| all_pairings(&solutions(Stratum::Prym22)))
    };
    assert_eq!(run(1), run(8));
}
