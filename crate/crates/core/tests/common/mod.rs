//! Published tables shared by the integration tests.
#![allow(dead_code)]

pub mod oracles;

use std::collections::BTreeSet;

use prymcusp::cuspgeom::ReducedMatrix;
use prymcusp::solver::{RelationSolution, Stratum};
use prymcusp::QuadElt;

pub type Row = (u64, u64, u64, QuadElt);

pub fn q(p: i64, s: i64, r: i64, d: u64) -> QuadElt {
    QuadElt::from_ints(p, s, r, d)
}

pub fn table_211() -> Vec<Row> {
    vec![
        (6, 1, 1, q(3, 1, 6, 33)),
        (6, 3, 1, q(0, 2, 3, 6)),
        (6, 3, 2, q(0, 2, 1, 2)),
        (6, 5, 1, q(-3, 1, 6, 33)),
        (12, 6, 1, q(-2, 2, 1, 3)),
        (12, 6, 5, q(2, 2, 1, 3)),
        (24, 3, 4, q(0, 2, 3, 3)),
        (24, 15, 4, q(0, 2, 3, 3)),
    ]
}

pub fn table_22() -> Vec<Row> {
    vec![
        (12, 2, 3, q(0, 1, 2, 2)),
        (12, 10, 3, q(0, 1, 2, 2)),
        (12, 1, 3, q(-1, 1, 2, 3)),
        (12, 1, 9, q(-1, 1, 2, 3)),
        (12, 5, 3, q(1, 1, 2, 3)),
        (12, 7, 3, q(1, 1, 2, 3)),
        (12, 4, 3, q(0, 1, 2, 6)),
        (12, 4, 9, q(0, 1, 2, 6)),
        (12, 4, 1, q(3, 1, 2, 33)),
        (12, 4, 5, q(-3, 1, 2, 33)),
        (12, 8, 1, q(-3, 1, 2, 33)),
        (12, 8, 5, q(3, 1, 2, 33)),
        (48, 16, 21, q(0, 1, 1, 3)),
        (48, 16, 9, q(0, 1, 1, 3)),
        (48, 32, 3, q(0, 1, 1, 3)),
        (48, 32, 15, q(0, 1, 1, 3)),
    ]
}

pub fn closed(rows: Vec<Row>) -> BTreeSet<(u64, u64, u64, String)> {
    rows.into_iter()
        .flat_map(|(n, x, u, r)| [(n, x, u, r.to_string()), (n, n - x, n - u, r.to_string())])
        .collect()
}

/// Table rows plus their conjugates as solver output.
pub fn solutions(stratum: Stratum) -> Vec<RelationSolution> {
    let rows = match stratum {
        Stratum::Prym211 => table_211(),
        Stratum::Prym22 => table_22(),
    };
    rows.into_iter()
        .flat_map(|(n, x, u, r)| {
            let s = RelationSolution { n, e_xy: x, e_u: u, r, stratum };
            [s.conjugate(), s]
        })
        .collect()
}

/// The seven 2-2 reduced matrices with their `r2`.
pub fn geometry_table_22() -> Vec<(ReducedMatrix, QuadElt)> {
    let m = |a, b, c, d| ReducedMatrix::new(a, b, c, d).unwrap();
    vec![
        (m(72, 48, 24, 18), q(0, 1, 2, 2)),
        (m(72, 24, 12, 6), q(-1, 1, 2, 3)),
        (m(72, 24, 48, 18), q(1, 1, 2, 3)),
        (m(36, 12, 30, 12), q(0, 1, 1, 3)),
        (m(6, 24, 12, 54), q(3, 1, 2, 33)),
        (m(6, 24, 3, 18), q(-3, 1, 2, 33)),
        (m(3, 6, 3, 0), q(-3, 1, 2, 33)),
    ]
}
