//! Brute-force check of the arithmetic surface enumeration: build every
//! origami with rows `(a1, a2, a1)`, one square wide vertical cylinders and
//! the involution constraint directly from its columns, then bucket by
//! horizontal diagram.

use prymcusp::cuspgeom::ReducedMatrix;
use prymcusp::origami::arith::square_counts;
use prymcusp::solver::Stratum;

mod common;
use common::oracles::check_origami;

fn check(stratum: Stratum, m: ReducedMatrix) -> usize {
    check_origami(stratum, m).unwrap()
}

fn small_matrices() -> Vec<ReducedMatrix> {
    [(1, 2, 1, 1), (2, 2, 1, 1), (1, 2, 2, 1), (2, 2, 1, 2), (1, 4, 1, 1), (2, 2, 2, 1), (3, 2, 1, 1), (1, 2, 1, 3), (2, 4, 1, 1)]
        .into_iter()
        .map(|(a, b, c, d)| ReducedMatrix::new(a, b, c, d).unwrap())
        .collect()
}

#[test]
fn prym22_small_matrices() {
    let total: usize = small_matrices().into_iter().map(|m| check(Stratum::Prym22, m)).sum();
    assert!(total > 0);
}

#[test]
fn prym211_small_matrices() {
    let total: usize = small_matrices().into_iter().map(|m| check(Stratum::Prym211, m)).sum();
    assert!(total > 0);
}

#[test]
fn tabulated_matrices_up_to_24_squares() {
    // 18 squares, and the single 2-1-1 geometry with 15
    check(Stratum::Prym22, ReducedMatrix::new(3, 6, 3, 0).unwrap());
    check(Stratum::Prym211, ReducedMatrix::new(0, 6, 3, 3).unwrap());
}

#[test]
fn medium_matrices() {
    for (a, b, c, d) in [(3, 4, 2, 2), (2, 4, 2, 3), (4, 2, 1, 3), (3, 2, 2, 3), (2, 6, 2, 2)] {
        let m = ReducedMatrix::new(a, b, c, d).unwrap();
        let n = square_counts(&m).map(|(a1, a2, _, _)| 2 * a1 + a2).unwrap();
        assert!(n <= 24);
        for stratum in [Stratum::Prym22, Stratum::Prym211] {
            check(stratum, m);
        }
    }
}
