//! Cusp geometry of a pair of suitable directions: cylinder widths and
//! heights, relative periods, and the reduced intersection matrix linking
//! the horizontal and vertical cylinder decompositions.
//!
//! Normalisation: the horizontal direction has `w(C1) = h(C1) = 1`,
//! `w(C2) = r2`, `h(C2) = h2`; cylinder `C2` is the one fixed by the Prym
//! involution and `C1`, `C3` are exchanged.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{rat_int, Field, QuadElt, Rational, Ring};
use crate::solver::{RelationSolution, Stratum};

/// `h2 = -2 / conj(r2)`, the height of `C2` forced by `sum r_i h_i^sigma = 0`
/// with `r1 = h1 = 1` and `C1`, `C3` counted twice.
pub fn height_from_width(r2: &QuadElt) -> Option<QuadElt> {
    if !r2.norm().is_negative() {
        return None;
    }
    QuadElt::rational(rat_int(-2), r2.d0()).divide(&r2.conj())
}

/// A solution together with one relative period `|gamma|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspTuple {
    pub source: RelationSolution,
    pub k: i64,
    pub ell: i64,
    pub r2: QuadElt,
    pub h2: QuadElt,
    pub gamma: QuadElt,
}

fn period_factor(stratum: Stratum) -> i64 {
    match stratum {
        Stratum::Prym211 => 1,
        Stratum::Prym22 => 2,
    }
}

fn q(x: i64, d0: u64) -> QuadElt {
    QuadElt::rational(rat_int(x), d0)
}

fn qr(x: Rational, d0: u64) -> QuadElt {
    QuadElt::rational(x, d0)
}

/// All `(k, ell)` in `[-2, 2] x [-1, 1]` with `0 < |gamma| < max(1, r2)`,
/// `|gamma| = f (-eXY + r2 eU) / N + k + ell r2` and `f = 1` (2-1-1) or
/// `f = 2` (2-2).
pub fn relative_periods(sol: &RelationSolution) -> Vec<CuspTuple> {
    let r2 = &sol.r;
    let d0 = r2.d0();
    let Some(h2) = height_from_width(r2) else { return Vec::new() };
    let f = period_factor(sol.stratum);
    let n = sol.n as i64;
    let base = r2
        .scale(&Rational::new(BigInt::from(f * sol.e_u as i64), BigInt::from(n)))
        .plus(&qr(Rational::new(BigInt::from(-f * sol.e_xy as i64), BigInt::from(n)), d0));
    let bound = if r2.cmp_value(&q(1, d0)).unwrap() == Ordering::Greater { r2.clone() } else { q(1, d0) };
    let mut out = Vec::new();
    for k in -2..=2 {
        for ell in -1..=1 {
            let gamma = base.plus(&q(k, d0)).plus(&r2.scale(&rat_int(ell)));
            if gamma.is_positive() && bound.minus(&gamma).is_positive() {
                out.push(CuspTuple { source: sol.clone(), k, ell, r2: r2.clone(), h2: h2.clone(), gamma });
            }
        }
    }
    out
}

/// `M^red = [[M11 + M13, 2 M12], [M21, M22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReducedMatrix {
    pub m11p13: u64,
    pub m12x2: u64,
    pub m21: u64,
    pub m22: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry (1,2) of a reduced matrix must be even, got {0}")]
    OddEntry(u64),
}

impl ReducedMatrix {
    pub fn new(m11p13: u64, m12x2: u64, m21: u64, m22: u64) -> Result<Self, MatrixError> {
        if m12x2 % 2 != 0 {
            return Err(MatrixError::OddEntry(m12x2));
        }
        Ok(ReducedMatrix { m11p13, m12x2, m21, m22 })
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.m11p13, self.m12x2, self.m21, self.m22]
    }
}

impl fmt::Display for ReducedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m11p13, self.m12x2, self.m21, self.m22)
    }
}

/// Full `3 x 3` intersection matrices with the involution pattern
/// `M11 = M33`, `M13 = M31`, `M21 = M23`, `M12 = M32`.
pub fn full_matrix_splits(m: &ReducedMatrix) -> Vec<[[u64; 3]; 3]> {
    let m12 = m.m12x2 / 2;
    (0..=m.m11p13)
        .map(|m11| {
            let m13 = m.m11p13 - m11;
            [[m11, m12, m13], [m.m21, m.m22, m.m21], [m13, m12, m11]]
        })
        .collect()
}

/// Which cylinder of the horizontal direction the vertical saddle
/// connection `beta` crosses; fixes `|beta|` and hence the vertical scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Crossing {
    C1,
    C2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryPair {
    pub horizontal: RelationSolution,
    pub vertical: CuspTuple,
    pub crossing: Crossing,
    pub w_z1: QuadElt,
    pub w_z2: QuadElt,
    pub h_z1: QuadElt,
    pub h_z2: QuadElt,
    pub mred: ReducedMatrix,
    pub full_m: [[u64; 3]; 3],
}

impl GeometryPair {
    pub fn r2(&self) -> &QuadElt {
        &self.horizontal.r
    }

    pub fn h2(&self) -> QuadElt {
        height_from_width(&self.horizontal.r).expect("negative norm")
    }

    pub fn d0(&self) -> u64 {
        self.horizontal.r.d0()
    }

    /// Widths `(w(C1), w(C2))` and heights `(h(C1), h(C2))`.
    pub fn horizontal_data(&self) -> ([QuadElt; 2], [QuadElt; 2]) {
        let d0 = self.d0();
        ([q(1, d0), self.r2().clone()], [q(1, d0), self.h2()])
    }

    /// `w(Z)^red = (M^red)^T h(C)^red`, checked exactly.
    pub fn widths_identity_holds(&self) -> bool {
        let (_, h) = self.horizontal_data();
        let m = &self.mred;
        let z1 = h[0].scale(&rat_int(m.m11p13 as i64)).plus(&h[1].scale(&rat_int(m.m21 as i64)));
        let z2 = h[0].scale(&rat_int(m.m12x2 as i64)).plus(&h[1].scale(&rat_int(m.m22 as i64)));
        z1 == self.w_z1 && z2 == self.w_z2
    }

    /// `w(C) = M h(Z)` for the stored full matrix, on all three rows.
    pub fn heights_identity_holds(&self) -> bool {
        let (w, _) = self.horizontal_data();
        let hz = [&self.h_z1, &self.h_z2, &self.h_z1];
        let wc = [&w[0], &w[1], &w[0]];
        (0..3).all(|i| {
            let s = (0..3).fold(q(0, self.d0()), |acc, j| acc.plus(&hz[j].scale(&rat_int(self.full_m[i][j] as i64))));
            &s == wc[i]
        })
    }

    /// Total area computed from both directions.
    pub fn areas(&self) -> (QuadElt, QuadElt) {
        let (w, h) = self.horizontal_data();
        let horiz = w[0].times(&h[0]).scale(&rat_int(2)).plus(&w[1].times(&h[1]));
        let vert = self.w_z1.times(&self.h_z1).scale(&rat_int(2)).plus(&self.w_z2.times(&self.h_z2));
        (horiz, vert)
    }
}

/// Reasons a (horizontal, vertical) pairing yields no geometry.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("trace fields differ")]
    FieldMismatch,
    #[error("widths are rationally dependent, the conjugate system is singular")]
    Singular,
    #[error("intersection numbers are not integers")]
    NotIntegral,
    #[error("negative intersection number")]
    Negative,
    #[error("entry (1,2) of the reduced matrix is odd")]
    OddEntry,
    #[error("h(Z2)/h(Z1) disagrees with the height lemma")]
    HeightMismatch,
}

fn target_length(stratum: Stratum, crossing: Crossing, h2: &QuadElt) -> QuadElt {
    match (stratum, crossing) {
        (Stratum::Prym211, Crossing::C1) => q(1, h2.d0()),
        (Stratum::Prym22, Crossing::C1) => q(2, h2.d0()),
        (_, Crossing::C2) => h2.clone(),
    }
}

/// Coordinates `(x, y)` of `w = x + y h2` in the basis `(1, h2)`.
fn decompose(w: &QuadElt, h2: &QuadElt) -> (Rational, Rational) {
    let y = &w.b / &h2.b;
    let x = &w.a - &y * &h2.a;
    (x, y)
}

fn as_count(x: &Rational) -> Result<u64, Rejection> {
    if !x.is_integer() {
        return Err(Rejection::NotIntegral);
    }
    if x.is_negative() {
        return Err(Rejection::Negative);
    }
    x.to_integer().to_u64().ok_or(Rejection::NotIntegral)
}

/// Scale the vertical tuple so that `|beta|` matches the crossed cylinder,
/// read off `M^red` from `w(Z)^red = (M^red)^T h(C)^red`, then solve
/// `w(C) = M h(Z)` for the vertical heights.
pub fn reduced_matrix_from_pair(
    horizontal: &RelationSolution,
    vertical: &CuspTuple,
    crossing: Crossing,
) -> Result<GeometryPair, Rejection> {
    let r2 = &horizontal.r;
    let d0 = r2.d0();
    if vertical.r2.d0() != d0 || r2.is_rational() || vertical.r2.is_rational() {
        return Err(if vertical.r2.d0() != d0 { Rejection::FieldMismatch } else { Rejection::Singular });
    }
    let h2 = height_from_width(r2).ok_or(Rejection::Singular)?;
    if h2.is_rational() {
        return Err(Rejection::Singular);
    }
    let s = target_length(horizontal.stratum, crossing, &h2).divide(&vertical.gamma).ok_or(Rejection::Singular)?;
    let w_z1 = s.clone();
    let w_z2 = s.times(&vertical.r2);
    let (m11p13, m21) = decompose(&w_z1, &h2);
    let (m12x2, m22) = decompose(&w_z2, &h2);
    let mred = ReducedMatrix {
        m11p13: as_count(&m11p13)?,
        m12x2: as_count(&m12x2)?,
        m21: as_count(&m21)?,
        m22: as_count(&m22)?,
    };
    if mred.m12x2 % 2 != 0 {
        return Err(Rejection::OddEntry);
    }
    // 1 = (M11+M13) hZ1 + M12 hZ2 and r2 = 2 M21 hZ1 + M22 hZ2
    let a = rat_int(mred.m11p13 as i64);
    let b = rat_int((mred.m12x2 / 2) as i64);
    let c = rat_int(2 * mred.m21 as i64);
    let d = rat_int(mred.m22 as i64);
    let det = &a * &d - &b * &c;
    if det.is_zero() {
        return Err(Rejection::Singular);
    }
    let one = q(1, d0);
    let h_z1 = one.scale(&d).minus(&r2.scale(&b)).scale(&det.recip());
    let h_z2 = r2.scale(&a).minus(&one.scale(&c)).scale(&det.recip());
    let expected = height_from_width(&vertical.r2).ok_or(Rejection::Singular)?;
    if h_z2.divide(&h_z1) != Some(expected) {
        return Err(Rejection::HeightMismatch);
    }
    let full_m = full_matrix_splits(&mred)[0];
    Ok(GeometryPair {
        horizontal: horizontal.clone(),
        vertical: vertical.clone(),
        crossing,
        w_z1,
        w_z2,
        h_z1,
        h_z2,
        mred,
        full_m,
    })
}

/// Crossing kept by the admissibility lemmas: `C1` for 2-1-1, `C2` for 2-2.
pub fn admissible_crossing(stratum: Stratum) -> Crossing {
    match stratum {
        Stratum::Prym211 => Crossing::C1,
        Stratum::Prym22 => Crossing::C2,
    }
}

/// Every successful pairing over ordered pairs of solutions (equal pairs
/// included) and both crossings, canonically sorted.
pub fn all_pairings(solutions: &[RelationSolution]) -> Vec<GeometryPair> {
    let tuples: Vec<CuspTuple> = solutions.iter().flat_map(relative_periods).collect();
    let mut out: Vec<GeometryPair> = solutions
        .par_iter()
        .flat_map_iter(|hor| {
            tuples.iter().flat_map(move |vert| {
                [Crossing::C1, Crossing::C2].into_iter().filter_map(move |c| reduced_matrix_from_pair(hor, vert, c).ok())
            })
        })
        .collect();
    out.sort_by(geometry_cmp);
    out
}

fn geometry_cmp(a: &GeometryPair, b: &GeometryPair) -> Ordering {
    a.d0()
        .cmp(&b.d0())
        .then_with(|| a.r2().canonical_cmp(b.r2()))
        .then_with(|| a.mred.cmp(&b.mred))
        .then_with(|| a.crossing.cmp(&b.crossing))
        .then_with(|| a.horizontal.sort_key_cmp(&b.horizontal))
        .then_with(|| a.vertical.source.sort_key_cmp(&b.vertical.source))
        .then_with(|| (a.vertical.k, a.vertical.ell).cmp(&(b.vertical.k, b.vertical.ell)))
}

/// One geometry per `(r2, M^red, crossing)`: the widths and heights depend
/// only on these, so the first pairing in canonical order represents them.
pub fn distinct_geometries(pairs: &[GeometryPair]) -> Vec<GeometryPair> {
    let mut out: Vec<GeometryPair> = Vec::new();
    for p in pairs {
        let dup = out.last().is_some_and(|l| l.r2() == p.r2() && l.mred == p.mred && l.crossing == p.crossing);
        if !dup {
            out.push(p.clone());
        }
    }
    out
}

/// Geometries surviving the crossing rule of the stratum, one per
/// `(r2, M^red)`.
pub fn enumerate_geometries(stratum: Stratum, solutions: &[RelationSolution]) -> Vec<GeometryPair> {
    let sols: Vec<RelationSolution> = solutions.iter().filter(|s| s.stratum == stratum).cloned().collect();
    let keep = admissible_crossing(stratum);
    let pairs: Vec<GeometryPair> = all_pairings(&sols).into_iter().filter(|g| g.crossing == keep).collect();
    distinct_geometries(&pairs)
}
