//! Arithmetic surfaces: square-tiled surfaces with one row of squares per
//! horizontal cylinder, one column per vertical cylinder, and prescribed
//! intersection numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::diagram::SeparatrixDiagram;
use super::surface::{cycles, Direction, Origami};
use crate::cuspgeom::ReducedMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("entry (1,2) of the reduced matrix is odd")]
    OddEntry,
}

/// `(a1, a2, b1, b2)`: squares in `C1 (= C3)`, `C2`, `Z1 (= Z3)`, `Z2`.
pub fn square_counts(m: &ReducedMatrix) -> Result<(u64, u64, u64, u64), CountError> {
    if m.m12x2 % 2 != 0 {
        return Err(CountError::OddEntry);
    }
    Ok((m.m11p13 + m.m12x2 / 2, 2 * m.m21 + m.m22, m.m11p13 + m.m21, m.m12x2 + m.m22))
}

/// An arithmetic surface with the data it was built from.  Square `base_i +
/// x` is the `x`-th square of row `C_i`, counted from the left end of the
/// first saddle connection of the bottom word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticSurface {
    pub origami: Origami,
    /// saddle connection lengths in squares
    pub lengths: Vec<usize>,
    /// offset of the top word relative to the bottom word, per row
    pub twists: [usize; 3],
    /// row widths `(a1, a2, a1)`
    pub widths: [usize; 3],
    /// rows of squares `C1`, `C2`, `C3`, columns `Z1`, `Z2`, `Z3`
    pub full_m: [[u64; 3]; 3],
    /// column (vertical cylinder) of each square, `Z2` the fixed one
    pub column_of: Vec<u8>,
}

impl ArithmeticSurface {
    pub fn row_of(&self, s: usize) -> usize {
        if s < self.widths[0] {
            0
        } else if s < self.widths[0] + self.widths[1] {
            1
        } else {
            2
        }
    }
}

/// Positive lengths, constant on involution orbits, with every bottom and
/// top word of `C_i` summing to `widths[i]`.
pub fn length_assignments(d: &SeparatrixDiagram, widths: [usize; 3]) -> Vec<Vec<usize>> {
    let orbits = d.edge_orbits();
    // constraints: (coefficient per orbit, target)
    let mut orbit_of = vec![0; d.n_edges()];
    for (k, o) in orbits.iter().enumerate() {
        for &e in o {
            orbit_of[e] = k;
        }
    }
    let mut cons: Vec<(Vec<usize>, usize)> = Vec::new();
    for (i, c) in d.cylinders.iter().enumerate() {
        for w in [&c.bottom, &c.top] {
            let mut coef = vec![0; orbits.len()];
            for &e in w {
                coef[orbit_of[e]] += 1;
            }
            cons.push((coef, widths[i]));
        }
    }
    let mut out = Vec::new();
    let mut vals = vec![0usize; orbits.len()];
    assign(0, &cons, &mut vals, &mut out);
    out.into_iter()
        .map(|vals| (0..d.n_edges()).map(|e| vals[orbit_of[e]]).collect())
        .collect()
}

fn assign(k: usize, cons: &[(Vec<usize>, usize)], vals: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == vals.len() {
        if cons.iter().all(|(c, t)| c.iter().zip(vals.iter()).map(|(a, b)| a * b).sum::<usize>() == *t) {
            out.push(vals.clone());
        }
        return;
    }
    // largest value keeping every constraint feasible with later orbits at 1
    let mut hi = usize::MAX;
    let mut forced: Option<usize> = None;
    for (c, t) in cons {
        if c[k] == 0 {
            continue;
        }
        let used: usize = (0..k).map(|j| c[j] * vals[j]).sum();
        let later: usize = (k + 1..vals.len()).map(|j| c[j]).sum();
        if used + later + c[k] > *t {
            return;
        }
        hi = hi.min((t - used - later) / c[k]);
        if later == 0 {
            let rest = t - used;
            if rest % c[k] != 0 {
                return;
            }
            match forced {
                Some(f) if f != rest / c[k] => return,
                _ => forced = Some(rest / c[k]),
            }
        }
    }
    let range: Vec<usize> = match forced {
        Some(f) => vec![f],
        None if hi == usize::MAX => return,
        None => (1..=hi).collect(),
    };
    for v in range {
        if v == 0 || v > hi {
            continue;
        }
        vals[k] = v;
        assign(k + 1, cons, vals, out);
    }
    vals[k] = 0;
}

/// Geometry of one length assignment: positions of saddle connections in
/// the words and the square above every top unit segment.
struct Layout {
    widths: [usize; 3],
    base: [usize; 3],
    /// `up[i][p]`: square above position `p` of the top word of `C_i`
    up: [Vec<usize>; 3],
    /// offset of each edge in its bottom and top word
    pos_bottom: Vec<usize>,
    pos_top: Vec<usize>,
}

impl Layout {
    fn new(d: &SeparatrixDiagram, lengths: &[usize], widths: [usize; 3]) -> Self {
        let base = [0, widths[0], widths[0] + widths[1]];
        let m = d.n_edges();
        let (mut pos_bottom, mut pos_top) = (vec![0; m], vec![0; m]);
        let mut above = vec![0; m];
        for (i, c) in d.cylinders.iter().enumerate() {
            let mut p = 0;
            for &e in &c.bottom {
                pos_bottom[e] = p;
                above[e] = i;
                p += lengths[e];
            }
            let mut p = 0;
            for &e in &c.top {
                pos_top[e] = p;
                p += lengths[e];
            }
        }
        let up = [0, 1, 2].map(|i| {
            let mut row = Vec::with_capacity(widths[i]);
            for &e in &d.cylinders[i].top {
                for o in 0..lengths[e] {
                    row.push(base[above[e]] + pos_bottom[e] + o);
                }
            }
            row
        });
        Layout { widths, base, up, pos_bottom, pos_top }
    }

    fn h(&self) -> Vec<usize> {
        let mut h = Vec::with_capacity(self.base[2] + self.widths[2]);
        for i in 0..3 {
            for x in 0..self.widths[i] {
                h.push(self.base[i] + (x + 1) % self.widths[i]);
            }
        }
        h
    }

    fn v_into(&self, twists: &[usize; 3], v: &mut Vec<usize>) {
        v.clear();
        for i in 0..3 {
            let w = self.widths[i];
            for x in 0..w {
                v.push(self.up[i][(x + w - twists[i]) % w]);
            }
        }
    }

    /// Twist of `C3` compatible with the rotation for a given twist of
    /// `C1`, and the rotation centres `c_i` (square `(i, x)` goes to
    /// `(pi i, c_i - 1 - x)`).
    fn rotation(&self, d: &SeparatrixDiagram, lengths: &[usize], t1: usize, t2: usize) -> ([usize; 3], [usize; 3]) {
        let cyl = &d.cylinders;
        let rho = &d.rho;
        let center = |i: usize, t: usize| {
            let e0 = cyl[i].top[0];
            (self.pos_bottom[rho[e0]] + t + lengths[e0]) % self.widths[i]
        };
        let c1 = center(0, t1);
        let f = cyl[0].bottom[0];
        let w = self.widths[0];
        let t3 = (c1 + 2 * w - lengths[f] % w - self.pos_top[rho[f]] % w) % w;
        let tw = [t1, t2, t3];
        (tw, [c1, center(1, t2), center(2, t3)])
    }
}

struct Target {
    b1: usize,
    b2: usize,
    mred: ReducedMatrix,
    profile: Vec<usize>,
}

fn check(
    lay: &Layout,
    lengths: &[usize],
    twists: [usize; 3],
    centres: [usize; 3],
    h: &[usize],
    target: &Target,
) -> Option<ArithmeticSurface> {
    let n = h.len();
    let mut v = Vec::with_capacity(n);
    lay.v_into(&twists, &mut v);
    // one column per vertical cylinder: exactly three cycles of v
    let cols = cycles(&v);
    if cols.len() != 3 {
        return None;
    }
    let pi = [2, 1, 0];
    let mut rho = vec![0; n];
    for i in 0..3 {
        let w = lay.widths[i];
        for x in 0..w {
            rho[lay.base[i] + x] = lay.base[pi[i]] + (centres[i] + w - 1 - x % w) % w;
        }
    }
    let o = Origami { h: h.to_vec(), v, rho };
    if !o.involution_ok() {
        return None;
    }
    let fixed = cols.iter().position(|c| c.contains(&o.rho[c[0]]))?;
    let lens: Vec<usize> = cols.iter().map(|c| c.len()).collect();
    let others: Vec<usize> = (0..3).filter(|&j| j != fixed).collect();
    if lens[fixed] != target.b2 || lens[others[0]] != target.b1 || lens[others[1]] != target.b1 {
        return None;
    }
    if o.zero_profile() != target.profile {
        return None;
    }
    let order = [others[0], fixed, others[1]];
    let mut column_of = vec![0u8; n];
    for (j, &c) in order.iter().enumerate() {
        for &s in &cols[c] {
            column_of[s] = j as u8;
        }
    }
    let mut m = [[0u64; 3]; 3];
    for s in 0..n {
        let row = if s < lay.base[1] { 0 } else if s < lay.base[2] { 1 } else { 2 };
        m[row][column_of[s] as usize] += 1;
    }
    let t = &target.mred;
    let ok = m[0][0] + m[0][2] == t.m11p13
        && m[0][1] == t.m12x2 / 2
        && m[2][1] == t.m12x2 / 2
        && m[1][0] == t.m21
        && m[1][2] == t.m21
        && m[1][1] == t.m22;
    if !ok {
        return None;
    }
    // columns must be separate vertical cylinders
    let vc = o.cylinder_decomposition(Direction::Vertical);
    if vc.len() != 3 || vc.iter().any(|c| c.height != 1) {
        return None;
    }
    Some(ArithmeticSurface {
        origami: o,
        lengths: lengths.to_vec(),
        twists,
        widths: lay.widths,
        full_m: m,
        column_of,
    })
}

fn stratum_profile(d: &SeparatrixDiagram) -> Vec<usize> {
    let mut z = d.zero_orders();
    z.sort_unstable_by(|a, b| b.cmp(a));
    z
}

/// Whether the diagram admits any length assignment for the matrix.
pub fn applicable(d: &SeparatrixDiagram, mred: &ReducedMatrix) -> bool {
    let Ok((a1, a2, _, _)) = square_counts(mred) else { return false };
    a1 > 0 && a2 > 0 && !length_assignments(d, [a1 as usize, a2 as usize, a1 as usize]).is_empty()
}

/// All arithmetic surfaces for the diagram and matrix: every length
/// assignment and every pair of twists `T1` (of `C1`, which fixes that of
/// `C3`) and `T2` (of `C2`) taken modulo the row widths.
pub fn enumerate_arithmetic_surfaces(d: &SeparatrixDiagram, mred: &ReducedMatrix) -> Vec<ArithmeticSurface> {
    let Ok((a1, a2, b1, b2)) = square_counts(mred) else { return Vec::new() };
    if a1 == 0 || a2 == 0 {
        return Vec::new();
    }
    let widths = [a1 as usize, a2 as usize, a1 as usize];
    let target = Target { b1: b1 as usize, b2: b2 as usize, mred: *mred, profile: stratum_profile(d) };
    let assignments = length_assignments(d, widths);
    let mut out: Vec<ArithmeticSurface> = assignments
        .par_iter()
        .flat_map_iter(|lengths| {
            let lay = Layout::new(d, lengths, widths);
            let h = lay.h();
            let mut found = Vec::new();
            for t1 in 0..widths[0] {
                for t2 in 0..widths[1] {
                    let (tw, centres) = lay.rotation(d, lengths, t1, t2);
                    if let Some(s) = check(&lay, lengths, tw, centres, &h, &target) {
                        found.push(s);
                    }
                }
            }
            found
        })
        .collect();
    out.sort_by(|a, b| (&a.lengths, a.twists).cmp(&(&b.lengths, b.twists)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let m = |a, b, c, d| ReducedMatrix::new(a, b, c, d).unwrap();
        assert_eq!(square_counts(&m(0, 6, 3, 3)).unwrap(), (3, 9, 3, 9));
        assert_eq!(square_counts(&m(72, 48, 24, 18)).unwrap(), (96, 66, 96, 66));
        assert_eq!(square_counts(&m(3, 6, 3, 0)).unwrap(), (6, 6, 6, 6));
        let odd = ReducedMatrix { m11p13: 1, m12x2: 1, m21: 0, m22: 0 };
        assert_eq!(square_counts(&odd), Err(CountError::OddEntry));
    }
}
