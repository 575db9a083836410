//! Square-tiled surfaces: `h` sends a square to its right neighbour, `v` to
//! the square above.

use serde::{Deserialize, Serialize};

use super::diagram::{canonical_key, Cylinder, DiagramKey};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origami {
    pub h: Vec<usize>,
    pub v: Vec<usize>,
    /// rotation by `pi` (Prym involution) as a permutation of squares
    pub rho: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// A maximal cylinder: circumference and height in squares, and its squares
/// row by row from the bottom, each row starting at its least square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderInfo {
    pub width: usize,
    pub height: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CylinderInfo {
    pub fn squares(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().flatten().copied()
    }
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

impl Origami {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// `c = v^-1 h^-1 v h`: the cycle of `s` under `c` lists the squares
    /// having the same point as top-right corner; its length is the cone
    /// angle there in multiples of `2 pi`.
    pub fn commutator(&self) -> Vec<usize> {
        let (hi, vi) = (inverse(&self.h), inverse(&self.v));
        (0..self.n()).map(|s| vi[hi[self.v[self.h[s]]]]).collect()
    }

    /// Zero orders, decreasing.
    pub fn zero_profile(&self) -> Vec<usize> {
        let mut z: Vec<usize> = cycles(&self.commutator()).iter().filter(|c| c.len() > 1).map(|c| c.len() - 1).collect();
        z.sort_unstable_by(|a, b| b.cmp(a));
        z
    }

    pub fn genus(&self) -> usize {
        (self.zero_profile().iter().sum::<usize>() + 2) / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for t in [self.h[s], self.v[s]] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// `rho` is an involution with `rho h rho = h^-1` and `rho v rho = v^-1`.
    pub fn involution_ok(&self) -> bool {
        let r = &self.rho;
        r.len() == self.n()
            && (0..self.n()).all(|s| r[r[s]] == s && r[self.h[r[self.h[s]]]] == s && r[self.v[r[self.v[s]]]] == s)
    }

    /// Reflection in the diagonal: swaps the two directions.
    pub fn transpose(&self) -> Origami {
        Origami { h: self.v.clone(), v: self.h.clone(), rho: self.rho.clone() }
    }

    /// Cylinders of the direction; the involution-fixed one is listed second
    /// when there are three.
    pub fn cylinder_decomposition(&self, dir: Direction) -> Vec<CylinderInfo> {
        match dir {
            Direction::Horizontal => self.horizontal_cylinders(),
            Direction::Vertical => self.transpose().horizontal_cylinders(),
        }
    }

    fn horizontal_cylinders(&self) -> Vec<CylinderInfo> {
        let n = self.n();
        let comm = self.commutator();
        let rows: Vec<Vec<usize>> = cycles(&self.h)
            .into_iter()
            .map(|mut c| {
                let m = c.iter().position(|&x| x == *c.iter().min().unwrap()).unwrap();
                c.rotate_left(m);
                c
            })
            .collect();
        let mut row_of = vec![0; n];
        for (i, r) in rows.iter().enumerate() {
            for &s in r {
                row_of[s] = i;
            }
        }
        // row above, when the top boundary carries no singular point
        let above: Vec<Option<usize>> = rows
            .iter()
            .map(|r| if r.iter().all(|&s| comm[s] == s) { Some(row_of[self.v[r[0]]]) } else { None })
            .collect();
        let mut has_below = vec![false; rows.len()];
        for a in above.iter().flatten() {
            has_below[*a] = true;
        }
        let mut out = Vec::new();
        let mut used = vec![false; rows.len()];
        for start in 0..rows.len() {
            if has_below[start] || used[start] {
                continue;
            }
            let mut stack = Vec::new();
            let mut i = start;
            loop {
                used[i] = true;
                stack.push(rows[i].clone());
                match above[i] {
                    Some(j) if !used[j] => i = j,
                    _ => break,
                }
            }
            out.push(CylinderInfo { width: rows[start].len(), height: stack.len(), rows: stack });
        }
        // a torus-like stack closing on itself has every row with a row below
        for start in 0..rows.len() {
            if used[start] {
                continue;
            }
            let mut stack = Vec::new();
            let mut i = start;
            while !used[i] {
                used[i] = true;
                stack.push(rows[i].clone());
                i = above[i].unwrap_or(i);
            }
            out.push(CylinderInfo { width: rows[start].len(), height: stack.len(), rows: stack });
        }
        self.order_cylinders(out)
    }

    fn order_cylinders(&self, mut cyls: Vec<CylinderInfo>) -> Vec<CylinderInfo> {
        let min_sq = |c: &CylinderInfo| c.squares().min().unwrap();
        cyls.sort_by_key(min_sq);
        if cyls.len() == 3 && self.rho.len() == self.n() {
            let fixed = cyls.iter().position(|c| {
                let s = c.rows[0][0];
                c.squares().any(|x| x == self.rho[s])
            });
            if let Some(f) = fixed {
                let c = cyls.remove(f);
                cyls.insert(1, c);
            }
        }
        cyls
    }

    /// Horizontal separatrix diagram: saddle connections labelled by the
    /// square just below their leftmost unit segment.
    pub fn horizontal_diagram(&self) -> Vec<Cylinder> {
        let comm = self.commutator();
        let hi = inverse(&self.h);
        let vi = inverse(&self.v);
        let cyls = self.horizontal_cylinders();
        let n = self.n();
        let mut seg_label = vec![usize::MAX; n];
        let mut tops = Vec::new();
        for c in &cyls {
            let row = c.rows.last().unwrap();
            // top-left corner of s is the top-right corner of h^-1 s
            let start = row.iter().position(|&s| comm[hi[s]] != hi[s]).unwrap_or(0);
            let mut word = Vec::new();
            let mut label = usize::MAX;
            for k in 0..row.len() {
                let s = row[(start + k) % row.len()];
                if k == 0 || comm[hi[s]] != hi[s] {
                    label = s;
                    word.push(s);
                }
                seg_label[s] = label;
            }
            tops.push(word);
        }
        let mut out = Vec::new();
        for (c, top) in cyls.iter().zip(tops) {
            let row = &c.rows[0];
            // bottom-left corner of t is the top-right corner of h^-1 v^-1 t
            let singular = |t: usize| comm[hi[vi[t]]] != hi[vi[t]];
            let start = row.iter().position(|&t| singular(t)).unwrap_or(0);
            let mut word = Vec::new();
            for k in 0..row.len() {
                let t = row[(start + k) % row.len()];
                if k == 0 || singular(t) {
                    word.push(seg_label[vi[t]]);
                }
            }
            out.push(Cylinder { bottom: word, top });
        }
        out
    }

    pub fn horizontal_diagram_key(&self) -> DiagramKey {
        canonical_key(&self.horizontal_diagram())
    }

    /// Canonical relabelling: the least `(h, v)` over all starting squares
    /// of the breadth-first numbering.
    pub fn canonical_form(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.n();
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        for start in 0..n {
            label.iter_mut().for_each(|l| *l = usize::MAX);
            order.clear();
            label[start] = 0;
            order.push(start);
            let mut i = 0;
            while i < order.len() {
                let s = order[i];
                for t in [self.h[s], self.v[s]] {
                    if label[t] == usize::MAX {
                        label[t] = order.len();
                        order.push(t);
                    }
                }
                i += 1;
            }
            if order.len() < n {
                return (self.h.clone(), self.v.clone());
            }
            let h: Vec<usize> = order.iter().map(|&s| label[self.h[s]]).collect();
            let v: Vec<usize> = order.iter().map(|&s| label[self.v[s]]).collect();
            if best.as_ref().is_none_or(|(bh, bv)| (&h, &v) < (bh, bv)) {
                best = Some((h, v));
            }
        }
        best.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Origami {
        Origami { h: vec![0], v: vec![0], rho: vec![0] }
    }

    #[test]
    fn single_square() {
        let t = torus();
        assert_eq!(t.zero_profile(), Vec::<usize>::new());
        for d in [Direction::Horizontal, Direction::Vertical] {
            let c = t.cylinder_decomposition(d);
            assert_eq!(c.len(), 1);
            assert_eq!((c[0].width, c[0].height), (1, 1));
        }
    }

    #[test]
    fn l_shaped_origami_is_genus_two() {
        // three squares: 0 1 in a row, 2 above 0
        let o = Origami { h: vec![1, 0, 2], v: vec![2, 1, 0], rho: vec![0, 1, 2] };
        assert_eq!(o.zero_profile(), vec![2]);
        assert_eq!(o.genus(), 2);
        let hc = o.cylinder_decomposition(Direction::Horizontal);
        assert_eq!(hc.iter().map(|c| c.width).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(o.transpose().cylinder_decomposition(Direction::Horizontal), o.cylinder_decomposition(Direction::Vertical));
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let o = Origami { h: vec![1, 0, 2], v: vec![2, 1, 0], rho: vec![0, 1, 2] };
        let p = [2usize, 0, 1];
        let relabel = |f: &[usize]| {
            let mut g = vec![0; 3];
            for s in 0..3 {
                g[p[s]] = p[f[s]];
            }
            g
        };
        let q = Origami { h: relabel(&o.h), v: relabel(&o.v), rho: vec![0, 1, 2] };
        assert_eq!(o.canonical_form(), q.canonical_form());
    }
}
