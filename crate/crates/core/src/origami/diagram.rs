//! Horizontal separatrix diagrams with three cylinders and a Prym involution.
//!
//! A diagram is a list of cylinders, each with a bottom and a top boundary
//! given as cyclic words (read left to right) in the horizontal saddle
//! connections.  Every saddle connection occurs once on some bottom and once
//! on some top.  The Prym involution acts as a rotation by `pi`: it maps the
//! bottom of cylinder `i` onto the top of `pi(i)` with the order reversed.

use std::collections::BTreeMap;

use words::{cyclic_eq, permutations, rotations};
use serde::{Deserialize, Serialize};

use crate::solver::Stratum;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
}

/// Cylinders are stored as `[C1, C2, C3]` with `C2` fixed by the involution
/// and `C1`, `C3` exchanged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatrixDiagram {
    pub stratum: Stratum,
    pub cylinders: [Cylinder; 3],
    /// involution on saddle connections
    pub rho: Vec<usize>,
}

/// Canonical form of a cylinder diagram under relabelling of saddle
/// connections, reordering of cylinders and cyclic rotation of boundaries.
pub type DiagramKey = Vec<Vec<usize>>;

pub fn canonical_key(cyls: &[Cylinder]) -> DiagramKey {
    let mut best: Option<DiagramKey> = None;
    for perm in permutations(cyls.len()) {
        let ordered: Vec<&Cylinder> = perm.iter().map(|&i| &cyls[i]).collect();
        let rots: Vec<usize> = ordered.iter().map(|c| c.bottom.len()).collect();
        let mut idx = vec![0usize; rots.len()];
        loop {
            let mut label = BTreeMap::new();
            let mut key = Vec::new();
            for (c, &r) in ordered.iter().zip(&idx) {
                let word: Vec<usize> = rotations(&c.bottom, r).collect();
                for &e in &word {
                    let next = label.len();
                    label.entry(e).or_insert(next);
                }
                key.push(word.iter().map(|e| label[e]).collect::<Vec<_>>());
            }
            for c in &ordered {
                let word: Vec<usize> = c.top.iter().map(|e| label[e]).collect();
                let min = (0..word.len()).map(|r| rotations(&word, r).collect::<Vec<_>>()).min().unwrap();
                key.push(min);
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            // odometer over the bottom rotations
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < rots[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    best.unwrap_or_default()
}

/// Endpoint identification: `L(e) = 2e`, `R(e) = 2e + 1`; returns the vertex
/// of every endpoint and the number of boundary corners at each vertex.
pub fn vertices(cyls: &[Cylinder], n_edges: usize) -> (Vec<usize>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..2 * n_edges).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let words = cyls.iter().flat_map(|c| [&c.bottom, &c.top]);
    for w in words.clone() {
        for j in 0..w.len() {
            let (a, b) = (w[j], w[(j + 1) % w.len()]);
            let (ra, rb) = (find(&mut parent, 2 * a + 1), find(&mut parent, 2 * b));
            parent[ra] = rb;
        }
    }
    let mut id = BTreeMap::new();
    let mut vertex = vec![0; 2 * n_edges];
    for x in 0..2 * n_edges {
        let r = find(&mut parent, x);
        let next = id.len();
        vertex[x] = *id.entry(r).or_insert(next);
    }
    let mut corners = vec![0; id.len()];
    for w in words {
        for &e in w {
            corners[vertex[2 * e + 1]] += 1;
        }
    }
    (vertex, corners)
}

impl SeparatrixDiagram {
    pub fn n_edges(&self) -> usize {
        self.rho.len()
    }

    /// Vertex of `L(e)` and `R(e)` for every edge, and the cone angle of
    /// each vertex in multiples of `pi`.
    pub fn vertex_data(&self) -> (Vec<usize>, Vec<usize>) {
        vertices(&self.cylinders, self.n_edges())
    }

    /// Zero orders, one per vertex (`angle = 2 pi (k + 1)`).
    pub fn zero_orders(&self) -> Vec<usize> {
        self.vertex_data().1.iter().map(|c| c / 2 - 1).collect()
    }

    /// Genus from Gauss-Bonnet, `sum k = 2g - 2`.
    pub fn genus(&self) -> usize {
        (self.zero_orders().iter().sum::<usize>() + 2) / 2
    }

    /// Genus from the Euler characteristic of the cell structure: vertices,
    /// saddle connections, and one annulus per cylinder (`chi = 0`) glued in.
    pub fn euler_genus(&self) -> usize {
        let v = self.vertex_data().1.len() as i64;
        let chi = v - self.n_edges() as i64;
        ((2 - chi) / 2) as usize
    }

    /// Involution on vertices: `L(e) -> R(rho e)`.
    pub fn zero_action(&self) -> Vec<usize> {
        let (vertex, corners) = self.vertex_data();
        let mut act = vec![usize::MAX; corners.len()];
        for e in 0..self.n_edges() {
            act[vertex[2 * e]] = vertex[2 * self.rho[e] + 1];
        }
        act
    }

    pub fn key(&self) -> DiagramKey {
        canonical_key(&self.cylinders)
    }

    /// Reflection `y -> -y`: bottoms and tops exchanged.
    pub fn mirror(&self) -> SeparatrixDiagram {
        let cylinders = self.cylinders.clone().map(|c| Cylinder { bottom: c.top, top: c.bottom });
        SeparatrixDiagram { stratum: self.stratum, cylinders, rho: self.rho.clone() }
    }

    /// Boundary word lengths `(|bottom|, |top|)` per cylinder.
    pub fn word_lengths(&self) -> [(usize, usize); 3] {
        self.cylinders.clone().map(|c| (c.bottom.len(), c.top.len()))
    }

    /// Orbits of the involution on saddle connections, as sorted pairs.
    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.n_edges() {
            let o = self.rho[e];
            if o >= e {
                out.push(if o == e { vec![e] } else { vec![e, o] });
            }
        }
        out
    }

    /// The diagram of the detailed worked case: every boundary has two
    /// saddle connections and `C2` is glued to itself along one of them.
    pub fn is_sd4_analog(&self) -> bool {
        let c2 = &self.cylinders[1];
        self.word_lengths().iter().all(|&l| l == (2, 2)) && c2.bottom.iter().any(|e| c2.top.contains(e))
    }

    /// Validity as a Prym diagram of the given stratum (see module doc).
    pub fn is_valid(&self) -> bool {
        check_candidate(self.stratum, &self.cylinders, &self.rho)
    }
}

fn profile(stratum: Stratum) -> (Vec<usize>, usize, usize) {
    // (zero orders, number of edges, rho-fixed edges)
    match stratum {
        Stratum::Prym211 => (vec![2, 1, 1], 7, 1),
        Stratum::Prym22 => (vec![2, 2], 6, 2),
    }
}

fn zero_rule(stratum: Stratum, orders: &[usize], act: &[usize]) -> bool {
    act.iter().enumerate().all(|(z, &w)| match (stratum, orders[z]) {
        (Stratum::Prym22, _) => w != z,
        (Stratum::Prym211, 2) => w == z,
        (Stratum::Prym211, _) => w != z,
    })
}

fn connected(vertex: &[usize], n_vertices: usize, n_edges: usize) -> bool {
    let mut seen = vec![false; n_vertices];
    seen[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for e in 0..n_edges {
            let (a, b) = (vertex[2 * e], vertex[2 * e + 1]);
            if seen[a] != seen[b] {
                seen[a] = true;
                seen[b] = true;
                changed = true;
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Positive integer lengths, constant on involution orbits, balancing every
/// cylinder; yields the distinct ratios `w(C2)/w(C1)` for small lengths.
fn width_ratios(cyls: &[Cylinder], rho: &[usize], max_len: usize) -> Vec<(usize, usize)> {
    let orbits: Vec<usize> = (0..rho.len()).filter(|&e| rho[e] >= e).collect();
    let mut lens = vec![0usize; rho.len()];
    let mut out = Vec::new();
    let mut idx = vec![1usize; orbits.len()];
    loop {
        for (&e, &l) in orbits.iter().zip(&idx) {
            lens[e] = l;
            lens[rho[e]] = l;
        }
        let sum = |w: &[usize]| w.iter().map(|&e| lens[e]).sum::<usize>();
        if cyls.iter().all(|c| sum(&c.bottom) == sum(&c.top)) {
            let (w1, w2) = (sum(&cyls[0].bottom), sum(&cyls[1].bottom));
            let g = gcd(w1, w2);
            out.push((w2 / g, w1 / g));
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] <= max_len {
                break;
            }
            idx[k] = 1;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn check_candidate(stratum: Stratum, cyls: &[Cylinder; 3], rho: &[usize]) -> bool {
    let (orders, m, fixed) = profile(stratum);
    if rho.len() != m || (0..m).any(|e| rho[rho[e]] != e) {
        return false;
    }
    if (0..m).filter(|&e| rho[e] == e).count() != fixed {
        return false;
    }
    // rotation: bottom(i) reversed is top(pi i), with pi = (0 2)
    let pi = [2, 1, 0];
    for i in 0..3 {
        let rb: Vec<usize> = cyls[i].bottom.iter().rev().map(|&e| rho[e]).collect();
        let rt: Vec<usize> = cyls[i].top.iter().rev().map(|&e| rho[e]).collect();
        if !cyclic_eq(&rb, &cyls[pi[i]].top) || !cyclic_eq(&rt, &cyls[pi[i]].bottom) {
            return false;
        }
    }
    let (vertex, corners) = vertices(cyls, m);
    let mut got: Vec<usize> = corners.iter().map(|c| c / 2 - 1).collect();
    if corners.iter().any(|c| c % 2 != 0) {
        return false;
    }
    let zero_of: Vec<usize> = got.clone();
    got.sort_unstable_by(|a, b| b.cmp(a));
    if got != orders {
        return false;
    }
    let mut act = vec![usize::MAX; corners.len()];
    for e in 0..m {
        let (a, b) = (vertex[2 * e], vertex[2 * rho[e] + 1]);
        if act[a] != usize::MAX && act[a] != b {
            return false;
        }
        act[a] = b;
    }
    if !zero_rule(stratum, &zero_of, &act) || !connected(&vertex, corners.len(), m) {
        return false;
    }
    if stratum == Stratum::Prym211 {
        // a horizontal saddle connection joins the double zero to a simple one
        let double = zero_of.iter().position(|&k| k == 2).unwrap();
        if !(0..m).any(|e| (vertex[2 * e] == double) != (vertex[2 * e + 1] == double)) {
            return false;
        }
    }
    // widths of Q-rank two: the ratio w(C2)/w(C1) is not forced
    width_ratios(cyls, rho, 5).len() >= 2
}

/// Ways to distribute `labels` into `k` labelled nonempty cyclic words, the
/// least label of each word first.
fn arrangements(labels: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    let n = labels.len();
    let mut out = Vec::new();
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut assign = vec![0; n];
        let mut c = code;
        for a in assign.iter_mut() {
            *a = c % k;
            c /= k;
        }
        let groups: Vec<Vec<usize>> =
            (0..k).map(|g| labels.iter().zip(&assign).filter(|(_, &a)| a == g).map(|(&l, _)| l).collect()).collect();
        if groups.iter().any(|g| g.is_empty()) {
            continue;
        }
        let options: Vec<Vec<Vec<usize>>> = groups
            .iter()
            .map(|g| {
                let rest = &g[1..];
                permutations(rest.len())
                    .into_iter()
                    .map(|p| std::iter::once(g[0]).chain(p.iter().map(|&i| rest[i])).collect())
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; k];
        loop {
            out.push((0..k).map(|g| options[g][idx[g]].clone()).collect());
            let mut j = 0;
            while j < k {
                idx[j] += 1;
                if idx[j] < options[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }
    out
}

/// All diagrams of the stratum up to isomorphism and the reflection
/// `y -> -y`, ordered by word lengths and then canonical key.
///
/// A diagram and its mirror image carry the same arithmetic surfaces (the
/// reflection preserves both cylinder decompositions and all intersection
/// numbers), so only one of each mirror pair is kept.
pub fn enumerate_separatrix_diagrams(stratum: Stratum) -> Vec<SeparatrixDiagram> {
    let (_, m, _) = profile(stratum);
    let labels: Vec<usize> = (0..m).collect();
    let tops_all = arrangements(&labels, 3);
    let mut found: BTreeMap<DiagramKey, SeparatrixDiagram> = BTreeMap::new();
    for s1 in 1..m {
        for s2 in 1..m - s1 {
            let bottoms = [(0..s1).collect::<Vec<_>>(), (s1..s1 + s2).collect(), (s1 + s2..m).collect()];
            for tops in &tops_all {
                for c2 in 0..3 {
                    let order = match c2 {
                        0 => [1, 0, 2],
                        1 => [0, 1, 2],
                        _ => [0, 2, 1],
                    };
                    let cyls: [Cylinder; 3] =
                        order.map(|i| Cylinder { bottom: bottoms[i].clone(), top: tops[i].clone() });
                    if cyls[0].bottom.len() != cyls[2].top.len() || cyls[1].bottom.len() != cyls[1].top.len() {
                        continue;
                    }
                    for rho in involutions_for(&cyls, m) {
                        if check_candidate(stratum, &cyls, &rho) {
                            let d = SeparatrixDiagram { stratum, cylinders: cyls.clone(), rho };
                            found.entry(d.key()).or_insert(d);
                        }
                    }
                }
            }
        }
    }
    let mut reps: Vec<SeparatrixDiagram> = Vec::new();
    for (key, d) in &found {
        let mk = d.mirror().key();
        if mk < *key && found.contains_key(&mk) {
            continue;
        }
        reps.push(d.clone());
    }
    reps.sort_by(|a, b| (a.word_lengths(), a.key()).cmp(&(b.word_lengths(), b.key())));
    reps
}

/// Candidate involutions: bottom of `C_i` reversed onto the top of
/// `C_{pi i}` at every cyclic offset.
fn involutions_for(cyls: &[Cylinder; 3], m: usize) -> Vec<Vec<usize>> {
    let pi = [2, 1, 0];
    let mut out = Vec::new();
    let lens: Vec<usize> = (0..3).map(|i| cyls[pi[i]].top.len()).collect();
    let mut idx = [0usize; 3];
    loop {
        let mut rho = vec![usize::MAX; m];
        let mut ok = true;
        for i in 0..3 {
            let t: Vec<usize> = rotations(&cyls[pi[i]].top, idx[i]).collect();
            for (&a, &b) in cyls[i].bottom.iter().rev().zip(&t) {
                if rho[a] != usize::MAX && rho[a] != b {
                    ok = false;
                }
                rho[a] = b;
            }
        }
        if ok && rho.iter().all(|&x| x != usize::MAX) {
            out.push(rho);
        }
        let mut k = 0;
        while k < 3 {
            idx[k] += 1;
            if idx[k] < lens[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 3 {
            break;
        }
    }
    out
}

/// Small combinatorial helpers.
mod words {
    pub fn rotations(w: &[usize], r: usize) -> impl Iterator<Item = usize> + '_ {
        w[r..].iter().chain(&w[..r]).copied()
    }

    pub fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
        a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| rotations(a, r).eq(b.iter().copied())))
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(cur.clone());
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}
