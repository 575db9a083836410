//! The candidate pipeline: for every geometry and separatrix diagram,
//! enumerate arithmetic surfaces, keep those with an admissible vertical
//! direction, merge those sharing a prototype, and apply
//! the vertical moduli filter.

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arith::{applicable, enumerate_arithmetic_surfaces};
use super::diagram::{enumerate_separatrix_diagrams, SeparatrixDiagram};
use super::flat::{
    admissible_vertical, class_key, compute_prototype, is_twist_zero, moduli_commensurability_check, realize_surface, ClassKey,
    FlatSurface, Prototype,
};
use crate::cuspgeom::{enumerate_geometries, GeometryPair, ReducedMatrix};
use crate::solver::{enumerate_solutions, SolverError, Stratum};

/// One candidate: an admissible arithmetic surface, or all admissible
/// surfaces of a cell sharing a prototype.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub diagram: usize,
    pub matrix: ReducedMatrix,
    pub d0: u64,
    /// `None` when the diagram has no prototype normal form
    pub prototype: Option<Prototype>,
    pub twist_zero: bool,
    pub commensurable: bool,
    /// admissible surfaces merged into this candidate
    pub multiplicity: usize,
    /// saddle connection lengths and twists (in squares) of the first
    /// merged surface
    pub lengths: Vec<usize>,
    pub twists: [usize; 3],
}

/// Counts for one (matrix, diagram) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub diagram: usize,
    pub matrix: ReducedMatrix,
    pub d0: u64,
    pub arithmetic: usize,
    pub admissible: usize,
    /// admissible surfaces up to the upper triangular group
    pub classes: usize,
    pub candidates: usize,
    pub after_filter: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub stratum: Stratum,
    pub diagrams: Vec<SeparatrixDiagram>,
    pub matrices: Vec<(ReducedMatrix, u64)>,
    /// only pairs for which the diagram admits the matrix
    pub cells: Vec<CellReport>,
    pub candidates: Vec<Candidate>,
}

impl CandidateReport {
    pub fn cell(&self, matrix: &ReducedMatrix, diagram: usize) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.matrix == *matrix && c.diagram == diagram)
    }

    /// Candidates per diagram before the moduli filter.
    pub fn per_diagram_candidates(&self) -> Vec<usize> {
        (0..self.diagrams.len())
            .map(|d| self.cells.iter().filter(|c| c.diagram == d).map(|c| c.candidates).sum())
            .collect()
    }

    pub fn per_diagram_after_filter(&self) -> Vec<usize> {
        (0..self.diagrams.len())
            .map(|d| self.cells.iter().filter(|c| c.diagram == d).map(|c| c.after_filter).sum())
            .collect()
    }

    pub fn total_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn final_candidates(&self) -> Vec<&Candidate> {
        self.candidates.iter().filter(|c| c.commensurable).collect()
    }

    /// `D0` of the trace fields of the surviving candidates.
    pub fn trace_fields(&self) -> BTreeSet<u64> {
        self.final_candidates().iter().map(|c| c.d0).collect()
    }
}

struct Admitted {
    surface: FlatSurface,
    prototype: Option<Prototype>,
    key: ClassKey,
}

/// Everything for one (geometry, diagram) pair.  Admissible surfaces with
/// the same prototype form one candidate; on diagrams without a prototype
/// normal form every admissible surface is a candidate of its own.
/// `classes` counts the finer identification by [`class_key`].
pub fn run_cell(stratum: Stratum, index: usize, d: &SeparatrixDiagram, g: &GeometryPair) -> (CellReport, Vec<Candidate>) {
    let surfaces = enumerate_arithmetic_surfaces(d, &g.mred);
    let admitted: Vec<Admitted> = surfaces
        .par_iter()
        .filter_map(|s| {
            let fs = realize_surface(s, d, g).expect("arithmetic surfaces realise their geometry");
            admissible_vertical(&fs, stratum).then(|| {
                let key = class_key(&fs);
                let prototype = compute_prototype(&fs).ok();
                Admitted { surface: fs, prototype, key }
            })
        })
        .collect();
    let classes: BTreeSet<&ClassKey> = admitted.iter().map(|a| &a.key).collect();
    let mut groups: BTreeMap<Result<&Prototype, usize>, Vec<&FlatSurface>> = BTreeMap::new();
    for (i, a) in admitted.iter().enumerate() {
        groups.entry(a.prototype.as_ref().ok_or(i)).or_default().push(&a.surface);
    }
    let mut candidates: Vec<Candidate> = groups
        .into_iter()
        .map(|(key, members)| {
            let fs = members[0];
            Candidate {
                diagram: index,
                matrix: g.mred,
                d0: g.d0(),
                prototype: key.ok().cloned(),
                twist_zero: is_twist_zero(fs),
                commensurable: moduli_commensurability_check(fs),
                multiplicity: members.len(),
                lengths: fs.surface.lengths.clone(),
                twists: fs.surface.twists,
            }
        })
        .collect();
    candidates.sort_by(|a, b| (&a.prototype, &a.lengths, a.twists).cmp(&(&b.prototype, &b.lengths, b.twists)));
    let report = CellReport {
        diagram: index,
        matrix: g.mred,
        d0: g.d0(),
        arithmetic: surfaces.len(),
        admissible: admitted.len(),
        classes: classes.len(),
        candidates: candidates.len(),
        after_filter: candidates.iter().filter(|c| c.commensurable).count(),
    };
    debug!("{} diagram {}: {:?}", g.mred, index, report);
    (report, candidates)
}

/// The enumeration stages from a list of geometries onwards.
pub fn run_geometries(stratum: Stratum, geometries: &[GeometryPair], only: Option<usize>) -> CandidateReport {
    let diagrams = enumerate_separatrix_diagrams(stratum);
    let mut cells = Vec::new();
    let mut candidates = Vec::new();
    for g in geometries {
        for (i, d) in diagrams.iter().enumerate() {
            if only.is_some_and(|o| o != i) || !applicable(d, &g.mred) {
                continue;
            }
            let (cell, cands) = run_cell(stratum, i, d, g);
            info!("{} diagram {}: {} arithmetic, {} admissible, {} candidates", g.mred, i, cell.arithmetic, cell.admissible, cell.candidates);
            cells.push(cell);
            candidates.extend(cands);
        }
    }
    let matrices = geometries.iter().map(|g| (g.mred, g.d0())).collect();
    CandidateReport { stratum, diagrams, matrices, cells, candidates }
}

/// Solve, pair cusp data into geometries, and run the enumeration.
pub fn run_pipeline(stratum: Stratum) -> Result<CandidateReport, SolverError> {
    let sols = enumerate_solutions(stratum)?;
    let geoms = enumerate_geometries(stratum, &sols);
    Ok(run_geometries(stratum, &geoms, None))
}
