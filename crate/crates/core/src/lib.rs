//! Exact computations around cusps of Teichmüller curves in the Prym loci
//! `Prym(2,1,1)` and `Prym(2,2)`.
//!
//! * [`exactmath`]: rationals, `Q(sqrt D0)`, `Q(zeta_N)`, polynomials, resultants.
//! * [`solver`]: torsion equations in roots of unity.
//! * [`cuspgeom`]: cylinder data and reduced intersection matrices.
//! * [`origami`]: separatrix diagrams, square-tiled surfaces, prototypes.

pub mod exactmath;
pub mod origami;
pub mod cuspgeom;
pub mod solver;

pub use exactmath::{CycloElt, QuadElt, Rational};
