//! Separatrix diagrams, arithmetic (square-tiled) surfaces, their
//! realisation with the exact cusp geometry, prototypes and the candidate
//! pipeline.

pub mod arith;
pub mod diagram;
pub mod flat;
pub mod pipeline;
pub mod surface;

pub use arith::{applicable, enumerate_arithmetic_surfaces, length_assignments, square_counts, ArithmeticSurface};
pub use diagram::{enumerate_separatrix_diagrams, Cylinder, SeparatrixDiagram};
pub use surface::{CylinderInfo, Direction, Origami};
pub use flat::{
    admissible_vertical, class_key, compute_prototype, is_twist_zero, moduli_commensurability_check, realize_surface, ClassKey,
    FlatSurface, Normalized, Prototype, PrototypeError, RealizeError,
};
pub use pipeline::{run_cell, run_geometries, run_pipeline, Candidate, CandidateReport, CellReport};
