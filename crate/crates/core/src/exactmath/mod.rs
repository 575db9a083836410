//! Exact arithmetic: rationals, real quadratic fields, cyclotomic fields,
//! polynomials and resultants.

pub mod cyclo;
pub mod error;
pub mod field;
pub mod fp;
pub mod multipoly;
pub mod poly;
pub mod quad;
pub mod serial;

pub use cyclo::{as_quadratic, cyclotomic_polynomial, embed_quadratic, sqrt_in_cyclotomic, CycloCtx, CycloElt};
pub use error::ExactError;
pub use field::{rat, rat_int, Field, Rational, RationalAlgebra, Ring};
pub use multipoly::{sylvester_resultant, MultiPoly};
pub use poly::UniPoly;
pub use quad::QuadElt;

/// Resultant of two univariate polynomials over a field.
pub fn resultant<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<F, ExactError> {
    f.resultant(g)
}

/// Rational roots with multiplicity.
pub fn rational_roots(f: &UniPoly<Rational>) -> Vec<Rational> {
    f.rational_roots()
}

/// Norm of a quadratic element.
pub fn quad_norm(x: &QuadElt) -> Rational {
    x.norm()
}

/// Conjugate of a quadratic element.
pub fn quad_conj(x: &QuadElt) -> QuadElt {
    x.conj()
}
