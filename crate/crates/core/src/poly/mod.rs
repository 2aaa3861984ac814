//! Dense polynomials over the rationals and over rational polynomials,
//! resultants and real root isolation.

pub mod dense;
pub mod resultant;
pub mod sturm;

pub use dense::{BiPoly, Coeff, Poly, UniPoly, Var};
pub use resultant::{discriminant, resultant, resultant_eliminating};
pub use sturm::{isolate_all, isolate_roots, isolate_roots_above, sturm_count, RootInterval};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
}
