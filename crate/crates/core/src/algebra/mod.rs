//! Exact symbolic arithmetic in the Leavitt path algebra `L_k(Q)` of a
//! finite quiver: monomials `p q*` over an exact scalar field, products
//! resolved by the path-overlap rule, Cuntz–Krieger normal forms that decide
//! equality, rational gradings, and a small expression language.

mod element;
mod expr;
mod grading;
mod normal_form;
mod scalar;

#[cfg(test)]
mod tests;

pub use element::{Element, LeavittAlgebra, Monomial};
pub use expr::{parse, LpaExpr, ParseError};
pub use grading::{solve_collapse_grading, Grading};
pub use scalar::{Coeff, FieldKind};

use crate::quiver::{EdgeId, QuiverError, VertexId};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("elements belong to different scalar fields")]
    FieldMismatch,
    #[error("elements belong to different quivers")]
    QuiverMismatch,
    #[error("monomial parts end at different vertices: `{real}` vs `{ghost}`; such products are zero and never stored")]
    RangeMismatch { real: VertexId, ghost: VertexId },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} exceeds the supported bound 2^32")]
    PrimeTooLarge(u64),
    #[error("denominator divisible by the field characteristic {modulus}")]
    DenominatorVanishes { modulus: u64 },
    #[error("unrecognised field spec `{0}`; expected `q` or `fp:<prime>`")]
    BadFieldSpec(String),
    #[error("empty vertex set for corner idempotent")]
    EmptyCorner,
    #[error("grading does not assign a weight to edge `{0}`")]
    GradingMismatch(EdgeId),
    #[error("grading denominator must be at least 1")]
    GradingDenominatorZero,
    #[error("no positive weight assignment in (1/{denominator})Z satisfies the origin path constraints: {}", constraints.join("; "))]
    GradingInfeasible {
        denominator: u32,
        constraints: Vec<String>,
    },
    #[error("cannot add a bare scalar to an element")]
    ScalarElementSum,
    #[error("expression evaluates to a bare scalar; multiply it by a vertex or edge")]
    BareScalar,
}
