//! Finite quiver transformations, exact symbolic arithmetic in Leavitt path
//! algebras, and replayable certificates that two radical-square-zero path
//! algebras `kQ/J^2` and `kQ'/J^2` are singularly equivalent.
//!
//! The crate is organised in four layers:
//!
//! * [`quiver`] — the finite directed multigraph model: vertex
//!   classification, reachability, hereditary saturated closures, bridge
//!   paths, incidence matrices and isomorphism testing.
//! * [`moves`] — quiver transformations (collapse, in/out splitting and
//!   amalgamation, source elimination, expansion/contraction, Drinen delays,
//!   heads, higher edge quivers, elementary strong shift equivalence) plus
//!   matrix-level shift equivalence checks.
//! * [`algebra`] — exact arithmetic in the Leavitt path algebra `L_k(Q)`:
//!   monomials `p q*`, Cuntz–Krieger normal forms, rational gradings with a
//!   common denominator, and a small expression language.
//! * [`certify`] — machine checks for the premises that make a collapse move
//!   an equivalence (preconditions, generator-family identities, corner
//!   fullness, grading), and hash-chained certificates replaying whole move
//!   sequences.

pub mod algebra;
pub mod certify;
pub mod moves;
pub mod quiver;

#[cfg(test)]
pub(crate) mod fixtures;

pub use algebra::{Element, FieldKind, Grading, LeavittAlgebra, Monomial};
pub use certify::{build_certificate, check_certificate, Certificate};
pub use moves::{collapse, CollapseResult, Move, Partition};
pub use quiver::{EdgeId, IntMatrix, Path, Quiver, VertexId};
