//! Exact construction and verification of Lie algebras with S₃ and S₄ symmetry,
//! together with the coordinate algebras that describe them.

pub mod algebra;
pub mod catalog;
pub mod coordinatize;
pub mod gmalcev;
pub mod io;
pub mod linalg;
pub mod loopring;
pub mod scalar;
pub mod symaction;
pub mod tetra;

pub use algebra::{AlgebraSpec, Bilinear, Trilinear};
pub use linalg::{LinearMap, Matrix, Span};
pub use scalar::{Field, OmegaField, Rational, Scalar};

/// Algebras over ℚ(ω), the default scalar field.
pub type Algebra = AlgebraSpec<Scalar>;
/// Algebras with rational structure constants.
pub type RationalAlgebra = AlgebraSpec<Rational>;
