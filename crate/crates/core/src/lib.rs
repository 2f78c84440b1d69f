//! Symbolic kernel for graded Q-manifolds.
//!
//! Polynomials live in free graded-commutative algebras with exact rational
//! coefficients. On top of that sit derivations, shifted tangent algebras
//! with their Cartan calculus, characteristic classes of trivial bundles,
//! symplectic PQ-structures and equivariant extensions. Every identity the
//! kernel relies on is checked exactly and reported as a [`cert::Certificate`].

pub mod cert;
pub mod charclass;
pub mod derivation;
pub mod dsl;
pub mod equivariant;
pub mod error;
pub mod graded;
pub mod lie;
pub mod linalg;
pub mod pq;
pub mod tangent;

pub use cert::{Certificate, Status};
pub use derivation::{check_nilpotent, commutator, derived_bracket, field_strength, Derivation, Embedding, Morphism};
pub use error::{Error, Result};
pub use graded::{GradedAlgebra, Monomial, Polynomial, Rational};
