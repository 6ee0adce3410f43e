//! Machine verification of the four exact sequences of groups attached to an
//! extension `R <= S` of finite-dimensional `F_p`-algebras sharing a set of
//! local units.
//!
//! The library builds, over concrete fixtures:
//!
//! * the group `Inv(R <= S)` of invertible unital `R`-subbimodules of `S`,
//! * the automorphism groups `Aut_{S-R}(S)` and `Aut_{R-rings}(S)`,
//! * couplings `(P -> X)` of an invertible `R`-bimodule with an invertible
//!   `S`-bimodule, and the group of their classes reachable from the two
//!   canonical embeddings,
//!
//! together with every homomorphism between them, and checks exactness at
//! each interior node with explicit witnesses on failure. Everything is exact
//! arithmetic over a prime field; all values are immutable after construction
//! and safe for concurrent reads.

pub mod algebra;
pub mod auts;
pub mod bimodule;
pub mod coupling;
pub mod error;
pub mod exec;
pub mod fixture;
pub mod group;
pub mod inv;
pub mod linalg;
pub mod picard;
pub mod samples;
pub mod sequences;
pub mod tensor;

pub use algebra::{Algebra, Extension, ValidationReport};
pub use error::{Error, Result};
pub use linalg::{Mat, Scalar, Subspace};
