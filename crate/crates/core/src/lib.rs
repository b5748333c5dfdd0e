//! Characters of fixed-point subgroups `C_G(sigma)` of algebra groups
//! `G = 1 + J` over finite fields of odd characteristic.
//!
//! Every irreducible character of `C_G(sigma)` is induced from a linear
//! character of `C_H(sigma)` for some sigma-invariant algebra subgroup `H`.
//! [`gutkin::Engine`] finds such a pair for each irreducible by descending
//! through codimension-one subalgebras, and checks the result against an
//! independently computed character table.

pub mod algebra;
pub mod characters;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod group;
pub mod gutkin;
pub(crate) mod linalg;

pub use algebra::{AlgebraElement, AlgebraSpec, Limits, ScalarField, StructConst, Subspace};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, RootOfUnity, Scalar};
pub use group::{GroupData, GroupElement, Subgroup};
pub use gutkin::{Engine, MonomialPair};
