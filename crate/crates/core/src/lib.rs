//! Exact symbolic engine for quantum SU(2): the Hopf *-algebra, left-covariant
//! differential calculi, braided exterior algebras and gauge theory on
//! quantum principal bundles over formal charts and discrete bases.

pub mod bundle;
pub mod calculus;
pub mod error;
pub mod expr;
pub mod forms;
pub mod gauge;
pub mod hopf;
pub mod json;
pub mod lin;
pub mod linalg;
pub mod qspecial;
pub mod scalar;
pub mod verify;

pub use error::{QpbError, Result};
pub use hopf::{Character, Elem, Mono, MuParam, Su2, Tensor2, Tensor3};
pub use lin::Lin;
pub use scalar::{GaussRational, MuScalar, UnitZ};
pub mod braided;
