//! Distinguishability of quantum channels.
//!
//! The crate computes trace-norm based distances between quantum channels
//! (induced trace norm, its ancilla-extended versions and the diamond
//! norm) through the maximum output fidelity of complementary maps, and
//! constructs pure discriminating inputs whose auxiliary system has
//! dimension twice the Choi rank of the channel difference.
//!
//! Tensor products always use the row-major convention: in `A ⊗ B` the
//! first factor carries the high-order index.

pub mod channel;
pub mod discriminate;
pub mod error;
pub mod examples;
pub mod json;
pub mod metrics;
pub mod numerics;
pub mod oracle;
pub mod rankred;

pub use channel::{ChoiRep, KrausRep, StinespringRep, SuperOp};
pub use error::{Error, Result};
pub use numerics::{
    ComplexMatrix, ComplexVector, DensityMatrix, HermitianMatrix, UnitVector, C64,
    DEFAULT_RANK_TOL,
};
