//! Dense complex linear algebra and spectral primitives.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Composite
//! indices follow the row-major Kronecker convention: for `A ⊗ B` with `B`
//! of shape `rB × cB`, entry `(i·rB + k, j·cB + l)` equals `A[i,j]·B[k,l]`.

mod jacobi;
mod linalg;
pub mod random;
mod types;

pub use linalg::*;
pub use types::{DensityMatrix, HermitianMatrix, UnitVector};
