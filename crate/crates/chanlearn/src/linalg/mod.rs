//! Dense complex linear algebra.
//!
//! Index convention: row-major semantic order, and in any tensor product the
//! first factor is the most significant digit of the flattened index. For an
//! n-qubit register, qubit 1 is the most significant bit.

mod density;
mod hermitian;
mod matrix;
pub mod subsystems;

pub use density::DensityOperator;
pub use hermitian::{Eigen, HermitianOperator, MatrixFunction, Subsystem};
pub use matrix::{Cx, ComplexMatrix};
