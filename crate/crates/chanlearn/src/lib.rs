//! Online learning of quantum channels and multi-time processes.
//!
//! The crate covers dense operator algebra on a few qubits, channel and comb
//! representations, multiplicative-weights learners with their regret and
//! mistake guarantees, the explicit adversaries that witness lower bounds,
//! and Bell-sampling shadow tomography.
//!
//! Numeric types are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod adversaries;
pub mod bounds;
pub mod channels;
pub mod combs;
pub mod error;
pub mod learners;
pub mod linalg;
pub mod pauli;
pub mod random;
pub mod rng;
pub mod scalar;
pub mod serialization;
pub mod shadow;
pub mod transcript;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Hermitian = linalg::HermitianOperator<f64>;
pub type Density = linalg::DensityOperator<f64>;
pub type Channel = channels::ChannelRep<f64>;
pub type ErrorRates = channels::ErrorRateVector<f64>;
pub type TestOperator = channels::ChannelTestOperator<f64>;
