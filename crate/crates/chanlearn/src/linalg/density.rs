use super::hermitian::HermitianOperator;
use super::matrix::Cx;
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Positive semidefinite operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T: Real = f64> {
    op: HermitianOperator<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Checks eigenvalues ≥ −1e-8 and trace within 1e-10 of one.
    pub fn new(op: HermitianOperator<T>) -> Result<Self> {
        let tr = op.trace();
        if (tr - T::one()).abs() > tol::<T>(1e-10) {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = op.min_eigenvalue();
        if min < -tol::<T>(1e-8) {
            return Err(Error::InvalidState(format!("eigenvalue {min}")));
        }
        Ok(Self { op })
    }

    /// Normalizes a nonzero PSD operator without further checks.
    pub fn normalized(op: HermitianOperator<T>) -> Self {
        let tr = op.trace();
        Self { op: op.scale(T::one() / tr) }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { op: HermitianOperator::identity(d).scale(T::one() / T::lit(d as f64)) }
    }

    /// `|ψ⟩⟨ψ|` for a nonzero vector, normalized.
    pub fn pure(psi: &[Cx<T>]) -> Self {
        Self::normalized(HermitianOperator::projector(psi))
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = vec![Cx::new(T::zero(), T::zero()); d];
        v[k] = Cx::new(T::one(), T::zero());
        Self::pure(&v)
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn into_op(self) -> HermitianOperator<T> {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> T {
        self.op
            .eigen()
            .values
            .iter()
            .filter(|&&x| x > T::zero())
            .fold(T::zero(), |acc, &x| acc - x * x.ln())
    }

    /// `D(ρ‖σ) = Tr[ρ log ρ] − Tr[ρ log σ]`, with σ's spectrum floored as in the clamped log.
    pub fn relative_entropy(&self, sigma: &Self) -> T {
        let cross = self.op.inner(&sigma.op.clamped_log());
        -self.entropy() - cross
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { op: self.op.kron(&other.op) }
    }

    pub fn transpose(&self) -> Self {
        Self { op: self.op.transpose() }
    }
}
