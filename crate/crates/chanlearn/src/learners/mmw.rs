use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::scalar::{tol, Real};

/// Matrix multiplicative weights: `ω^{(t)} ∝ exp(−η Σ_{s<t} L^{(s)})`.
#[derive(Clone, Debug)]
pub struct MmwState<T: Real = f64> {
    eta: T,
    cumulative: HermitianOperator<T>,
    /// `Σ_t Tr[L^{(t)} ω^{(t)}]`.
    learner_cost: T,
    /// `Σ_t Tr[(L^{(t)})² ω^{(t)}]`.
    second_moment: T,
    rounds: usize,
}

impl<T: Real> MmwState<T> {
    pub fn new(d: usize, eta: T) -> Result<Self> {
        if !(eta > T::zero() && eta <= T::one()) {
            return Err(Error::Parameter(format!("learning rate {eta} outside (0, 1]")));
        }
        Ok(Self { eta, cumulative: HermitianOperator::zeros(d), learner_cost: T::zero(), second_moment: T::zero(), rounds: 0 })
    }

    pub fn dim(&self) -> usize {
        self.cumulative.dim()
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn cumulative_loss(&self) -> &HermitianOperator<T> {
        &self.cumulative
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn iterate(&self) -> DensityOperator<T> {
        // shift by the top eigenvalue before exponentiating
        let y = self.cumulative.scale(-self.eta);
        let top = y.max_eigenvalue();
        DensityOperator::normalized(y.sub(&HermitianOperator::identity(self.dim()).scale(top)).exp())
    }

    /// Returns `ω^{(t)}` and absorbs `L^{(t)}` (`‖L‖∞ ≤ 1 + 1e-10`).
    pub fn round(&mut self, l: &HermitianOperator<T>) -> Result<DensityOperator<T>> {
        if l.dim() != self.dim() {
            return Err(Error::Dimension(format!("loss of size {} for an MMW state of size {}", l.dim(), self.dim())));
        }
        let norm = l.spectral_norm();
        if norm > T::one() + tol::<T>(1e-10) {
            return Err(Error::SpectralNorm(norm.as_f64()));
        }
        let omega = self.iterate();
        self.learner_cost += l.inner(omega.op());
        let l2 = HermitianOperator::hermitize(l.matrix() * l.matrix());
        self.second_moment += l2.inner(omega.op());
        self.cumulative = self.cumulative.add(l);
        self.rounds += 1;
        Ok(omega)
    }

    pub fn learner_cost(&self) -> T {
        self.learner_cost
    }

    /// `Tr[ρ ΣL] + η Σ Tr[L²ω] + (ln d − H(ρ))/η`.
    pub fn entropic_bound(&self, comparator: &DensityOperator<T>) -> T {
        comparator.op().inner(&self.cumulative)
            + self.eta * self.second_moment
            + (T::lit(self.dim() as f64).ln() - comparator.entropy()) / self.eta
    }
}
