use super::bregman::{bregman_project_log, BregmanOptions};
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::scalar::{tol, Real};

/// Gradient step from the unprojected weights (lazy) or from the previous
/// projected iterate (agile).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MirrorMode {
    Lazy,
    Agile,
}

/// Mirror descent over Choi states of channels `A → B`.
#[derive(Clone, Debug)]
pub struct ProjectedMmwState<T: Real = f64> {
    da: usize,
    db: usize,
    eta: T,
    mode: MirrorMode,
    /// `log W^{(t)}`; for the lazy mode this is `−η Σ L`.
    log_w: HermitianOperator<T>,
    rho: DensityOperator<T>,
    lambda: HermitianOperator<T>,
    opts: BregmanOptions,
    learner_cost: T,
    cumulative: HermitianOperator<T>,
    sq_norms: T,
    rounds: usize,
}

impl<T: Real> ProjectedMmwState<T> {
    /// `η ∈ (0, 1)`.
    pub fn new(dims: (usize, usize), eta: T, mode: MirrorMode) -> Result<Self> {
        if !(eta > T::zero() && eta < T::one()) {
            return Err(Error::Parameter(format!("learning rate {eta} outside (0, 1)")));
        }
        let (da, db) = dims;
        let d = da * db;
        Ok(Self {
            da,
            db,
            eta,
            mode,
            log_w: HermitianOperator::zeros(d),
            rho: DensityOperator::maximally_mixed(d),
            lambda: HermitianOperator::zeros(da),
            opts: BregmanOptions::default(),
            learner_cost: T::zero(),
            cumulative: HermitianOperator::zeros(d),
            sq_norms: T::zero(),
            rounds: 0,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.da, self.db)
    }

    pub fn mode(&self) -> MirrorMode {
        self.mode
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn iterate(&self) -> &DensityOperator<T> {
        &self.rho
    }

    /// Dual variable of the last projection.
    pub fn lambda(&self) -> &HermitianOperator<T> {
        &self.lambda
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Returns `ρ^{(t)}`, then takes the gradient step on `L^{(t)}` and projects.
    pub fn round(&mut self, l: &HermitianOperator<T>) -> Result<DensityOperator<T>> {
        let d = self.da * self.db;
        if l.dim() != d {
            return Err(Error::Dimension(format!("loss of size {} for a {}x{} Choi state", l.dim(), self.da, self.db)));
        }
        let norm = l.spectral_norm();
        if norm > T::one() + tol::<T>(1e-10) {
            return Err(Error::SpectralNorm(norm.as_f64()));
        }
        let current = self.rho.clone();
        self.learner_cost += l.inner(current.op());
        self.cumulative = self.cumulative.add(l);
        self.sq_norms += norm * norm;
        self.rounds += 1;

        let base = match self.mode {
            MirrorMode::Lazy => self.log_w.clone(),
            MirrorMode::Agile => current.op().clamped_log(),
        };
        let y = base.sub(&l.scale(self.eta));
        // log ω = Y − log Tr e^Y, computed with a shift for stability
        let top = y.max_eigenvalue();
        let shifted = y.sub(&HermitianOperator::identity(d).scale(top));
        let log_tr = shifted.exp().trace().ln();
        let log_omega = shifted.sub(&HermitianOperator::identity(d).scale(log_tr));
        self.log_w = y;
        let p = bregman_project_log(&log_omega, (self.da, self.db), Some(&self.lambda), self.opts)?;
        self.lambda = p.lambda;
        self.rho = p.rho;
        Ok(current)
    }

    pub fn learner_cost(&self) -> T {
        self.learner_cost
    }

    /// `Tr[σ ΣL] + c·η Σ‖L‖∞² + (ln(d_A d_B) − H(σ))/η` with `c = 2` (lazy) or `½` (agile).
    pub fn regret_bound(&self, comparator: &DensityOperator<T>) -> T {
        let c = match self.mode {
            MirrorMode::Lazy => T::lit(2.0),
            MirrorMode::Agile => T::lit(0.5),
        };
        comparator.op().inner(&self.cumulative)
            + c * self.eta * self.sq_norms
            + (T::lit((self.da * self.db) as f64).ln() - comparator.entropy()) / self.eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subsystem;
    use crate::random::{random_channel, random_hermitian};
    use crate::rng::stream;

    #[test]
    fn zero_losses_stay_put() {
        for mode in [MirrorMode::Lazy, MirrorMode::Agile] {
            let mut s = ProjectedMmwState::<f64>::new((2, 2), 0.3, mode).unwrap();
            for _ in 0..5 {
                s.round(&HermitianOperator::zeros(4)).unwrap();
            }
            assert!(s.iterate().op().sub(DensityOperator::maximally_mixed(4).op()).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn iterates_are_choi_states_and_bounds_hold() {
        let mut rng = stream(1, "projected", 0);
        for mode in [MirrorMode::Lazy, MirrorMode::Agile] {
            let target = DensityOperator::normalized(random_channel::<f64, _>(2, 2, 2, &mut rng).choi().clone());
            let mut s = ProjectedMmwState::<f64>::new((2, 2), 0.1, mode).unwrap();
            for _ in 0..100 {
                let l = random_hermitian::<f64, _>(4, &mut rng);
                let l = l.scale(1.0 / l.spectral_norm());
                s.round(&l).unwrap();
                let tb = s.iterate().op().partial_trace((2, 2), Subsystem::A).unwrap();
                assert!(tb.sub(&HermitianOperator::identity(2).scale(0.5)).frobenius_norm() <= 1e-8);
            }
            assert!(s.learner_cost() <= s.regret_bound(&target) + 1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ProjectedMmwState::<f64>::new((2, 2), 1.0, MirrorMode::Agile).is_err());
        let mut s = ProjectedMmwState::<f64>::new((2, 2), 0.5, MirrorMode::Lazy).unwrap();
        assert!(s.round(&HermitianOperator::identity(4).scale(2.0)).is_err());
    }
}
