//! Relative-entropy projection onto Choi states, `Tr_B ρ = I_A/d_A`.
//!
//! The minimizer has the form `ρ(Λ) = exp(log ω − Λ ⊗ I_B)` for a Hermitian
//! `Λ` on `A`, found by minimizing the convex dual
//! `φ(Λ) = Tr exp(log ω − Λ ⊗ I) + Tr[Λ]/d_A`, whose gradient is
//! `I/d_A − Tr_B ρ(Λ)`. At the optimum `Tr ρ = 1` follows from the constraint.
//!
//! The solver is gradient descent with a Barzilai–Borwein trial step and
//! Armijo backtracking (a step that shrinks the gradient is also accepted).

use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator, Subsystem};
use crate::scalar::{tol, Real};

#[derive(Clone, Copy, Debug)]
pub struct BregmanOptions {
    /// Stop when `‖I/d_A − Tr_B ρ‖_F` falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for BregmanOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_iterations: 500 }
    }
}

#[derive(Clone, Debug)]
pub struct Projection<T: Real = f64> {
    pub rho: DensityOperator<T>,
    /// Dual variable, reusable as a warm start.
    pub lambda: HermitianOperator<T>,
    pub iterations: usize,
    pub residual: T,
}

struct Dual<'a, T: Real> {
    log_omega: &'a HermitianOperator<T>,
    da: usize,
    db: usize,
}

impl<T: Real> Dual<'_, T> {
    /// `(φ(Λ), ρ(Λ), ∇φ(Λ))`.
    fn eval(&self, lambda: &HermitianOperator<T>) -> Result<(T, HermitianOperator<T>, HermitianOperator<T>)> {
        let y = self.log_omega.sub(&lambda.kron(&HermitianOperator::identity(self.db)));
        let rho = y.exp();
        let inv = T::one() / T::lit(self.da as f64);
        let value = rho.trace() + lambda.trace() * inv;
        let grad = HermitianOperator::identity(self.da).scale(inv).sub(&rho.partial_trace((self.da, self.db), Subsystem::A)?);
        Ok((value, rho, grad))
    }
}

/// Projection of `ω` given through `log ω`; `warm` seeds the dual variable.
pub fn bregman_project_log<T: Real>(
    log_omega: &HermitianOperator<T>,
    dims: (usize, usize),
    warm: Option<&HermitianOperator<T>>,
    opts: BregmanOptions,
) -> Result<Projection<T>> {
    let (da, db) = dims;
    if log_omega.dim() != da * db {
        return Err(Error::Dimension(format!("operator of size {} for a {da}x{db} system", log_omega.dim())));
    }
    let dual = Dual { log_omega, da, db };
    let mut lambda = match warm {
        Some(l) if l.dim() == da => l.clone(),
        _ => HermitianOperator::zeros(da),
    };
    let (mut value, mut rho, mut grad) = dual.eval(&lambda)?;
    let target = tol::<T>(opts.tolerance);
    let mut step = T::one();
    let mut prev: Option<(HermitianOperator<T>, HermitianOperator<T>)> = None;
    let c1 = T::lit(1e-4);
    for it in 0..=opts.max_iterations {
        let gnorm = grad.frobenius_norm();
        if gnorm <= target {
            return Ok(Projection { rho: DensityOperator::normalized(rho), lambda, iterations: it, residual: gnorm });
        }
        if it == opts.max_iterations {
            return Err(Error::NoConvergence { residual: gnorm.as_f64(), iterations: it });
        }
        if let Some((pl, pg)) = &prev {
            let s = lambda.sub(pl);
            let yv = grad.sub(pg);
            let sy = s.inner(&yv);
            if sy > T::zero() {
                step = s.inner(&s) / sy;
            }
        }
        let g2 = grad.inner(&grad);
        let mut accepted = None;
        for _ in 0..60 {
            let trial = lambda.sub(&grad.scale(step));
            let (v, r, g) = dual.eval(&trial)?;
            // near the optimum φ differences drop below rounding, so a
            // smaller gradient also counts as progress
            if v <= value - c1 * step * g2 || g.frobenius_norm() < gnorm {
                accepted = Some((trial, v, r, g));
                break;
            }
            step = step * T::lit(0.5);
        }
        let (trial, v, r, g) = accepted.ok_or(Error::NoConvergence { residual: gnorm.as_f64(), iterations: it })?;
        prev = Some((lambda, grad));
        lambda = trial;
        value = v;
        rho = r;
        grad = g;
    }
    unreachable!("loop returns on its last iteration")
}

/// `argmin { D(ρ‖ω) : ρ ⪰ 0, Tr_B ρ = I_A/d_A }` for a density operator `ω`
/// (eigenvalues floored at 1e-300 before taking the logarithm).
pub fn bregman_project<T: Real>(omega: &DensityOperator<T>, dims: (usize, usize)) -> Result<DensityOperator<T>> {
    Ok(bregman_project_log(&omega.op().clamped_log(), dims, None, BregmanOptions::default())?.rho)
}
