use super::rep::ChannelRep;
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::pauli::bell_coefficients;
use crate::scalar::{tol, Real};

/// Two-outcome channel test `0 ≤ E ≤ σ_A ⊗ I_B`; the Born value `Tr[E C(N)]`
/// is the probability that the test accepts `N`.
#[derive(Clone, Debug)]
pub struct ChannelTestOperator<T: Real = f64> {
    op: HermitianOperator<T>,
    certificate: Option<DensityOperator<T>>,
    d_in: usize,
    d_out: usize,
}

impl<T: Real> ChannelTestOperator<T> {
    /// Checks `E ⪰ 0`, and `σ ⊗ I − E ⪰ 0` when a certificate is given (tolerance 1e-9).
    pub fn new(op: HermitianOperator<T>, certificate: Option<DensityOperator<T>>, d_in: usize, d_out: usize) -> Result<Self> {
        if op.dim() != d_in * d_out {
            return Err(Error::Dimension(format!("test operator of size {} for {d_in}x{d_out}", op.dim())));
        }
        let t = tol::<T>(1e-9);
        if op.min_eigenvalue() < -t {
            return Err(Error::InvalidTestOperator("not positive semidefinite".into()));
        }
        if let Some(sigma) = &certificate {
            if sigma.dim() != d_in {
                return Err(Error::Dimension("certificate acts on the wrong space".into()));
            }
            let gap = sigma.op().kron(&HermitianOperator::identity(d_out)).sub(&op);
            if gap.min_eigenvalue() < -t {
                return Err(Error::InvalidTestOperator("not dominated by its certificate".into()));
            }
        }
        Ok(Self { op, certificate, d_in, d_out })
    }

    /// `E = ρ^T ⊗ M` with certificate `ρ^T`: prepare `ρ`, measure the effect `M`.
    pub fn product(rho: &DensityOperator<T>, effect: &HermitianOperator<T>) -> Result<Self> {
        let t = tol::<T>(1e-9);
        if effect.min_eigenvalue() < -t || effect.max_eigenvalue() > T::one() + t {
            return Err(Error::InvalidTestOperator("effect outside [0, I]".into()));
        }
        let rt = rho.transpose();
        let op = rt.op().kron(effect);
        Ok(Self { op, certificate: Some(rt), d_in: rho.dim(), d_out: effect.dim() })
    }

    /// Trusted constructor for operators that satisfy the constraints by construction.
    pub(crate) fn trusted(op: HermitianOperator<T>, certificate: Option<DensityOperator<T>>, d_in: usize, d_out: usize) -> Self {
        Self { op, certificate, d_in, d_out }
    }

    pub fn zero(d_in: usize, d_out: usize) -> Self {
        Self::trusted(HermitianOperator::zeros(d_in * d_out), Some(DensityOperator::maximally_mixed(d_in)), d_in, d_out)
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn certificate(&self) -> Option<&DensityOperator<T>> {
        self.certificate.as_ref()
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `e_{z,x} = Tr[E Γ^{z,x}]` for square n-qubit tests.
    pub fn bell_coefficients(&self) -> Result<Vec<T>> {
        if self.d_in != self.d_out || !self.d_in.is_power_of_two() {
            return Err(Error::Dimension("Bell coefficients need a square qubit test".into()));
        }
        bell_coefficients(self.op.matrix(), self.d_in.trailing_zeros() as usize)
    }
}

/// Generalized Born rule `Tr[E C(N)]`.
pub fn born_value<T: Real>(e: &ChannelTestOperator<T>, ch: &ChannelRep<T>) -> Result<T> {
    if e.d_in != ch.d_in() || e.d_out != ch.d_out() {
        return Err(Error::Dimension("test operator and channel shapes differ".into()));
    }
    Ok(e.op.inner(ch.choi()))
}
