use super::matrix::{ComplexMatrix, Cx};
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};
use nalgebra::SymmetricEigen;

/// Which factor of a bipartite operator to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Scalar functions applied through the spectral decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFunction {
    Exp,
    Log,
    /// Natural log with eigenvalues floored at 1e-300 (the smallest positive
    /// normal for scalars that cannot represent 1e-300).
    ClampedLog,
}

/// Spectral decomposition `M = V diag(values) V†`.
#[derive(Clone, Debug)]
pub struct Eigen<T: Real = f64> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map(|x| x)
    }

    /// `V diag(f(values)) V†`.
    pub fn map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let d = self.values.len();
        let v = &self.vectors;
        let fv: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(d, d, |i, j| {
            let mut acc = Cx::new(T::zero(), T::zero());
            for k in 0..d {
                acc += v.get(i, k) * v.get(j, k).conj() * fv[k];
            }
            acc
        })
    }
}

/// Square Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Real = f64> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    /// Validates `‖M − M†‖_F ≤ 1e-10·dim`, then stores the exactly Hermitian part.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("{}x{} operator is not square", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_finite() {
            return Err(Error::Parameter("non-finite operator entry".into()));
        }
        let defect = matrix.hermiticity_defect();
        let limit = tol::<T>(1e-10) * T::lit(matrix.rows().max(1) as f64);
        if defect > limit {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        Ok(Self::hermitize(matrix))
    }

    /// `(M + M†)/2` without validation; for results that are Hermitian by construction.
    pub fn hermitize(matrix: ComplexMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let h = (&matrix + &matrix.adjoint()).scale(half);
        Self { matrix: h }
    }

    pub fn zeros(d: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d) }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self { matrix: ComplexMatrix::from_real_diagonal(diag) }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[Cx<T>]) -> Self {
        Self::hermitize(ComplexMatrix::outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `Re Tr[A B]`, exact for Hermitian pairs.
    pub fn inner(&self, other: &Self) -> T {
        self.matrix.trace_product(&other.matrix).re
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { matrix: self.matrix.scale(s) }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.kron(&other.matrix) }
    }

    /// Transpose (equivalently, complex conjugate) of a Hermitian operator.
    pub fn transpose(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        Self::hermitize(&(u * &self.matrix) * &u.adjoint())
    }

    pub fn frobenius_norm(&self) -> T {
        self.matrix.frobenius_norm()
    }

    pub fn eigen(&self) -> Eigen<T> {
        let eig = SymmetricEigen::new(self.matrix.inner().clone());
        Eigen {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: ComplexMatrix::from_inner(eig.eigenvectors),
        }
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v = self.eigen().values;
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues().last().copied().unwrap_or_else(T::zero)
    }

    pub fn is_psd(&self, tolerance: T) -> bool {
        self.min_eigenvalue() >= -tolerance
    }

    /// Applies `f` to the spectrum.
    pub fn apply(&self, f: impl Fn(T) -> T) -> Self {
        Self::hermitize(self.eigen().map(f))
    }

    pub fn herm_fn(&self, which: MatrixFunction) -> Result<Self> {
        match which {
            MatrixFunction::Exp => Ok(self.exp()),
            MatrixFunction::Log => self.log(),
            MatrixFunction::ClampedLog => Ok(self.clamped_log()),
        }
    }

    pub fn exp(&self) -> Self {
        self.apply(|x| x.exp())
    }

    pub fn log(&self) -> Result<Self> {
        let eig = self.eigen();
        if let Some(&bad) = eig.values.iter().find(|&&x| x <= T::zero()) {
            return Err(Error::NonPositive(bad.as_f64()));
        }
        Ok(Self::hermitize(eig.map(|x| x.ln())))
    }

    pub fn clamped_log(&self) -> Self {
        let floor = log_floor::<T>();
        self.apply(|x| if x > floor { x.ln() } else { floor.ln() })
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> T {
        self.eigen().values.iter().fold(T::zero(), |acc, x| acc + x.abs())
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> T {
        self.eigen().values.iter().fold(T::zero(), |acc, x| if x.abs() > acc { x.abs() } else { acc })
    }

    /// Partial trace of an operator on `A ⊗ B`.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<Self> {
        let traced = match keep {
            Subsystem::A => [1usize],
            Subsystem::B => [0usize],
        };
        Ok(Self::hermitize(self.matrix.partial_trace(&[dims.0, dims.1], &traced)?))
    }

    /// Partial trace over arbitrary factors.
    pub fn trace_out(&self, dims: &[usize], traced: &[usize]) -> Result<Self> {
        Ok(Self::hermitize(self.matrix.partial_trace(dims, traced)?))
    }

    pub fn partial_transpose(&self, dims: &[usize], which: &[usize]) -> Result<Self> {
        Ok(Self::hermitize(self.matrix.partial_transpose(dims, which)?))
    }

    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Result<Self> {
        Ok(Self { matrix: self.matrix.permute_subsystems(dims, perm)? })
    }

    pub fn cast<U: Real>(&self) -> HermitianOperator<U> {
        HermitianOperator { matrix: self.matrix.cast() }
    }
}

pub(crate) fn log_floor<T: Real>() -> T {
    let want = T::lit(1e-300);
    if want > T::zero() {
        want
    } else {
        T::min_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian};
    use crate::rng::stream;

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::<f64>::unit(2, 0, 1);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = HermitianOperator::<f64>::zeros(4).exp();
        assert!(z.sub(&HermitianOperator::identity(4)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn log_of_scaled_identity() {
        let e = HermitianOperator::<f64>::identity(3).scale(std::f64::consts::E);
        let l = e.log().unwrap();
        assert!(l.sub(&HermitianOperator::identity(3)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn log_rejects_singular_but_clamped_log_does_not() {
        let p = HermitianOperator::<f64>::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(p.log(), Err(Error::NonPositive(_))));
        let l = p.clamped_log();
        assert!((l.matrix().get(1, 1).re - 1e-300f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn exp_log_round_trip() {
        let mut rng = stream(3, "linalg", 0);
        for _ in 0..20 {
            let rho = random_density::<f64, _>(4, &mut rng);
            let back = rho.op().log().unwrap().exp();
            assert!(back.sub(rho.op()).frobenius_norm() <= 1e-9);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs() {
        let mut rng = stream(4, "linalg", 0);
        for d in [1, 2, 4, 8] {
            let h = random_hermitian::<f64, _>(d, &mut rng);
            let rebuilt = h.eigen().reconstruct();
            assert!((&rebuilt - h.matrix()).frobenius_norm() <= 1e-9 * h.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn trace_norm_cases() {
        let d = HermitianOperator::<f64>::from_real_diagonal(&[1.0, -1.0]);
        assert!((d.trace_norm() - 2.0).abs() < 1e-14);
        let mut rng = stream(5, "linalg", 0);
        let rho = random_density::<f64, _>(4, &mut rng);
        assert!((rho.op().trace_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_is_positive_definite() {
        let mut rng = stream(6, "linalg", 0);
        let h = random_hermitian::<f64, _>(4, &mut rng).scale(5.0);
        assert!(h.exp().min_eigenvalue() > 0.0);
    }

    #[test]
    fn partial_trace_of_identity_choi() {
        // |Γ⟩⟨Γ| for one qubit
        let one = Cx::new(1.0, 0.0);
        let zero = Cx::new(0.0, 0.0);
        let gamma = HermitianOperator::projector(&[one, zero, zero, one]);
        let tb = gamma.partial_trace((2, 2), Subsystem::A).unwrap();
        assert!(tb.sub(&HermitianOperator::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn single_precision_eigen() {
        let mut rng = stream(7, "linalg", 0);
        let h: HermitianOperator<f32> = random_hermitian::<f64, _>(4, &mut rng).cast();
        let rebuilt = h.eigen().reconstruct();
        assert!((&rebuilt - h.matrix()).frobenius_norm() < 1e-4);
    }
}
