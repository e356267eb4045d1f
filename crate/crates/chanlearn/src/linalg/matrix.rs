use super::subsystems::{complement, offsets, permutation_map};
use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::DMatrix;
use num_complex::Complex;
use std::ops::{Add, Mul, Neg, Sub};

pub type Cx<T> = Complex<T>;

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real = f64> {
    data: DMatrix<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { data: DMatrix::from_element(rows, cols, Cx::new(T::zero(), T::zero())) }
    }

    pub fn identity(d: usize) -> Self {
        Self { data: DMatrix::identity(d, d) }
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Cx<T>>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter("non-finite matrix entry".into()));
        }
        Ok(Self { data: DMatrix::from_row_slice(rows, cols, &entries) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        Self { data: DMatrix::from_fn(rows, cols, |i, j| f(i, j)) }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let d = diag.len();
        Self::from_fn(d, d, |i, j| if i == j { Cx::new(diag[i], T::zero()) } else { Cx::new(T::zero(), T::zero()) })
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Cx<T>], w: &[Cx<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// `|i⟩⟨j|` in dimension `d`.
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m.data[(i, j)] = Cx::new(T::one(), T::zero());
        m
    }

    pub fn from_inner(data: DMatrix<Cx<T>>) -> Self {
        Self { data }
    }

    pub fn inner(&self) -> &DMatrix<Cx<T>> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<Cx<T>> {
        self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cx<T> {
        self.data[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Cx<T>) {
        self.data[(i, j)] = z;
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Cx<T>> {
        let mut v = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                v.push(self.data[(i, j)]);
            }
        }
        v
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.transpose() }
    }

    pub fn conjugate(&self) -> Self {
        Self { data: self.data.conjugate() }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { data: self.data.kronecker(&other.data) }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { data: self.data.map(|z| z * s) }
    }

    pub fn scale_cx(&self, s: Cx<T>) -> Self {
        Self { data: self.data.map(|z| z * s) }
    }

    pub fn trace(&self) -> Cx<T> {
        self.data.trace()
    }

    /// `Tr[A B]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Cx<T> {
        assert_eq!(self.cols(), other.rows());
        assert_eq!(self.rows(), other.cols());
        let mut acc = Cx::new(T::zero(), T::zero());
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                acc += self.data[(i, k)] * other.data[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| {
            let a = z.norm_sqr().sqrt();
            if a > acc {
                a
            } else {
                acc
            }
        })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::max_value().unwrap_or_else(T::one);
        }
        let n = self.rows();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[(i, j)] - self.data[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_unitary(&self, tolerance: T) -> bool {
        self.is_square() && (&self.adjoint() * self - Self::identity(self.rows())).frobenius_norm() <= tolerance
    }

    fn check_factors(&self, dims: &[usize]) -> Result<()> {
        let d: usize = dims.iter().product();
        if !self.is_square() || d != self.rows() {
            return Err(Error::Dimension(format!(
                "subsystem dims {dims:?} do not match a {}x{} operator",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    /// Traces out the factors listed in `traced`; remaining factors keep their order.
    pub fn partial_trace(&self, dims: &[usize], traced: &[usize]) -> Result<Self> {
        self.check_factors(dims)?;
        let kept = complement(dims.len(), traced);
        let ok = offsets(dims, &kept);
        let ot = offsets(dims, traced);
        let mut out = Self::zeros(ok.len(), ok.len());
        for (a, &ra) in ok.iter().enumerate() {
            for (b, &rb) in ok.iter().enumerate() {
                let mut acc = Cx::new(T::zero(), T::zero());
                for &k in &ot {
                    acc += self.data[(ra + k, rb + k)];
                }
                out.data[(a, b)] = acc;
            }
        }
        Ok(out)
    }

    /// Transposes the factors listed in `which`.
    pub fn partial_transpose(&self, dims: &[usize], which: &[usize]) -> Result<Self> {
        self.check_factors(dims)?;
        let others = complement(dims.len(), which);
        let ok = offsets(dims, &others);
        let os = offsets(dims, which);
        let mut out = Self::zeros(self.rows(), self.cols());
        for &rk in &ok {
            for &ck in &ok {
                for &rs in &os {
                    for &cs in &os {
                        out.data[(rk + rs, ck + cs)] = self.data[(rk + cs, ck + rs)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reorders tensor factors: new factor `k` is old factor `perm[k]`.
    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Result<Self> {
        self.check_factors(dims)?;
        let mut seen = vec![false; dims.len()];
        if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Dimension(format!("{perm:?} is not a permutation of {} factors", dims.len())));
        }
        let map = permutation_map(dims, perm);
        Ok(Self::from_fn(self.rows(), self.cols(), |i, j| self.data[(map[i], map[j])]))
    }

    /// Casts entries to another scalar type.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix { data: self.data.map(|z| Cx::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))) }
    }
}

impl<T: Real> Mul<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix { data: &self.data * &rhs.data }
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        &self * &rhs
    }
}

impl<T: Real> Add<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl<T: Real> Add for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix { data: self.data + rhs.data }
    }
}

impl<T: Real> Sub<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl<T: Real> Sub for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix { data: self.data - rhs.data }
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix { data: -self.data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    fn sample(d: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        ComplexMatrix::from_fn(d, d, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            c(a, b)
        })
    }

    #[test]
    fn row_major_round_trip() {
        let entries = vec![c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0), c(4.0, 0.0), c(5.0, 0.0), c(6.0, 2.0)];
        let m = ComplexMatrix::from_row_major(2, 3, entries.clone()).unwrap();
        assert_eq!(m.get(0, 1), c(2.0, 1.0));
        assert_eq!(m.get(1, 0), c(4.0, 0.0));
        assert_eq!(m.to_row_major(), entries);
        assert!(ComplexMatrix::from_row_major(2, 2, entries).is_err());
        assert!(ComplexMatrix::<f64>::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn kron_is_first_factor_major() {
        let a = ComplexMatrix::unit(2, 1, 0);
        let b = ComplexMatrix::unit(2, 0, 1);
        let k = a.kron(&b);
        // |1⟩⟨0| ⊗ |0⟩⟨1| = |10⟩⟨01|
        assert_eq!(k.get(2, 1), c(1.0, 0.0));
        assert_eq!(k.frobenius_norm(), 1.0);
    }

    #[test]
    fn partial_trace_of_product() {
        let x = sample(2, 1);
        let y = sample(3, 2);
        let xy = x.kron(&y);
        let trb = xy.partial_trace(&[2, 3], &[1]).unwrap();
        assert!((trb - x.scale_cx(y.trace())).frobenius_norm() < 1e-12);
        let tra = xy.partial_trace(&[2, 3], &[0]).unwrap();
        assert!((tra - y.scale_cx(x.trace())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn partial_traces_compose_to_trace() {
        let m = sample(12, 3);
        let dims = [2, 3, 2];
        let a = m.partial_trace(&dims, &[1]).unwrap().partial_trace(&[2, 2], &[0, 1]).unwrap();
        let b = m.partial_trace(&dims, &[0, 2]).unwrap().partial_trace(&[3], &[0]).unwrap();
        assert!((a.get(0, 0) - m.trace()).norm() < 1e-12);
        assert!((b.get(0, 0) - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_of_product() {
        let x = sample(2, 4);
        let y = sample(3, 5);
        let pt = x.kron(&y).partial_transpose(&[2, 3], &[1]).unwrap();
        assert!((pt - x.kron(&y.transpose())).frobenius_norm() < 1e-12);
        let full = x.kron(&y).partial_transpose(&[2, 3], &[0, 1]).unwrap();
        assert!((full - x.kron(&y).transpose()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn permutation_swaps_factors() {
        let x = sample(2, 6);
        let y = sample(3, 7);
        let swapped = x.kron(&y).permute_subsystems(&[2, 3], &[1, 0]).unwrap();
        assert!((swapped - y.kron(&x)).frobenius_norm() < 1e-12);
        assert!(x.kron(&y).permute_subsystems(&[2, 3], &[0, 0]).is_err());
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = sample(5, 8);
        let b = sample(5, 9);
        assert!(((&a * &b).trace() - a.trace_product(&b)).norm() < 1e-12);
    }

    #[test]
    fn single_precision_works() {
        let m: ComplexMatrix<f32> = sample(3, 10).cast();
        assert!(m.kron(&ComplexMatrix::identity(2)).partial_trace(&[3, 2], &[1]).is_ok());
    }
}
