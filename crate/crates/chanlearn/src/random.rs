//! Random states, effects, unitaries and channels.
//!
//! Unitaries and isometries are Haar-distributed via the QR decomposition of
//! a complex Gaussian matrix with the phases of `R`'s diagonal divided out.
//! Random channels are Stinespring dilations of a Haar isometry
//! `C^{d_in} → C^{d_out} ⊗ C^{rank}`.

use crate::channels::{ChannelRep, ErrorRateVector};
use crate::linalg::{ComplexMatrix, Cx, DensityOperator, HermitianOperator};
use crate::scalar::Real;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn gaussian_cx<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cx<T> {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    Cx::new(T::lit(a), T::lit(b))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(gaussian_cx(rng));
    }
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite gaussian entries")
}

/// Haar-random pure state vector.
pub fn random_ket<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Cx<T>> {
    let v: Vec<Cx<T>> = (0..d).map(|_| gaussian_cx(rng)).collect();
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator<T> {
    DensityOperator::pure(&random_ket(d, rng))
}

/// Full-rank mixed state `G G† / Tr[G G†]` with `G` a square Gaussian matrix.
pub fn random_density<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator<T> {
    let g = gaussian_matrix::<T, R>(d, d, rng);
    DensityOperator::normalized(HermitianOperator::hermitize(&g * &g.adjoint()))
}

pub fn random_hermitian<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator<T> {
    HermitianOperator::hermitize(gaussian_matrix(d, d, rng))
}

/// Effect `0 ≤ M ≤ I` with Haar eigenbasis and uniform eigenvalues.
pub fn random_effect<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator<T> {
    let u = random_unitary::<T, R>(d, rng);
    let diag: Vec<T> = (0..d).map(|_| T::lit(rng.random::<f64>())).collect();
    HermitianOperator::from_real_diagonal(&diag).conjugate_by(&u)
}

/// Haar isometry `d_in → d_out` (`d_out ≥ d_in`).
pub fn random_isometry<T: Real, R: Rng + ?Sized>(d_in: usize, d_out: usize, rng: &mut R) -> ComplexMatrix<T> {
    assert!(d_out >= d_in, "isometry must not shrink the space");
    let g = gaussian_matrix::<T, R>(d_out, d_in, rng).into_inner();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut v = ComplexMatrix::from_inner(q);
    for j in 0..d_in {
        let rjj = r[(j, j)];
        let phase = if rjj.norm_sqr().sqrt() > T::zero() { rjj / Cx::new(rjj.norm_sqr().sqrt(), T::zero()) } else { Cx::new(T::one(), T::zero()) };
        for i in 0..d_out {
            let z = v.get(i, j) * phase;
            v.set(i, j, z);
        }
    }
    v
}

pub fn random_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    random_isometry(d, d, rng)
}

/// Stinespring channel with environment dimension `rank`.
pub fn random_channel<T: Real, R: Rng + ?Sized>(d_in: usize, d_out: usize, rank: usize, rng: &mut R) -> ChannelRep<T> {
    let v = random_isometry::<T, R>(d_in, d_out * rank, rng);
    let kraus = (0..rank)
        .map(|k| ComplexMatrix::from_fn(d_out, d_in, |o, i| v.get(o * rank + k, i)))
        .collect();
    ChannelRep::from_kraus(d_in, d_out, kraus).expect("Stinespring dilation is trace preserving")
}

/// Uniform point of the probability simplex.
pub fn random_distribution<T: Real, R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<T> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| T::lit(x / s)).collect()
}

pub fn random_error_rates<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ErrorRateVector<T> {
    ErrorRateVector::new(n, random_distribution(1 << (2 * n), rng)).expect("simplex point")
}
