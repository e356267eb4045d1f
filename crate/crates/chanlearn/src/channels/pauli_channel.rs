use super::rep::ChannelRep;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::pauli::{bell_coefficients, bell_projector, gamma, pauli_operator, PauliIndex};
use crate::scalar::{tol, Real};

/// Error rates `p_{z,x}` of an n-qubit Pauli channel, in lexicographic Bell order.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRateVector<T: Real = f64> {
    n: usize,
    p: Vec<T>,
}

impl<T: Real> ErrorRateVector<T> {
    /// Entries in `[−1e-12, 1 + 1e-12]`, sum within 1e-9 of one.
    pub fn new(n: usize, p: Vec<T>) -> Result<Self> {
        if p.len() != PauliIndex::count(n) {
            return Err(Error::Dimension(format!("{} error rates for {n} qubits", p.len())));
        }
        let slack = tol::<T>(1e-12);
        if let Some(bad) = p.iter().find(|&&x| !(x >= -slack && x <= T::one() + slack)) {
            return Err(Error::InvalidDistribution(format!("entry {bad}")));
        }
        let sum = p.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > tol::<T>(1e-9) {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Ok(Self { n, p })
    }

    /// Point mass on one Pauli string.
    pub fn point(idx: &PauliIndex) -> Self {
        let mut p = vec![T::zero(); PauliIndex::count(idx.n)];
        p[idx.linear()] = T::one();
        Self { n: idx.n, p }
    }

    pub fn uniform(n: usize) -> Self {
        let k = PauliIndex::count(n);
        Self { n, p: vec![T::one() / T::lit(k as f64); k] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.p
    }

    pub fn get(&self, idx: &PauliIndex) -> T {
        self.p[idx.linear()]
    }

    /// Entries clipped at zero and renormalized, for sampling.
    pub fn clipped(&self) -> Vec<f64> {
        let v: Vec<f64> = self.p.iter().map(|x| x.as_f64().max(0.0)).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    }

    /// `Σ p_{z,x} e_{z,x}`.
    pub fn dot(&self, e: &[T]) -> T {
        self.p.iter().zip(e).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    /// Product distribution over `2n` qubits (first factor most significant).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut p = Vec::with_capacity(self.p.len() * other.p.len());
        for &a in &self.p {
            for &b in &other.p {
                p.push(a * b);
            }
        }
        Self { n: self.n + other.n, p }
    }

    /// `‖p − q‖₁`.
    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::Dimension("error-rate vectors of different sizes".into()));
        }
        Ok(self.p.iter().zip(&other.p).fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs()))
    }
}

/// Pauli channel with Kraus operators `√p P^{z,x}` and Choi matrix `Σ p Γ^{z,x}`.
pub fn pauli_channel<T: Real>(p: &ErrorRateVector<T>) -> ChannelRep<T> {
    let n = p.n();
    let d = 1usize << n;
    let mut kraus = Vec::new();
    let mut choi = HermitianOperator::zeros(d * d);
    for idx in PauliIndex::all(n) {
        let w = p.get(&idx);
        if w <= T::zero() {
            continue;
        }
        kraus.push(pauli_operator::<T>(&idx).scale(w.sqrt()));
        choi = choi.add(&gamma::<T>(&idx).scale(w));
    }
    ChannelRep::from_parts(d, d, kraus, choi).expect("Pauli channel is a channel")
}

fn square_qubits<T: Real>(ch: &ChannelRep<T>) -> Result<usize> {
    if !ch.is_square() || !ch.d_in().is_power_of_two() {
        return Err(Error::Dimension(format!("channel {}->{} is not a square qubit channel", ch.d_in(), ch.d_out())));
    }
    Ok(ch.n_in())
}

/// Error rates of the Pauli twirl, `p_{z,x} = Tr[Φ^{z,x} C(N)] / d`.
pub fn pauli_twirl<T: Real>(ch: &ChannelRep<T>) -> Result<ErrorRateVector<T>> {
    let n = square_qubits(ch)?;
    let d2 = T::lit((1usize << (2 * n)) as f64);
    let e = bell_coefficients(ch.choi().matrix(), n)?;
    ErrorRateVector::new(n, e.into_iter().map(|x| x / d2).collect())
}

/// The twirled channel `N^P`.
pub fn twirled_channel<T: Real>(ch: &ChannelRep<T>) -> Result<ChannelRep<T>> {
    Ok(pauli_channel(&pauli_twirl(ch)?))
}

/// Bell-basis pinching `Σ Φ^{z,x} X Φ^{z,x}` of an operator on 2n qubits.
pub fn bell_pinching<T: Real>(x: &HermitianOperator<T>, n: usize) -> HermitianOperator<T> {
    let mut acc = HermitianOperator::zeros(x.dim());
    for idx in PauliIndex::all(n) {
        let phi = bell_projector::<T>(&idx);
        let w = phi.inner(x);
        acc = acc.add(&phi.scale(w));
    }
    acc
}

/// Group average `(1/4^n) Σ (P̄ ⊗ P)† X (P̄ ⊗ P)`.
pub fn pauli_conjugation_average<T: Real>(x: &HermitianOperator<T>, n: usize) -> HermitianOperator<T> {
    let mut acc = ComplexMatrix::zeros(x.dim(), x.dim());
    for idx in PauliIndex::all(n) {
        let p = pauli_operator::<T>(&idx);
        let u = p.conjugate().kron(&p);
        acc = &acc + &(&(&u.adjoint() * x.matrix()) * &u);
    }
    HermitianOperator::hermitize(acc.scale(T::one() / T::lit(PauliIndex::count(n) as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DensityOperator;
    use crate::random::{random_channel, random_error_rates};
    use crate::rng::stream;

    #[test]
    fn point_mass_on_identity_is_identity_channel() {
        let ch = pauli_channel(&ErrorRateVector::<f64>::point(&PauliIndex::identity(1)));
        assert!(ch.choi().sub(ChannelRep::<f64>::identity(2).choi()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn uniform_rates_depolarize() {
        // Σ_w Γ^w = 2 Σ_w Φ^w = 2I, so the uniform mixture has Choi matrix I/2.
        let ch = pauli_channel(&ErrorRateVector::<f64>::uniform(1));
        assert!(ch.choi().sub(&HermitianOperator::identity(4).scale(0.5)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn bit_flip_half() {
        let p = ErrorRateVector::new(1, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let out = pauli_channel(&p).apply(&DensityOperator::basis(2, 0)).unwrap();
        let want = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        assert!(out.op().sub(&want).frobenius_norm() < 1e-14);
    }

    #[test]
    fn choi_is_bell_diagonal() {
        let mut rng = stream(1, "pauli-channel", 0);
        let p = random_error_rates::<f64, _>(2, &mut rng);
        let c = pauli_channel(&p).choi().clone();
        for a in PauliIndex::all(2) {
            let va = crate::pauli::bell_state::<f64>(&a);
            for b in PauliIndex::all(2) {
                if a == b {
                    continue;
                }
                let vb = crate::pauli::bell_state::<f64>(&b);
                let mut z = num_complex::Complex::new(0.0, 0.0);
                for i in 0..16 {
                    for j in 0..16 {
                        z += va[i].conj() * c.matrix().get(i, j) * vb[j];
                    }
                }
                assert!(z.norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn twirl_fixes_pauli_channels_and_is_idempotent() {
        let mut rng = stream(2, "pauli-channel", 0);
        let p = random_error_rates::<f64, _>(2, &mut rng);
        let back = pauli_twirl(&pauli_channel(&p)).unwrap();
        assert!(back.probs().iter().zip(p.probs()).all(|(a, b)| (a - b).abs() <= 1e-12));
        let ch = random_channel::<f64, _>(4, 4, 2, &mut rng);
        let once = pauli_twirl(&ch).unwrap();
        let twice = pauli_twirl(&pauli_channel(&once)).unwrap();
        assert!(once.probs().iter().zip(twice.probs()).all(|(a, b)| (a - b).abs() <= 1e-12));
    }

    #[test]
    fn hadamard_twirl_by_conjugation_sum() {
        // Independent oracle: p_w = |Tr[P_w† H]|² / d² for a unitary channel.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_row_major(
            2,
            2,
            vec![s, s, s, -s].into_iter().map(|x| num_complex::Complex::new(x, 0.0)).collect(),
        )
        .unwrap();
        let ch = ChannelRep::from_unitary(h.clone()).unwrap();
        let p = pauli_twirl(&ch).unwrap();
        for idx in PauliIndex::all(1) {
            let t = (&pauli_operator::<f64>(&idx).adjoint() * &h).trace();
            assert!((p.get(&idx) - t.norm_sqr() / 4.0).abs() < 1e-12);
        }
        // H = (X + Z)/√2, so half weight on each
        assert!((p.probs()[1] - 0.5).abs() < 1e-12 && (p.probs()[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn twirl_equals_pinching() {
        let mut rng = stream(3, "pauli-channel", 0);
        for n in 1..=2 {
            let d = 1 << n;
            let ch = random_channel::<f64, _>(d, d, 2, &mut rng);
            let pinched = bell_pinching(ch.choi(), n);
            let averaged = pauli_conjugation_average(ch.choi(), n);
            assert!(pinched.sub(&averaged).frobenius_norm() <= 1e-10);
            let via_rates = twirled_channel(&ch).unwrap();
            assert!(via_rates.choi().sub(&pinched).frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(ErrorRateVector::new(1, vec![0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(ErrorRateVector::new(1, vec![1.2, -0.2, 0.0, 0.0]).is_err());
        assert!(ErrorRateVector::new(1, vec![1.0, 0.0, 0.0]).is_err());
    }
}
