//! Distances between channels: the exact Pauli formula and two-sided bounds.

use super::pauli_channel::ErrorRateVector;
use super::rep::ChannelRep;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::random::random_ket;
use crate::scalar::Real;
use rand::Rng;

/// `‖N_p − N_q‖⋄ = ‖p − q‖₁` for Pauli channels.
pub fn diamond_distance_pauli<T: Real>(p: &ErrorRateVector<T>, q: &ErrorRateVector<T>) -> Result<T> {
    p.l1_distance(q)
}

fn check_pair<T: Real>(a: &ChannelRep<T>, b: &ChannelRep<T>) -> Result<()> {
    if a.d_in() != b.d_in() || a.d_out() != b.d_out() {
        return Err(Error::Dimension("channels differ in shape".into()));
    }
    Ok(())
}

/// `‖((X ⊗ 1) C_Δ (X ⊗ 1)†)‖₁`: the output difference on the probe `(X ⊗ 1)|Γ⟩`.
fn probe_value<T: Real>(delta: &HermitianOperator<T>, x: &ComplexMatrix<T>, d_out: usize) -> T {
    let xi = x.kron(&ComplexMatrix::identity(d_out));
    delta.conjugate_by(&xi).trace_norm()
}

/// `‖(id ⊗ (N_A − N_B))(Φ)‖₁ = ‖C_A − C_B‖₁ / d_in`.
pub fn entangled_probe_distance<T: Real>(a: &ChannelRep<T>, b: &ChannelRep<T>) -> Result<T> {
    check_pair(a, b)?;
    Ok(a.choi().sub(b.choi()).trace_norm() / T::lit(a.d_in() as f64))
}

/// `‖C_A − C_B‖₁`, an upper bound on `‖N_A − N_B‖⋄`.
pub fn choi_trace_norm_bound<T: Real>(a: &ChannelRep<T>, b: &ChannelRep<T>) -> Result<T> {
    check_pair(a, b)?;
    Ok(a.choi().sub(b.choi()).trace_norm())
}

/// Running maximum of `‖(id ⊗ (N_A − N_B))(ψ)‖₁` over the maximally entangled
/// probe followed by `trials` Haar-random pure probes on `R ⊗ A`.
///
/// Returns the running maximum after each probe; the last entry is the estimate.
pub fn diamond_lower_bound_trace<T: Real, R: Rng + ?Sized>(
    a: &ChannelRep<T>,
    b: &ChannelRep<T>,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<T>> {
    check_pair(a, b)?;
    if trials == 0 {
        return Err(Error::Parameter("trials must be positive".into()));
    }
    let d = a.d_in();
    let delta = a.choi().sub(b.choi());
    let mut best = probe_value(&delta, &ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64).sqrt()), a.d_out());
    let mut trace = vec![best];
    for _ in 0..trials {
        let psi = random_ket::<T, R>(d * d, rng);
        // |ψ⟩ = Σ X_{ri} |r, i⟩ = (X ⊗ 1)|Γ⟩
        let x = ComplexMatrix::from_fn(d, d, |r, i| psi[r * d + i]);
        let v = probe_value(&delta, &x, a.d_out());
        if v > best {
            best = v;
        }
        trace.push(best);
    }
    Ok(trace)
}

pub fn diamond_lower_bound_probe<T: Real, R: Rng + ?Sized>(
    a: &ChannelRep<T>,
    b: &ChannelRep<T>,
    trials: usize,
    rng: &mut R,
) -> Result<T> {
    Ok(*diamond_lower_bound_trace(a, b, trials, rng)?.last().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::pauli_channel::pauli_channel;
    use crate::pauli::PauliIndex;
    use crate::random::{random_channel, random_error_rates};
    use crate::rng::stream;

    #[test]
    fn identical_channels() {
        let mut rng = stream(1, "diamond", 0);
        let ch = random_channel::<f64, _>(2, 2, 2, &mut rng);
        assert!(diamond_lower_bound_probe(&ch, &ch, 10, &mut rng).unwrap().abs() < 1e-12);
        let p = random_error_rates::<f64, _>(1, &mut rng);
        assert_eq!(diamond_distance_pauli(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn identity_versus_bit_flip() {
        let i = ErrorRateVector::<f64>::point(&PauliIndex::identity(1));
        let x = ErrorRateVector::<f64>::point(&PauliIndex::from_bits(&[0], &[1]).unwrap());
        assert_eq!(diamond_distance_pauli(&i, &x).unwrap(), 2.0);
        // Γ^{00} − Γ^{01} has trace norm 4; dividing by d = 2 gives the probe value.
        let probe = entangled_probe_distance(&pauli_channel(&i), &pauli_channel(&x)).unwrap();
        assert!((probe - 2.0).abs() < 1e-12);
    }

    #[test]
    fn probe_matches_l1_on_pauli_pairs() {
        let mut rng = stream(2, "diamond", 0);
        for _ in 0..20 {
            let p = random_error_rates::<f64, _>(2, &mut rng);
            let q = random_error_rates::<f64, _>(2, &mut rng);
            let l1 = diamond_distance_pauli(&p, &q).unwrap();
            let (a, b) = (pauli_channel(&p), pauli_channel(&q));
            assert!((entangled_probe_distance(&a, &b).unwrap() - l1).abs() <= 1e-10);
            let lb = diamond_lower_bound_probe(&a, &b, 30, &mut rng).unwrap();
            assert!(lb <= l1 + 1e-10 && lb >= l1 - 1e-10);
        }
    }

    #[test]
    fn running_max_is_monotone_and_below_choi_bound() {
        let mut rng = stream(3, "diamond", 0);
        let a = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let b = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let trace = diamond_lower_bound_trace(&a, &b, 50, &mut rng).unwrap();
        assert!(trace.windows(2).all(|w| w[1] >= w[0]));
        assert!(*trace.last().unwrap() <= choi_trace_norm_bound(&a, &b).unwrap() + 1e-12);
        assert!(diamond_lower_bound_probe(&a, &b, 0, &mut rng).is_err());
    }
}
