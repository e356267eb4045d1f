use super::comb::CombOperator;
use super::legs::{LabeledOperator, Leg};
use crate::channels::ChannelRep;
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::scalar::{tol, Real};

/// Tester effect `E` on `A_1 B_1 … A_r B_r` with optional co-strategy
/// certificate `S` on `A_1 B_1 … A_r` such that `E ≤ S ⊗ I_{B_r}`.
#[derive(Clone, Debug)]
pub struct TesterOperator<T: Real = f64> {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    op: HermitianOperator<T>,
    certificate: Option<HermitianOperator<T>>,
}

/// Fixed circuit probing an r-step process: a state on `A_1 ⊗ R_0`, channels
/// `B_k ⊗ R_{k−1} → A_{k+1} ⊗ R_k` between steps, and a final effect on
/// `B_r ⊗ R_{r−1}`.
#[derive(Clone, Debug)]
pub struct TesterCircuit<T: Real = f64> {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    /// `R_0, …, R_{r−1}`.
    pub ancillas: Vec<usize>,
    pub initial: DensityOperator<T>,
    pub middles: Vec<ChannelRep<T>>,
    pub effect: HermitianOperator<T>,
}

impl<T: Real> TesterOperator<T> {
    /// Checks `E ⪰ 0`, and `S ⊗ I − E ⪰ 0` when a certificate is given (tolerance 1e-9).
    pub fn new(op: HermitianOperator<T>, certificate: Option<HermitianOperator<T>>, in_dims: Vec<usize>, out_dims: Vec<usize>) -> Result<Self> {
        let r = in_dims.len();
        if r == 0 || out_dims.len() != r {
            return Err(Error::Dimension("tester needs matching nonempty dimension lists".into()));
        }
        let total: usize = in_dims.iter().chain(&out_dims).product();
        if op.dim() != total {
            return Err(Error::Dimension(format!("tester of size {} on legs of dimension {total}", op.dim())));
        }
        let t = tol::<T>(1e-9);
        if op.min_eigenvalue() < -t {
            return Err(Error::InvalidTestOperator("tester is not positive semidefinite".into()));
        }
        if let Some(s) = &certificate {
            let last = out_dims[r - 1];
            if s.dim() * last != total {
                return Err(Error::Dimension("certificate acts on the wrong legs".into()));
            }
            if s.kron(&HermitianOperator::identity(last)).sub(&op).min_eigenvalue() < -t {
                return Err(Error::InvalidTestOperator("tester not dominated by its certificate".into()));
            }
        }
        Ok(Self { in_dims, out_dims, op, certificate })
    }

    /// Effect and certificate of a fixed circuit.
    pub fn from_circuit(c: &TesterCircuit<T>) -> Result<Self> {
        let r = c.in_dims.len();
        if r == 0 || c.out_dims.len() != r || c.ancillas.len() != r || c.middles.len() + 1 != r {
            return Err(Error::Dimension("tester circuit has inconsistent step counts".into()));
        }
        if c.initial.dim() != c.in_dims[0] * c.ancillas[0] || c.effect.dim() != c.out_dims[r - 1] * c.ancillas[r - 1] {
            return Err(Error::Dimension("initial state or effect has the wrong size".into()));
        }
        let mut acc = LabeledOperator::new(
            vec![Leg::new("A1", c.in_dims[0]), Leg::new("R0", c.ancillas[0])],
            c.initial.op().matrix().clone(),
        )?;
        for (k, ch) in c.middles.iter().enumerate() {
            let legs = vec![
                Leg::new(format!("B{}", k + 1), c.out_dims[k]),
                Leg::new(format!("R{k}"), c.ancillas[k]),
                Leg::new(format!("A{}", k + 2), c.in_dims[k + 1]),
                Leg::new(format!("R{}", k + 1), c.ancillas[k + 1]),
            ];
            acc = acc.link(&LabeledOperator::new(legs, ch.choi().matrix().clone())?)?;
        }
        let order: Vec<String> = (1..=r).flat_map(|k| [format!("A{k}"), format!("B{k}")]).collect();
        let order: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
        let finish = |m: &HermitianOperator<T>| -> Result<HermitianOperator<T>> {
            // a link partner enters transposed, so the effect M is linked as M^T
            let legs = vec![Leg::new(format!("B{r}"), c.out_dims[r - 1]), Leg::new(format!("R{}", r - 1), c.ancillas[r - 1])];
            let linked = acc.link(&LabeledOperator::new(legs, m.transpose().matrix().clone())?)?;
            Ok(HermitianOperator::hermitize(linked.permute_to(&order)?.transpose().into_op()))
        };
        let op = finish(&c.effect)?;
        let full = finish(&HermitianOperator::identity(c.effect.dim()))?;
        let last = c.out_dims[r - 1];
        let dims: Vec<usize> = c.in_dims.iter().zip(&c.out_dims).flat_map(|(&a, &b)| [a, b]).collect();
        let cert = full.trace_out(&dims, &[2 * r - 1])?.scale(T::one() / T::lit(last as f64));
        Self::new(op, Some(cert), c.in_dims.clone(), c.out_dims.clone())
    }

    /// `E = ρ^T ⊗ M` for a single step.
    pub fn product(rho: &DensityOperator<T>, effect: &HermitianOperator<T>) -> Result<Self> {
        let rt = rho.transpose().into_op();
        Self::new(rt.kron(effect), Some(rt), vec![rho.dim()], vec![effect.dim()])
    }

    pub fn r(&self) -> usize {
        self.in_dims.len()
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn certificate(&self) -> Option<&HermitianOperator<T>> {
        self.certificate.as_ref()
    }
}

/// Acceptance probability `Tr[E N]`.
pub fn tester_value<T: Real>(e: &TesterOperator<T>, comb: &CombOperator<T>) -> Result<T> {
    if e.in_dims != comb.in_dims() || e.out_dims != comb.out_dims() {
        return Err(Error::Dimension("tester and comb legs differ".into()));
    }
    Ok(e.op.inner(comb.op()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combs::comb::{comb_from_channels, CombStep};
    use crate::random::{random_channel, random_density, random_effect};
    use crate::rng::stream;

    #[test]
    fn single_step_matches_born_rule() {
        let mut rng = stream(1, "tester", 0);
        let ch = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let rho = random_density::<f64, _>(2, &mut rng);
        let m = random_effect::<f64, _>(2, &mut rng);
        let c = TesterCircuit { in_dims: vec![2], out_dims: vec![2], ancillas: vec![1], initial: rho.clone(), middles: vec![], effect: m.clone() };
        let e = TesterOperator::from_circuit(&c).unwrap();
        let direct = m.inner(ch.apply(&rho).unwrap().op());
        let v = tester_value(&e, &CombOperator::from_channel(&ch)).unwrap();
        assert!((v - direct).abs() < 1e-12);
        let p = TesterOperator::product(&rho, &m).unwrap();
        assert!(p.op().sub(e.op()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn two_step_circuit_matches_simulation() {
        let mut rng = stream(2, "tester", 0);
        let n1 = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let n2 = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let rho = random_density::<f64, _>(4, &mut rng);
        let mid = random_channel::<f64, _>(4, 4, 2, &mut rng);
        let m = random_effect::<f64, _>(4, &mut rng);
        let circuit = TesterCircuit {
            in_dims: vec![2, 2],
            out_dims: vec![2, 2],
            ancillas: vec![2, 2],
            initial: rho.clone(),
            middles: vec![mid.clone()],
            effect: m.clone(),
        };
        let e = TesterOperator::from_circuit(&circuit).unwrap();
        let comb = comb_from_channels(&[CombStep::memoryless(n1.clone()), CombStep::memoryless(n2.clone())]).unwrap();
        let id = ChannelRep::identity(2);
        let s1 = n1.tensor(&id).unwrap().apply(&rho).unwrap();
        let s2 = mid.apply(&s1).unwrap();
        let s3 = n2.tensor(&id).unwrap().apply(&s2).unwrap();
        let direct = m.inner(s3.op());
        assert!((tester_value(&e, &comb).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn complement_effect_stays_dominated() {
        let mut rng = stream(3, "tester", 0);
        let m = random_effect::<f64, _>(4, &mut rng);
        let circuit = TesterCircuit {
            in_dims: vec![2, 2],
            out_dims: vec![2, 2],
            ancillas: vec![2, 2],
            initial: random_density(4, &mut rng),
            middles: vec![random_channel(4, 4, 3, &mut rng)],
            effect: HermitianOperator::identity(4).sub(&m),
        };
        let e = TesterOperator::from_circuit(&circuit).unwrap();
        let cert = e.certificate().unwrap();
        // pairing with the depolarizing comb I/(d_B1 d_B2) gives Tr[S ⊗ I] = d_B1 d_B2
        assert!((cert.trace() - 2.0).abs() < 1e-9);
    }
}
