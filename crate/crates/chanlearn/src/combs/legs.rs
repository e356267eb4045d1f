//! Operators whose tensor factors carry names, and the link product that
//! contracts factors sharing a name.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub label: String,
    pub dim: usize,
}

impl Leg {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self { label: label.into(), dim }
    }
}

/// A square operator on `⊗_k legs[k]`, first leg most significant.
#[derive(Clone, Debug)]
pub struct LabeledOperator<T: Real = f64> {
    legs: Vec<Leg>,
    op: ComplexMatrix<T>,
}

impl<T: Real> LabeledOperator<T> {
    pub fn new(legs: Vec<Leg>, op: ComplexMatrix<T>) -> Result<Self> {
        let dim: usize = legs.iter().map(|l| l.dim).product();
        if !op.is_square() || op.rows() != dim {
            return Err(Error::Dimension(format!("operator of size {}x{} on legs of total dimension {dim}", op.rows(), op.cols())));
        }
        for (i, a) in legs.iter().enumerate() {
            if legs[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::Dimension(format!("leg {} appears twice", a.label)));
            }
        }
        Ok(Self { legs, op })
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn op(&self) -> &ComplexMatrix<T> {
        &self.op
    }

    pub fn into_op(self) -> ComplexMatrix<T> {
        self.op
    }

    fn dims(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.dim).collect()
    }

    fn position(&self, label: &str) -> Result<usize> {
        self.legs
            .iter()
            .position(|l| l.label == label)
            .ok_or_else(|| Error::Dimension(format!("no leg named {label}")))
    }

    pub fn rename(mut self, from: &str, to: &str) -> Result<Self> {
        let k = self.position(from)?;
        self.legs[k].label = to.to_string();
        Ok(self)
    }

    /// Reorders the legs to the given label sequence.
    pub fn permute_to(&self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.legs.len() {
            return Err(Error::Dimension(format!("{} labels for {} legs", labels.len(), self.legs.len())));
        }
        let perm = labels.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let op = self.op.permute_subsystems(&self.dims(), &perm)?;
        let legs = perm.iter().map(|&p| self.legs[p].clone()).collect();
        Ok(Self { legs, op })
    }

    pub fn trace_legs(&self, labels: &[&str]) -> Result<Self> {
        let traced = labels.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let op = self.op.partial_trace(&self.dims(), &traced)?;
        let legs = self.legs.iter().enumerate().filter(|(i, _)| !traced.contains(i)).map(|(_, l)| l.clone()).collect();
        Ok(Self { legs, op })
    }

    pub fn transpose(&self) -> Self {
        Self { legs: self.legs.clone(), op: self.op.transpose() }
    }

    /// `A ⋆ B = Tr_S[(A^{T_S} ⊗ 1)(1 ⊗ B)]` over the shared legs `S`; the
    /// result carries `A`'s free legs followed by `B`'s.
    pub fn link(&self, other: &Self) -> Result<Self> {
        let shared: Vec<&Leg> = self.legs.iter().filter(|l| other.legs.iter().any(|m| m.label == l.label)).collect();
        for s in &shared {
            let o = &other.legs[other.position(&s.label)?];
            if o.dim != s.dim {
                return Err(Error::Dimension(format!("leg {} has dimensions {} and {}", s.label, s.dim, o.dim)));
            }
        }
        let shared_labels: Vec<&str> = shared.iter().map(|l| l.label.as_str()).collect();
        let free_a: Vec<&str> = self.legs.iter().map(|l| l.label.as_str()).filter(|l| !shared_labels.contains(l)).collect();
        let free_b: Vec<&str> = other.legs.iter().map(|l| l.label.as_str()).filter(|l| !shared_labels.contains(l)).collect();
        let a = self.permute_to(&[free_a.clone(), shared_labels.clone()].concat())?;
        let b = other.permute_to(&[shared_labels.clone(), free_b.clone()].concat())?;
        let dx: usize = a.legs[..free_a.len()].iter().map(|l| l.dim).product();
        let ds: usize = shared.iter().map(|l| l.dim).product();
        let dy: usize = b.legs[shared.len()..].iter().map(|l| l.dim).product();
        // out[(x,y),(x',y')] = Σ_{s,u} A[(x,u),(x',s)] B[(u,y),(s,y')]
        let mut out = ComplexMatrix::zeros(dx * dy, dx * dy);
        for u in 0..ds {
            for s in 0..ds {
                let ab = ComplexMatrix::from_fn(dx, dx, |x, xp| a.op.get(x * ds + u, xp * ds + s));
                let bb = ComplexMatrix::from_fn(dy, dy, |y, yp| b.op.get(u * dy + y, s * dy + yp));
                out = &out + &ab.kron(&bb);
            }
        }
        let legs = a.legs[..free_a.len()].iter().chain(b.legs[shared.len()..].iter()).cloned().collect();
        Ok(Self { legs, op: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelRep;
    use crate::random::random_channel;
    use crate::rng::stream;

    fn choi_legs(ch: &ChannelRep<f64>, a: &str, b: &str) -> LabeledOperator<f64> {
        LabeledOperator::new(vec![Leg::new(a, ch.d_in()), Leg::new(b, ch.d_out())], ch.choi().matrix().clone()).unwrap()
    }

    #[test]
    fn disjoint_legs_give_tensor_product() {
        let mut rng = stream(1, "legs", 0);
        let m = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let n = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let l = choi_legs(&m, "a", "b").link(&choi_legs(&n, "c", "d")).unwrap();
        assert!((l.op() - &m.choi().matrix().kron(n.choi().matrix())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn state_through_channel() {
        // ρ ⋆ C(N) over the input leg is N(ρ).
        let mut rng = stream(2, "legs", 0);
        let ch = random_channel::<f64, _>(2, 3, 2, &mut rng);
        let rho = crate::random::random_density::<f64, _>(2, &mut rng);
        let s = LabeledOperator::new(vec![Leg::new("a", 2)], rho.op().matrix().clone()).unwrap();
        let out = s.link(&choi_legs(&ch, "a", "b")).unwrap();
        let want = ch.apply(&rho).unwrap();
        assert!((out.op() - want.op().matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_leg() {
        let a = LabeledOperator::<f64>::new(vec![Leg::new("x", 2)], ComplexMatrix::identity(2)).unwrap();
        let b = LabeledOperator::<f64>::new(vec![Leg::new("x", 3)], ComplexMatrix::identity(3)).unwrap();
        assert!(a.link(&b).is_err());
        assert!(LabeledOperator::<f64>::new(vec![Leg::new("x", 2), Leg::new("x", 2)], ComplexMatrix::identity(4)).is_err());
    }
}
