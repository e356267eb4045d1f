//! Bell measurements applied independently at every step of a comb.

use super::comb::CombOperator;
use crate::error::{Error, Result};
use crate::pauli::{bell_coefficients_multi, PauliIndex};
use crate::scalar::Real;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

/// Outcome distribution `p(w) = Tr[(Γ^{w_1} ⊗ … ⊗ Γ^{w_r}) N] / 4^{nr}` of
/// time-local Bell measurements, words in lexicographic order of `(w_1, …, w_r)`.
#[derive(Clone, Debug)]
pub struct TimeLocalTwirl {
    n: usize,
    r: usize,
    probs: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl TimeLocalTwirl {
    pub fn new<T: Real>(comb: &CombOperator<T>) -> Result<Self> {
        let n = comb.uniform_qubits().ok_or_else(|| Error::Dimension("time-local twirl needs equal square qubit steps".into()))?;
        let r = comb.r();
        let norm = (1u64 << (2 * n * r)) as f64;
        let probs: Vec<f64> = bell_coefficients_multi(comb.op().matrix(), n, r)?.into_iter().map(|x| x.as_f64() / norm).collect();
        Self::from_probs(n, r, probs)
    }

    /// Distribution given directly, clipped at zero for sampling.
    pub fn from_probs(n: usize, r: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != PauliIndex::count(n).pow(r as u32) {
            return Err(Error::Dimension(format!("{} probabilities for {r} steps of {n} qubits", probs.len())));
        }
        let sampler = WeightedIndex::new(probs.iter().map(|p| p.max(0.0))).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(Self { n, r, probs, sampler })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sample_word<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<PauliIndex> {
        self.decode(self.sample_word(rng))
    }

    pub fn decode(&self, word: usize) -> Vec<PauliIndex> {
        let per = PauliIndex::count(self.n);
        let mut out = vec![PauliIndex::identity(self.n); self.r];
        let mut rem = word;
        for k in (0..self.r).rev() {
            out[k] = PauliIndex::from_linear(self.n, rem % per);
            rem /= per;
        }
        out
    }

    pub fn encode(&self, word: &[PauliIndex]) -> usize {
        let per = PauliIndex::count(self.n);
        word.iter().fold(0, |acc, w| acc * per + w.linear())
    }

    pub fn probability(&self, word: &[PauliIndex]) -> f64 {
        self.probs[self.encode(word)]
    }
}

/// One sampled outcome together with the exact distribution it came from.
pub fn time_local_twirl_sample<T: Real, R: Rng + ?Sized>(comb: &CombOperator<T>, rng: &mut R) -> Result<(Vec<PauliIndex>, TimeLocalTwirl)> {
    let tw = TimeLocalTwirl::new(comb)?;
    Ok((tw.sample(rng), tw))
}

/// `Σ_w |p_A(w) − p_B(w)|`: the bias of the best time-local Bell tester, a
/// lower bound on the strategy distance that equals `‖p − q‖₁` on products
/// of Pauli channels.
pub fn bell_tester_distance<T: Real>(a: &CombOperator<T>, b: &CombOperator<T>) -> Result<f64> {
    let (pa, pb) = (TimeLocalTwirl::new(a)?, TimeLocalTwirl::new(b)?);
    if pa.probs.len() != pb.probs.len() {
        return Err(Error::Dimension("combs of different shapes".into()));
    }
    Ok(pa.probs.iter().zip(&pb.probs).map(|(x, y)| (x - y).abs()).sum())
}
