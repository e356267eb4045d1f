//! Learners whose hypotheses are probability vectors over a known finite
//! basis: predictions are `p·e` for a challenge vector `e ∈ [0, 1]^K`.

use super::loss::LipschitzLoss;
use super::mwu::{MwuState, UpdateRule};
use crate::channels::ChannelTestOperator;
use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::scalar::Real;

/// Interface used by the mistake-driven wrapper and the adversary games.
pub trait OnlineLearner {
    type Challenge: ?Sized;

    fn predict(&self, x: &Self::Challenge) -> f64;

    fn update(&mut self, x: &Self::Challenge, prediction: f64, feedback: f64) -> Result<()>;

    /// Entropy of the current hypothesis, for transcripts.
    fn entropy(&self) -> f64 {
        0.0
    }
}

/// What one learning round produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome {
    pub prediction: f64,
    pub loss: f64,
    pub cost: Vec<f64>,
}

/// `m_i = (1/L) ℓ′(ŷ − b) e_i`, checked to lie in `[−1, 1]`.
pub fn cost_vector(e: &[f64], prediction: f64, feedback: f64, loss: &LipschitzLoss) -> Result<Vec<f64>> {
    let g = loss.derivative(prediction, feedback) / loss.lipschitz;
    let m: Vec<f64> = e.iter().map(|x| g * x).collect();
    if let Some(i) = m.iter().position(|v| !(v.abs() <= 1.0 + 1e-12)) {
        return Err(Error::InvalidTestOperator(format!("cost entry {i} is {}; the challenge is not a valid test", m[i])));
    }
    Ok(m)
}

/// Prediction `p·e`.
pub fn linear_prediction(state: &MwuState, e: &[f64]) -> Result<f64> {
    if e.len() != state.d() {
        return Err(Error::Dimension(format!("challenge of length {} for {} decisions", e.len(), state.d())));
    }
    Ok(state.predict().iter().zip(e).map(|(p, x)| p * x).sum())
}

/// Predict, observe `b`, update.
pub fn linear_round(state: &mut MwuState, e: &[f64], loss: &LipschitzLoss, feedback: f64) -> Result<RoundOutcome> {
    let prediction = linear_prediction(state, e)?;
    let cost = cost_vector(e, prediction, feedback, loss)?;
    state.update(&cost)?;
    Ok(RoundOutcome { prediction, loss: loss.value(prediction, feedback), cost })
}

/// One round of the Pauli-channel learner; decisions are the `4^n` error rates
/// and the challenge vector is `e_{z,x} = Tr[E Γ^{z,x}]`.
pub fn pauli_learner_round<T: Real>(
    state: &mut MwuState,
    e: &ChannelTestOperator<T>,
    loss: &LipschitzLoss,
    feedback: f64,
) -> Result<RoundOutcome> {
    let coeffs: Vec<f64> = e.bell_coefficients()?.into_iter().map(|x| x.as_f64()).collect();
    linear_round(state, &coeffs, loss, feedback)
}

/// `e_j = Tr[E C_j]` for known Choi matrices or comb operators `C_j`.
pub fn mixture_coefficients<T: Real>(basis: &[HermitianOperator<T>], e: &HermitianOperator<T>) -> Result<Vec<f64>> {
    basis
        .iter()
        .map(|c| {
            if c.dim() != e.dim() {
                Err(Error::Dimension(format!("basis element of size {} against a test of size {}", c.dim(), e.dim())))
            } else {
                Ok(c.inner(e).as_f64())
            }
        })
        .collect()
}

/// One round of the learner over convex mixtures of a known basis.
pub fn mixture_learner_round<T: Real>(
    state: &mut MwuState,
    basis: &[HermitianOperator<T>],
    e: &HermitianOperator<T>,
    loss: &LipschitzLoss,
    feedback: f64,
) -> Result<RoundOutcome> {
    let coeffs = mixture_coefficients(basis, e)?;
    linear_round(state, &coeffs, loss, feedback)
}

/// An [`MwuState`] paired with a loss, driven by precomputed challenge vectors.
#[derive(Clone, Debug)]
pub struct MwuLearner {
    pub state: MwuState,
    pub loss: LipschitzLoss,
}

impl MwuLearner {
    pub fn new(d: usize, eta: f64, rule: UpdateRule, loss: LipschitzLoss) -> Result<Self> {
        Ok(Self { state: MwuState::new(d, eta, rule)?, loss })
    }
}

impl OnlineLearner for MwuLearner {
    type Challenge = [f64];

    fn predict(&self, x: &[f64]) -> f64 {
        self.state.predict().iter().zip(x).map(|(p, e)| p * e).sum()
    }

    fn update(&mut self, x: &[f64], prediction: f64, feedback: f64) -> Result<()> {
        let cost = cost_vector(x, prediction, feedback, &self.loss)?;
        self.state.update(&cost)
    }

    fn entropy(&self) -> f64 {
        self.state.entropy()
    }
}

/// Restarts a fresh learner at rounds 1, 2, 4, 8, … with `η` tuned to each
/// epoch length, for runs without a known horizon.
#[derive(Clone, Debug)]
pub struct DoublingMwu {
    d: usize,
    rule: UpdateRule,
    loss: LipschitzLoss,
    epoch_len: usize,
    seen: usize,
    inner: MwuLearner,
}

impl DoublingMwu {
    pub fn new(d: usize, rule: UpdateRule, loss: LipschitzLoss) -> Result<Self> {
        let inner = MwuLearner::new(d, super::mwu::default_eta(d, 1), rule, loss)?;
        Ok(Self { d, rule, loss, epoch_len: 1, seen: 0, inner })
    }

    pub fn eta(&self) -> f64 {
        self.inner.state.eta()
    }
}

impl OnlineLearner for DoublingMwu {
    type Challenge = [f64];

    fn predict(&self, x: &[f64]) -> f64 {
        self.inner.predict(x)
    }

    fn update(&mut self, x: &[f64], prediction: f64, feedback: f64) -> Result<()> {
        self.inner.update(x, prediction, feedback)?;
        self.seen += 1;
        if self.seen == self.epoch_len {
            self.epoch_len *= 2;
            self.seen = 0;
            let eta = super::mwu::default_eta(self.d, self.epoch_len);
            self.inner = MwuLearner::new(self.d, eta, self.rule, self.loss)?;
        }
        Ok(())
    }

    fn entropy(&self) -> f64 {
        self.inner.entropy()
    }
}
