use crate::channels::{ChannelRep, ChannelTestOperator};
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::pauli::product_bell_coefficients;
use crate::random::{random_effect, random_pure_state};
use crate::rng::stream;
use rand::Rng;

/// A sampled product test `ρ^T ⊗ M` together with its true value on the hidden channel.
#[derive(Clone, Debug)]
pub struct Challenge {
    pub round: usize,
    pub rho: DensityOperator,
    pub effect: HermitianOperator,
    pub truth: f64,
}

impl Challenge {
    pub fn test_operator(&self) -> Result<ChannelTestOperator> {
        ChannelTestOperator::product(&self.rho, &self.effect)
    }

    /// `e_{z,x} = Tr[M P ρ P†]`.
    pub fn bell_coefficients(&self) -> Result<Vec<f64>> {
        let d = self.rho.dim();
        if !d.is_power_of_two() || self.effect.dim() != d {
            return Err(Error::Dimension("Bell coefficients need a square qubit test".into()));
        }
        product_bell_coefficients(self.rho.op().matrix(), self.effect.matrix(), d.trailing_zeros() as usize)
    }

    /// `Tr[M N_k(ρ)]` for each basis channel.
    pub fn values_on(&self, basis: &[ChannelRep]) -> Result<Vec<f64>> {
        basis.iter().map(|ch| Ok(ch.apply(&self.rho)?.op().inner(&self.effect))).collect()
    }
}

/// Adversary holding a fixed hidden channel. Each round it samples a Haar
/// pure input and a random effect, and after the learner commits to a
/// prediction it reveals the true value perturbed by `U(−ε/3, ε/3)`, clipped
/// to `[0, 1]`.
#[derive(Clone, Debug)]
pub struct RealizableAdversary {
    channel: ChannelRep,
    epsilon: f64,
    seed: u64,
    round: usize,
}

impl RealizableAdversary {
    pub fn new(channel: ChannelRep, epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Parameter(format!("epsilon {epsilon} outside (0, 1)")));
        }
        Ok(Self { channel, epsilon, seed, round: 0 })
    }

    pub fn channel(&self) -> &ChannelRep {
        &self.channel
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn next_challenge(&mut self) -> Result<Challenge> {
        self.round += 1;
        let mut rng = stream(self.seed, "realizable-challenge", self.round as u64);
        let rho = random_pure_state(self.channel.d_in(), &mut rng);
        let effect = random_effect(self.channel.d_out(), &mut rng);
        let truth = self.channel.apply(&rho)?.op().inner(&effect);
        Ok(Challenge { round: self.round, rho, effect, truth })
    }

    /// Feedback for a challenge; the prediction is committed before the draw.
    pub fn reveal(&self, challenge: &Challenge, _prediction: f64) -> f64 {
        let mut rng = stream(self.seed, "realizable-feedback", challenge.round as u64);
        let band = self.epsilon / 3.0;
        let noise = rng.random_range(-band..=band);
        (challenge.truth + noise).clamp(0.0, 1.0)
    }
}
