//! Adversaries that embed Boolean functions into channels, so that every
//! test has Born value exactly `f(x)`.

use crate::channels::{pauli_channel, ChannelRep, ChannelTestOperator, ErrorRateVector};
use crate::error::{Error, Result};
use crate::learners::OnlineLearner;
use crate::linalg::{ComplexMatrix, Cx, DensityOperator, HermitianOperator};
use crate::pauli::{product_bell_coefficients, PauliIndex};
use crate::transcript::{digest, Transcript, TranscriptRow};
use serde::{Deserialize, Serialize};

/// One test of an embedding game with the label it encodes.
#[derive(Clone, Debug)]
pub struct EmbeddingChallenge {
    pub rho: DensityOperator,
    pub effect: HermitianOperator,
    pub test: ChannelTestOperator,
}

impl EmbeddingChallenge {
    fn new(rho: DensityOperator, effect: HermitianOperator) -> Result<Self> {
        let test = ChannelTestOperator::product(&rho, &effect)?;
        Ok(Self { rho, effect, test })
    }

    pub fn bell_coefficients(&self) -> Result<Vec<f64>> {
        let n = self.rho.dim().trailing_zeros() as usize;
        product_bell_coefficients(self.rho.op().matrix(), self.effect.matrix(), n)
    }
}

fn ket_product(parts: &[[f64; 2]]) -> Vec<Cx<f64>> {
    let mut v = vec![Cx::new(1.0, 0.0)];
    for q in parts {
        v = v.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect();
    }
    v
}

/// Round `t` (1-based): `|0^{t−1}⟩ ⊗ |+⟩ ⊗ |0^{n−t}⟩` in, the same with `|−⟩` measured.
pub fn pauli_embedding_challenge(n: usize, t: usize) -> Result<EmbeddingChallenge> {
    if t == 0 || t > n {
        return Err(Error::Parameter(format!("round {t} outside 1..={n}")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let build = |mid: [f64; 2]| -> Vec<Cx<f64>> {
        let parts: Vec<[f64; 2]> = (1..=n).map(|k| if k == t { mid } else { [1.0, 0.0] }).collect();
        ket_product(&parts)
    };
    let rho = DensityOperator::pure(&build([s, s]));
    let effect = HermitianOperator::projector(&build([s, -s]));
    EmbeddingChallenge::new(rho, effect)
}

/// The stream of all `n` challenges.
pub fn pauli_lower_bound_adversary(n: usize) -> Result<Vec<EmbeddingChallenge>> {
    (1..=n).map(|t| pauli_embedding_challenge(n, t)).collect()
}

/// `N_f(ρ) = Z_f ρ Z_f` with `Z_f = ⊗ Z^{f(i)}`; `f[i]` is the bit of qubit `i + 1`.
pub fn pauli_embedding_channel(f: &[u8]) -> Result<ChannelRep> {
    let idx = PauliIndex::from_bits(f, &vec![0; f.len()])?;
    Ok(pauli_channel(&ErrorRateVector::point(&idx)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    /// `U_f|x, b⟩ = |x, b ⊕ f(x)⟩` on `q + 1` qubits.
    Unitary,
    /// `N_f(ρ) = Σ_x ⟨x|ρ|x⟩ |f(x), 0^{q−1}⟩⟨f(x), 0^{q−1}|` on `q` qubits.
    Channel,
}

pub const MAX_EMBEDDING_BITS: usize = 3;

fn check_truth_table(q: usize, f: &[u8]) -> Result<()> {
    if q == 0 || q > MAX_EMBEDDING_BITS {
        return Err(Error::Parameter(format!("q = {q} outside 1..={MAX_EMBEDDING_BITS}")));
    }
    if f.len() != 1 << q || f.iter().any(|&b| b > 1) {
        return Err(Error::Parameter(format!("truth table must hold {} bits", 1 << q)));
    }
    Ok(())
}

pub fn function_embedding_channel(kind: EmbeddingKind, q: usize, f: &[u8]) -> Result<ChannelRep> {
    check_truth_table(q, f)?;
    match kind {
        EmbeddingKind::Unitary => {
            let d = 1 << (q + 1);
            let u = ComplexMatrix::from_fn(d, d, |row, col| {
                let (x, b) = (col >> 1, col & 1);
                let target = (x << 1) | (b ^ f[x] as usize);
                Cx::new(if row == target { 1.0 } else { 0.0 }, 0.0)
            });
            ChannelRep::from_unitary(u)
        }
        EmbeddingKind::Channel => {
            let d = 1 << q;
            let kraus = (0..d)
                .map(|x| {
                    let out = (f[x] as usize) << (q - 1);
                    ComplexMatrix::unit(d, out, x)
                })
                .collect();
            ChannelRep::from_kraus(d, d, kraus)
        }
    }
}

/// Test for input `x`: value `f(x)` on the embedded channel.
pub fn function_embedding_challenge(kind: EmbeddingKind, q: usize, x: usize) -> Result<EmbeddingChallenge> {
    if q == 0 || q > MAX_EMBEDDING_BITS || x >= 1 << q {
        return Err(Error::Parameter(format!("input {x} for q = {q}")));
    }
    match kind {
        EmbeddingKind::Unitary => {
            let d = 1 << (q + 1);
            let rho = DensityOperator::basis(d, x << 1);
            let effect = DensityOperator::<f64>::basis(d, (x << 1) | 1).into_op();
            EmbeddingChallenge::new(rho, effect)
        }
        EmbeddingKind::Channel => {
            let d = 1 << q;
            let rho = DensityOperator::basis(d, x);
            let effect = DensityOperator::<f64>::basis(d, 1 << (q - 1)).into_op();
            EmbeddingChallenge::new(rho, effect)
        }
    }
}

pub fn function_embedding_adversary(kind: EmbeddingKind, q: usize) -> Result<Vec<EmbeddingChallenge>> {
    check_truth_table(q, &vec![0; 1 << q.min(MAX_EMBEDDING_BITS)])?;
    (0..1usize << q).map(|x| function_embedding_challenge(kind, q, x)).collect()
}

/// `f(t)` at random for `t = 1..=n`.
pub fn random_labels<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
}

/// Plays the Pauli embedding against a learner over the `4^n` error rates.
/// Predictions are rounded (`≥ ½ → 1`); a mistake is a wrong rounded label.
pub fn pauli_embedding_game<L: OnlineLearner<Challenge = [f64]>>(f: &[u8], learner: &mut L) -> Result<Transcript> {
    let n = f.len();
    let mut tr = Transcript::default();
    for (t, challenge) in pauli_lower_bound_adversary(n)?.into_iter().enumerate() {
        let e = challenge.bell_coefficients()?;
        let prediction = learner.predict(&e);
        let label = f[t] as f64;
        let rounded = if prediction >= 0.5 { 1.0 } else { 0.0 };
        learner.update(&e, prediction, label)?;
        tr.push(TranscriptRow {
            t: t + 1,
            challenge: digest(&e),
            prediction,
            feedback: label,
            loss: (prediction - label).abs(),
            mistake: rounded != label,
            cumulative_regret: f64::NAN,
            entropy: learner.entropy(),
        });
    }
    Ok(tr)
}
