use crate::channels::{pauli_twirl, ChannelRep};
use crate::combs::TimeLocalTwirl;
use crate::error::Result;
use crate::pauli::PauliIndex;
use rand::Rng;

/// Outcome of Bell measurements on `r` steps of `n` qubits each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellSample {
    pub n: usize,
    pub r: usize,
    /// Lexicographic word index, first step most significant.
    pub word: usize,
}

impl BellSample {
    pub fn indices(&self) -> Vec<PauliIndex> {
        let per = PauliIndex::count(self.n);
        let mut out = vec![PauliIndex::identity(self.n); self.r];
        let mut rem = self.word;
        for k in (0..self.r).rev() {
            out[k] = PauliIndex::from_linear(self.n, rem % per);
            rem /= per;
        }
        out
    }
}

/// `q_{z,x} = Tr[Φ^{z,x} C(N)] / d`, the twirled error rates.
pub fn bell_distribution(ch: &ChannelRep) -> Result<Vec<f64>> {
    Ok(pauli_twirl(ch)?.probs().to_vec())
}

fn channel_twirl(ch: &ChannelRep) -> Result<TimeLocalTwirl> {
    TimeLocalTwirl::from_probs(ch.n_in(), 1, bell_distribution(ch)?)
}

/// One Bell measurement of the Choi state.
pub fn bell_sample<R: Rng + ?Sized>(ch: &ChannelRep, rng: &mut R) -> Result<BellSample> {
    let t = channel_twirl(ch)?;
    Ok(BellSample { n: t.n(), r: 1, word: t.sample_word(rng) })
}

pub fn bell_samples<R: Rng + ?Sized>(ch: &ChannelRep, k: usize, rng: &mut R) -> Result<Vec<BellSample>> {
    sample_twirl(&channel_twirl(ch)?, k, rng)
}

pub fn sample_twirl<R: Rng + ?Sized>(t: &TimeLocalTwirl, k: usize, rng: &mut R) -> Result<Vec<BellSample>> {
    Ok((0..k).map(|_| BellSample { n: t.n(), r: t.r(), word: t.sample_word(rng) }).collect())
}

/// Empirical outcome frequencies.
pub fn frequencies(samples: &[BellSample], outcomes: usize) -> Vec<f64> {
    let mut h = vec![0.0; outcomes];
    for s in samples {
        h[s.word] += 1.0;
    }
    h.into_iter().map(|c| c / samples.len() as f64).collect()
}
