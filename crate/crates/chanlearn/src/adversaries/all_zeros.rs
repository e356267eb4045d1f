//! The all-zeros hardness game for learners that read only some entries of
//! the Bell-coefficient challenge vector.
//!
//! The adversary always plays `e = 0` (the test `E = 0`) and answers `¬y_t`
//! to the rounded prediction `y_t`. Afterwards it picks an index `j` that the
//! learner never read and claims `p* = δ_j` and `ẽ^{(t)} = ¬y_t δ_j`, which
//! is realized by the test `Γ^j / 4^n`. The game lasts while at least one
//! index stays unread.

use crate::channels::ChannelTestOperator;
use crate::error::{Error, Result};
use crate::learners::{LipschitzLoss, MwuState, UpdateRule};
use crate::linalg::DensityOperator;
use crate::pauli::{gamma, PauliIndex};
use crate::transcript::{digest, Transcript, TranscriptRow};
use std::collections::BTreeSet;

/// Mediated access to a challenge vector; every read is logged.
#[derive(Debug)]
pub struct QueryOracle<'a> {
    entries: &'a [f64],
    log: Vec<usize>,
}

impl<'a> QueryOracle<'a> {
    pub fn new(entries: &'a [f64]) -> Self {
        Self { entries, log: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn read(&mut self, i: usize) -> Result<f64> {
        let v = *self.entries.get(i).ok_or_else(|| Error::Parameter(format!("index {i} out of range")))?;
        self.log.push(i);
        Ok(v)
    }

    pub fn log(&self) -> &[usize] {
        &self.log
    }
}

/// A learner that sees the challenge only through an oracle.
pub trait QueryLearner {
    fn predict(&mut self, oracle: &mut QueryOracle<'_>) -> Result<f64>;

    fn update(&mut self, feedback: f64) -> Result<()>;
}

/// MWU over the `4^n` error rates that reads only the `q` entries of
/// largest weight and treats the rest as zero.
#[derive(Clone, Debug)]
pub struct TopWeightReader {
    state: MwuState,
    loss: LipschitzLoss,
    q: usize,
    seen: Vec<(usize, f64)>,
    prediction: f64,
}

impl TopWeightReader {
    pub fn new(d: usize, q: usize, eta: f64) -> Result<Self> {
        Ok(Self { state: MwuState::new(d, eta, UpdateRule::Linear)?, loss: LipschitzLoss::absolute(), q, seen: Vec::new(), prediction: 0.0 })
    }
}

impl QueryLearner for TopWeightReader {
    fn predict(&mut self, oracle: &mut QueryOracle<'_>) -> Result<f64> {
        let p = self.state.predict();
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
        self.seen.clear();
        let mut y = 0.0;
        for &i in order.iter().take(self.q) {
            let e = oracle.read(i)?;
            self.seen.push((i, e));
            y += p[i] * e;
        }
        self.prediction = y;
        Ok(y)
    }

    fn update(&mut self, feedback: f64) -> Result<()> {
        let g = self.loss.derivative(self.prediction, feedback) / self.loss.lipschitz;
        let mut m = vec![0.0; self.state.d()];
        for &(i, e) in &self.seen {
            m[i] = g * e;
        }
        self.state.update(&m)
    }
}

/// Reads `q` indices it has not read before each round (cyclically) and
/// predicts their mean.
#[derive(Clone, Debug)]
pub struct FreshIndexReader {
    q: usize,
    cursor: usize,
}

impl FreshIndexReader {
    pub fn new(q: usize) -> Self {
        Self { q, cursor: 0 }
    }
}

impl QueryLearner for FreshIndexReader {
    fn predict(&mut self, oracle: &mut QueryOracle<'_>) -> Result<f64> {
        let mut s = 0.0;
        for _ in 0..self.q {
            s += oracle.read(self.cursor % oracle.len())?;
            self.cursor += 1;
        }
        Ok(s / self.q as f64)
    }

    fn update(&mut self, _feedback: f64) -> Result<()> {
        Ok(())
    }
}

/// Retroactive consistency claim: `p* = δ_hidden` and round `t` had
/// challenge `claimed[t] · δ_hidden`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub hidden: usize,
    pub claimed: Vec<f64>,
}

impl Certificate {
    pub fn p_star(&self) -> Vec<f64> {
        let mut p = vec![0.0; PauliIndex::count(self.n)];
        p[self.hidden] = 1.0;
        p
    }

    /// Dense `ẽ^{(t)}` for a 1-based round.
    pub fn challenge(&self, t: usize) -> Vec<f64> {
        let mut e = vec![0.0; PauliIndex::count(self.n)];
        e[self.hidden] = self.claimed[t - 1];
        e
    }

    /// The test realizing a nonzero claim, `Γ^{hidden} / 4^n`, with certificate `I/d`.
    pub fn realizing_test(&self) -> Result<ChannelTestOperator> {
        let d = 1 << self.n;
        let op = gamma::<f64>(&PauliIndex::from_linear(self.n, self.hidden)).scale(1.0 / (d * d) as f64);
        ChannelTestOperator::new(op, Some(DensityOperator::maximally_mixed(d)), d, d)
    }
}

#[derive(Clone, Debug)]
pub struct AllZerosOutcome {
    pub transcript: Transcript,
    pub queried: Vec<Vec<usize>>,
    pub certificate: Certificate,
}

impl AllZerosOutcome {
    /// Exact checks: `p*·ẽ^{(t)} = ¬y_t`, `ẽ^{(t)}` vanishes on every logged
    /// index, and `p*` is a point mass.
    pub fn verify(&self) -> bool {
        let p = self.certificate.p_star();
        if p.iter().sum::<f64>() != 1.0 || p.iter().any(|&x| x < 0.0) {
            return false;
        }
        self.transcript.rows.iter().zip(&self.queried).all(|(row, reads)| {
            let e = self.certificate.challenge(row.t);
            let value: f64 = p.iter().zip(&e).map(|(a, b)| a * b).sum();
            value == row.feedback && reads.iter().all(|&i| e[i] == 0.0)
        })
    }
}

/// Plays `rounds` rounds; fails with `BudgetExhausted(t)` once the learner
/// has read every index by the end of round `t`.
pub fn all_zeros_adversary<L: QueryLearner>(n: usize, learner: &mut L, rounds: usize) -> Result<AllZerosOutcome> {
    let k = PauliIndex::count(n);
    let zeros = vec![0.0; k];
    let mut union = BTreeSet::new();
    let mut transcript = Transcript::default();
    let mut queried = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let mut oracle = QueryOracle::new(&zeros);
        let prediction = learner.predict(&mut oracle)?;
        let y = if prediction >= 0.5 { 1.0 } else { 0.0 };
        let feedback = 1.0 - y;
        union.extend(oracle.log().iter().copied());
        if union.len() >= k {
            return Err(Error::BudgetExhausted(t - 1));
        }
        queried.push(oracle.log().to_vec());
        learner.update(feedback)?;
        transcript.push(TranscriptRow {
            t,
            challenge: digest(&zeros),
            prediction,
            feedback,
            loss: (y - feedback).abs(),
            mistake: true,
            cumulative_regret: f64::NAN,
            entropy: 0.0,
        });
    }
    let hidden = (0..k).find(|i| !union.contains(i)).expect("an unread index remains");
    let claimed = transcript.rows.iter().map(|r| r.feedback).collect();
    Ok(AllZerosOutcome { transcript, queried, certificate: Certificate { n, hidden, claimed } })
}
