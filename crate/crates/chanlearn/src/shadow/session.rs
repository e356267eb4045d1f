use crate::error::{Error, Result};
use crate::rng::stream;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// How statistical queries are answered from the Bell samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    /// Empirical mean over all samples; accurate only for non-adaptive queries.
    Naive,
    /// `⌊√k⌋` disjoint blocks, one fresh block per query, plus `N(0, (ε/6)²)` noise.
    SplitNoise,
    /// The population distribution itself.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryBudget {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub max_queries: usize,
    pub mechanism: Mechanism,
}

impl QueryBudget {
    pub fn new(k: usize, epsilon: f64, delta: f64, max_queries: usize, mechanism: Mechanism) -> Result<Self> {
        if k == 0 || max_queries == 0 {
            return Err(Error::Parameter("sample and query counts must be positive".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
            return Err(Error::Parameter(format!("epsilon {epsilon} and delta {delta} must lie in (0, 1)")));
        }
        Ok(Self { k, epsilon, delta, max_queries, mechanism })
    }

    pub fn blocks(&self) -> usize {
        ((self.k as f64).sqrt().floor() as usize).max(1)
    }

    pub fn block_size(&self) -> usize {
        self.k / self.blocks()
    }

    /// Per-query accuracy that holds with probability `1 − δ` for
    /// non-adaptive queries.
    ///
    /// Naive: Hoeffding with a union bound over `max_queries`.
    /// Split-noise: Hoeffding on one block plus a Gaussian tail, each at `δ/2`.
    pub fn tolerance(&self) -> f64 {
        match self.mechanism {
            Mechanism::Exact => 0.0,
            Mechanism::Naive => ((2.0 * self.max_queries as f64 / self.delta).ln() / (2.0 * self.k as f64)).sqrt(),
            Mechanism::SplitNoise => {
                let l = (4.0 / self.delta).ln();
                (l / (2.0 * self.block_size() as f64)).sqrt() + self.epsilon / 6.0 * (2.0 * l).sqrt()
            }
        }
    }
}

/// Answers statistical queries `q(p) = Σ_w p_w e_w` from empirical Bell-outcome
/// frequencies. Queries are answered one at a time so that later queries may
/// depend on earlier answers.
#[derive(Clone, Debug)]
pub struct ShadowSession {
    outcomes: usize,
    budget: Option<QueryBudget>,
    /// One normalized histogram per block (a single block unless split-noise).
    blocks: Vec<Vec<f64>>,
    answered: usize,
    noise: ChaCha8Rng,
}

fn histogram(outcomes: usize, words: &[usize]) -> Vec<f64> {
    let mut h = vec![0.0; outcomes];
    for &w in words {
        h[w] += 1.0;
    }
    let k = words.len() as f64;
    h.into_iter().map(|c| c / k).collect()
}

impl ShadowSession {
    /// `words` are outcome indices in `0..outcomes`; `seed` drives the noise.
    pub fn from_samples(outcomes: usize, words: &[usize], budget: QueryBudget, seed: u64) -> Result<Self> {
        if words.len() != budget.k {
            return Err(Error::Parameter(format!("{} samples for a budget of {}", words.len(), budget.k)));
        }
        if let Some(&w) = words.iter().find(|&&w| w >= outcomes) {
            return Err(Error::Parameter(format!("outcome {w} out of range")));
        }
        let blocks = match budget.mechanism {
            Mechanism::Naive => vec![histogram(outcomes, words)],
            Mechanism::SplitNoise => words.chunks_exact(budget.block_size()).take(budget.blocks()).map(|c| histogram(outcomes, c)).collect(),
            Mechanism::Exact => return Err(Error::Parameter("exact mode takes the distribution, not samples".into())),
        };
        Ok(Self { outcomes, budget: Some(budget), blocks, answered: 0, noise: stream(seed, "shadow-noise", 0) })
    }

    /// Answers from the population distribution.
    pub fn exact(probs: Vec<f64>) -> Self {
        Self { outcomes: probs.len(), budget: None, blocks: vec![probs], answered: 0, noise: stream(0, "shadow-noise", 0) }
    }

    pub fn answered(&self) -> usize {
        self.answered
    }

    pub fn mechanism(&self) -> Mechanism {
        self.budget.map_or(Mechanism::Exact, |b| b.mechanism)
    }

    pub fn tolerance(&self) -> f64 {
        self.budget.map_or(0.0, |b| b.tolerance())
    }

    /// Answer for a challenge vector `e_w = Tr[E Γ^w]`, entries in `[0, 1]`.
    pub fn answer(&mut self, e: &[f64]) -> Result<f64> {
        if e.len() != self.outcomes {
            return Err(Error::Dimension(format!("query of length {} for {} outcomes", e.len(), self.outcomes)));
        }
        if let Some(v) = e.iter().find(|v| !(**v >= -1e-9 && **v <= 1.0 + 1e-9)) {
            return Err(Error::InvalidTestOperator(format!("query coefficient {v} outside [0, 1]")));
        }
        let (hist, noise) = match self.mechanism() {
            Mechanism::SplitNoise => {
                let block = self.blocks.get(self.answered).ok_or(Error::BudgetExhausted(self.answered))?;
                let sigma = self.budget.expect("sampled session").epsilon / 6.0;
                let z = Normal::new(0.0, sigma).expect("positive sigma").sample(&mut self.noise);
                (block, z)
            }
            _ => (&self.blocks[0], 0.0),
        };
        let v: f64 = hist.iter().zip(e).map(|(p, x)| p * x).sum();
        self.answered += 1;
        Ok(v + noise)
    }
}

/// Answers a fixed list of queries.
pub fn shadow_answer(outcomes: usize, words: &[usize], queries: &[Vec<f64>], budget: QueryBudget, seed: u64) -> Result<Vec<f64>> {
    let mut s = ShadowSession::from_samples(outcomes, words, budget, seed)?;
    queries.iter().map(|q| s.answer(q)).collect()
}
