use crate::error::{Error, Result};

/// `w ← w(1 − ηm)` (multiplicative weights) or `w ← w·e^{−ηm}` (Hedge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    Linear,
    Exponential,
}

/// Learning rate for a known horizon: `min(½, √(ln d / T))`.
pub fn default_eta(d: usize, horizon: usize) -> f64 {
    ((d as f64).ln() / horizon.max(1) as f64).sqrt().min(0.5)
}

/// Running sums needed to evaluate the regret inequalities after the fact.
#[derive(Clone, Debug, Default)]
pub struct CostLedger {
    pub rounds: usize,
    /// `Σ_t m^{(t)}·p^{(t)}`.
    pub learner_cost: f64,
    /// `Σ_t m^{(t)}`.
    pub cumulative: Vec<f64>,
    /// `Σ_t |m^{(t)}|`.
    pub cumulative_abs: Vec<f64>,
    /// `Σ_t p^{(t)}·(m^{(t)})²`.
    pub second_moment: f64,
}

/// Shannon entropy in nats.
pub fn shannon_entropy(q: &[f64]) -> f64 {
    -q.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl CostLedger {
    fn new(d: usize) -> Self {
        Self { rounds: 0, learner_cost: 0.0, cumulative: vec![0.0; d], cumulative_abs: vec![0.0; d], second_moment: 0.0 }
    }

    pub fn comparator_cost(&self, q: &[f64]) -> f64 {
        dot(&self.cumulative, q)
    }

    /// `min_i Σ_t m_i^{(t)}`, the cost of the best vertex of the simplex.
    pub fn best_vertex_cost(&self) -> f64 {
        self.cumulative.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `Σ m·q + ηT + ln d / η`.
    pub fn mwu_bound(&self, q: &[f64], eta: f64) -> f64 {
        self.comparator_cost(q) + eta * self.rounds as f64 + (self.cumulative.len() as f64).ln() / eta
    }

    /// `Σ (m + η|m|)·q + ln d / η`, never larger than [`Self::mwu_bound`].
    pub fn mwu_tight_bound(&self, q: &[f64], eta: f64) -> f64 {
        self.comparator_cost(q) + eta * dot(&self.cumulative_abs, q) + (self.cumulative.len() as f64).ln() / eta
    }

    /// `q·Σm + η Σ p·m² + (ln d − H(q))/η`.
    pub fn hedge_bound(&self, q: &[f64], eta: f64) -> f64 {
        self.comparator_cost(q) + eta * self.second_moment + ((self.cumulative.len() as f64).ln() - shannon_entropy(q)) / eta
    }
}

/// Weights are stored as logarithms so that neither rule underflows over
/// long runs; every 64 updates the largest log-weight is shifted to zero.
#[derive(Clone, Debug)]
pub struct MwuState {
    log_w: Vec<f64>,
    eta: f64,
    rule: UpdateRule,
    updates: usize,
    ledger: CostLedger,
}

impl MwuState {
    /// `η ∈ (0, ½]` for the linear rule and `η ∈ (0, 1]` for Hedge.
    pub fn new(d: usize, eta: f64, rule: UpdateRule) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("need at least one decision".into()));
        }
        let cap = match rule {
            UpdateRule::Linear => 0.5,
            UpdateRule::Exponential => 1.0,
        };
        if !(eta > 0.0 && eta <= cap) {
            return Err(Error::Parameter(format!("learning rate {eta} outside (0, {cap}]")));
        }
        Ok(Self { log_w: vec![0.0; d], eta, rule, updates: 0, ledger: CostLedger::new(d) })
    }

    pub fn d(&self) -> usize {
        self.log_w.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule
    }

    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    /// Current weights relative to the stored scale.
    pub fn weights(&self) -> Vec<f64> {
        self.log_w.iter().map(|x| x.exp()).collect()
    }

    pub fn predict(&self) -> Vec<f64> {
        let top = self.log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_w.iter().map(|x| (x - top).exp()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.predict())
    }

    /// Entries of `m` must lie in `[−1 − 1e-12, 1 + 1e-12]`.
    pub fn update(&mut self, m: &[f64]) -> Result<()> {
        if m.len() != self.d() {
            return Err(Error::Dimension(format!("cost vector of length {} for {} decisions", m.len(), self.d())));
        }
        if let Some((i, &v)) = m.iter().enumerate().find(|(_, v)| !(v.abs() <= 1.0 + 1e-12)) {
            return Err(Error::LossOutOfRange { index: i, value: v });
        }
        let p = self.predict();
        self.ledger.rounds += 1;
        self.ledger.learner_cost += dot(m, &p);
        for i in 0..m.len() {
            let mi = m[i].clamp(-1.0, 1.0);
            self.ledger.cumulative[i] += mi;
            self.ledger.cumulative_abs[i] += mi.abs();
            self.ledger.second_moment += p[i] * mi * mi;
            self.log_w[i] += match self.rule {
                UpdateRule::Linear => (-self.eta * mi).ln_1p(),
                UpdateRule::Exponential => -self.eta * mi,
            };
        }
        self.updates += 1;
        if self.updates % 64 == 0 {
            self.renormalize();
        }
        Ok(())
    }

    fn renormalize(&mut self) {
        let top = self.log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for x in &mut self.log_w {
            *x -= top;
        }
    }
}
