//! Shadow tomography for arbitrary channels and combs through their Pauli
//! twirls. Answers estimate the twirled values; the distance to the true
//! values is bounded by half the Choi trace norm of the twirl defect.

use super::sampling::{bell_distribution, sample_twirl};
use super::session::{QueryBudget, ShadowSession};
use crate::channels::{pauli_channel, pauli_twirl, ChannelRep, ChannelTestOperator};
use crate::combs::{CombOperator, TesterOperator, TimeLocalTwirl};
use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::pauli::{bell_coefficients_multi, gamma, PauliIndex};
use crate::rng::stream;

/// Answers plus the slack `½‖C − C^P‖₁` separating twirled from true values.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowReport {
    pub answers: Vec<f64>,
    pub slack: f64,
    /// Per-query accuracy of the mechanism on the twirled values.
    pub tolerance: f64,
}

/// `½‖C(N) − C(N^P)‖₁`.
pub fn twirl_slack(ch: &ChannelRep) -> Result<f64> {
    let twirled = pauli_channel(&pauli_twirl(ch)?);
    Ok(0.5 * ch.choi().sub(twirled.choi()).trace_norm())
}

fn twirled_comb_operator(t: &TimeLocalTwirl) -> HermitianOperator {
    let per = PauliIndex::count(t.n());
    let gammas: Vec<HermitianOperator> = PauliIndex::all(t.n()).map(|i| gamma::<f64>(&i)).collect();
    let dim = (1usize << (2 * t.n())).pow(t.r() as u32);
    let mut acc = HermitianOperator::zeros(dim);
    for (word, &p) in t.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut rem = word;
        let mut digits = vec![0; t.r()];
        for k in (0..t.r()).rev() {
            digits[k] = rem % per;
            rem /= per;
        }
        let mut op = HermitianOperator::identity(1);
        for &w in &digits {
            op = op.kron(&gammas[w]);
        }
        acc = acc.add(&op.scale(p));
    }
    acc
}

/// `½‖N − N^P‖₁` for a comb, `N^P = Σ_w p(w) Γ^{w_1} ⊗ … ⊗ Γ^{w_r}`.
pub fn comb_twirl_slack(comb: &CombOperator) -> Result<f64> {
    let t = TimeLocalTwirl::new(comb)?;
    Ok(0.5 * comb.op().sub(&twirled_comb_operator(&t)).trace_norm())
}

fn run(t: &TimeLocalTwirl, queries: &[Vec<f64>], budget: QueryBudget, seed: u64, slack: f64) -> Result<ShadowReport> {
    let mut rng = stream(seed, "shadow-samples", 0);
    let words: Vec<usize> = sample_twirl(t, budget.k, &mut rng)?.into_iter().map(|s| s.word).collect();
    let mut session = ShadowSession::from_samples(t.probs().len(), &words, budget, seed)?;
    let answers = queries.iter().map(|q| session.answer(q)).collect::<Result<Vec<_>>>()?;
    Ok(ShadowReport { answers, slack, tolerance: session.tolerance() })
}

/// Bell-samples `ch` `budget.k` times and answers each test. Fails when the
/// slack alone already exceeds `budget.epsilon`.
pub fn twirled_shadow(ch: &ChannelRep, queries: &[ChannelTestOperator], budget: QueryBudget, seed: u64) -> Result<ShadowReport> {
    let slack = twirl_slack(ch)?;
    if slack >= budget.epsilon {
        return Err(Error::Parameter(format!("twirl slack {slack} is not below epsilon {}", budget.epsilon)));
    }
    let t = TimeLocalTwirl::from_probs(ch.n_in(), 1, bell_distribution(ch)?)?;
    let e = queries.iter().map(|q| q.bell_coefficients()).collect::<Result<Vec<_>>>()?;
    run(&t, &e, budget, seed, slack)
}

/// Comb version: time-local Bell samples, tester coefficients
/// `Tr[E (Γ^{w_1} ⊗ … ⊗ Γ^{w_r})]`.
pub fn comb_shadow(comb: &CombOperator, queries: &[TesterOperator], budget: QueryBudget, seed: u64) -> Result<ShadowReport> {
    let t = TimeLocalTwirl::new(comb)?;
    let slack = 0.5 * comb.op().sub(&twirled_comb_operator(&t)).trace_norm();
    if slack >= budget.epsilon {
        return Err(Error::Parameter(format!("twirl slack {slack} is not below epsilon {}", budget.epsilon)));
    }
    let e = queries.iter().map(|q| bell_coefficients_multi(q.op().matrix(), t.n(), t.r())).collect::<Result<Vec<_>>>()?;
    run(&t, &e, budget, seed, slack)
}
