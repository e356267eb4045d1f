use crate::config::{AdversaryKind, LossName, Scenario, Settings};
use crate::report::Report;
use anyhow::{bail, Result};
use chanlearn::adversaries::{all_zeros_adversary, pauli_embedding_game, random_labels, Challenge, RealizableAdversary, TopWeightReader};
use chanlearn::bounds::{eval_bound, BoundQuery};
use chanlearn::channels::{born_value, pauli_channel, ChannelRep, ChannelTestOperator};
use chanlearn::combs::{tester_value, CombOperator, TesterOperator, TimeLocalTwirl};
use chanlearn::learners::{default_eta, MistakeDriven, MwuLearner, OnlineLearner, ProjectedMmwState, UpdateRule};
use chanlearn::linalg::{DensityOperator, HermitianOperator, Subsystem};
use chanlearn::pauli::{bell_coefficients_multi, PauliIndex};
use chanlearn::random::{random_channel, random_density, random_distribution, random_effect, random_error_rates};
use chanlearn::rng::stream;
use chanlearn::shadow::{bell_distribution, comb_shadow, twirled_shadow, Mechanism, QueryBudget, ShadowReport, ShadowSession};
use chanlearn::transcript::{digest, TranscriptRow};
use chanlearn::Error;
use serde_json::json;

/// Allowed error of the exact mechanism.
const ROUNDING: f64 = 1e-12;

pub fn run(s: &Settings, seed: u64) -> Result<Report> {
    match s.scenario {
        Scenario::LearnPauli => learn_pauli(s, seed),
        Scenario::LearnMixture => learn_mixture(s, seed),
        Scenario::LearnChoiMmw => learn_choi_mmw(s, seed),
        Scenario::Shadow => shadow(s, seed),
        Scenario::CombShadow => comb(s, seed),
        Scenario::AdversaryGame => adversary(s, seed),
        Scenario::Bounds => bounds(s),
    }
}

fn learn_pauli(s: &Settings, seed: u64) -> Result<Report> {
    let rates = random_error_rates::<f64, _>(s.n, &mut stream(seed, "cli-target", 0));
    let adv = RealizableAdversary::new(pauli_channel(&rates), s.epsilon, seed)?;
    let mut report = linear_game(s, adv, PauliIndex::count(s.n), |c| c.bell_coefficients())?;
    report.detail("target_error_rates", rates.probs());
    Ok(report)
}

fn learn_mixture(s: &Settings, seed: u64) -> Result<Report> {
    if s.mixture_size == 0 {
        bail!("mixture_size must be at least 1");
    }
    let d = 1 << s.n;
    let basis: Vec<ChannelRep> =
        (0..s.mixture_size).map(|k| random_channel(d, d, 2, &mut stream(seed, "cli-basis", k as u64))).collect();
    let weights: Vec<f64> = random_distribution(s.mixture_size, &mut stream(seed, "cli-target", 0));
    let parts: Vec<(f64, &ChannelRep)> = weights.iter().copied().zip(&basis).collect();
    let adv = RealizableAdversary::new(ChannelRep::mixture(&parts)?, s.epsilon, seed)?;
    let mut report = linear_game(s, adv, s.mixture_size, |c| c.values_on(&basis))?;
    report.detail("target_weights", &weights);
    Ok(report)
}

/// MWU over `d` known hypotheses, optionally updating only on ε-mistakes.
fn linear_game(
    s: &Settings,
    mut adv: RealizableAdversary,
    d: usize,
    coefficients: impl Fn(&Challenge) -> chanlearn::Result<Vec<f64>>,
) -> Result<Report> {
    let loss = s.loss.loss();
    let eta = s.eta.unwrap_or(if s.mistake_driven { s.epsilon / 3.0 } else { default_eta(d, s.rounds) });
    let inner = MwuLearner::new(d, eta, UpdateRule::Linear, loss)?;
    // a threshold of −∞ turns the wrapper into a learner that updates every round
    let mut learner = MistakeDriven::new(inner, if s.mistake_driven { s.epsilon } else { f64::NEG_INFINITY });
    let mut report = Report::default();
    let mut regret = 0.0;
    for t in 1..=s.rounds {
        let c = adv.next_challenge()?;
        let e = coefficients(&c)?;
        let prediction = learner.predict(&e);
        let feedback = adv.reveal(&c, prediction);
        learner.observe(&e, prediction, feedback)?;
        regret += loss.value(prediction, feedback) - loss.value(c.truth, feedback);
        report.rows.push(TranscriptRow {
            t,
            challenge: digest(&e),
            prediction,
            feedback,
            loss: loss.value(prediction, feedback),
            mistake: (prediction - feedback).abs() > s.epsilon,
            cumulative_regret: regret,
            entropy: learner.inner.entropy(),
        });
    }
    let ledger = learner.inner.state.ledger();
    let slack = eta * ledger.rounds as f64 + (d as f64).ln() / eta;
    report.check("mwu-regret", ledger.learner_cost - ledger.best_vertex_cost(), slack);
    if s.mistake_driven {
        if s.eta.is_none() && s.loss == LossName::Absolute {
            let budget = eval_bound(&BoundQuery::MixtureMistakes { k: d, l: 1.0, epsilon: s.epsilon })?.value;
            report.check("mistake-budget", report.mistakes() as f64, budget);
        }
    } else {
        report.check("loss-regret", regret, loss.lipschitz * slack);
    }
    report.detail("eta", eta);
    report.detail("updates", learner.inner.state.updates());
    Ok(report)
}

fn learn_choi_mmw(s: &Settings, seed: u64) -> Result<Report> {
    let d = 1 << s.n;
    let hidden = random_channel::<f64, _>(d, d, 2, &mut stream(seed, "cli-target", 0));
    let comparator = DensityOperator::normalized(hidden.choi().clone());
    let mut adv = RealizableAdversary::new(hidden, s.epsilon, seed)?;
    let eta = s.eta.unwrap_or(default_eta(d * d, s.rounds));
    let mut st = ProjectedMmwState::new((d, d), eta, s.mirror)?;
    let loss = s.loss.loss();
    let mut report = Report::default();
    let (mut regret, mut comparator_cost, mut worst_gap) = (0.0, 0.0, 0.0f64);
    let half = HermitianOperator::identity(d).scale(1.0 / d as f64);
    for t in 1..=s.rounds {
        let c = adv.next_challenge()?;
        let e = c.test_operator()?;
        let rho = st.iterate().clone();
        worst_gap = worst_gap.max(rho.op().partial_trace((d, d), Subsystem::A)?.sub(&half).frobenius_norm());
        let prediction = d as f64 * e.op().inner(rho.op());
        let feedback = adv.reveal(&c, prediction);
        let l = e.op().scale(loss.derivative(prediction, feedback) / loss.lipschitz);
        comparator_cost += l.inner(comparator.op());
        st.round(&l)?;
        regret += loss.value(prediction, feedback) - loss.value(c.truth, feedback);
        report.rows.push(TranscriptRow {
            t,
            challenge: digest(&c.bell_coefficients()?),
            prediction,
            feedback,
            loss: loss.value(prediction, feedback),
            mistake: (prediction - feedback).abs() > s.epsilon,
            cumulative_regret: regret,
            entropy: rho.entropy(),
        });
    }
    let bound = st.regret_bound(&comparator);
    report.check("choi-marginal", worst_gap, 1e-8);
    report.check("mirror-descent-bound", st.learner_cost(), bound);
    // ℓ(ŷ) − ℓ(y*) ≤ ℓ′(ŷ)(ŷ − y*) = L d Tr[L_t (ρ_t − σ)]
    report.check("loss-regret", regret, loss.lipschitz * d as f64 * (bound - comparator_cost));
    report.detail("eta", eta);
    Ok(report)
}

fn product_test(d: usize, rng: &mut chanlearn::rng::Stream) -> chanlearn::Result<ChannelTestOperator> {
    ChannelTestOperator::product(&random_density(d, rng), &random_effect(d, rng))
}

fn shadow_queries(report: &mut Report, coefficients: &[Vec<f64>], answers: &[f64], truths: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, ((e, a), y)) in coefficients.iter().zip(answers).zip(truths).enumerate() {
        let err = (a - y).abs();
        worst = worst.max(err);
        report.queries.push(json!({ "query": i + 1, "challenge": digest(e), "answer": a, "truth": y, "error": err }));
    }
    worst
}

fn finish_shadow(s: &Settings, report: &mut Report, shadow: &ShadowReport, coefficients: &[Vec<f64>], truths: &[f64], steps: usize) -> Result<()> {
    let worst = shadow_queries(report, coefficients, &shadow.answers, truths);
    // holds with probability 1 − δ for the sampled mechanisms
    report.check("max-query-error", worst, shadow.tolerance + shadow.slack);
    report.detail("tolerance", shadow.tolerance);
    report.detail("slack", shadow.slack);
    let reference = eval_bound(&BoundQuery::ShadowSamples {
        n: s.n,
        r: steps,
        m: s.queries,
        epsilon: s.epsilon,
        delta: s.delta,
        slack: shadow.slack,
        c: None,
    })?;
    report.detail("sample_formula", reference);
    Ok(())
}

fn budget(s: &Settings) -> Result<QueryBudget> {
    Ok(QueryBudget::new(s.samples.max(1), s.epsilon, s.delta, s.queries, s.mechanism)?)
}

fn shadow(s: &Settings, seed: u64) -> Result<Report> {
    let d = 1 << s.n;
    let ch = pauli_channel(&random_error_rates::<f64, _>(s.n, &mut stream(seed, "cli-target", 0)));
    let mut rng = stream(seed, "cli-queries", 0);
    let tests = (0..s.queries).map(|_| product_test(d, &mut rng)).collect::<chanlearn::Result<Vec<_>>>()?;
    let coefficients = tests.iter().map(|e| e.bell_coefficients()).collect::<chanlearn::Result<Vec<_>>>()?;
    let truths = tests.iter().map(|e| born_value(e, &ch)).collect::<chanlearn::Result<Vec<_>>>()?;
    let shadow = match s.mechanism {
        Mechanism::Exact => {
            let mut session = ShadowSession::exact(bell_distribution(&ch)?);
            let answers = coefficients.iter().map(|e| session.answer(e)).collect::<chanlearn::Result<Vec<_>>>()?;
            ShadowReport { answers, slack: 0.0, tolerance: ROUNDING }
        }
        _ => twirled_shadow(&ch, &tests, budget(s)?, seed)?,
    };
    let mut report = Report::default();
    finish_shadow(s, &mut report, &shadow, &coefficients, &truths, 1)?;
    Ok(report)
}

fn comb(s: &Settings, seed: u64) -> Result<Report> {
    let d = 1 << s.n;
    let steps: Vec<ChannelRep> =
        (0..s.r).map(|k| pauli_channel(&random_error_rates::<f64, _>(s.n, &mut stream(seed, "cli-target", k as u64)))).collect();
    let comb = CombOperator::product(&steps)?;
    let mut rng = stream(seed, "cli-queries", 0);
    let testers = (0..s.queries)
        .map(|_| {
            let mut op = HermitianOperator::identity(1);
            for _ in 0..s.r {
                op = op.kron(product_test(d, &mut rng)?.op());
            }
            TesterOperator::new(op, None, vec![d; s.r], vec![d; s.r])
        })
        .collect::<chanlearn::Result<Vec<_>>>()?;
    let coefficients =
        testers.iter().map(|e| bell_coefficients_multi(e.op().matrix(), s.n, s.r)).collect::<chanlearn::Result<Vec<_>>>()?;
    let truths = testers.iter().map(|e| tester_value(e, &comb)).collect::<chanlearn::Result<Vec<_>>>()?;
    let shadow = match s.mechanism {
        Mechanism::Exact => {
            let mut session = ShadowSession::exact(TimeLocalTwirl::new(&comb)?.probs().to_vec());
            let answers = coefficients.iter().map(|e| session.answer(e)).collect::<chanlearn::Result<Vec<_>>>()?;
            ShadowReport { answers, slack: 0.0, tolerance: ROUNDING }
        }
        _ => comb_shadow(&comb, &testers, budget(s)?, seed)?,
    };
    let mut report = Report::default();
    finish_shadow(s, &mut report, &shadow, &coefficients, &truths, s.r)?;
    Ok(report)
}

fn adversary(s: &Settings, seed: u64) -> Result<Report> {
    let k = PauliIndex::count(s.n);
    let mut report = Report::default();
    match s.adversary {
        AdversaryKind::AllZeros => {
            let eta = s.eta.unwrap_or(0.3);
            let fresh = || TopWeightReader::new(k, s.reads, eta);
            let outcome = match all_zeros_adversary(s.n, &mut fresh()?, s.rounds) {
                Err(Error::BudgetExhausted(t)) => {
                    report.detail("budget_exhausted_after", t);
                    all_zeros_adversary(s.n, &mut fresh()?, t)?
                }
                other => other?,
            };
            let played = outcome.transcript.rows.len();
            report.rows = outcome.transcript.rows.clone();
            report.check("forced-mistakes", (played - report.mistakes()) as f64, 0.0);
            report.check("certificate-consistent", if outcome.verify() { 0.0 } else { 1.0 }, 0.0);
            report.detail("hidden_index", outcome.certificate.hidden);
            report.detail("distinct_reads", outcome.queried.iter().flatten().collect::<std::collections::BTreeSet<_>>().len());
        }
        AdversaryKind::PauliEmbedding => {
            let labels = random_labels(s.n, &mut stream(seed, "cli-labels", 0));
            let eta = s.eta.unwrap_or(default_eta(k, s.n));
            let mut learner = MwuLearner::new(k, eta, UpdateRule::Linear, s.loss.loss())?;
            report.rows = pauli_embedding_game(&labels, &mut learner)?.rows;
            report.detail("labels", &labels);
        }
    }
    Ok(report)
}

fn bounds(s: &Settings) -> Result<Report> {
    let which = s.bound.which.as_deref().expect("validated");
    let q = BoundQuery::from_params(which, &s.bound.params)?;
    let mut report = Report::default();
    report.detail("bound", eval_bound(&q)?);
    Ok(report)
}
