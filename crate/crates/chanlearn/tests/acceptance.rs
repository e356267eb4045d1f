//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use chanlearn::adversaries::{
    all_zeros_adversary, pauli_embedding_challenge, pauli_embedding_channel, pauli_embedding_game, random_labels, FreshIndexReader,
    RealizableAdversary, TopWeightReader,
};
use chanlearn::bounds::{eval_bound, BoundQuery};
use chanlearn::channels::{
    bell_pinching, born_value, diamond_distance_pauli, diamond_lower_bound_probe, entangled_probe_distance, pauli_channel,
    pauli_conjugation_average, twirled_channel, ChannelRep, ChannelTestOperator,
};
use chanlearn::combs::{comb_from_channels, link_product, CombOperator, CombStep};
use chanlearn::learners::{
    default_eta, mistake_driven, one_pass_compress, one_pass_reconstruct, LabeledPoint, LipschitzLoss, MirrorMode, MistakeDriven,
    MwuLearner, MwuState, ProjectedMmwState, StreamItem, UpdateRule,
};
use chanlearn::linalg::{DensityOperator, Subsystem};
use chanlearn::pauli::bell_coefficients;
use chanlearn::random::{random_channel, random_density, random_effect, random_error_rates};
use chanlearn::rng::stream;
use chanlearn::shadow::{bell_distribution, bell_samples, frequencies, shadow_answer, Mechanism, QueryBudget};
use chanlearn::Hermitian;
use rand::Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Check = (bool, String);

fn mwu_regret() -> Check {
    let (t_max, d) = (10_000, 16);
    let eta = (16f64.ln() / t_max as f64).sqrt();
    let bound = eval_bound(&BoundQuery::MwuRegret { d, t: t_max, eta: Some(eta) }).unwrap().value;
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..50 {
        let mut rng = stream(seed, "acceptance-mwu", 0);
        let mut s = MwuState::new(d, eta, UpdateRule::Linear).unwrap();
        let drift: Vec<f64> = (0..d).map(|_| rng.random_range(-0.3..0.3)).collect();
        for _ in 0..t_max {
            // charge the current favourite in full, noise and a fixed drift elsewhere
            let p = s.predict();
            let lead = (0..d).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
            let m: Vec<f64> =
                (0..d).map(|i| if i == lead { 1.0 } else { (drift[i] + rng.random_range(-0.7..0.7)).clamp(-1.0, 1.0) }).collect();
            s.update(&m).unwrap();
        }
        let l = s.ledger();
        worst = worst.max(l.learner_cost - l.best_vertex_cost());
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= bound && secs < 10.0, format!("max regret {worst:.2} <= {bound:.2} over 50 streams in {secs:.2} s"))
}

fn pauli_mistakes() -> Check {
    let (n, eps, rounds) = (3, 0.2, 10_000);
    let budget = eval_bound(&BoundQuery::PauliMistakes { n, l: 1.0, epsilon: eps }).unwrap().value;
    let start = Instant::now();
    let mut worst = 0;
    for seed in 0..20 {
        let mut rng = stream(seed, "acceptance-pauli", 0);
        let rates = random_error_rates::<f64, _>(n, &mut rng);
        let mut adv = RealizableAdversary::new(pauli_channel(&rates), eps, seed).unwrap();
        let inner = MwuLearner::new(1 << (2 * n), eps / 3.0, UpdateRule::Linear, LipschitzLoss::absolute()).unwrap();
        let mut learner = MistakeDriven::new(inner, eps);
        let stream_items = (0..rounds).map(|_| {
            let c = adv.next_challenge().unwrap();
            let e = c.bell_coefficients().unwrap();
            let feedback = adv.reveal(&c, 0.0);
            StreamItem { challenge: e, feedback, truth: Some(c.truth) }
        });
        let tr = mistake_driven(&mut learner, stream_items).unwrap();
        worst = worst.max(tr.summary.mistakes);
    }
    let secs = start.elapsed().as_secs_f64();
    ((worst as f64) <= budget && secs < 30.0, format!("max mistakes {worst} <= {budget} over 20 seeds in {secs:.2} s"))
}

fn twirl_pinching() -> Check {
    let mut rng = stream(3, "acceptance-twirl", 0);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 1 + i % 2;
        let d = 1 << n;
        let ch = random_channel::<f64, _>(d, d, 1 + i % 3, &mut rng);
        let pinched = bell_pinching(ch.choi(), n);
        worst = worst.max(twirled_channel(&ch).unwrap().choi().sub(&pinched).frobenius_norm());
        worst = worst.max(pauli_conjugation_average(ch.choi(), n).sub(&pinched).frobenius_norm());
    }
    (worst <= 1e-10, format!("max Frobenius gap {worst:.2e} over 100 channels"))
}

fn born_rule() -> Check {
    let mut rng = stream(4, "acceptance-born", 0);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let (di, dout) = ([2, 4][i % 2], [2, 4][(i / 2) % 2]);
        let ch = random_channel::<f64, _>(di, dout, (1 + i % 3).max(di / dout), &mut rng);
        let rho = random_density::<f64, _>(di, &mut rng);
        let m = random_effect::<f64, _>(dout, &mut rng);
        let direct = ch.apply_kraus(rho.op()).unwrap().inner(&m);
        let e = ChannelTestOperator::product(&rho, &m).unwrap();
        worst = worst.max((direct - born_value(&e, &ch).unwrap()).abs());
    }
    (worst <= 1e-10, format!("max Born-rule gap {worst:.2e} over 200 triples"))
}

fn projected_mmw() -> Check {
    let rounds = 200;
    let mut worst_gap: f64 = 0.0;
    let mut worst_slack = f64::INFINITY;
    for seed in 0..20 {
        let mut rng = stream(seed, "acceptance-mmw", 0);
        let hidden = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let comparator = DensityOperator::normalized(hidden.choi().clone());
        let mut adv = RealizableAdversary::new(hidden, 0.3, seed).unwrap();
        let mut st = ProjectedMmwState::new((2, 2), default_eta(4, rounds), MirrorMode::Agile).unwrap();
        let loss = LipschitzLoss::absolute();
        for _ in 0..rounds {
            let c = adv.next_challenge().unwrap();
            let e = c.test_operator().unwrap();
            let rho = st.iterate().clone();
            let marginal = rho.op().partial_trace((2, 2), Subsystem::A).unwrap();
            worst_gap = worst_gap.max(marginal.sub(&Hermitian::identity(2).scale(0.5)).frobenius_norm());
            let prediction = 2.0 * e.op().inner(rho.op());
            let feedback = adv.reveal(&c, prediction);
            let l = e.op().scale(loss.derivative(prediction, feedback));
            st.round(&l).unwrap();
        }
        worst_slack = worst_slack.min(st.regret_bound(&comparator) - st.learner_cost());
    }
    (
        worst_gap <= 1e-8 && worst_slack >= 0.0,
        format!("max marginal gap {worst_gap:.2e}; min bound slack {worst_slack:.3} over 20 streams"),
    )
}

fn bell_sampling() -> Check {
    let k = 100_000;
    let mut rng = stream(6, "acceptance-bell", 0);
    let id = bell_samples(&ChannelRep::identity(4), k, &mut rng).unwrap();
    let trivial = id.iter().filter(|s| s.word == 0).count();
    let rates = random_error_rates::<f64, _>(2, &mut rng);
    let ch = pauli_channel(&rates);
    let analytic = bell_distribution(&ch).unwrap();
    let exact_gap = analytic.iter().zip(rates.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = frequencies(&bell_samples(&ch, k, &mut rng).unwrap(), 16);
        let err = f.iter().zip(rates.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
        if err > 0.01 {
            failures += 1;
        }
    }
    (
        trivial == k && failures <= 1 && exact_gap <= 1e-10,
        format!("identity {trivial}/{k}; {failures}/100 batches above 0.01 (max {worst:.4}); analytic gap {exact_gap:.1e}"),
    )
}

fn shadow_nonadaptive() -> Check {
    let (m, k) = (1000, 50_000);
    let mut good = 0;
    let mut errs = Vec::new();
    for trial in 0..20 {
        let mut rng = stream(trial, "acceptance-shadow", 0);
        let rates = random_error_rates::<f64, _>(2, &mut rng);
        let ch = pauli_channel(&rates);
        let mut adv = RealizableAdversary::new(ch.clone(), 0.3, trial).unwrap();
        let (mut queries, mut truths) = (Vec::new(), Vec::new());
        for _ in 0..m {
            let c = adv.next_challenge().unwrap();
            queries.push(c.bell_coefficients().unwrap());
            truths.push(c.truth);
        }
        let words: Vec<usize> = bell_samples(&ch, k, &mut rng).unwrap().into_iter().map(|s| s.word).collect();
        let budget = QueryBudget::new(k, 0.05, 0.05, m, Mechanism::Naive).unwrap();
        let answers = shadow_answer(16, &words, &queries, budget, trial).unwrap();
        let err = answers.iter().zip(&truths).map(|(a, t)| (a - t).abs()).fold(0.0, f64::max);
        errs.push(err);
        if err <= 0.05 {
            good += 1;
        }
    }
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    (good >= 19, format!("{good}/20 trials with max error <= 0.05 (worst {worst:.4})"))
}

fn pauli_diamond() -> Check {
    let mut rng = stream(8, "acceptance-diamond", 0);
    let (mut gap, mut excess) = (0.0f64, f64::NEG_INFINITY);
    for i in 0..50 {
        let n = 1 + i % 2;
        let p = random_error_rates::<f64, _>(n, &mut rng);
        let q = random_error_rates::<f64, _>(n, &mut rng);
        let l1 = diamond_distance_pauli(&p, &q).unwrap();
        let (a, b) = (pauli_channel(&p), pauli_channel(&q));
        gap = gap.max((entangled_probe_distance(&a, &b).unwrap() - l1).abs());
        excess = excess.max(diamond_lower_bound_probe(&a, &b, 20, &mut rng).unwrap() - l1);
    }
    (gap <= 1e-10 && excess <= 1e-10, format!("max probe gap {gap:.2e}; max estimator excess {excess:.2e} over 50 pairs"))
}

fn combs() -> Check {
    let mut rng = stream(9, "acceptance-comb", 0);
    let mut worst_ladder: f64 = 0.0;
    for r in 1..=3 {
        let product = CombOperator::<f64>::product(&(0..r).map(|_| random_channel(2, 2, 2, &mut rng)).collect::<Vec<_>>()).unwrap();
        worst_ladder = worst_ladder.max(product.report().max_violation());
        let steps: Vec<CombStep> = (0..r)
            .map(|k| {
                let (mi, mo) = (if k == 0 { 1 } else { 2 }, if k + 1 == r { 1 } else { 2 });
                CombStep::new(random_channel(mi * 2, 2 * mo, 2, &mut rng), mi, 2, 2, mo).unwrap()
            })
            .collect();
        worst_ladder = worst_ladder.max(comb_from_channels(&steps).unwrap().report().max_violation());
    }
    let a = random_channel::<f64, _>(2, 2, 2, &mut rng);
    let b = random_channel::<f64, _>(2, 2, 3, &mut rng);
    let c = random_channel::<f64, _>(2, 2, 2, &mut rng);
    let (ca, cb, cc) = (CombOperator::from_channel(&a), CombOperator::from_channel(&b), CombOperator::from_channel(&c));
    let ab = link_product(&ca, &cb, &[(1, 1)]).unwrap();
    let composition = ab.op().sub(a.then(&b).unwrap().choi()).frobenius_norm();
    let left = link_product(&ab, &cc, &[(1, 1)]).unwrap();
    let right = link_product(&ca, &link_product(&cb, &cc, &[(1, 1)]).unwrap(), &[(1, 1)]).unwrap();
    let assoc = left.op().sub(right.op()).frobenius_norm();
    (
        worst_ladder <= 1e-9 && composition <= 1e-10 && assoc <= 1e-10,
        format!("max ladder violation {worst_ladder:.1e}; composition gap {composition:.1e}; associativity gap {assoc:.1e}"),
    )
}

fn all_zeros() -> Check {
    let rounds = (256 - 1) / 3;
    let mut reader = TopWeightReader::new(16, 3, 0.1).unwrap();
    let out = all_zeros_adversary(2, &mut reader, rounds).unwrap();
    let every_round = out.transcript.summary.mistakes == rounds && out.queried.iter().all(|q| q.len() == 3);
    let realized = out.certificate.realizing_test().unwrap();
    let coeffs = bell_coefficients(realized.op().matrix(), 2).unwrap();
    let one_hot = coeffs.iter().enumerate().all(|(i, v)| (v - if i == out.certificate.hidden { 1.0 } else { 0.0 }).abs() < 1e-12);
    // a learner that never rereads an index exhausts the sixteen entries sooner
    let fresh = all_zeros_adversary(2, &mut FreshIndexReader::new(3), rounds).unwrap_err();
    (
        every_round && out.verify() && one_hot,
        format!("{} forced mistakes in {rounds} rounds, certificate verified; fresh-index reader: {fresh}", out.transcript.summary.mistakes),
    )
}

fn compression() -> Check {
    let eps = 0.3;
    let k = 16;
    let budget = eval_bound(&BoundQuery::MixtureMistakes { k, l: 1.0, epsilon: eps }).unwrap().value;
    let size_bound = eval_bound(&BoundQuery::CompressionSize { k, l: 1.0, epsilon: eps }).unwrap().value;
    let fresh = || MwuLearner::new(k, eps / 6.0, UpdateRule::Linear, LipschitzLoss::absolute()).unwrap();
    let (mut worst_err, mut largest) = (0.0f64, 0);
    for seed in 0..10 {
        let mut rng = stream(seed, "acceptance-compress", 0);
        let rates = random_error_rates::<f64, _>(2, &mut rng);
        let mut adv = RealizableAdversary::new(pauli_channel(&rates), eps, seed).unwrap();
        let mut data = Vec::new();
        let mut truths = Vec::new();
        for _ in 0..200 {
            let c = adv.next_challenge().unwrap();
            let label = adv.reveal(&c, 0.0);
            data.push(LabeledPoint { challenge: c.bell_coefficients().unwrap(), label });
            truths.push(c.truth);
        }
        let kappa = one_pass_compress(&data, eps, fresh).unwrap();
        largest = largest.max(kappa.len());
        for (p, truth) in data.iter().zip(&truths) {
            let v = one_pass_reconstruct(&kappa, &p.challenge, fresh).unwrap();
            worst_err = worst_err.max((v - p.label).abs()).max((v - truth).abs());
        }
    }
    (
        worst_err <= eps && (largest as f64) <= budget && (largest as f64) <= size_bound,
        format!("max reconstruction error {worst_err:.4} <= {eps}; largest |kappa| {largest} <= {budget}"),
    )
}

fn embeddings() -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for bits in 0..1usize << n {
            let f: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            let ch = pauli_embedding_channel(&f).unwrap();
            for t in 1..=n {
                let c = pauli_embedding_challenge(n, t).unwrap();
                worst = worst.max((born_value(&c.test, &ch).unwrap() - f[t - 1] as f64).abs());
            }
        }
    }
    let (n, trials) = (4, 1000);
    let mut rng = stream(12, "acceptance-embedding", 0);
    let mut mistakes = 0;
    for _ in 0..trials {
        let f = random_labels(n, &mut rng);
        let mut learner = MwuLearner::new(1 << (2 * n), 0.1, UpdateRule::Linear, LipschitzLoss::absolute()).unwrap();
        mistakes += pauli_embedding_game(&f, &mut learner).unwrap().summary.mistakes;
    }
    let freq = mistakes as f64 / (trials * n) as f64;
    (
        worst <= 1e-12 && (freq - 0.5).abs() <= 0.05,
        format!("max Born gap {worst:.1e} over all f with n <= 4; mistake frequency {freq:.4}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("MWU deterministic regret", mwu_regret),
        ("Pauli mistake bound", pauli_mistakes),
        ("twirl equals pinching", twirl_pinching),
        ("Born-rule identity", born_rule),
        ("projected MMW", projected_mmw),
        ("Bell sampling", bell_sampling),
        ("non-adaptive shadow tomography", shadow_nonadaptive),
        ("Pauli diamond distance", pauli_diamond),
        ("comb validity and link product", combs),
        ("all-zeros adversary", all_zeros),
        ("compression", compression),
        ("lower-bound embeddings", embeddings),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => (false, format!("panicked: {:?}", e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())))),
        };
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
