use super::linear::OnlineLearner;
use crate::error::Result;
use crate::transcript::{digest, Transcript, TranscriptRow};

/// Updates the inner learner only on rounds where `|ŷ − b|` exceeds the threshold.
#[derive(Clone, Debug)]
pub struct MistakeDriven<L> {
    pub inner: L,
    threshold: f64,
    mistakes: usize,
    rounds: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub prediction: f64,
    pub loss: f64,
    pub mistake: bool,
}

impl<L: OnlineLearner> MistakeDriven<L> {
    /// An ε-mistake is a round with `|ŷ − b| > ε`.
    pub fn new(inner: L, threshold: f64) -> Self {
        Self { inner, threshold, mistakes: 0, rounds: 0 }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn predict(&self, x: &L::Challenge) -> f64 {
        self.inner.predict(x)
    }

    /// Scores a prediction already handed out and updates on a mistake.
    pub fn observe(&mut self, x: &L::Challenge, prediction: f64, feedback: f64) -> Result<Step> {
        let loss = (prediction - feedback).abs();
        let mistake = loss > self.threshold;
        if mistake {
            self.inner.update(x, prediction, feedback)?;
            self.mistakes += 1;
        }
        self.rounds += 1;
        Ok(Step { prediction, loss, mistake })
    }

    pub fn step(&mut self, x: &L::Challenge, feedback: f64) -> Result<Step> {
        let prediction = self.predict(x);
        self.observe(x, prediction, feedback)
    }
}

/// One challenge of a stream with its revealed feedback and, when known,
/// the true value.
#[derive(Clone, Debug)]
pub struct StreamItem {
    pub challenge: Vec<f64>,
    pub feedback: f64,
    pub truth: Option<f64>,
}

/// Runs the wrapper over a stream with absolute losses and records every round.
pub fn mistake_driven<L: OnlineLearner<Challenge = [f64]>>(
    learner: &mut MistakeDriven<L>,
    stream: impl IntoIterator<Item = StreamItem>,
) -> Result<Transcript> {
    let mut tr = Transcript::default();
    let mut regret = 0.0;
    for (t, item) in stream.into_iter().enumerate() {
        let s = learner.step(&item.challenge, item.feedback)?;
        regret = match item.truth {
            Some(y) => regret + s.loss - (y - item.feedback).abs(),
            None => f64::NAN,
        };
        tr.push(TranscriptRow {
            t: t + 1,
            challenge: digest(&item.challenge),
            prediction: s.prediction,
            feedback: item.feedback,
            loss: s.loss,
            mistake: s.mistake,
            cumulative_regret: regret,
            entropy: learner.inner.entropy(),
        });
    }
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::linear::MwuLearner;
    use crate::learners::loss::LipschitzLoss;
    use crate::learners::mwu::UpdateRule;

    fn learner() -> MistakeDriven<MwuLearner> {
        MistakeDriven::new(MwuLearner::new(2, 0.1, UpdateRule::Linear, LipschitzLoss::absolute()).unwrap(), 0.2)
    }

    #[test]
    fn correct_learner_never_updates() {
        let mut l = learner();
        let stream = (0..50).map(|_| StreamItem { challenge: vec![0.5, 0.5], feedback: 0.5, truth: Some(0.5) });
        let tr = mistake_driven(&mut l, stream).unwrap();
        assert_eq!(tr.summary.mistakes, 0);
        assert_eq!(l.inner.state.updates(), 0);
    }

    #[test]
    fn updates_only_on_mistakes() {
        let mut l = learner();
        let stream: Vec<StreamItem> = (0..200)
            .map(|t| StreamItem { challenge: vec![1.0, (t % 5) as f64 / 5.0], feedback: 1.0, truth: Some(1.0) })
            .collect();
        let tr = mistake_driven(&mut l, stream.clone()).unwrap();
        assert_eq!(l.inner.state.updates(), tr.summary.mistakes);
        assert!(tr.rows.iter().all(|r| r.mistake == (r.loss > 0.2)));
        // appending rounds the learner already gets right does not change the count
        let mut again = learner();
        let mut longer = stream;
        longer.extend((0..100).map(|_| StreamItem { challenge: vec![1.0, 1.0], feedback: 1.0, truth: Some(1.0) }));
        assert_eq!(mistake_driven(&mut again, longer).unwrap().summary.mistakes, tr.summary.mistakes);
    }
}
