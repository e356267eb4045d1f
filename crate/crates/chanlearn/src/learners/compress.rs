//! One-pass sample compression driven by a mistake-driven learner.
//!
//! Points are visited in lexicographic order of their challenge vectors
//! (rounded to 12 decimals). The compressed set keeps exactly the points on
//! which the learner erred by more than `2ε/3`; with labels within `ε/3` of
//! the truth this makes every reconstructed value `ε`-accurate.

use super::linear::OnlineLearner;
use super::mistake::MistakeDriven;
use crate::error::Result;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoint {
    pub challenge: Vec<f64>,
    pub label: f64,
}

fn key(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| (v * 1e12).round() as i64).collect()
}

fn order(a: &[f64], b: &[f64]) -> Ordering {
    key(a).cmp(&key(b))
}

/// Compressed sample together with the threshold used to build it.
#[derive(Clone, Debug)]
pub struct Compressed {
    pub points: Vec<LabeledPoint>,
    pub threshold: f64,
}

impl Compressed {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Mistake threshold `2ε/3` used by the scheme.
pub fn compression_threshold(epsilon: f64) -> f64 {
    2.0 * epsilon / 3.0
}

pub fn one_pass_compress<L, F>(data: &[LabeledPoint], epsilon: f64, fresh: F) -> Result<Compressed>
where
    L: OnlineLearner<Challenge = [f64]>,
    F: Fn() -> L,
{
    let threshold = compression_threshold(epsilon);
    let mut sorted: Vec<&LabeledPoint> = data.iter().collect();
    sorted.sort_by(|a, b| order(&a.challenge, &b.challenge));
    let mut learner = MistakeDriven::new(fresh(), threshold);
    let mut points = Vec::new();
    for p in sorted {
        if learner.step(&p.challenge, p.label)?.mistake {
            points.push(p.clone());
        }
    }
    Ok(Compressed { points, threshold })
}

/// Stored label when the query is in the compressed set, otherwise the
/// prediction after replaying the stored points that precede it.
pub fn one_pass_reconstruct<L, F>(compressed: &Compressed, query: &[f64], fresh: F) -> Result<f64>
where
    L: OnlineLearner<Challenge = [f64]>,
    F: Fn() -> L,
{
    if let Some(p) = compressed.points.iter().find(|p| order(&p.challenge, query) == Ordering::Equal) {
        return Ok(p.label);
    }
    let mut learner = MistakeDriven::new(fresh(), compressed.threshold);
    for p in compressed.points.iter().filter(|p| order(&p.challenge, query) == Ordering::Less) {
        learner.step(&p.challenge, p.label)?;
    }
    Ok(learner.predict(query))
}
