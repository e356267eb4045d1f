//! Per-round records of a learning game and the inequalities checked on it.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRow {
    pub t: usize,
    /// FNV-1a digest of the challenge's coefficients.
    pub challenge: String,
    pub prediction: f64,
    pub feedback: f64,
    pub loss: f64,
    pub mistake: bool,
    /// `Σ_s ℓ_s(ŷ_s) − ℓ_s(y*_s)` when the truth is known, else NaN.
    pub cumulative_regret: f64,
    pub entropy: f64,
}

/// One asserted inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { name: name.into(), lhs, rhs, passed: lhs <= rhs }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rounds: usize,
    pub mistakes: usize,
    pub checks: Vec<BoundCheck>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub rows: Vec<TranscriptRow>,
    pub summary: Summary,
}

impl Transcript {
    pub fn push(&mut self, row: TranscriptRow) {
        self.summary.rounds += 1;
        if row.mistake {
            self.summary.mistakes += 1;
        }
        self.rows.push(row);
    }

    pub fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) -> bool {
        let c = BoundCheck::new(name, lhs, rhs);
        let ok = c.passed;
        self.summary.checks.push(c);
        ok
    }
}

pub fn digest(values: &[f64]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}
