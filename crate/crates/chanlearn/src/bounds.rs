//! Closed-form evaluators for the regret, mistake, covering and sample bounds.
//!
//! Where a formula is only known up to a constant, the caller may pass `c`
//! (default 1) and the result is flagged as not asserted. Integer budgets
//! (mistakes, compression sizes, sample counts) are rounded up.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "which", rename_all = "kebab-case")]
pub enum BoundQuery {
    /// `ηT + ln d / η`; with `eta` absent, the optimum `2√(T ln d)`.
    MwuRegret { d: usize, t: usize, eta: Option<f64> },
    /// `2L√(T n ln 4)`.
    PauliRegret { n: usize, t: usize, l: f64 },
    /// `2L√(T ln K)`.
    MixtureRegret { k: usize, t: usize, l: f64 },
    /// `⌈9 L² ln K / ε²⌉` mistakes of the wrapper at threshold `ε`.
    MixtureMistakes { k: usize, l: f64, epsilon: f64 },
    /// The mixture budget with `K = 4^n`.
    PauliMistakes { n: usize, l: f64, epsilon: f64 },
    /// `⌈36 L² ln K / ε²⌉`: size of the one-pass compression (threshold `2ε/3`).
    CompressionSize { k: usize, l: f64, epsilon: f64 },
    /// `G ln C(n, 2) + 512 G ln(6G/ε)`.
    LogCoveringNumber { n: usize, g: usize, epsilon: f64 },
    /// `24 L √(512 T G) (√ln(6G) + √π/2 + √(2 ln n))`.
    ComplexityRegret { n: usize, g: usize, t: usize, l: f64 },
    /// Without `c`: the mistake budget implied by the explicit regret above,
    /// `⌈(36 L √(512 G) S / ε)²⌉` with `S` the bracket. With `c`:
    /// `⌈(3 c L √(G ln(G n)) / (2ε))²⌉`.
    ComplexityMistakes { n: usize, g: usize, l: f64, epsilon: f64, c: Option<f64> },
    /// `⌈c √(n r) ln M ln^{3/2}(1/(ε′δ)) / ε′³⌉` with `ε′ = ε − slack` and `ln M` floored at 1.
    ShadowSamples { n: usize, r: usize, m: usize, epsilon: f64, delta: f64, slack: f64, c: Option<f64> },
    /// `c n / ε²`.
    Sfat { n: usize, epsilon: f64, c: Option<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub query: BoundQuery,
    pub value: f64,
    /// False when the value carries a placeholder constant.
    pub asserted: bool,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be positive, got {v}")))
    }
}

fn unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn ln_choose2(n: usize) -> f64 {
    ((n * (n - 1) / 2) as f64).ln()
}

fn complexity_bracket(n: usize, g: usize) -> f64 {
    (6.0 * g as f64).ln().sqrt() + PI.sqrt() / 2.0 + (2.0 * (n as f64).ln()).sqrt()
}

pub fn eval_bound(q: &BoundQuery) -> Result<BoundValue> {
    use BoundQuery::*;
    let (value, asserted) = match *q {
        MwuRegret { d, t, eta } => {
            positive("d", d as f64)?;
            positive("t", t as f64)?;
            let ln_d = (d as f64).ln();
            match eta {
                Some(eta) => {
                    positive("eta", eta)?;
                    (eta * t as f64 + ln_d / eta, true)
                }
                None => (2.0 * (t as f64 * ln_d).sqrt(), true),
            }
        }
        PauliRegret { n, t, l } => {
            positive("n", n as f64)?;
            positive("t", t as f64)?;
            positive("l", l)?;
            (2.0 * l * (t as f64 * n as f64 * 4f64.ln()).sqrt(), true)
        }
        MixtureRegret { k, t, l } => {
            positive("k", k as f64)?;
            positive("t", t as f64)?;
            positive("l", l)?;
            (2.0 * l * (t as f64 * (k as f64).ln()).sqrt(), true)
        }
        MixtureMistakes { k, l, epsilon } => {
            positive("k", k as f64)?;
            positive("l", l)?;
            unit("epsilon", epsilon)?;
            ((9.0 * l * l * (k as f64).ln() / (epsilon * epsilon)).ceil(), true)
        }
        PauliMistakes { n, l, epsilon } => {
            positive("n", n as f64)?;
            return eval_bound(&MixtureMistakes { k: 1 << (2 * n), l, epsilon }).map(|v| BoundValue { query: q.clone(), ..v });
        }
        CompressionSize { k, l, epsilon } => {
            positive("k", k as f64)?;
            positive("l", l)?;
            unit("epsilon", epsilon)?;
            ((36.0 * l * l * (k as f64).ln() / (epsilon * epsilon)).ceil(), true)
        }
        LogCoveringNumber { n, g, epsilon } => {
            if n < 2 {
                return Err(Error::Parameter("need n >= 2 qubits".into()));
            }
            positive("g", g as f64)?;
            positive("epsilon", epsilon)?;
            let g = g as f64;
            (g * ln_choose2(n) + 512.0 * g * (6.0 * g / epsilon).ln(), true)
        }
        ComplexityRegret { n, g, t, l } => {
            if n < 2 {
                return Err(Error::Parameter("need n >= 2 qubits".into()));
            }
            positive("g", g as f64)?;
            positive("t", t as f64)?;
            positive("l", l)?;
            (24.0 * l * (512.0 * t as f64 * g as f64).sqrt() * complexity_bracket(n, g), true)
        }
        ComplexityMistakes { n, g, l, epsilon, c } => {
            if n < 2 {
                return Err(Error::Parameter("need n >= 2 qubits".into()));
            }
            positive("g", g as f64)?;
            positive("l", l)?;
            unit("epsilon", epsilon)?;
            match c {
                None => {
                    let root = 36.0 * l * (512.0 * g as f64).sqrt() * complexity_bracket(n, g) / epsilon;
                    ((root * root).ceil(), true)
                }
                Some(c) => {
                    positive("c", c)?;
                    let root = 3.0 * c * l * (g as f64 * ((g * n) as f64).ln()).sqrt() / (2.0 * epsilon);
                    ((root * root).ceil(), false)
                }
            }
        }
        ShadowSamples { n, r, m, epsilon, delta, slack, c } => {
            positive("n", n as f64)?;
            positive("r", r as f64)?;
            positive("m", m as f64)?;
            unit("epsilon", epsilon)?;
            unit("delta", delta)?;
            if !(0.0..epsilon).contains(&slack) {
                return Err(Error::Parameter(format!("slack {slack} must lie in [0, epsilon)")));
            }
            let c = c.unwrap_or(1.0);
            positive("c", c)?;
            let e = epsilon - slack;
            let v = c * ((n * r) as f64).sqrt() * (m as f64).ln().max(1.0) * (1.0 / (e * delta)).ln().powf(1.5) / e.powi(3);
            (v.ceil(), false)
        }
        Sfat { n, epsilon, c } => {
            positive("n", n as f64)?;
            unit("epsilon", epsilon)?;
            let c = c.unwrap_or(1.0);
            positive("c", c)?;
            (c * n as f64 / (epsilon * epsilon), false)
        }
    };
    Ok(BoundValue { query: q.clone(), value, asserted })
}

fn get(params: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    params.get(key).copied().ok_or_else(|| Error::Parameter(format!("missing parameter {key}")))
}

fn get_int(params: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = get(params, key)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::Parameter(format!("{key} must be a nonnegative integer, got {v}")));
    }
    Ok(v as usize)
}

impl BoundQuery {
    pub const NAMES: [&'static str; 11] = [
        "mwu-regret",
        "pauli-regret",
        "mixture-regret",
        "mixture-mistakes",
        "pauli-mistakes",
        "compression-size",
        "log-covering-number",
        "complexity-regret",
        "complexity-mistakes",
        "shadow-samples",
        "sfat",
    ];

    /// Builds a query from named parameters; `l` defaults to 1 and `r` to 1.
    pub fn from_params(which: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let l = params.get("l").copied().unwrap_or(1.0);
        let opt = |k: &str| params.get(k).copied();
        let q = match which {
            "mwu-regret" => Self::MwuRegret { d: get_int(params, "d")?, t: get_int(params, "t")?, eta: opt("eta") },
            "pauli-regret" => Self::PauliRegret { n: get_int(params, "n")?, t: get_int(params, "t")?, l },
            "mixture-regret" => Self::MixtureRegret { k: get_int(params, "k")?, t: get_int(params, "t")?, l },
            "mixture-mistakes" => Self::MixtureMistakes { k: get_int(params, "k")?, l, epsilon: get(params, "epsilon")? },
            "pauli-mistakes" => Self::PauliMistakes { n: get_int(params, "n")?, l, epsilon: get(params, "epsilon")? },
            "compression-size" => Self::CompressionSize { k: get_int(params, "k")?, l, epsilon: get(params, "epsilon")? },
            "log-covering-number" => {
                Self::LogCoveringNumber { n: get_int(params, "n")?, g: get_int(params, "g")?, epsilon: get(params, "epsilon")? }
            }
            "complexity-regret" => {
                Self::ComplexityRegret { n: get_int(params, "n")?, g: get_int(params, "g")?, t: get_int(params, "t")?, l }
            }
            "complexity-mistakes" => Self::ComplexityMistakes {
                n: get_int(params, "n")?,
                g: get_int(params, "g")?,
                l,
                epsilon: get(params, "epsilon")?,
                c: opt("c"),
            },
            "shadow-samples" => Self::ShadowSamples {
                n: get_int(params, "n")?,
                r: params.get("r").map_or(Ok(1), |_| get_int(params, "r"))?,
                m: get_int(params, "m")?,
                epsilon: get(params, "epsilon")?,
                delta: get(params, "delta")?,
                slack: opt("slack").unwrap_or(0.0),
                c: opt("c"),
            },
            "sfat" => Self::Sfat { n: get_int(params, "n")?, epsilon: get(params, "epsilon")?, c: opt("c") },
            other => return Err(Error::Parameter(format!("unknown bound {other}"))),
        };
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: BoundQuery) -> f64 {
        eval_bound(&q).unwrap().value
    }

    #[test]
    fn reference_values() {
        // η = √(ln 16 / 10⁴) makes ηT + ln 16/η = 2√(10⁴ ln 16)
        let eta = (16f64.ln() / 1e4).sqrt();
        let a = v(BoundQuery::MwuRegret { d: 16, t: 10_000, eta: Some(eta) });
        let b = v(BoundQuery::MwuRegret { d: 16, t: 10_000, eta: None });
        assert!((a - b).abs() < 1e-9 && (a - 333.0).abs() < 0.2);
        assert_eq!(v(BoundQuery::MixtureMistakes { k: 64, l: 1.0, epsilon: 0.2 }), 936.0);
        assert_eq!(v(BoundQuery::PauliMistakes { n: 3, l: 1.0, epsilon: 0.2 }), 936.0);
        assert!((v(BoundQuery::LogCoveringNumber { n: 2, g: 1, epsilon: 1.0 }) - 512.0 * 6f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn placeholder_constants_are_flagged() {
        assert!(!eval_bound(&BoundQuery::Sfat { n: 2, epsilon: 0.1, c: None }).unwrap().asserted);
        assert!(!eval_bound(&BoundQuery::ComplexityMistakes { n: 2, g: 1, l: 1.0, epsilon: 0.1, c: Some(1.0) }).unwrap().asserted);
        assert!(eval_bound(&BoundQuery::ComplexityMistakes { n: 2, g: 1, l: 1.0, epsilon: 0.1, c: None }).unwrap().asserted);
    }

    #[test]
    fn parameter_errors() {
        let mut p = BTreeMap::new();
        p.insert("k".to_string(), 64.0);
        assert!(matches!(BoundQuery::from_params("mixture-mistakes", &p), Err(Error::Parameter(m)) if m.contains("epsilon")));
        p.insert("epsilon".to_string(), 0.2);
        assert_eq!(eval_bound(&BoundQuery::from_params("mixture-mistakes", &p).unwrap()).unwrap().value, 936.0);
        assert!(BoundQuery::from_params("nope", &p).is_err());
        assert!(eval_bound(&BoundQuery::MixtureMistakes { k: 4, l: 1.0, epsilon: 1.5 }).is_err());
        assert!(eval_bound(&BoundQuery::LogCoveringNumber { n: 1, g: 1, epsilon: 0.5 }).is_err());
    }
}
