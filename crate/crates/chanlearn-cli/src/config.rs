use anyhow::{anyhow, bail, Context, Result};
use chanlearn::learners::{LipschitzLoss, MirrorMode};
use chanlearn::shadow::Mechanism;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    LearnPauli,
    LearnMixture,
    LearnChoiMmw,
    Shadow,
    CombShadow,
    AdversaryGame,
    Bounds,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::LearnPauli => "learn-pauli",
            Scenario::LearnMixture => "learn-mixture",
            Scenario::LearnChoiMmw => "learn-choi-mmw",
            Scenario::Shadow => "shadow",
            Scenario::CombShadow => "comb-shadow",
            Scenario::AdversaryGame => "adversary-game",
            Scenario::Bounds => "bounds",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossName {
    Absolute,
    Squared,
}

impl LossName {
    pub fn loss(self) -> LipschitzLoss {
        match self {
            LossName::Absolute => LipschitzLoss::absolute(),
            LossName::Squared => LipschitzLoss::squared(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    /// Zero challenges against a learner that reads a few coefficients per round.
    AllZeros,
    /// Random labels hidden in a Pauli `Z` string.
    PauliEmbedding,
}

/// `which` names a bound; the remaining keys are its parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub which: Option<String>,
    #[serde(flatten)]
    pub params: BTreeMap<String, f64>,
}

/// Everything a run can be configured with. Every field is optional here so
/// that a TOML file and command-line flags can be layered.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Option<Scenario>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub rounds: Option<usize>,
    pub epsilon: Option<f64>,
    /// Fixed learning rate; the scenario's tuned rate when absent.
    pub eta: Option<f64>,
    pub loss: Option<LossName>,
    pub mixture_size: Option<usize>,
    pub mistake_driven: Option<bool>,
    pub mirror: Option<MirrorMode>,
    pub samples: Option<usize>,
    pub queries: Option<usize>,
    pub delta: Option<f64>,
    pub mechanism: Option<Mechanism>,
    pub adversary: Option<AdversaryKind>,
    pub reads: Option<usize>,
    pub replicas: Option<usize>,
    pub out: Option<PathBuf>,
    pub bound: Option<BoundSpec>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields set in `other` replace ours.
    pub fn overridden_by(self, other: ExperimentConfig) -> Self {
        let bound = match (self.bound, other.bound) {
            (Some(mut a), Some(b)) => {
                a.which = b.which.or(a.which);
                a.params.extend(b.params);
                Some(a)
            }
            (a, b) => b.or(a),
        };
        Self {
            scenario: other.scenario.or(self.scenario),
            seed: other.seed.or(self.seed),
            n: other.n.or(self.n),
            r: other.r.or(self.r),
            rounds: other.rounds.or(self.rounds),
            epsilon: other.epsilon.or(self.epsilon),
            eta: other.eta.or(self.eta),
            loss: other.loss.or(self.loss),
            mixture_size: other.mixture_size.or(self.mixture_size),
            mistake_driven: other.mistake_driven.or(self.mistake_driven),
            mirror: other.mirror.or(self.mirror),
            samples: other.samples.or(self.samples),
            queries: other.queries.or(self.queries),
            delta: other.delta.or(self.delta),
            mechanism: other.mechanism.or(self.mechanism),
            adversary: other.adversary.or(self.adversary),
            reads: other.reads.or(self.reads),
            replicas: other.replicas.or(self.replicas),
            out: other.out.or(self.out),
            bound,
        }
    }
}

/// A validated configuration with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub scenario: Scenario,
    pub seed: u64,
    pub n: usize,
    pub r: usize,
    pub rounds: usize,
    pub epsilon: f64,
    pub eta: Option<f64>,
    pub loss: LossName,
    pub mixture_size: usize,
    pub mistake_driven: bool,
    pub mirror: MirrorMode,
    pub samples: usize,
    pub queries: usize,
    pub delta: f64,
    pub mechanism: Mechanism,
    pub adversary: AdversaryKind,
    pub reads: usize,
    pub replicas: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub bound: BoundSpec,
}

fn require<T>(v: Option<T>, name: &str, scenario: Scenario) -> Result<T> {
    v.ok_or_else(|| anyhow!("scenario {} needs `{name}`", scenario.name()))
}

impl Settings {
    pub fn resolve(c: ExperimentConfig) -> Result<Self> {
        let scenario = c.scenario.ok_or_else(|| anyhow!("no scenario given"))?;
        let seed = c.seed.ok_or_else(|| anyhow!("a seed is mandatory (`--seed` or `seed = ...`)"))?;
        use Scenario::*;
        let n = match scenario {
            Bounds => c.n.unwrap_or(1),
            CombShadow => c.n.unwrap_or(1),
            _ => require(c.n, "n", scenario)?,
        };
        let rounds = match scenario {
            LearnPauli | LearnMixture | LearnChoiMmw | AdversaryGame => require(c.rounds, "rounds", scenario)?,
            _ => c.rounds.unwrap_or(0),
        };
        let (samples, queries) = match scenario {
            Shadow | CombShadow => (require(c.samples, "samples", scenario)?, require(c.queries, "queries", scenario)?),
            _ => (c.samples.unwrap_or(0), c.queries.unwrap_or(0)),
        };
        let s = Settings {
            scenario,
            seed,
            n,
            r: c.r.unwrap_or(2),
            rounds,
            epsilon: c.epsilon.unwrap_or(0.2),
            eta: c.eta,
            loss: c.loss.unwrap_or(LossName::Absolute),
            mixture_size: c.mixture_size.unwrap_or(4),
            mistake_driven: c.mistake_driven.unwrap_or(false),
            mirror: c.mirror.unwrap_or(MirrorMode::Agile),
            samples,
            queries,
            delta: c.delta.unwrap_or(0.05),
            mechanism: c.mechanism.unwrap_or(Mechanism::Naive),
            adversary: c.adversary.unwrap_or(AdversaryKind::AllZeros),
            reads: c.reads.unwrap_or(3),
            replicas: c.replicas.unwrap_or(1),
            out: c.out,
            bound: c.bound.unwrap_or_default(),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.scenario != Scenario::Bounds && !(1..=4).contains(&self.n) {
            bail!("n = {} outside 1..=4 qubits", self.n);
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            bail!("epsilon = {} outside (0, 1)", self.epsilon);
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            bail!("delta = {} outside (0, 1)", self.delta);
        }
        if self.replicas == 0 {
            bail!("replicas must be at least 1");
        }
        if self.scenario == Scenario::CombShadow && !(1..=3).contains(&self.r) {
            bail!("r = {} outside 1..=3 steps", self.r);
        }
        if self.scenario == Scenario::Bounds && self.bound.which.is_none() {
            bail!("scenario bounds needs a bound name (`--which` or `[bound] which = ...`)");
        }
        Ok(())
    }
}

/// Parses a kebab-case serde enum such as `split-noise`.
pub fn kebab<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Parses `key=value` with a numeric value.
pub fn key_value(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("value of {k} is not a number: {v}"))?;
    Ok((k.trim().to_string(), v))
}
