mod config;
mod report;
mod scenarios;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use config::{kebab, key_value, AdversaryKind, BoundSpec, ExperimentConfig, LossName, Scenario, Settings};
use chanlearn::learners::MirrorMode;
use chanlearn::shadow::Mechanism;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "chanlearn", version, about = "Online learning and shadow tomography of quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Online learning games: learn-pauli, learn-mixture, learn-choi-mmw.
    Learn(Common),
    /// Channel shadow tomography.
    Shadow(Common),
    /// Adversarial lower-bound games.
    Adversary(Common),
    /// Evaluate a closed-form bound.
    Bounds(Common),
    /// Shadow tomography of product combs.
    Comb(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML file; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_parser = kebab::<LossName>)]
    loss: Option<LossName>,
    #[arg(long)]
    mixture_size: Option<usize>,
    #[arg(long)]
    mistake_driven: bool,
    #[arg(long, value_parser = kebab::<MirrorMode>)]
    mirror: Option<MirrorMode>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    queries: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_parser = kebab::<Mechanism>)]
    mechanism: Option<Mechanism>,
    #[arg(long, value_parser = kebab::<AdversaryKind>)]
    adversary: Option<AdversaryKind>,
    /// Coefficients the all-zeros learner may read per round.
    #[arg(long)]
    reads: Option<usize>,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long)]
    replicas: Option<usize>,
    /// Bound name for the bounds command.
    #[arg(long)]
    which: Option<String>,
    /// Bound parameter as key=value; repeatable.
    #[arg(long = "param", value_parser = key_value)]
    params: Vec<(String, f64)>,
}

impl Common {
    fn flags(&self) -> ExperimentConfig {
        let bound = (self.which.is_some() || !self.params.is_empty())
            .then(|| BoundSpec { which: self.which.clone(), params: self.params.iter().cloned().collect() });
        ExperimentConfig {
            scenario: self.scenario,
            seed: self.seed,
            n: self.n,
            r: self.r,
            rounds: self.rounds,
            epsilon: self.epsilon,
            eta: self.eta,
            loss: self.loss,
            mixture_size: self.mixture_size,
            mistake_driven: self.mistake_driven.then_some(true),
            mirror: self.mirror,
            samples: self.samples,
            queries: self.queries,
            delta: self.delta,
            mechanism: self.mechanism,
            adversary: self.adversary,
            reads: self.reads,
            replicas: self.replicas,
            out: self.out.clone(),
            bound,
        }
    }
}

fn settings(command: &Command) -> Result<Settings> {
    let (common, allowed, default): (&Common, &[Scenario], Scenario) = match command {
        Command::Learn(c) => (c, &[Scenario::LearnPauli, Scenario::LearnMixture, Scenario::LearnChoiMmw], Scenario::LearnPauli),
        Command::Shadow(c) => (c, &[Scenario::Shadow], Scenario::Shadow),
        Command::Adversary(c) => (c, &[Scenario::AdversaryGame], Scenario::AdversaryGame),
        Command::Bounds(c) => (c, &[Scenario::Bounds], Scenario::Bounds),
        Command::Comb(c) => (c, &[Scenario::CombShadow], Scenario::CombShadow),
    };
    let file = match &common.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    let mut merged = file.overridden_by(common.flags());
    let scenario = *merged.scenario.get_or_insert(default);
    if !allowed.contains(&scenario) {
        bail!("scenario {} does not belong to this command", scenario.name());
    }
    // a bounds query needs no seed of its own
    if scenario == Scenario::Bounds {
        merged.seed.get_or_insert(0);
    }
    Settings::resolve(merged)
}

fn run(command: &Command) -> Result<bool> {
    let s = settings(command)?;
    let seeds: Vec<u64> = (0..s.replicas as u64).map(|i| s.seed.wrapping_add(i)).collect();
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds.iter().map(|&seed| scope.spawn({ let s = &s; move || scenarios::run(s, seed) })).collect();
        handles.into_iter().map(|h| h.join().expect("replica thread panicked")).collect::<Result<Vec<_>>>()
    })?;
    let mut ok = true;
    for (&seed, report) in seeds.iter().zip(&reports) {
        let summary = report::summary_json(&s, seed, report);
        println!("{summary}");
        if let Some(out) = &s.out {
            let dir = if s.replicas > 1 { out.join(format!("seed-{seed}")) } else { out.clone() };
            report::write_files(&dir, &summary, report)?;
        }
        for c in &report.checks {
            eprintln!("{} {} ({} <= {}) seed {seed}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.lhs, c.rhs);
        }
        for v in report::violations(seed, report) {
            eprintln!("{v}");
            ok = false;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
