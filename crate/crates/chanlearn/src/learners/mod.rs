//! Online learners: multiplicative weights over known bases, matrix
//! multiplicative weights, mirror descent over Choi states, the
//! mistake-driven wrapper and one-pass compression.

mod bregman;
mod compress;
mod linear;
mod loss;
mod mistake;
mod mmw;
mod mwu;
mod projected;

pub use bregman::{bregman_project, bregman_project_log, BregmanOptions, Projection};
pub use compress::{compression_threshold, one_pass_compress, one_pass_reconstruct, Compressed, LabeledPoint};
pub use linear::{
    cost_vector, linear_prediction, linear_round, mixture_coefficients, mixture_learner_round, pauli_learner_round, DoublingMwu,
    MwuLearner, OnlineLearner, RoundOutcome,
};
pub use loss::{LipschitzLoss, LossKind};
pub use mistake::{mistake_driven, MistakeDriven, Step, StreamItem};
pub use mmw::MmwState;
pub use mwu::{default_eta, shannon_entropy, CostLedger, MwuState, UpdateRule};
pub use projected::{MirrorMode, ProjectedMmwState};
