//! Multi-time processes (combs), testers and the link product.
//!
//! Legs are ordered `A_1 B_1 … A_r B_r`. The Choi matrix of a channel puts
//! its input leg first, so a one-step comb is exactly a Choi matrix.

mod comb;
mod legs;
mod tester;
mod twirl;

pub use comb::{check_comb, comb_from_channels, link_product, scaled_operator, CombOperator, CombReport, CombStep, LevelViolation};
pub use legs::{LabeledOperator, Leg};
pub use tester::{tester_value, TesterCircuit, TesterOperator};
pub use twirl::{bell_tester_distance, time_local_twirl_sample, TimeLocalTwirl};
