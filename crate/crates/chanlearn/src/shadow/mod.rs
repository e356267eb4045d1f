//! Bell-sampling shadow tomography for Pauli channels, arbitrary channels
//! (through their twirl) and combs (through time-local Bell measurements).

mod reduce;
mod sampling;
mod session;

pub use reduce::{comb_shadow, comb_twirl_slack, twirl_slack, twirled_shadow, ShadowReport};
pub use sampling::{bell_distribution, bell_sample, bell_samples, frequencies, sample_twirl, BellSample};
pub use session::{shadow_answer, Mechanism, QueryBudget, ShadowSession};
