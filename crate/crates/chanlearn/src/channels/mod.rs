//! Channel representations, Pauli channels, twirling, test operators and the Born rule.

mod diamond;
mod pauli_channel;
mod rep;
mod test_operator;

pub use diamond::{
    choi_trace_norm_bound, diamond_distance_pauli, diamond_lower_bound_probe, diamond_lower_bound_trace,
    entangled_probe_distance,
};
pub use pauli_channel::{
    bell_pinching, pauli_channel, pauli_conjugation_average, pauli_twirl, twirled_channel, ErrorRateVector,
};
pub use rep::{choi_of, kraus_from_choi, ChannelRep};
pub use test_operator::{born_value, ChannelTestOperator};
