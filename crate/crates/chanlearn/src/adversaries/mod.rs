//! Challenge and feedback generators: realizable adversaries with a fixed
//! hidden channel, the function-embedding lower-bound adversaries and the
//! all-zeros hardness game.

mod all_zeros;
mod embedding;
mod realizable;

pub use all_zeros::{all_zeros_adversary, AllZerosOutcome, Certificate, FreshIndexReader, QueryLearner, QueryOracle, TopWeightReader};
pub use embedding::{
    function_embedding_adversary, function_embedding_challenge, function_embedding_channel, pauli_embedding_challenge,
    pauli_embedding_channel, pauli_embedding_game, pauli_lower_bound_adversary, random_labels, EmbeddingChallenge, EmbeddingKind,
    MAX_EMBEDDING_BITS,
};
pub use realizable::{Challenge, RealizableAdversary};
