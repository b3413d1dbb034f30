//! Linear block codes with a faulty encoder.
//!
//! Erasures turn ones of the generator matrix `G` into zeros before the
//! message is encoded, so the receiver sees `m (G + E)` for an unknown
//! erasure matrix `E` inside the support of `G`. This crate provides the
//! ternary codeword model, the erasure distance and perfect-decoding radius,
//! minimum-distance and worst-case decoders, random fault channels with
//! Monte Carlo estimation, and the pairwise achievable-rate bounds, along
//! with exhaustive oracles for small codes.
//!
//! ```
//! use encfault_core::{eta_max, parse_matrix, Limits, Radius};
//!
//! let g = parse_matrix("1 4\n1111\n").unwrap();
//! assert_eq!(eta_max(&g, &Limits::default()).unwrap().radius, Radius::Finite(3));
//! ```

pub mod bits;
pub mod bounds;
pub mod channel;
pub mod decoders;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod matrix_io;
pub mod rng;
pub mod search;

pub use bits::{BinaryWord, BitVec, Message};
pub use bounds::{
    a_mk, b_of_lambda, beta_closed_form, beta_max, beta_of_alpha_prime, bound_report,
    exact_error_probability, exact_pairwise, pair_bound, pairwise_bound, pe_upper_bound, psi,
    rate_bound, stirling_binom_bound, stirling_c, AlphaProfile, BetaMax, BoundCase, BoundReport,
    PairBound,
};
pub use channel::{
    bit_flip_prob, flip_gap, monte_carlo, sample_erasure, sample_insertion, transmit, transmit_bitflip,
    wilson_interval, ChannelModel, MessagePolicy, SimulationConfig, SimulationRecord,
    SimulationReport, Z95,
};
pub use decoders::{
    delta, md_decode, worstcase_decode, Codebook, DecodeResult, DecoderConfig, DecoderKind,
    Outcome, TiePolicy,
};
pub use distance::{
    ambiguity_oracle, ambiguity_threshold, block_profile, confusion_witness, eta0_directed,
    eta0_undirected, eta_max, AmbiguityWitness, BlockProfile, ConfusionWitness, Eta, Radius,
    RadiusReport,
};
pub use error::{Error, Result};
pub use gf2::{
    encode, encode_faulty, encode_with_faults, enumerate_codebook, enumerate_erasure_matrices,
    BitMatrix, ErasureMatrix, GeneratorMatrix, Limits, Symbol, TernaryCodeword,
};
pub use matrix_io::{format_matrix, parse_matrix};
