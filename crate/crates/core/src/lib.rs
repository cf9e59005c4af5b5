//! Coded modulation with probabilistic amplitude shaping (PAS) and
//! ultra-sparse non-binary LDPC codes over GF(2^p).
//!
//! The crate covers the full experimental chain: exact finite-field
//! arithmetic, Maxwell-Boltzmann amplitude shaping with a
//! constant-composition distribution matcher, achievable-rate and
//! random-coding-bound calculators, cyclic-lifted code construction with
//! girth control, the PAS transmitter/receiver mappings, a
//! probability-domain belief propagation decoder, Monte Carlo density
//! evolution for decoding thresholds, and a reproducible frame-error-rate
//! simulation harness with a command line front end.

pub mod code;
pub mod gf;
pub mod pas;
pub mod rates;
pub mod shaping;
