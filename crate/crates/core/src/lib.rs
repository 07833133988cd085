//! Correction of additive errors drawn from low-entropy samplable sources,
//! over GF(2).
//!
//! The crate is organized bottom-up:
//!
//! * [`gf2`]: bit-packed vectors and matrices with exact rank / nullspace /
//!   inverse computations.
//! * [`codes`]: linear codes `(n, k, G, H)` and syndrome decoding.
//! * [`error_models`]: samplable error sources (flat, subspace, expander
//!   image, codeword-supported) with enumeration and membership capabilities.
//! * [`decoders`]: constructive decoders for those sources (brute-force
//!   syndrome tables, exact subspace recovery, hash-based seed inversion) and
//!   the decoder-to-distinguisher reduction.
//! * [`reconstruction`]: the compression argument showing a correctable
//!   injective source yields a short description of its defining map.
//! * [`seeding`]: deterministic per-trial seed derivation.

pub mod codes;
pub mod decoders;
pub mod error_models;
pub mod gf2;
pub mod reconstruction;
pub mod seeding;
