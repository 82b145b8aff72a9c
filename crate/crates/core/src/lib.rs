//! Weighted zero-sum constants over Z_n.
//!
//! A sequence `(x_1, …, x_k)` is an `(A, B)`-weighted zero-sum sequence when
//! some `a_i ∈ A`, `b_i ∈ B` give `Σ a_i x_i = 0` and `Σ b_i a_i = 0`.
//! This crate decides that property with certificates ([`engine`]), computes
//! the constants `C`, `D`, `E` exactly ([`search`]), checks the quadratic
//! residue lemmas exhaustively at small primes ([`lemmas`]) and builds the
//! extremal lower-bound sequences ([`witness`]).

pub mod engine;
pub mod error;
pub mod lemmas;
pub mod ring;
pub mod search;
pub mod witness;

pub use engine::{
    certificate_is_valid, check_certificate, find_zero_sum_subsequence, is_ab_zero_sum,
    translate, Certificate, CertificateDefect, Sequence, SubseqMode,
};
pub use error::{Error, Result};
pub use ring::{Coset, Modulus, Residue, ResidueSet, WeightPair};
pub use search::{compute_constant, ConstantKind, ConstantResult, SearchConfig};

/// Version tag stored with cached results; entries from other versions are ignored.
pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");
