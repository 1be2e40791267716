//! Discrete-time quaternionic quantum walks on ℤ.
//!
//! The walker carries a pair of quaternion amplitudes `(Ψ^L, Ψ^R)` and is
//! driven by a 2×2 quaternionic unitary coin. This crate provides
//!
//! * quaternion arithmetic, the `χ` embedding into complex matrices and the
//!   quaternionic Sylvester solver ([`quaternion`], [`sylvester`]),
//! * coin validation, classification and the Fourier symbol `U(θ)` ([`coin`]),
//! * exact time evolution in both representations ([`walk`]),
//! * closed-form path sums and probabilities with a brute-force oracle
//!   ([`exact`]),
//! * spectral analysis of `U(θ)` and the weak-limit densities ([`spectral`],
//!   [`limit`]).

pub mod cli;
pub mod cmatrix;
pub mod coin;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod limit;
pub mod profile;
pub mod quadrature;
pub mod quaternion;
pub mod spectral;
pub mod sylvester;
pub mod walk;

pub use cmatrix::ComplexMatrix;
pub use coin::{classify, split_pq, u_theta, validate_coin, Coin, CoinClass, MoveOperators};
pub use error::{QqwError, Result};
pub use quaternion::{QMat2, Quaternion};
pub use walk::{distribution, evolve, Distribution, InitialState, WalkState};
