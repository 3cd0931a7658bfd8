//! Simulation and optimization toolkit for N-party Svetlichny inequalities.
//!
//! The crate builds dense N-qubit states, projective/unsharp/joint qubit
//! measurements, evaluates the Svetlichny functional and its
//! joint-measurement variant, audits the no-signaling and derivation-chain
//! identities behind the hybrid bound 2^(N−1), and recovers the quantum
//! bound 2^(N−1)·√2 on GHZ states with a derivative-free optimizer.
//!
//! Start with the runnable examples (`cargo run --example ghz_maximum`) or
//! the `svetlichny` binary (`cargo run -- bounds --n 3`).

pub mod cli;
pub mod error;
pub mod inequality;
pub mod measure;
pub mod optimize;
pub mod qcore;
pub mod simulate;

pub use error::{Error, Result};
