//! Photon-stream correlation toolkit.
//!
//! Models photon emission as a renewal point process whose inter-emission
//! waiting times are phase-type (a chain of exponential stages: one
//! excitation plus a cascade of decays), and computes the second-order
//! coherence function g²(τ) by several independent routes:
//!
//! * closed forms for the standard driven two-level system ([`analytic`]),
//! * a roots-of-unity exponential mixture for equal-rate cascades
//!   ([`analytic::g2_erlang_cascade`]),
//! * Laplace-space pole/residue inversion for arbitrary stage rates
//!   ([`renewal`]),
//! * a multilevel Lindblad master equation with the quantum regression
//!   theorem ([`lindblad`]),
//! * Monte Carlo photon streams and histogram estimation ([`stream`]).
//!
//! The crate is `no_std` + `alloc`; IO, file formats and the command-line
//! interface live in the companion `g2kit` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod mixture;
pub mod phase_type;
pub mod renewal;
pub mod rng;
pub mod stream;

pub use error::{Error, Result};
pub use mixture::{ExponentialMixture, MixtureTerm};
pub use phase_type::StageRates;

pub type Complex = num_complex::Complex64;
