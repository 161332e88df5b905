//! Quantum reservoir computing with a single driven dissipative Kerr mode.
//!
//! The reservoir is the truncated Fock space of one bosonic (polariton)
//! mode evolving under a Lindblad master equation with image-dependent
//! piecewise-constant drives; the readout features are samples of the
//! mode's Wigner function on a phase-space grid. A classical benchmark —
//! a lattice of coupled nonlinear oscillators (discrete nonlinear
//! Schrödinger equation) — and a plain linear classifier complete the
//! comparison on downsampled MNIST digits.

pub mod creservoir;
pub mod dataset;
pub mod error;
pub mod fock;
pub mod harness;
pub mod lindblad;
pub mod qreservoir;
pub mod readout;
pub mod seeds;
pub mod wigner;

pub use error::{Error, Result};
