//! Secure energy-efficient hybrid precoding for massive-MIMO IoT gateways.
//!
//! The crate is organized bottom-up:
//!
//! - [`channel`] samples Rayleigh downlink channels with path loss for the
//!   legitimate actuators and a multi-antenna eavesdropper.
//! - [`precoding`] builds the phase-only RF precoder, the zero-forcing signal
//!   precoder and the null-space artificial-noise precoder.
//! - [`metrics`] evaluates exact per-realization SINRs and the closed-form
//!   capacity, secrecy, power and secure energy-efficiency expressions.
//! - [`optimizer`] maximizes secure energy efficiency over the signal and
//!   artificial-noise powers with a Dinkelbach / penalty / alternate-search
//!   stack whose blocks are solved by the convex-concave procedure.
//! - [`baselines`] swaps objectives and power models to obtain the comparison
//!   schemes on the same infrastructure.
//! - [`harness`] parses scenario files, runs seeded sweeps and writes CSV.

pub mod baselines;
pub mod channel;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod optimizer;
pub mod precoding;

pub use error::{Error, Result};

/// Dense complex matrix used for every channel and precoder.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
