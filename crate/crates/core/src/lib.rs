//! Tunable electromagnetically induced transparency and absorption in a
//! superconducting qubit dressed by a single resonator mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`dressed`]: Jaynes-Cummings dressed states, σ₊ in the dressed basis and
//!   the three-level Λ system {|μ₀⟩, |ν₀⟩, |μ₁⟩}.
//! * [`noise`]: thermal bath spectrum, undressed and dressed decay rates.
//! * [`susceptibility`]: first-order χ = χ′ + iχ″, its turning points, the
//!   critical level spacings and EIT/EIA regime classification.
//! * [`bloch`]: density-matrix equations of motion, a fixed-step RK4
//!   integrator, the first-order steady state and the coherent-trapping check.
//! * [`cli`]: presets, sweeps and machine-readable output for the binary.
//!
//! Internally every frequency, energy and rate is an angular frequency in
//! rad/ns (ħ = 1) and every time is in ns. Conversions live in [`units`].

pub mod bloch;
pub mod cli;
pub mod dressed;
mod error;
pub mod noise;
pub mod susceptibility;
pub mod units;

pub use error::{Error, Result};
