//! Chaotic S-box construction and analysis.
//!
//! This crate builds bijective n-bit substitution boxes by running a
//! beta-transformation in exact fixed-point arithmetic, gating the orbit
//! through a union of dyadic intervals, and collecting the threshold bits of
//! the digit stream into n-bit words until every word has appeared once.
//! Alongside the generator it ships the measurement kit needed to judge the
//! output: Walsh spectra and nonlinearity, difference distribution tables,
//! linear approximation tables, algebraic normal forms, a chi-square
//! uniformity check for the raw word stream, and a cycle-accurate latency
//! model (closed form plus Monte Carlo) for hardware-style deployments.
//!
//! The arithmetic core never touches floating point, so every orbit, table
//! and report is bit-for-bit reproducible across platforms.

pub mod analysis;
pub mod dyadic;
mod error;
pub mod fixedpoint;
pub mod io;
pub mod latency;
pub mod sbox;

pub use error::{Error, Result};
