//! Evolution of nonspreading Airy wave packets in one dimension.
//!
//! An initial packet `Ai(b x)` stays form-invariant under free evolution and
//! under any homogeneous time-varying linear force `F(t)`; only a shift
//! `x_s(t)` and a phase linear in x develop. This crate provides:
//!
//! * [`airy`] — high-precision evaluation of Ai, Ai' and packet sampling;
//! * [`operator`] — exact symbolic algebra in x and p with `[x,p] = i hbar`,
//!   including the ordered-exponential factorization of the evolution
//!   operator and the commutator identities behind the shift laws;
//! * [`analytic`] — the closed-form shift and phase laws and the full
//!   analytic wavefunction;
//! * [`numeric`] — split-step spectral and Crank–Nicolson integration of the
//!   time-dependent Schrödinger equation on a truncated, apertured grid;
//! * [`verify`] — shape/phase/trajectory comparisons between the two routes
//!   and the Airy eigenrelation residual.

// `!(x > 0.0)` guards reject NaN as well; `x <= 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// frozen reference constants keep their full published digits
#![allow(clippy::excessive_precision)]

pub mod airy;
pub mod analytic;
mod dd;
pub mod error;
pub mod grid;
pub mod numeric;
pub mod operator;
pub mod physics;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{GridSpec, WaveField};
pub use physics::{Convention, ForceProfile, PhysicalConstants};
