//! Numerical laboratory for the spectral stability of the standard linear solid
//! (Moore-Gibson-Thompson) equation coupled to Fourier or Cattaneo heat conduction.
//!
//! The viscoelastic model is the third-order-in-time equation
//!
//! ```text
//! tau u_ttt + u_tt - a^2 Lap u - a^2 beta Lap u_t + eta Lap theta = 0
//! ```
//!
//! coupled to a heat equation through the coefficient `eta`, with either the
//! Fourier law (parabolic heat conduction) or the Cattaneo law (relaxed,
//! hyperbolic heat conduction with relaxation time `tau0`). After a Fourier
//! transform in space every frequency `xi` evolves independently under a dense
//! 4x4 (no heat / Fourier) or 5x5 (Cattaneo) generator, which is what this
//! crate simulates and analyses:
//!
//! - [`model`] — parameter sets, per-mode generators, observables and energies;
//! - [`spectral`] — characteristic polynomials, root finding, Routh-Hurwitz
//!   verdicts and eigenvalue asymptotics at low/high frequency;
//! - [`dynamics`] — exact per-mode propagation via eigendecomposition;
//! - [`lyapunov`] — the auxiliary functionals, assembled Lyapunov functionals
//!   and their monotonicity/equivalence certificates;
//! - [`cauchy`] — Sobolev-norm reconstruction by Plancherel quadrature,
//!   decay-exponent fitting and the regularity-loss experiment;
//! - [`cli`] — experiment configuration and orchestration used by the
//!   `mgtlab` binary and the runnable examples.
//!
//! Start with the `examples/` directory: each example exercises one major
//! capability end to end and writes plot-ready CSV/JSON artifacts.

pub mod cauchy;
pub mod cli;
pub mod dynamics;
mod error;
pub mod fitting;
pub mod linalg;
pub mod lyapunov;
pub mod model;
pub mod spectral;

pub use error::{Error, Result};
