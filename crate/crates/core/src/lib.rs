//! Exact MAP inference for ferromagnetic Potts models (uniform metric labeling).
//!
//! The crate is organised around a shared [`Instance`] model with exact
//! rational arithmetic. On top of it sit:
//!
//! - [`expansion`]: the alpha-expansion local search with min-cut moves and
//!   brute-force oracles,
//! - [`lp`]: an exact simplex solver for the half-L1 relaxation and the
//!   local-polytope relaxation,
//! - [`rounding`]: the randomized threshold rounding of near-integral
//!   fractional solutions together with its exact outcome distribution,
//! - [`stability`]: exhaustive (beta, gamma)-stability and weak-stability
//!   checks via the adversarial perturbation,
//! - [`genx`]: a random generator for stable instances.
//!
//! Labels are 0-based in this API. The JSON file format and all
//! human-facing output are 1-based.

pub mod enumerate;
pub mod error;
pub mod expansion;
pub mod fixtures;
pub mod fractional;
pub mod genx;
pub mod instance;
pub mod io;
pub mod labeling;
pub mod lp;
pub mod perturbation;
pub mod rational;
pub mod rng;
pub mod rounding;
pub mod stability;

pub use error::{Error, Result};
pub use fractional::{blend, closeness_anchor, embed, ClosenessAnchor, FractionalSolution};
pub use instance::{Edge, Instance};
pub use labeling::Labeling;
pub use perturbation::Perturbation;
pub use rational::Rational;
