//! Radial Fourier analysis on real hyperbolic space `H^n` and the fractional
//! spherical maximal operator.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: the hyperboloid model, distances, charts and boosts.
//! * [`special`]: complex Gamma, Gauss hypergeometric series, Legendre
//!   functions on the line `-1/2 + iλ`, and the oscillatory kernel `J_m`.
//! * [`fourier`]: c-function, Plancherel density, spherical functions and the
//!   radial transform pair.
//! * [`maximal`]: the fractional spherical means `M^α_t` (direct and spectral),
//!   the maximal function over a t-grid, and dyadic multiplier sups.
//! * [`asymptotics`], [`counterexamples`], [`regions`]: numerical checks of
//!   decay rates, blow-up exponents, and the boundedness region map.
//! * [`validate`]: the named acceptance checks shared by tests and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod counterexamples;
pub mod error;
pub mod fit;
pub mod fourier;
pub mod geometry;
pub mod interp;
pub mod maximal;
pub mod quadrature;
pub mod regions;
pub mod special;
pub mod sphere;
pub mod validate;

pub use error::{Error, Result};
pub use geometry::{Dimension, HyperbolicPoint};
pub use quadrature::QuadratureConfig;
pub use special::ComplexOrder;
