//! Exact corner-transfer-matrix entanglement entropy of the spin-κ/2
//! analogue of the XXZ chain.
//!
//! The partition function `Z^(i,κ)(x)` of the vertex model with boundary
//! label `i` is a principally specialized level-κ character. It factorizes
//! into elementary blocks `T(a,b) = (x^a;x^b)∞ (x^(b-a);x^b)∞`, and the
//! entropy `S = ln Z − x ln x · Z'/Z` splits into a sum of per-block
//! contributions. This crate evaluates those contributions by several
//! independent routes and extracts the scaling-limit constants from them:
//!
//! - [`qseries`]: log-space q-Pochhammer symbols, theta functions and exact
//!   power-series expansions of q-products.
//! - [`character`]: `Z^(i,κ)` as a theta quotient, as a block product and as
//!   an integer CTM spectrum.
//! - [`entropy`]: direct, Poisson-resummed, spectral and asymptotic entropy.
//! - [`scaling`]: correlation length, central charge fits, boundary entropy.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail these range checks

pub mod character;
pub mod entropy;
mod error;
pub mod qseries;
pub mod scaling;

pub use character::{BlockFactor, ModelPoint, SpectrumTable};
pub use entropy::{EntropyResult, Method};
pub use error::{Error, Result};
pub use qseries::{HalfInteger, Nome, Truncation};
pub use scaling::{BoundaryEntropy, ScalingFit, XiMode};
