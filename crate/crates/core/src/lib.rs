//! Ray antenna array (RAA) simulation library.
//!
//! An RAA is a fan of `N` simple uniform linear arrays (sULAs), each made of
//! `M` directly connected half-wavelength-spaced elements. Every sULA forms a
//! fixed beam along its own orientation, and a switch network connects
//! `N_RF` of the sULA ports to the RF chains. This crate models:
//!
//! - [`array`]: closed-form sULA/ULA responses, Dirichlet kernel, nulls,
//!   beamwidths and the deterministic RAA design procedure.
//! - [`pattern`]: 3GPP-style element patterns, power conservation and the
//!   pattern sufficiency checks for full angular coverage.
//! - [`channel`]: clustered multipath channel draws (UMa NLoS parameters)
//!   and the effective RAA / ULA channel vectors.
//! - [`uplink`]: ray selection with MRC and MMSE combining, greedy and
//!   exhaustive sum-rate search.
//! - [`downlink`]: max-min SINR precoding via bisection over a
//!   duality-based feasibility oracle, alternated with exhaustive selection.
//! - [`cost`]: hardware cost comparison against ULA hybrid beamforming.
//! - [`experiment`]: Monte-Carlo drivers producing figure data tables.
//!
//! Angles are radians throughout. Distances are in wavelengths.

pub mod array;
pub mod channel;
pub mod cost;
pub mod downlink;
pub mod error;
pub mod experiment;
mod linalg;
pub mod pattern;
pub mod quad;
pub mod selection;
pub mod uplink;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex column vector used for channels and beamformers.
pub type CVector = nalgebra::DVector<Complex64>;
