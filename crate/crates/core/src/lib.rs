//! Exact exterior-algebra and Koszul machinery over prime fields for studying
//! graded Betti numbers of general points in projective space.
//!
//! Modules, bottom up:
//! - [`exactfield`]: GF(p) arithmetic, dense rank/kernel kernels, seeded randomness.
//! - [`multilinear`]: symmetric, exterior and divided power bases and their structure maps.
//! - [`points`]: point configurations, Hilbert data, Gale transforms, canonical modules.
//! - [`bgg`]: exterior modules, linear complexes, irredundant quotients, the complexes F(μ).
//! - [`betti`]: graded Betti numbers via Koszul homology.
//! - [`mrc`]: expected Betti tables, parameter arithmetic and the verification pipeline.
//! - [`cli`]: the `extmrc` command line.

pub mod error;
pub mod exactfield;
pub mod betti;
pub mod bgg;
pub mod cli;
pub mod mrc;
pub mod multilinear;
pub mod points;

pub use error::{Error, Result};
