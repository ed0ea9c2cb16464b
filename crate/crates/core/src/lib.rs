//! Desk-scale numerical certification for planar harmonic mappings.
//!
//! The crate evaluates harmonic mappings `f = h + conj(g)` given by finite
//! Laurent series, computes their harmonic Schwarzian derivative and its
//! hyperbolic sup-norm, certifies image boundary curves as Jordan
//! quasicircles via the bounded-turning criterion, and builds the three-sector
//! quasiconformal decomposition of an annulus together with its covering
//! property.

pub mod commands;
pub mod config;
pub mod decomposition;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod hyperbolic;
pub mod map;
pub mod norm;
pub mod report;
pub mod series;

pub use domain::{Circle, Domain, DEFAULT_MARGIN};
pub use error::{Error, Result};
pub use map::{HarmonicMap, SchwarzianSample};
pub use series::{Jet3, LaurentSeries};
