//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point {z} lies outside the series validity annulus ({r_inner}, {r_outer})")]
    OutOfValidity {
        z: Complex64,
        r_inner: f64,
        r_outer: f64,
    },

    #[error("point {z} lies outside the domain")]
    OutsideDomain { z: Complex64 },

    #[error("Jacobian is not positive at {z}: J = {j}")]
    NonPositiveJacobian { z: Complex64, j: f64 },

    #[error("dilatation bound violated at {z}: |omega| = {value} >= 1")]
    DilatationBound { z: Complex64, value: f64 },

    #[error("degenerate derivative at {z}: |h'| = {magnitude} below tolerance {tol}")]
    DegenerateDerivative {
        z: Complex64,
        magnitude: f64,
        tol: f64,
    },

    #[error("finite-difference stencil around {z} leaves the domain")]
    StencilOutsideDomain { z: Complex64 },

    #[error("series coefficients do not decay on |z| = {radius}; boundary evaluation refused")]
    SeriesDivergence { radius: f64 },

    #[error("curve is not a Jordan curve: segments {seg_a} and {seg_b} intersect")]
    NotJordan { seg_a: usize, seg_b: usize },

    #[error("invalid annulus modulus R = {radius}; an annulus requires R > 1")]
    InvalidModulus { radius: f64 },

    #[error("points {z1} and {z2} are not covered by any decomposition piece")]
    NotCovered { z1: Complex64, z2: Complex64 },

    #[error("domain pair is not supported for an inclusion check")]
    UnsupportedPair,

    #[error("circle (center {center}, radius {radius}) is not a boundary component of the domain")]
    NotABoundaryCircle { center: Complex64, radius: f64 },

    #[error("series is not valid on the requested domain: {0}")]
    SeriesDomainMismatch(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("affine map is not sense-preserving: |alpha| <= |beta|")]
    AffineNotSensePreserving,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}
