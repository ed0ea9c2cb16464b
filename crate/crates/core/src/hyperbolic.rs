//! Hyperbolic metric densities, normalized so the unit disk carries
//! `lambda(z) = 1/(1 - |z|^2)`.
//!
//! Disks and annuli get closed forms; the annulus formula is gated behind the
//! universal-covering pullback identity
//! `lambda(pi(w)) |pi'(w)| = 1/(1 - |w|^2)`, which must hold for the covering
//! map constructed in [`covering_pullback`]. Circle domains get two-sided
//! bounds from domain monotonicity only.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::domain::{Circle, Domain};
use crate::error::{Error, Result};

/// A density value; `bounds` is populated (and `exact` false) on domains
/// where only an interval is certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub lambda: f64,
    pub bounds: Option<(f64, f64)>,
    pub exact: bool,
}

/// Density of the disk `|z - center| < radius`:
/// `radius / (radius^2 - |z - center|^2)`, which is `1/(1-|z|^2)` on the
/// unit disk.
pub fn density_disk(z: Complex64, center: Complex64, radius: f64) -> Result<f64> {
    let d = (z - center).norm_sqr();
    if d >= radius * radius {
        return Err(Error::OutsideDomain { z });
    }
    Ok(radius / (radius * radius - d))
}

/// Density of the annulus `1 < |z| < outer_radius`:
/// `(pi / (2 log R)) / (|z| sin(pi log|z| / log R))`.
///
/// Not stated in closed form anywhere upstream; validated against
/// [`covering_pullback`] by the covering identity.
pub fn density_annulus(z: Complex64, outer_radius: f64) -> Result<f64> {
    if outer_radius <= 1.0 || !outer_radius.is_finite() {
        return Err(Error::InvalidModulus {
            radius: outer_radius,
        });
    }
    let r = z.norm();
    if r <= 1.0 || r >= outer_radius {
        return Err(Error::OutsideDomain { z });
    }
    let mu = outer_radius.ln();
    Ok((PI / (2.0 * mu)) / (r * (PI * r.ln() / mu).sin()))
}

/// Universal covering `pi` of the annulus `1 < |z| < R` by the unit disk and
/// its derivative at `w`.
///
/// Built as disk -> vertical strip `0 < Re < log R` (via the principal
/// logarithm of the half-plane image of `i w`) -> annulus (via exp). The
/// branch is normalized so `pi(0) = sqrt(R)` and real `w` stays on the
/// positive real axis.
pub fn covering_pullback(w: Complex64, outer_radius: f64) -> Result<(Complex64, Complex64)> {
    if outer_radius <= 1.0 || !outer_radius.is_finite() {
        return Err(Error::InvalidModulus {
            radius: outer_radius,
        });
    }
    if w.norm() >= 1.0 {
        return Err(Error::OutsideDomain { z: w });
    }
    let mu = outer_radius.ln();
    let iw = Complex64::i() * w;
    let u = (Complex64::ONE + iw) / (Complex64::ONE - iw);
    let zeta = (mu / PI) * (Complex64::new(PI / 2.0, 0.0) + Complex64::i() * u.ln());
    let z = zeta.exp();
    let dz = -z * (2.0 * mu / PI) / (Complex64::ONE + w * w);
    Ok((z, dz))
}

/// Two-sided bounds on the circle-domain density from domain monotonicity.
///
/// Upper: the largest disk inscribed at `z` is a subdomain, so
/// `lambda_D(z) <= 1/dist(z, boundary)`. Lower: each boundary circle spans a
/// round superdomain of `D` on the sphere — the inside of the outer circle,
/// the outside of each hole — whose exact densities `lambda_D` must dominate.
pub fn density_bounds_circle_domain(
    z: Complex64,
    outer: &Circle,
    holes: &[Circle],
) -> Result<(f64, f64)> {
    let domain = Domain::CircleDomain {
        outer: *outer,
        holes: holes.to_vec(),
    };
    let dist = domain.dist_to_boundary(z);
    if dist <= 0.0 {
        return Err(Error::OutsideDomain { z });
    }
    let upper = 1.0 / dist;
    let mut lower = density_disk(z, outer.center, outer.radius)?;
    for h in holes {
        // Density of the exterior domain {|z - c| > r} (plus infinity):
        // r / (|z - c|^2 - r^2).
        let d = (z - h.center).norm_sqr();
        lower = lower.max(h.radius / (d - h.radius * h.radius));
    }
    Ok((lower, upper))
}

/// Dispatch over the supported domains. Circle domains return an interval
/// with `lambda` the geometric mean of the bounds, flagged approximate.
pub fn density(domain: &Domain, z: Complex64) -> Result<DensityValue> {
    match domain {
        Domain::Disk { center, radius } => Ok(DensityValue {
            lambda: density_disk(z, *center, *radius)?,
            bounds: None,
            exact: true,
        }),
        Domain::Annulus { outer_radius } => Ok(DensityValue {
            lambda: density_annulus(z, *outer_radius)?,
            bounds: None,
            exact: true,
        }),
        Domain::CircleDomain { outer, holes } => {
            let (lo, hi) = density_bounds_circle_domain(z, outer, holes)?;
            Ok(DensityValue {
                lambda: (lo * hi).sqrt(),
                bounds: Some((lo, hi)),
                exact: false,
            })
        }
    }
}
