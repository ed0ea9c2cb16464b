//! Planar domains carrying a hyperbolic metric: disks, annuli with unit inner
//! radius, and circle domains (every boundary component a round circle).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Relative margin kept between any sampling grid and a domain boundary or a
/// series validity edge.
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// A round circle `|z - center| = radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({}, r={})", self.center, self.radius)
    }
}

/// A hyperbolic planar domain.
///
/// `Annulus` is always normalized to `1 < |z| < outer_radius`. Circle domains
/// get bounds-only metric support; disks and annuli get exact densities.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Disk { center: Complex64, radius: f64 },
    Annulus { outer_radius: f64 },
    CircleDomain { outer: Circle, holes: Vec<Circle> },
}

impl Domain {
    pub fn unit_disk() -> Self {
        Domain::Disk {
            center: Complex64::ZERO,
            radius: 1.0,
        }
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "disk requires a finite center and radius > 0, got center {center}, radius {radius}"
            )));
        }
        Ok(Domain::Disk { center, radius })
    }

    pub fn annulus(outer_radius: f64) -> Result<Self> {
        if outer_radius <= 1.0 || !outer_radius.is_finite() {
            return Err(Error::InvalidModulus {
                radius: outer_radius,
            });
        }
        Ok(Domain::Annulus { outer_radius })
    }

    /// Circle domain: one outer circle strictly containing pairwise disjoint holes.
    pub fn circle_domain(outer: Circle, holes: Vec<Circle>) -> Result<Self> {
        if outer.radius <= 0.0 || !outer.radius.is_finite() {
            return Err(Error::InvalidDomain("outer circle needs radius > 0".into()));
        }
        for (i, a) in holes.iter().enumerate() {
            if a.radius <= 0.0 || !a.radius.is_finite() {
                return Err(Error::InvalidDomain(format!("hole {i} needs radius > 0")));
            }
            if (a.center - outer.center).norm() + a.radius >= outer.radius {
                return Err(Error::InvalidDomain(format!(
                    "hole {i} is not strictly inside the outer circle"
                )));
            }
            for (j, b) in holes.iter().enumerate().skip(i + 1) {
                if (a.center - b.center).norm() <= a.radius + b.radius {
                    return Err(Error::InvalidDomain(format!(
                        "holes {i} and {j} are not exterior-disjoint"
                    )));
                }
            }
        }
        Ok(Domain::CircleDomain { outer, holes })
    }

    /// Open-interior membership.
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Domain::Disk { center, radius } => (z - center).norm() < *radius,
            Domain::Annulus { outer_radius } => {
                let r = z.norm();
                r > 1.0 && r < *outer_radius
            }
            Domain::CircleDomain { outer, holes } => {
                (z - outer.center).norm() < outer.radius
                    && holes.iter().all(|h| (z - h.center).norm() > h.radius)
            }
        }
    }

    /// Membership in the closure, up to `tol` slack on every boundary circle.
    pub fn contains_closure(&self, z: Complex64, tol: f64) -> bool {
        match self {
            Domain::Disk { center, radius } => (z - center).norm() <= radius + tol,
            Domain::Annulus { outer_radius } => {
                let r = z.norm();
                r >= 1.0 - tol && r <= outer_radius + tol
            }
            Domain::CircleDomain { outer, holes } => {
                (z - outer.center).norm() <= outer.radius + tol
                    && holes.iter().all(|h| (z - h.center).norm() >= h.radius - tol)
            }
        }
    }

    /// Euclidean distance from an interior point to the boundary
    /// (negative when `z` is outside).
    pub fn dist_to_boundary(&self, z: Complex64) -> f64 {
        match self {
            Domain::Disk { center, radius } => radius - (z - center).norm(),
            Domain::Annulus { outer_radius } => {
                let r = z.norm();
                (r - 1.0).min(outer_radius - r)
            }
            Domain::CircleDomain { outer, holes } => {
                let mut d = outer.radius - (z - outer.center).norm();
                for h in holes {
                    d = d.min((z - h.center).norm() - h.radius);
                }
                d
            }
        }
    }

    /// Diameter of the bounding circle; the collision/separation scales of the
    /// injectivity tests are relative to this.
    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Disk { radius, .. } => 2.0 * radius,
            Domain::Annulus { outer_radius } => 2.0 * outer_radius,
            Domain::CircleDomain { outer, .. } => 2.0 * outer.radius,
        }
    }

    /// Boundary components as circles, outer circle first.
    pub fn boundary_circles(&self) -> Vec<Circle> {
        match self {
            Domain::Disk { center, radius } => vec![Circle::new(*center, *radius)],
            Domain::Annulus { outer_radius } => vec![
                Circle::new(Complex64::ZERO, *outer_radius),
                Circle::new(Complex64::ZERO, 1.0),
            ],
            Domain::CircleDomain { outer, holes } => {
                let mut v = vec![*outer];
                v.extend_from_slice(holes);
                v
            }
        }
    }

    /// Range of `|z|` over the closed sampling region (the domain shrunk by
    /// the relative `margin`). Used for series-validity containment checks.
    pub fn sampling_modulus_range(&self, margin: f64) -> (f64, f64) {
        match self {
            Domain::Disk { center, radius } => {
                let r = radius * (1.0 - margin);
                ((center.norm() - r).max(0.0), center.norm() + r)
            }
            Domain::Annulus { outer_radius } => {
                (1.0 + margin, outer_radius * (1.0 - margin))
            }
            Domain::CircleDomain { outer, holes } => {
                let hi = outer.center.norm() + outer.radius * (1.0 - margin);
                // The minimum of |z| over the region: zero unless the origin
                // sits inside a hole (or outside the outer circle).
                let mut lo: f64 = 0.0;
                if outer.center.norm() >= outer.radius * (1.0 - margin) {
                    lo = outer.center.norm() - outer.radius * (1.0 - margin);
                }
                for h in holes {
                    let grown = h.radius * (1.0 + margin);
                    if h.center.norm() < grown {
                        lo = lo.max(grown - h.center.norm());
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Interior sampling grid with roughly `n x n` points.
    ///
    /// Disks and annuli use a polar grid: angles at exact steps `2*pi*j/n`
    /// (so symmetric point pairs land exactly on the grid), radii offset by
    /// half a step and kept a relative `margin` inside the boundary.
    pub fn sample_grid(&self, n: usize, margin: f64) -> Vec<Complex64> {
        let n = n.max(2);
        let mut pts = Vec::with_capacity(n * n);
        match self {
            Domain::Disk { center, radius } => {
                let hi = radius * (1.0 - margin);
                for i in 0..n {
                    let r = hi * (i as f64 + 0.5) / n as f64;
                    for j in 0..n {
                        let theta = 2.0 * PI * j as f64 / n as f64;
                        pts.push(center + Complex64::from_polar(r, theta));
                    }
                }
            }
            Domain::Annulus { outer_radius } => {
                let lo = 1.0 + margin;
                let hi = outer_radius * (1.0 - margin);
                for i in 0..n {
                    let r = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                    for j in 0..n {
                        let theta = 2.0 * PI * j as f64 / n as f64;
                        pts.push(Complex64::from_polar(r, theta));
                    }
                }
            }
            Domain::CircleDomain { outer, .. } => {
                let pad = outer.radius * margin;
                let lo_x = outer.center.re - outer.radius;
                let lo_y = outer.center.im - outer.radius;
                let step = 2.0 * outer.radius / n as f64;
                for i in 0..n {
                    for j in 0..n {
                        let z = Complex64::new(
                            lo_x + step * (i as f64 + 0.5),
                            lo_y + step * (j as f64 + 0.5),
                        );
                        if self.dist_to_boundary(z) > pad {
                            pts.push(z);
                        }
                    }
                }
            }
        }
        pts
    }

    /// One ring of `n` points per boundary circle, offset a relative `margin`
    /// into the interior.
    pub fn boundary_ring(&self, n: usize, margin: f64) -> Vec<Complex64> {
        let n = n.max(8);
        let mut pts = Vec::new();
        match self {
            Domain::Disk { center, radius } => {
                let r = radius * (1.0 - margin);
                for j in 0..n {
                    let theta = 2.0 * PI * j as f64 / n as f64;
                    pts.push(center + Complex64::from_polar(r, theta));
                }
            }
            Domain::Annulus { outer_radius } => {
                for &r in &[1.0 + margin, outer_radius * (1.0 - margin)] {
                    for j in 0..n {
                        let theta = 2.0 * PI * j as f64 / n as f64;
                        pts.push(Complex64::from_polar(r, theta));
                    }
                }
            }
            Domain::CircleDomain { outer, holes } => {
                let mut push_ring = |c: &Circle, r: f64| {
                    for j in 0..n {
                        let theta = 2.0 * PI * j as f64 / n as f64;
                        pts.push(c.center + Complex64::from_polar(r, theta));
                    }
                };
                push_ring(outer, outer.radius * (1.0 - margin));
                for h in holes {
                    push_ring(h, h.radius * (1.0 + margin));
                }
            }
        }
        pts
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Disk { center, radius } => write!(f, "disk(center {center}, radius {radius})"),
            Domain::Annulus { outer_radius } => write!(f, "annulus(1 < |z| < {outer_radius})"),
            Domain::CircleDomain { outer, holes } => {
                write!(f, "circle-domain(outer {outer}, {} holes)", holes.len())
            }
        }
    }
}
