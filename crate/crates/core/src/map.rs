//! Planar harmonic mappings `f = h + conj(g)` and their differential data:
//! Wirtinger derivatives, Jacobian, dilatation, and the harmonic Schwarzian
//! derivative `S_f = rho_zz - (1/2) rho_z^2` with `rho = log J_f`.
//!
//! For `f = h + conj(g)` with analytic `h`, `g` one has `f_z = h'` and
//! `f_zbar = conj(g')`, so with
//!
//! ```text
//! J  = |h'|^2 - |g'|^2,
//! N  = h''  conj(h') - g''  conj(g')   ( = J_z ),
//! Nz = h''' conj(h') - g''' conj(g'),
//! ```
//!
//! the chain rule gives `rho_z = N/J`, `rho_zz = Nz/J - (N/J)^2`, hence
//!
//! ```text
//! S_f = Nz/J - (3/2) (N/J)^2 .
//! ```
//!
//! When `g = 0` this collapses to the classical `h'''/h' - (3/2)(h''/h')^2`.
//! `schwarzian_fd` recomputes the same quantity by finite differences of
//! `log J_f` alone and serves as the independent check of the reduction.

use num_complex::Complex64;

use crate::domain::{Domain, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::series::{Jet3, LaurentSeries};

/// Below this |h'| the dilatation is treated as a genuine singularity.
pub const DERIVATIVE_TOL: f64 = 1e-12;

/// Default step for [`HarmonicMap::schwarzian_fd`]: `max(1e-4, 1e-6 |z|)`,
/// balancing truncation against cancellation in `log J`.
pub fn default_fd_step(z: Complex64) -> f64 {
    (1e-6 * z.norm()).max(1e-4)
}

/// Resolution of the sense-preservation grid run at construction.
const VALIDATION_GRID: usize = 24;

/// A sense-preserving harmonic mapping `f = h + conj(g)` on a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap {
    h: LaurentSeries,
    g: LaurentSeries,
    domain: Domain,
}

/// Pointwise differential data of the map at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzianSample {
    pub z: Complex64,
    pub schwarzian: Complex64,
    pub jacobian: f64,
    pub omega: Complex64,
}

/// Supremum of |omega| over a sampling grid with near-boundary rings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatationSup {
    pub sup: f64,
    pub argmax: Complex64,
    pub samples: usize,
}

/// Outcome of a Jacobian-positivity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnivalenceScan {
    pub min_jacobian: f64,
    pub argmin: Complex64,
    pub samples: usize,
    /// First grid point with `J <= 0`, if any.
    pub witness: Option<(Complex64, f64)>,
}

impl UnivalenceScan {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl HarmonicMap {
    /// Builds a map and verifies it is sense-preserving: both series valid on
    /// the domain, `J > 0` and `|omega| < 1` on a sampling grid with a
    /// near-boundary ring.
    pub fn new(h: LaurentSeries, g: LaurentSeries, domain: Domain) -> Result<Self> {
        let f = HarmonicMap::new_unchecked(h, g, domain);
        f.validate(DEFAULT_MARGIN)?;
        Ok(f)
    }

    /// Skips the sense-preservation grid check. Intended for diagnosing maps
    /// that `new` rejects, e.g. with [`HarmonicMap::local_univalence_scan`].
    pub fn new_unchecked(h: LaurentSeries, g: LaurentSeries, domain: Domain) -> Self {
        HarmonicMap { h, g, domain }
    }

    fn validate(&self, margin: f64) -> Result<()> {
        if !self.h.contains_domain(&self.domain, margin) {
            return Err(Error::SeriesDomainMismatch(format!(
                "h with validity {:?} does not cover {}",
                self.h.validity(),
                self.domain
            )));
        }
        if !self.g.contains_domain(&self.domain, margin) {
            return Err(Error::SeriesDomainMismatch(format!(
                "g with validity {:?} does not cover {}",
                self.g.validity(),
                self.domain
            )));
        }
        let mut pts = self.domain.sample_grid(VALIDATION_GRID, margin);
        pts.extend(self.domain.boundary_ring(4 * VALIDATION_GRID, margin));
        for z in pts {
            let (jh, jg) = self.jets(z)?;
            let j = jh.d1.norm_sqr() - jg.d1.norm_sqr();
            if j <= 0.0 {
                // Distinguish a dilatation-bound failure from a vanishing f_z.
                if jh.d1.norm() > DERIVATIVE_TOL {
                    let omega = (jg.d1 / jh.d1).norm();
                    if omega >= 1.0 {
                        return Err(Error::DilatationBound { z, value: omega });
                    }
                }
                return Err(Error::NonPositiveJacobian { z, j });
            }
        }
        Ok(())
    }

    pub fn h(&self) -> &LaurentSeries {
        &self.h
    }

    pub fn g(&self) -> &LaurentSeries {
        &self.g
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Same series viewed on a different domain, revalidated there.
    pub fn with_domain(&self, domain: Domain) -> Result<Self> {
        HarmonicMap::new(self.h.clone(), self.g.clone(), domain)
    }

    /// Post-composition with the affine map `A(w) = alpha w + beta conj(w) + gamma`.
    ///
    /// `A o f` is again harmonic with analytic parts
    /// `H = alpha h + beta g + gamma`, `G = conj(alpha) g + conj(beta) h`;
    /// its Schwarzian is identical to that of `f`.
    pub fn post_compose_affine(
        &self,
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
    ) -> Result<Self> {
        if alpha.norm() <= beta.norm() {
            return Err(Error::AffineNotSensePreserving);
        }
        let h = LaurentSeries::linear_combination(alpha, &self.h, beta, &self.g)?
            .plus_constant(gamma)?;
        let g = LaurentSeries::linear_combination(alpha.conj(), &self.g, beta.conj(), &self.h)?;
        HarmonicMap::new(h, g, self.domain.clone())
    }

    fn jets(&self, z: Complex64) -> Result<(Jet3, Jet3)> {
        Ok((self.h.eval_jet(z)?, self.g.eval_jet(z)?))
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        let (jh, jg) = self.jets(z)?;
        Ok(jh.d0 + jg.d0.conj())
    }

    /// Radial-limit value on a boundary circle (closed-validity evaluation).
    pub fn value_on_closure(&self, z: Complex64) -> Result<Complex64> {
        let jh = self.h.eval_jet_on_closure(z)?;
        let jg = self.g.eval_jet_on_closure(z)?;
        Ok(jh.d0 + jg.d0.conj())
    }

    /// Jacobian `J_f = |f_z|^2 - |f_zbar|^2 = |h'|^2 - |g'|^2`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        if !self.domain.contains(z) {
            return Err(Error::OutsideDomain { z });
        }
        let (jh, jg) = self.jets(z)?;
        let j = jh.d1.norm_sqr() - jg.d1.norm_sqr();
        if j <= 0.0 {
            return Err(Error::NonPositiveJacobian { z, j });
        }
        Ok(j)
    }

    /// Second dilatation `omega = conj(f_zbar)/f_z = g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let (jh, jg) = self.jets(z)?;
        let mag = jh.d1.norm();
        if mag < DERIVATIVE_TOL {
            return Err(Error::DegenerateDerivative {
                z,
                magnitude: mag,
                tol: DERIVATIVE_TOL,
            });
        }
        Ok(jg.d1 / jh.d1)
    }

    /// Harmonic Schwarzian derivative via the closed-form reduction above.
    pub fn schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let (jh, jg) = self.jets(z)?;
        let j = jh.d1.norm_sqr() - jg.d1.norm_sqr();
        if j <= 0.0 {
            return Err(Error::NonPositiveJacobian { z, j });
        }
        let n = jh.d2 * jh.d1.conj() - jg.d2 * jg.d1.conj();
        let nz = jh.d3 * jh.d1.conj() - jg.d3 * jg.d1.conj();
        let rho_z = n / j;
        Ok(nz / j - 1.5 * rho_z * rho_z)
    }

    /// Full pointwise sample with the sense-preservation invariants enforced.
    pub fn sample(&self, z: Complex64) -> Result<SchwarzianSample> {
        let schwarzian = self.schwarzian(z)?;
        let jacobian = self.jacobian(z)?;
        let omega = self.dilatation(z)?;
        if omega.norm() >= 1.0 {
            return Err(Error::DilatationBound {
                z,
                value: omega.norm(),
            });
        }
        Ok(SchwarzianSample {
            z,
            schwarzian,
            jacobian,
            omega,
        })
    }

    /// Finite-difference Schwarzian: fourth-order central differences of
    /// `rho = log J_f` in x and y, with the Wirtinger operator
    /// `d_z = (d_x - i d_y)/2` applied twice numerically.
    ///
    /// Independent of the closed form in [`HarmonicMap::schwarzian`]; the two
    /// must agree to ~1e-5 at step 1e-4 wherever `J` is not nearly singular.
    pub fn schwarzian_fd(&self, z: Complex64, step: f64) -> Result<Complex64> {
        // rho on a 9x9 stencil, offsets -4..=4 in units of `step`.
        let mut rho = [[0.0_f64; 9]; 9];
        for di in -4..=4_i32 {
            for dj in -4..=4_i32 {
                let p = z + Complex64::new(f64::from(di) * step, f64::from(dj) * step);
                if !self.domain.contains(p) {
                    return Err(Error::StencilOutsideDomain { z });
                }
                let (jh, jg) = match (self.h.eval_jet(p), self.g.eval_jet(p)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return Err(Error::StencilOutsideDomain { z }),
                };
                let j = jh.d1.norm_sqr() - jg.d1.norm_sqr();
                if j <= 0.0 {
                    return Err(Error::NonPositiveJacobian { z: p, j });
                }
                rho[(di + 4) as usize][(dj + 4) as usize] = j.ln();
            }
        }
        let d4 = |f: &dyn Fn(i32, i32) -> f64, i: i32, j: i32, x_dir: bool| -> f64 {
            let at = |s: i32| {
                if x_dir {
                    f(i + s, j)
                } else {
                    f(i, j + s)
                }
            };
            (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step)
        };
        // rho_z on the inner 5x5 stencil.
        let rho_at = |i: i32, j: i32| rho[(i + 4) as usize][(j + 4) as usize];
        let mut rho_z = [[Complex64::ZERO; 5]; 5];
        for i in -2..=2_i32 {
            for j in -2..=2_i32 {
                let dx = d4(&rho_at, i, j, true);
                let dy = d4(&rho_at, i, j, false);
                rho_z[(i + 2) as usize][(j + 2) as usize] =
                    0.5 * Complex64::new(dx, -dy);
            }
        }
        let rho_z_re = |i: i32, j: i32| rho_z[(i + 2) as usize][(j + 2) as usize].re;
        let rho_z_im = |i: i32, j: i32| rho_z[(i + 2) as usize][(j + 2) as usize].im;
        let dzx = Complex64::new(d4(&rho_z_re, 0, 0, true), d4(&rho_z_im, 0, 0, true));
        let dzy = Complex64::new(d4(&rho_z_re, 0, 0, false), d4(&rho_z_im, 0, 0, false));
        let rho_zz = 0.5 * (dzx - Complex64::i() * dzy);
        let rz = rho_z[2][2];
        Ok(rho_zz - 0.5 * rz * rz)
    }

    /// Supremum of `|omega|` over the sampling grid plus near-boundary rings
    /// at geometrically shrinking margins.
    pub fn dilatation_sup(&self, n: usize, margin: f64) -> Result<DilatationSup> {
        let mut pts = self.domain.sample_grid(n, margin);
        let mut ring_margin = 1e-2_f64;
        while ring_margin > margin {
            pts.extend(self.domain.boundary_ring(4 * n, ring_margin));
            ring_margin /= 10.0;
        }
        pts.extend(self.domain.boundary_ring(4 * n, margin));
        let mut sup = 0.0;
        let mut argmax = pts.first().copied().unwrap_or(Complex64::ZERO);
        let samples = pts.len();
        for z in pts {
            let w = self.dilatation(z)?.norm();
            if w > sup {
                sup = w;
                argmax = z;
            }
        }
        Ok(DilatationSup {
            sup,
            argmax,
            samples,
        })
    }

    /// Verifies `J > 0` at every grid point; the first violation is reported
    /// as a witness instead of an error.
    pub fn local_univalence_scan(&self, n: usize, margin: f64) -> Result<UnivalenceScan> {
        let mut pts = self.domain.sample_grid(n, margin);
        pts.extend(self.domain.boundary_ring(4 * n, margin));
        let samples = pts.len();
        let mut min_jacobian = f64::INFINITY;
        let mut argmin = Complex64::ZERO;
        let mut witness = None;
        for z in pts {
            let (jh, jg) = self.jets(z)?;
            let j = jh.d1.norm_sqr() - jg.d1.norm_sqr();
            if j < min_jacobian {
                min_jacobian = j;
                argmin = z;
            }
            if j <= 0.0 && witness.is_none() {
                witness = Some((z, j));
            }
        }
        Ok(UnivalenceScan {
            min_jacobian,
            argmin,
            samples,
            witness,
        })
    }
}
