//! Quasiconformal decomposition of the annulus `1 < |z| < R` into three
//! overlapping sectors of angular width `4*pi/3`, and certification that a
//! harmonic map sends the pieces to quasidisks.
//!
//! The defining covering property: any two points of the annulus lie in the
//! closure of some piece. Three sectors of width `4*pi/3` rotated by `2*pi/3`
//! achieve this because the complement of each closed sector is an open arc
//! of angular length `2*pi/3`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geometry::{self, ClosedPolyline, CurveCertificate, InjectivityReport};
use crate::map::HarmonicMap;

/// Slack for closed angular/radial membership, absorbing the rounding of
/// `atan2` and of angle arithmetic at sector endpoints.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// An annular sector `r_in <= |z| <= r_out`,
/// `theta_start <= arg z <= theta_end (mod 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPiece {
    pub r_in: f64,
    pub r_out: f64,
    pub theta_start: f64,
    pub theta_end: f64,
}

impl SectorPiece {
    pub fn new(r_in: f64, r_out: f64, theta_start: f64, theta_end: f64) -> Result<Self> {
        let width = theta_end - theta_start;
        if !(r_in >= 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "sector radii ({r_in}, {r_out}) are not ordered"
            )));
        }
        if !(width > 0.0 && width < TAU) {
            return Err(Error::InvalidDomain(format!(
                "sector width {width} must lie in (0, 2*pi)"
            )));
        }
        Ok(SectorPiece {
            r_in,
            r_out,
            theta_start,
            theta_end,
        })
    }

    pub fn width(&self) -> f64 {
        self.theta_end - self.theta_start
    }

    /// The same sector rotated by `dtheta`, with the start angle renormalized
    /// into `[0, 2*pi)`.
    pub fn rotated(&self, dtheta: f64) -> SectorPiece {
        let start = (self.theta_start + dtheta).rem_euclid(TAU);
        SectorPiece {
            r_in: self.r_in,
            r_out: self.r_out,
            theta_start: start,
            theta_end: start + self.width(),
        }
    }

    /// Closed angular membership modulo `2*pi`.
    pub fn contains_angle(&self, theta: f64) -> bool {
        let a = (theta - self.theta_start).rem_euclid(TAU);
        a <= self.width() + MEMBERSHIP_TOL || a >= TAU - MEMBERSHIP_TOL
    }

    /// Membership in the closed sector.
    pub fn contains_closure(&self, z: Complex64) -> bool {
        let r = z.norm();
        let slack = MEMBERSHIP_TOL * self.r_out;
        r >= self.r_in - slack && r <= self.r_out + slack && self.contains_angle(z.arg())
    }

    /// The sector boundary as a closed polyline: outer arc, inward radial
    /// edge, inner arc, outward radial edge.
    pub fn boundary_polyline(&self, n: usize) -> ClosedPolyline {
        let n = n.max(16);
        let arc_pts = (n / 3).max(8);
        let rad_pts = (n / 6).max(4);
        let mut pts = Vec::with_capacity(2 * arc_pts + 2 * rad_pts);
        for k in 0..arc_pts {
            let t = self.theta_start + self.width() * k as f64 / arc_pts as f64;
            pts.push(Complex64::from_polar(self.r_out, t));
        }
        for k in 0..rad_pts {
            let r = self.r_out + (self.r_in - self.r_out) * k as f64 / rad_pts as f64;
            pts.push(Complex64::from_polar(r, self.theta_end));
        }
        for k in 0..arc_pts {
            let t = self.theta_end - self.width() * k as f64 / arc_pts as f64;
            pts.push(Complex64::from_polar(self.r_in, t));
        }
        for k in 0..rad_pts {
            let r = self.r_in + (self.r_out - self.r_in) * k as f64 / rad_pts as f64;
            pts.push(Complex64::from_polar(r, self.theta_start));
        }
        ClosedPolyline::new(pts).expect("sector boundary is simple by construction")
    }

    /// Interior polar grid. Angles step exactly `width/n` from the start ray
    /// so symmetric pairs land on the grid; radii keep a relative margin.
    pub fn sample_grid(&self, n: usize, margin: f64) -> Vec<Complex64> {
        let n = n.max(2);
        let lo = self.r_in * (1.0 + margin);
        let hi = self.r_out * (1.0 - margin);
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            let r = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let t = self.theta_start + self.width() * j as f64 / n as f64;
                pts.push(Complex64::from_polar(r, t));
            }
        }
        pts
    }
}

/// A family of sector pieces covering an ambient annulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub pieces: Vec<SectorPiece>,
    pub ambient: Domain,
}

/// The explicit three-piece decomposition of the annulus `1 < |z| < R`:
/// sectors of width `4*pi/3` starting at angles `0`, `2*pi/3`, `4*pi/3`.
pub fn annulus_decomposition(outer_radius: f64) -> Result<Decomposition> {
    let ambient = Domain::annulus(outer_radius)?;
    let width = 2.0 * TAU / 3.0;
    let pieces = (0..3)
        .map(|j| {
            let start = TAU * j as f64 / 3.0;
            SectorPiece::new(1.0, outer_radius, start, start + width)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { pieces, ambient })
}

/// A pair of points not covered by any piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringWitness {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// Outcome of a randomized covering sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringSweep {
    pub trials: usize,
    pub witness: Option<CoveringWitness>,
}

impl CoveringSweep {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl Decomposition {
    /// Lowest index of a piece whose closure contains both points.
    pub fn covering_check(&self, z1: Complex64, z2: Complex64) -> Result<usize> {
        self.pieces
            .iter()
            .position(|p| p.contains_closure(z1) && p.contains_closure(z2))
            .ok_or(Error::NotCovered { z1, z2 })
    }

    /// Seeded random point pairs in the closed ambient annulus; every pair
    /// must be covered. The first failure is returned as a witness.
    pub fn covering_sweep(&self, trials: usize, seed: u64) -> CoveringSweep {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outer = match self.ambient {
            Domain::Annulus { outer_radius } => outer_radius,
            _ => self
                .pieces
                .iter()
                .map(|p| p.r_out)
                .fold(1.0_f64, f64::max),
        };
        let sample = |rng: &mut ChaCha8Rng| {
            // uniform in area over the closed annulus
            let u: f64 = rng.random();
            let r = (1.0 + u * (outer * outer - 1.0)).sqrt();
            let theta: f64 = rng.random::<f64>() * TAU;
            Complex64::from_polar(r, theta)
        };
        for _ in 0..trials {
            let z1 = sample(&mut rng);
            let z2 = sample(&mut rng);
            if self.covering_check(z1, z2).is_err() {
                return CoveringSweep {
                    trials,
                    witness: Some(CoveringWitness { z1, z2 }),
                };
            }
        }
        CoveringSweep {
            trials,
            witness: None,
        }
    }
}

/// Certification data for one piece under a harmonic map.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceCertificate {
    pub piece: SectorPiece,
    pub curve: CurveCertificate,
    pub injectivity: InjectivityReport,
}

impl PieceCertificate {
    pub fn passed(&self) -> bool {
        self.curve.jordan && self.injectivity.passed()
    }
}

/// For each piece: traces `f` on the sector boundary (at `n` and `2n`
/// vertices), certifies the image curve, and scans the piece interior for
/// injectivity collisions.
pub fn decomposition_certificate(
    f: &HarmonicMap,
    d: &Decomposition,
    boundary_samples: usize,
    grid: usize,
) -> Result<Vec<PieceCertificate>> {
    let margin = crate::domain::DEFAULT_MARGIN;
    let mut out = Vec::with_capacity(d.pieces.len());
    for piece in &d.pieces {
        let map_curve = |poly: &ClosedPolyline| -> Result<ClosedPolyline> {
            let mut image = Vec::with_capacity(poly.len());
            for &z in poly.points() {
                image.push(f.value_on_closure(z)?);
            }
            ClosedPolyline::new(image)
        };
        let coarse = map_curve(&piece.boundary_polyline(boundary_samples))?;
        let fine = map_curve(&piece.boundary_polyline(2 * boundary_samples))?;
        let curve = CurveCertificate::from_curves(&coarse, &fine);

        let points = piece.sample_grid(grid, margin);
        let mut images = Vec::with_capacity(points.len());
        for &z in &points {
            images.push(f.value(z)?);
        }
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for w in &images {
            lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
            hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
        }
        let collision_tol = 1e-6 * (hi - lo).norm();
        let separation = 1e-2 * d.ambient.diameter();
        let injectivity =
            geometry::injectivity_scan(f, &points, &images, collision_tol, separation)?;

        out.push(PieceCertificate {
            piece: *piece,
            curve,
            injectivity,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bounded_turning, is_jordan};
    use crate::series::LaurentSeries;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_matches_the_three_sectors() {
        let d = annulus_decomposition(2.0).unwrap();
        assert_eq!(d.pieces.len(), 3);
        let w = 4.0 * PI / 3.0;
        for (j, p) in d.pieces.iter().enumerate() {
            assert!((p.r_in - 1.0).abs() < 1e-15 && (p.r_out - 2.0).abs() < 1e-15);
            assert!((p.theta_start - TAU * j as f64 / 3.0).abs() < 1e-12);
            assert!((p.width() - w).abs() < 1e-12);
        }
        assert!(matches!(
            annulus_decomposition(0.5),
            Err(Error::InvalidModulus { .. })
        ));
        assert!(matches!(
            annulus_decomposition(1.0),
            Err(Error::InvalidModulus { .. })
        ));
    }

    #[test]
    fn rotation_relation_between_pieces() {
        let d = annulus_decomposition(2.0).unwrap();
        let rot = Complex64::from_polar(1.0, TAU / 3.0);
        // piece_2 = e^{2 pi i/3} piece_1 as point sets (sampled)
        for z in d.pieces[0].sample_grid(13, 1e-9) {
            assert!(d.pieces[1].contains_closure(rot * z), "{z}");
        }
        for z in d.pieces[1].sample_grid(13, 1e-9) {
            assert!(d.pieces[2].contains_closure(rot * z), "{z}");
        }
    }

    #[test]
    fn piece_boundaries_are_jordan_with_equal_constants() {
        let d = annulus_decomposition(2.0).unwrap();
        let mut constants = Vec::new();
        for p in &d.pieces {
            let poly = p.boundary_polyline(256);
            let (jordan, _) = is_jordan(&poly);
            assert!(jordan);
            constants.push(bounded_turning(&poly).unwrap());
        }
        assert!(constants[0].is_finite() && constants[0] >= 1.0);
        for t in &constants {
            assert!((t - constants[0]).abs() < 1e-9 * constants[0]);
        }
        // stability under resolution doubling
        let fine = bounded_turning(&d.pieces[0].boundary_polyline(512)).unwrap();
        assert!((fine - constants[0]).abs() < 0.05 * constants[0]);
    }

    #[test]
    fn covering_check_examples() {
        let d = annulus_decomposition(2.0).unwrap();
        let z1 = Complex64::from_polar(1.5, 0.1);
        let z2 = Complex64::from_polar(1.5, 0.1 + PI);
        assert_eq!(d.covering_check(z1, z2).unwrap(), 0);

        // equal points: lowest-index containing piece
        assert_eq!(d.covering_check(z1, z1).unwrap(), 0);
        let z3 = Complex64::from_polar(1.5, PI);
        assert_eq!(d.covering_check(z3, z3).unwrap(), 0);

        // the pair at angles (0, pi) rotated by 2*pi/3 is covered by the next piece
        let rot = Complex64::from_polar(1.0, TAU / 3.0);
        assert_eq!(d.covering_check(rot * z1, rot * z2).unwrap(), 1);
    }

    #[test]
    fn covering_equivariance_of_membership() {
        let d = annulus_decomposition(2.0).unwrap();
        let rot = Complex64::from_polar(1.0, TAU / 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r1 = 1.0 + rng.random::<f64>();
            let r2 = 1.0 + rng.random::<f64>();
            let t1 = rng.random::<f64>() * TAU;
            let t2 = rng.random::<f64>() * TAU;
            let (z1, z2) = (Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2));
            for (j, p) in d.pieces.iter().enumerate() {
                if p.contains_closure(z1) && p.contains_closure(z2) {
                    let q = &d.pieces[(j + 1) % 3];
                    assert!(
                        q.contains_closure(rot * z1) && q.contains_closure(rot * z2),
                        "piece {j} covered ({z1}, {z2}) but piece {} missed the rotation",
                        (j + 1) % 3
                    );
                }
            }
        }
    }

    #[test]
    fn exhaustive_one_degree_covering() {
        let d = annulus_decomposition(2.0).unwrap();
        let r = 1.5;
        for a in 0..360 {
            for b in 0..360 {
                let z1 = Complex64::from_polar(r, PI * a as f64 / 180.0);
                let z2 = Complex64::from_polar(r, PI * b as f64 / 180.0);
                assert!(
                    d.covering_check(z1, z2).is_ok(),
                    "angles ({a}, {b}) not covered"
                );
            }
        }
    }

    #[test]
    fn random_sweep_passes_and_is_deterministic() {
        let d = annulus_decomposition(2.0).unwrap();
        let s1 = d.covering_sweep(2000, 42);
        assert!(s1.passed());
        let s2 = d.covering_sweep(2000, 42);
        assert_eq!(s1, s2);
        // zero trials pass vacuously
        assert!(d.covering_sweep(0, 1).passed());
    }

    #[test]
    fn two_piece_width_pi_fails_with_witness() {
        let ambient = Domain::annulus(2.0).unwrap();
        let halves = Decomposition {
            pieces: vec![
                SectorPiece::new(1.0, 2.0, 0.0, PI).unwrap(),
                SectorPiece::new(1.0, 2.0, PI, TAU).unwrap(),
            ],
            ambient,
        };
        // constructed counterexample: angles straddling both boundary rays
        let eps = 0.01;
        let z1 = Complex64::from_polar(1.5, PI - eps);
        let z2 = Complex64::from_polar(1.5, PI + eps);
        assert!(halves.covering_check(z1, z2).is_err());
        let sweep = halves.covering_sweep(10_000, 7);
        assert!(!sweep.passed());
        let w = sweep.witness.unwrap();
        assert!(halves.covering_check(w.z1, w.z2).is_err());
    }

    fn map_on_annulus(h: LaurentSeries, g: LaurentSeries) -> HarmonicMap {
        HarmonicMap::new(h, g, Domain::annulus(2.0).unwrap()).unwrap()
    }

    #[test]
    fn identity_certificate_passes() {
        let f = map_on_annulus(
            LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]),
            LaurentSeries::zero(),
        );
        let d = annulus_decomposition(2.0).unwrap();
        let certs = decomposition_certificate(&f, &d, 128, 32).unwrap();
        assert_eq!(certs.len(), 3);
        for cert in &certs {
            assert!(cert.passed());
            assert!(cert.curve.stable);
        }
    }

    #[test]
    fn small_affine_certificate_passes() {
        let f = map_on_annulus(
            LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]),
            LaurentSeries::polynomial(&[c(0.0, 0.0), c(0.1, 0.0)]),
        );
        let d = annulus_decomposition(2.0).unwrap();
        for cert in decomposition_certificate(&f, &d, 128, 32).unwrap() {
            assert!(cert.passed());
        }
    }

    #[test]
    fn square_map_fails_piece_injectivity() {
        let f = map_on_annulus(
            LaurentSeries::monomial(2, c(1.0, 0.0)).unwrap(),
            LaurentSeries::zero(),
        );
        let d = annulus_decomposition(2.0).unwrap();
        let certs = decomposition_certificate(&f, &d, 128, 32).unwrap();
        // Each sector has width 4*pi/3 > pi, so it contains antipodal pairs
        // and the two-to-one collision must be witnessed; piece 0 in particular.
        let w = certs[0]
            .injectivity
            .witness
            .expect("width 4*pi/3 contains an angle gap of pi");
        assert!((w.z1 + w.z2).norm() <= 1e-6 * w.z1.norm());
    }
}
