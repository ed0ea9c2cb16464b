//! Numerical certification of image boundary curves: tracing, Jordan-curve
//! testing with exact orientation predicates, bounded-turning (quasicircle)
//! constants, and brute-force grid injectivity with a spatial hash.
//!
//! The quasicircle proxy is the three-point bounded-turning condition: a
//! Jordan curve is a quasicircle iff the smaller arc diameter between any two
//! curve points is at most a constant times their distance. The reported
//! constant is that max ratio over sampled point pairs.

use num_complex::Complex64;
use robust::{orient2d, Coord};
use std::collections::HashMap;

use crate::domain::Circle;
use crate::error::{Error, Result};
use crate::map::HarmonicMap;

/// A closed polyline with at least four distinct consecutive vertices
/// (the closing edge last -> first is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolyline {
    points: Vec<Complex64>,
}

impl ClosedPolyline {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidPolyline(format!(
                "need at least 4 points, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidPolyline(format!("point {i} is not finite")));
            }
            let q = points[(i + 1) % points.len()];
            if *p == q {
                return Err(Error::InvalidPolyline(format!(
                    "consecutive points {i} and {} coincide",
                    (i + 1) % points.len()
                )));
            }
        }
        Ok(ClosedPolyline { points })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Segment `i`: from vertex `i` to vertex `i+1 (mod n)`.
    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }
}

/// A pair of intersecting non-adjacent segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JordanWitness {
    pub seg_a: usize,
    pub seg_b: usize,
}

fn coord(z: Complex64) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

/// Exact sign of the orientation of `(a, b, c)`.
fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

/// For collinear `p`, whether it lies inside the bounding box of `[a, b]`.
fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Any contact between the closed segments `[a, b]` and `[c, d]`.
pub(crate) fn segments_intersect(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    i == j || (i + 1) % n == j || (j + 1) % n == i
}

/// True iff no two non-adjacent segments touch and no vertex doubles back
/// onto its incoming edge; otherwise the first offending segment pair.
pub fn is_jordan(curve: &ClosedPolyline) -> (bool, Option<JordanWitness>) {
    match first_self_intersection(curve) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    }
}

fn first_self_intersection(curve: &ClosedPolyline) -> Option<JordanWitness> {
    let pts = curve.points();
    let n = pts.len();

    // Collinear double-back at a shared vertex makes adjacent segments
    // overlap beyond the common endpoint.
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let cur = pts[i];
        let next = pts[(i + 1) % n];
        let turn = orient(prev, cur, next);
        let dot = (prev - cur).re * (next - cur).re + (prev - cur).im * (next - cur).im;
        if turn == 0.0 && dot > 0.0 {
            return Some(JordanWitness {
                seg_a: (i + n - 1) % n,
                seg_b: i,
            });
        }
    }

    // Uniform-grid broad phase over segment bounding boxes.
    let mut avg_diag = 0.0;
    for i in 0..n {
        let (a, b) = curve.segment(i);
        avg_diag += (a - b).re.abs().max((a - b).im.abs());
    }
    avg_diag /= n as f64;
    let cell = (1.5 * avg_diag).max(f64::MIN_POSITIVE);
    let cell_range = |a: f64, b: f64| {
        let lo = (a.min(b) / cell).floor() as i64;
        let hi = (a.max(b) / cell).floor() as i64;
        lo..=hi
    };

    let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for i in 0..n {
        let (a, b) = curve.segment(i);
        for cx in cell_range(a.re, b.re) {
            for cy in cell_range(a.im, b.im) {
                buckets.entry((cx, cy)).or_default().push(i as u32);
            }
        }
    }

    let mut candidates: Vec<u32> = Vec::new();
    for i in 0..n {
        let (a, b) = curve.segment(i);
        candidates.clear();
        for cx in cell_range(a.re, b.re) {
            for cy in cell_range(a.im, b.im) {
                if let Some(v) = buckets.get(&(cx, cy)) {
                    candidates.extend(v.iter().copied().filter(|&j| (j as usize) > i));
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for &j in &candidates {
            let j = j as usize;
            if adjacent(i, j, n) {
                continue;
            }
            let (c, d) = curve.segment(j);
            if segments_intersect(a, b, c, d) {
                return Some(JordanWitness { seg_a: i, seg_b: j });
            }
        }
    }
    None
}

/// Above this vertex count the turning-constant search subsamples anchors
/// and refines around the best candidates instead of sweeping every anchor.
const TURNING_EXACT_LIMIT: usize = 600;

/// Bounded-turning constant: max over sampled vertex pairs `(i, j)` of
/// `min(diam(arc1), diam(arc2)) / |p_i - p_j|`, where the arcs are the two
/// polyline pieces between the vertices. Requires a Jordan curve.
pub fn bounded_turning(curve: &ClosedPolyline) -> Result<f64> {
    let (jordan, witness) = is_jordan(curve);
    if !jordan {
        let w = witness.expect("non-jordan verdicts carry a witness");
        return Err(Error::NotJordan {
            seg_a: w.seg_a,
            seg_b: w.seg_b,
        });
    }
    let pts = curve.points();
    if pts.len() <= TURNING_EXACT_LIMIT {
        let mut best = 0.0_f64;
        for i in 0..pts.len() {
            let (ratio, _) = anchor_sweep(pts, i);
            best = best.max(ratio);
        }
        Ok(best)
    } else {
        Ok(turning_subsampled(pts))
    }
}

/// For a fixed anchor `i`, the max ratio over all partners `j` together with
/// the argmax partner. Arc diameters grow incrementally point by point.
fn anchor_sweep(pts: &[Complex64], i: usize) -> (f64, usize) {
    let n = pts.len();
    let mut fwd = vec![0.0_f64; n]; // diam^2 of arc i..j (indices mod n)
    let mut bwd = vec![0.0_f64; n]; // diam^2 of arc j..i
    let mut visited: Vec<Complex64> = Vec::with_capacity(n);

    visited.push(pts[i]);
    let mut running = 0.0_f64;
    for step in 1..n {
        let j = (i + step) % n;
        let p = pts[j];
        for &q in &visited {
            running = running.max((p - q).norm_sqr());
        }
        visited.push(p);
        fwd[j] = running;
    }

    visited.clear();
    visited.push(pts[i]);
    running = 0.0;
    for step in 1..n {
        let j = (i + n - step) % n;
        let p = pts[j];
        for &q in &visited {
            running = running.max((p - q).norm_sqr());
        }
        visited.push(p);
        bwd[j] = running;
    }

    let mut best = 0.0_f64;
    let mut best_j = i;
    for step in 1..n {
        let j = (i + step) % n;
        let chord_sq = (pts[i] - pts[j]).norm_sqr();
        if chord_sq == 0.0 {
            continue;
        }
        let ratio = (fwd[j].min(bwd[j]) / chord_sq).sqrt();
        if ratio > best {
            best = ratio;
            best_j = j;
        }
    }
    (best, best_j)
}

fn turning_subsampled(pts: &[Complex64]) -> f64 {
    let n = pts.len();
    let stride = (n as f64).sqrt().round() as usize;
    let stride = stride.max(1);

    let mut best = 0.0_f64;
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let (ratio, _) = anchor_sweep(pts, i);
        best = best.max(ratio);
        candidates.push((ratio, i));
        i += stride;
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    candidates.truncate(3);

    // Refine around the best coarse anchors on a finer anchor lattice.
    let fine = (stride / 8).max(1);
    let mut swept = vec![false; n];
    for &(_, anchor) in &candidates {
        let mut off = 0_usize;
        while off <= stride {
            for idx in [(anchor + off) % n, (anchor + n - off % n) % n] {
                if !swept[idx] {
                    swept[idx] = true;
                    let (ratio, _) = anchor_sweep(pts, idx);
                    best = best.max(ratio);
                }
            }
            off += fine;
        }
    }
    best
}

/// Samples `f` on `n` equally spaced parameters of a boundary circle of its
/// domain, evaluating the series on the circle itself (radial limits).
pub fn trace_boundary(f: &HarmonicMap, circle: &Circle, n: usize) -> Result<ClosedPolyline> {
    let is_component = f.domain().boundary_circles().iter().any(|c| {
        (c.center - circle.center).norm() <= 1e-9 * circle.radius.max(1.0)
            && (c.radius - circle.radius).abs() <= 1e-9 * circle.radius.max(1.0)
    });
    if !is_component {
        return Err(Error::NotABoundaryCircle {
            center: circle.center,
            radius: circle.radius,
        });
    }
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        points.push(f.value_on_closure(circle.point_at(theta))?);
    }
    ClosedPolyline::new(points)
}

/// Certificate for one traced image curve at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveCertificate {
    pub jordan: bool,
    pub witness: Option<JordanWitness>,
    /// Bounded-turning constant at `samples.0` vertices (when Jordan).
    pub turning_constant: Option<f64>,
    /// The constant recomputed at `samples.1 = 2 n` vertices.
    pub turning_constant_refined: Option<f64>,
    pub samples: (usize, usize),
    /// False when the constant moved by more than 20% under doubling.
    pub stable: bool,
}

impl CurveCertificate {
    pub(crate) fn from_curves(coarse: &ClosedPolyline, fine: &ClosedPolyline) -> Self {
        let samples = (coarse.len(), fine.len());
        let (jordan_c, witness_c) = is_jordan(coarse);
        let (jordan_f, witness_f) = is_jordan(fine);
        if !(jordan_c && jordan_f) {
            return CurveCertificate {
                jordan: false,
                witness: witness_c.or(witness_f),
                turning_constant: None,
                turning_constant_refined: None,
                samples,
                stable: false,
            };
        }
        let t1 = bounded_turning(coarse).expect("jordan verified");
        let t2 = bounded_turning(fine).expect("jordan verified");
        CurveCertificate {
            jordan: true,
            witness: None,
            turning_constant: Some(t1),
            turning_constant_refined: Some(t2),
            samples,
            stable: (t2 - t1).abs() <= 0.2 * t1.max(1e-300),
        }
    }
}

/// Traces a boundary circle at `n` and `2n` samples and certifies the image
/// curve: Jordan verdict, bounded-turning constants, stability flag.
pub fn quasicircle_report(f: &HarmonicMap, circle: &Circle, n: usize) -> Result<CurveCertificate> {
    let coarse = trace_boundary(f, circle, n)?;
    let fine = trace_boundary(f, circle, 2 * n)?;
    Ok(CurveCertificate::from_curves(&coarse, &fine))
}

/// A verified near-collision of two well-separated domain points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityWitness {
    pub z1: Complex64,
    pub z2: Complex64,
    pub image_distance: f64,
    pub domain_distance: f64,
}

/// Outcome of an injectivity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityReport {
    pub samples: usize,
    pub collision_tol: f64,
    pub separation: f64,
    pub witness: Option<InjectivityWitness>,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Spatial-hash collision scan over precomputed (point, image) pairs.
///
/// Buckets have side `collision_tol`, so colliding images are in the same or
/// an adjacent bucket. Candidate pairs are confirmed by direct evaluation
/// before being reported.
pub(crate) fn injectivity_scan(
    f: &HarmonicMap,
    points: &[Complex64],
    images: &[Complex64],
    collision_tol: f64,
    separation: f64,
) -> Result<InjectivityReport> {
    let cell = collision_tol.max(f64::MIN_POSITIVE);
    let key = |w: Complex64| ((w.re / cell).floor() as i64, (w.im / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    let mut candidates: Vec<u32> = Vec::new();

    for (i, (&z, &w)) in points.iter().zip(images).enumerate() {
        let (kx, ky) = key(w);
        candidates.clear();
        for dx in -1..=1_i64 {
            for dy in -1..=1_i64 {
                if let Some(v) = buckets.get(&(kx + dx, ky + dy)) {
                    candidates.extend(v.iter().copied());
                }
            }
        }
        candidates.sort_unstable();
        for &j in &candidates {
            let zj = points[j as usize];
            let wj = images[j as usize];
            if (w - wj).norm() < collision_tol && (z - zj).norm() > separation {
                // Re-verify by direct evaluation before reporting.
                let a = f.value(z)?;
                let b = f.value(zj)?;
                if (a - b).norm() < collision_tol {
                    return Ok(InjectivityReport {
                        samples: points.len(),
                        collision_tol,
                        separation,
                        witness: Some(InjectivityWitness {
                            z1: zj,
                            z2: z,
                            image_distance: (a - b).norm(),
                            domain_distance: (z - zj).norm(),
                        }),
                    });
                }
            }
        }
        buckets.entry((kx, ky)).or_default().push(i as u32);
    }
    Ok(InjectivityReport {
        samples: points.len(),
        collision_tol,
        separation,
        witness: None,
    })
}

/// Evaluates `f` on an `n x n` domain grid, buckets the images with a spatial
/// hash of cell size equal to the collision tolerance
/// (`1e-6 x image diameter`), and reports any two images closer than that
/// whose preimages are separated by more than `1e-2 x domain diameter`.
pub fn grid_injectivity(f: &HarmonicMap, n: usize, margin: f64) -> Result<InjectivityReport> {
    let points = f.domain().sample_grid(n, margin);
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
    let image_diameter = (hi - lo).norm();
    let collision_tol = 1e-6 * image_diameter;
    let separation = 1e-2 * f.domain().diameter();
    injectivity_scan(f, &points, &images, collision_tol, separation)
}
