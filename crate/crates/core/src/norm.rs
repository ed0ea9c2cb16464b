//! Estimation of the hyperbolic Schwarzian norm
//! `||S_f||_D = sup_D lambda_D^{-2} |S_f|` by adaptive sampling.
//!
//! The estimator refines a polar grid toward the largest weighted samples and
//! adds near-boundary rings at geometrically shrinking margins. The sup of
//! the weighted Schwarzian may be attained only in the limit at the boundary
//! (e.g. `(3/2)|z|^2` for the half-square shear), so the estimate reports a
//! `boundary_trend` instead of claiming convergence.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::domain::{Domain, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::hyperbolic;
use crate::map::HarmonicMap;

/// Sampling budget for [`schwarzian_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBudget {
    /// Initial polar grid resolution (radial x angular).
    pub grid: usize,
    /// Number of refinement rounds.
    pub max_refinements: usize,
    /// Early-stop threshold on the relative growth of the running max.
    pub rel_tol: f64,
    /// Relative sampling margin kept inside the boundary.
    pub margin: f64,
}

impl Default for NormBudget {
    fn default() -> Self {
        NormBudget {
            grid: 64,
            max_refinements: 6,
            rel_tol: 1e-3,
            margin: DEFAULT_MARGIN,
        }
    }
}

/// Whether the running max was still growing as the rings approached the
/// boundary when the budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTrend {
    Saturating,
    Increasing,
}

impl std::fmt::Display for BoundaryTrend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryTrend::Saturating => write!(f, "saturating"),
            BoundaryTrend::Increasing => write!(f, "increasing"),
        }
    }
}

/// Result of a norm estimation run. `value` is the max over all evaluated
/// samples and `argmax` one of its locations. On circle domains, where the
/// density is only bounded, `bounds` brackets the sup and `value` uses the
/// geometric-mean density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax: Complex64,
    pub samples: usize,
    pub refinement_depth: usize,
    pub boundary_trend: BoundaryTrend,
    pub bounds: Option<(f64, f64)>,
}

/// One weighted sample `lambda(z)^{-2} |S_f(z)|`.
fn weighted(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    let s = f.schwarzian(z)?.norm();
    let lam = hyperbolic::density(f.domain(), z)?.lambda;
    Ok(s / (lam * lam))
}

struct Tracker {
    value: f64,
    argmax: Complex64,
    samples: usize,
    ring_maxes: Vec<f64>,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            value: 0.0,
            argmax: Complex64::ZERO,
            samples: 0,
            ring_maxes: Vec::new(),
        }
    }

    fn record(&mut self, z: Complex64, q: f64) {
        self.samples += 1;
        if q > self.value {
            self.value = q;
            self.argmax = z;
        }
    }

    fn trend(&self) -> BoundaryTrend {
        let n = self.ring_maxes.len();
        if n < 2 {
            return BoundaryTrend::Saturating;
        }
        let last = self.ring_maxes[n - 1];
        let prev = self.ring_maxes[n - 2];
        let growing = last > prev * (1.0 + 1e-9) && last > 1e-12;
        let dominant = last >= 0.9 * self.value;
        if growing && dominant {
            BoundaryTrend::Increasing
        } else {
            BoundaryTrend::Saturating
        }
    }
}

#[derive(Clone, Copy)]
struct Cell {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    q: f64,
}

fn cell_center(center: Complex64, c: &Cell) -> Complex64 {
    center + Complex64::from_polar(0.5 * (c.r0 + c.r1), 0.5 * (c.t0 + c.t1))
}

/// Margins of the near-boundary rings added per round: 1e-2, 1e-3, ...,
/// floored at the sampling margin.
fn ring_margin(round: usize, floor: f64) -> f64 {
    (1e-2 * 10f64.powi(-(round as i32 - 1))).max(floor)
}

/// Estimates `||S_f||` over the map's own domain.
pub fn schwarzian_norm(f: &HarmonicMap, budget: &NormBudget) -> Result<NormEstimate> {
    match f.domain() {
        Domain::Disk { center, radius } => {
            polar_estimate(f, *center, 0.0, radius * (1.0 - budget.margin), budget)
        }
        Domain::Annulus { outer_radius } => polar_estimate(
            f,
            Complex64::ZERO,
            1.0 + budget.margin,
            outer_radius * (1.0 - budget.margin),
            budget,
        ),
        Domain::CircleDomain { .. } => interval_estimate(f, budget),
    }
}

/// Estimates `||S_f||` over another domain (the series must cover it).
pub fn schwarzian_norm_on(
    f: &HarmonicMap,
    domain: &Domain,
    budget: &NormBudget,
) -> Result<NormEstimate> {
    let g = f.with_domain(domain.clone())?;
    schwarzian_norm(&g, budget)
}

fn polar_estimate(
    f: &HarmonicMap,
    center: Complex64,
    r_lo: f64,
    r_hi: f64,
    budget: &NormBudget,
) -> Result<NormEstimate> {
    let n = budget.grid.max(4);
    let mut tracker = Tracker::new();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        let r0 = r_lo + (r_hi - r_lo) * i as f64 / n as f64;
        let r1 = r_lo + (r_hi - r_lo) * (i + 1) as f64 / n as f64;
        for j in 0..n {
            let t0 = TAU * j as f64 / n as f64;
            let t1 = TAU * (j + 1) as f64 / n as f64;
            let mut cell = Cell {
                r0,
                r1,
                t0,
                t1,
                q: 0.0,
            };
            let z = cell_center(center, &cell);
            cell.q = weighted(f, z)?;
            tracker.record(z, cell.q);
            cells.push(cell);
        }
    }

    let mut depth = 0;
    for round in 1..=budget.max_refinements {
        let start_value = tracker.value;
        depth = round;

        // Subdivide the top decile of cells.
        cells.sort_by(|a, b| b.q.total_cmp(&a.q));
        let take = (cells.len() / 10).max(1);
        let parents: Vec<Cell> = cells.drain(..take).collect();
        for p in parents {
            let rm = 0.5 * (p.r0 + p.r1);
            let tm = 0.5 * (p.t0 + p.t1);
            for (r0, r1) in [(p.r0, rm), (rm, p.r1)] {
                for (t0, t1) in [(p.t0, tm), (tm, p.t1)] {
                    let mut child = Cell {
                        r0,
                        r1,
                        t0,
                        t1,
                        q: 0.0,
                    };
                    let z = cell_center(center, &child);
                    child.q = weighted(f, z)?;
                    tracker.record(z, child.q);
                    cells.push(child);
                }
            }
        }

        // Near-boundary ring at a geometrically shrinking margin.
        let m = ring_margin(round, budget.margin);
        let mut ring_max = 0.0_f64;
        for z in f.domain().boundary_ring(4 * n, m) {
            let q = weighted(f, z)?;
            ring_max = ring_max.max(q);
            tracker.record(z, q);
        }
        tracker.ring_maxes.push(ring_max);

        let grown = tracker.value - start_value;
        if grown <= budget.rel_tol * tracker.value {
            break;
        }
    }

    Ok(NormEstimate {
        value: tracker.value,
        argmax: tracker.argmax,
        samples: tracker.samples,
        refinement_depth: depth,
        boundary_trend: tracker.trend(),
        bounds: None,
    })
}

/// Circle-domain estimate: plain grid plus rings, with the density known only
/// as an interval, so the sup is reported as an interval too.
fn interval_estimate(f: &HarmonicMap, budget: &NormBudget) -> Result<NormEstimate> {
    let mut tracker = Tracker::new();
    let mut sup_lo = 0.0_f64;
    let mut sup_hi = 0.0_f64;
    let n = budget.grid.max(4);

    let visit = |z: Complex64,
                     tracker: &mut Tracker,
                     sup_lo: &mut f64,
                     sup_hi: &mut f64|
     -> Result<f64> {
        let s = f.schwarzian(z)?.norm();
        let d = hyperbolic::density(f.domain(), z)?;
        let (lam_lo, lam_hi) = d.bounds.expect("circle domains carry bounds");
        *sup_lo = sup_lo.max(s / (lam_hi * lam_hi));
        *sup_hi = sup_hi.max(s / (lam_lo * lam_lo));
        let q = s / (d.lambda * d.lambda);
        tracker.record(z, q);
        Ok(q)
    };

    for z in f.domain().sample_grid(n, budget.margin) {
        visit(z, &mut tracker, &mut sup_lo, &mut sup_hi)?;
    }
    let mut depth = 0;
    for round in 1..=budget.max_refinements {
        depth = round;
        let m = ring_margin(round, budget.margin);
        let mut ring_max = 0.0_f64;
        for z in f.domain().boundary_ring(4 * n, m) {
            let q = visit(z, &mut tracker, &mut sup_lo, &mut sup_hi)?;
            ring_max = ring_max.max(q);
        }
        tracker.ring_maxes.push(ring_max);
        if m <= budget.margin {
            break;
        }
    }

    Ok(NormEstimate {
        value: tracker.value,
        argmax: tracker.argmax,
        samples: tracker.samples,
        refinement_depth: depth,
        boundary_trend: tracker.trend(),
        bounds: Some((sup_lo, sup_hi)),
    })
}

/// Outcome of a domain-monotonicity comparison `||S_f||_sub <= ||S_f||_super`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    pub sub: NormEstimate,
    pub superdomain: NormEstimate,
    pub tolerance: f64,
    pub holds: bool,
}

/// Verifiable inclusions between the supported domain shapes.
fn verified_inclusion(sub: &Domain, superdomain: &Domain) -> bool {
    let eps = 1e-12;
    match (sub, superdomain) {
        (
            Domain::Disk {
                center: ca,
                radius: ra,
            },
            Domain::Disk {
                center: cb,
                radius: rb,
            },
        ) => (ca - cb).norm() + ra <= rb + eps,
        (Domain::Annulus { outer_radius: r1 }, Domain::Annulus { outer_radius: r2 }) => {
            *r1 <= r2 + eps
        }
        (Domain::Disk { center, radius }, Domain::Annulus { outer_radius }) => {
            center.norm() - radius >= 1.0 - eps && center.norm() + radius <= outer_radius + eps
        }
        (Domain::Annulus { outer_radius }, Domain::Disk { center, radius }) => {
            outer_radius + center.norm() <= radius + eps
        }
        _ => false,
    }
}

/// Computes both norms at the same budget and checks
/// `||S_f||_sub <= ||S_f||_super` up to a small sampling tolerance.
pub fn monotonicity_check(
    f: &HarmonicMap,
    sub: &Domain,
    superdomain: &Domain,
    budget: &NormBudget,
) -> Result<MonotonicityReport> {
    if !verified_inclusion(sub, superdomain) {
        return Err(Error::UnsupportedPair);
    }
    let sub_est = schwarzian_norm_on(f, sub, budget)?;
    let sup_est = schwarzian_norm_on(f, superdomain, budget)?;
    let tolerance = 2.0 * budget.rel_tol * sup_est.value + 1e-12;
    Ok(MonotonicityReport {
        sub: sub_est,
        superdomain: sup_est,
        tolerance,
        holds: sub_est.value <= sup_est.value + tolerance,
    })
}
