//! Finite Laurent and Taylor series with an explicit validity annulus and
//! exact jet evaluation (value plus first three derivatives).
//!
//! The series are the representation of the analytic parts `h`, `g` of a
//! harmonic mapping `f = h + conj(g)`. Evaluation is direct term-by-term
//! summation in ascending `|exponent|` order with compensated accumulation,
//! so it is exact up to rounding and safe to use as an oracle input.

use num_complex::Complex64;

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Value and first three complex derivatives of a series at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub d0: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 {
        d0: Complex64::ZERO,
        d1: Complex64::ZERO,
        d2: Complex64::ZERO,
        d3: Complex64::ZERO,
    };
}

/// Neumaier-compensated accumulator for one real component.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Default)]
struct CompensatedComplex {
    re: Compensated,
    im: Compensated,
}

impl CompensatedComplex {
    fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// A finite Laurent series `sum_k c_k z^k` with a validity annulus
/// `r_inner < |z| < r_outer`.
///
/// `r_inner = 0` with only nonnegative exponents admits evaluation at the
/// origin; with negative exponents the punctured annulus `0 < |z|` is meant
/// and evaluation at the origin is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    /// Terms sorted by ascending `(|k|, k)` — the summation order.
    terms: Vec<(i32, Complex64)>,
    r_inner: f64,
    r_outer: f64,
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut by_exponent = self.terms.clone();
        by_exponent.sort_by_key(|&(k, _)| k);
        for (i, (k, c)) in by_exponent.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}, {})*z^{}", c.re, c.im, k)?;
        }
        Ok(())
    }
}

impl LaurentSeries {
    pub fn new(
        coeffs: impl IntoIterator<Item = (i32, Complex64)>,
        r_inner: f64,
        r_outer: f64,
    ) -> Result<Self> {
        if r_inner < 0.0 || r_inner.is_nan() || r_outer <= r_inner || r_outer.is_nan() {
            return Err(Error::InvalidSeries(format!(
                "validity annulus ({r_inner}, {r_outer}) is empty or negative"
            )));
        }
        let mut terms: Vec<(i32, Complex64)> = Vec::new();
        for (k, c) in coeffs {
            if !c.is_finite() {
                return Err(Error::InvalidSeries(format!(
                    "coefficient of z^{k} is not finite: {c}"
                )));
            }
            match terms.iter_mut().find(|(e, _)| *e == k) {
                Some((_, acc)) => *acc += c,
                None => terms.push((k, c)),
            }
        }
        terms.retain(|&(_, c)| c != Complex64::ZERO);
        terms.sort_by_key(|&(k, _)| (k.unsigned_abs(), k));
        Ok(LaurentSeries {
            terms,
            r_inner,
            r_outer,
        })
    }

    /// Taylor polynomial with `coeffs[k]` the coefficient of `z^k`,
    /// valid on the whole plane. Panics on non-finite coefficients.
    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        LaurentSeries::new(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as i32, c)),
            0.0,
            f64::INFINITY,
        )
        .expect("polynomial coefficients must be finite")
    }

    /// The zero series, valid everywhere.
    pub fn zero() -> Self {
        LaurentSeries {
            terms: Vec::new(),
            r_inner: 0.0,
            r_outer: f64::INFINITY,
        }
    }

    /// Single term `c z^k`, valid on `0 < |z|` for negative `k`.
    pub fn monomial(k: i32, c: Complex64) -> Result<Self> {
        LaurentSeries::new([(k, c)], 0.0, f64::INFINITY)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.terms.iter().copied()
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        self.terms
            .iter()
            .find(|(e, _)| *e == k)
            .map(|&(_, c)| c)
            .unwrap_or(Complex64::ZERO)
    }

    pub fn k_min(&self) -> Option<i32> {
        self.terms.iter().map(|&(k, _)| k).min()
    }

    pub fn k_max(&self) -> Option<i32> {
        self.terms.iter().map(|&(k, _)| k).max()
    }

    pub fn validity(&self) -> (f64, f64) {
        (self.r_inner, self.r_outer)
    }

    /// Same coefficients with a different declared validity annulus.
    pub fn with_validity(&self, r_inner: f64, r_outer: f64) -> Result<Self> {
        LaurentSeries::new(self.terms.iter().copied(), r_inner, r_outer)
    }

    /// `a*s + b*t` with the intersected validity annulus.
    pub fn linear_combination(
        a: Complex64,
        s: &LaurentSeries,
        b: Complex64,
        t: &LaurentSeries,
    ) -> Result<Self> {
        let coeffs = s
            .terms
            .iter()
            .map(|&(k, c)| (k, a * c))
            .chain(t.terms.iter().map(|&(k, c)| (k, b * c)));
        LaurentSeries::new(
            coeffs,
            s.r_inner.max(t.r_inner),
            s.r_outer.min(t.r_outer),
        )
    }

    /// Adds a constant term.
    pub fn plus_constant(&self, c: Complex64) -> Result<Self> {
        LaurentSeries::new(
            self.terms.iter().copied().chain([(0, c)]),
            self.r_inner,
            self.r_outer,
        )
    }

    fn inside_open_validity(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r >= self.r_outer {
            return false;
        }
        if r > self.r_inner {
            return true;
        }
        // r <= r_inner: only the origin of a pure Taylor series survives.
        r == 0.0 && self.r_inner == 0.0 && self.k_min().unwrap_or(0) >= 0
    }

    /// Value and first three derivatives at a point strictly inside the
    /// validity annulus.
    pub fn eval_jet(&self, z: Complex64) -> Result<Jet3> {
        if !self.inside_open_validity(z) {
            return Err(Error::OutOfValidity {
                z,
                r_inner: self.r_inner,
                r_outer: self.r_outer,
            });
        }
        Ok(self.eval_jet_unchecked(z))
    }

    /// Jet evaluation with the validity check relaxed to the closed annulus,
    /// for radial-limit values on boundary circles. Refuses radii at the
    /// declared edge when the extreme terms do not decay there.
    pub fn eval_jet_on_closure(&self, z: Complex64) -> Result<Jet3> {
        let r = z.norm();
        if self.inside_open_validity(z) {
            return Ok(self.eval_jet_unchecked(z));
        }
        let slack = 1e-12 * r.max(1.0);
        let on_outer = self.r_outer.is_finite() && (r - self.r_outer).abs() <= slack;
        let on_inner = self.r_inner > 0.0 && (r - self.r_inner).abs() <= slack;
        if !(on_outer || on_inner) {
            return Err(Error::OutOfValidity {
                z,
                r_inner: self.r_inner,
                r_outer: self.r_outer,
            });
        }
        if !self.decays_at(r) {
            return Err(Error::SeriesDivergence { radius: r });
        }
        Ok(self.eval_jet_unchecked(z))
    }

    /// Tail-decay test at radius `r`: the largest-|exponent| term must be
    /// dominated by the bulk of the series there.
    fn decays_at(&self, r: f64) -> bool {
        if self.terms.len() < 2 {
            return true;
        }
        let mag = |k: i32, c: Complex64| c.norm() * r.powi(k);
        let peak = self
            .terms
            .iter()
            .map(|&(k, c)| mag(k, c))
            .fold(0.0_f64, f64::max);
        if peak == 0.0 {
            return true;
        }
        let k_min = self.k_min().unwrap();
        let k_max = self.k_max().unwrap();
        let mut ok = true;
        if k_max > 0 {
            ok &= mag(k_max, self.coeff(k_max)) <= 1e-3 * peak;
        }
        if k_min < 0 {
            ok &= mag(k_min, self.coeff(k_min)) <= 1e-3 * peak;
        }
        ok
    }

    fn eval_jet_unchecked(&self, z: Complex64) -> Jet3 {
        if self.terms.is_empty() {
            return Jet3::ZERO;
        }
        if z == Complex64::ZERO {
            // Only reachable for Taylor-type series.
            return Jet3 {
                d0: self.coeff(0),
                d1: self.coeff(1),
                d2: 2.0 * self.coeff(2),
                d3: 6.0 * self.coeff(3),
            };
        }
        // Accumulate sum_k c_k ff(k, j) z^k for j = 0..3, ascending |k|,
        // then divide by z^j. ff is the falling factorial.
        let mut acc = [CompensatedComplex::default(); 4];
        for &(k, c) in &self.terms {
            let zk = z.powi(k);
            let kf = f64::from(k);
            let f1 = kf;
            let f2 = kf * (kf - 1.0);
            let f3 = f2 * (kf - 2.0);
            let base = c * zk;
            acc[0].add(base);
            acc[1].add(base * f1);
            acc[2].add(base * f2);
            acc[3].add(base * f3);
        }
        let z2 = z * z;
        Jet3 {
            d0: acc[0].value(),
            d1: acc[1].value() / z,
            d2: acc[2].value() / z2,
            d3: acc[3].value() / (z2 * z),
        }
    }

    /// True iff the closure of the domain's sampling region (the domain
    /// shrunk by the relative `margin`) lies inside the validity annulus.
    pub fn contains_domain(&self, domain: &Domain, margin: f64) -> bool {
        let (lo, hi) = domain.sampling_modulus_range(margin);
        let lo_ok = if self.r_inner > 0.0 {
            lo > self.r_inner
        } else if self.k_min().unwrap_or(0) < 0 {
            // Punctured-plane validity: the region must stay off the origin.
            lo > 0.0
        } else {
            true
        };
        lo_ok && hi < self.r_outer
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "expected {b}, got {a} (|diff| = {})",
            (a - b).norm()
        );
    }

    #[test]
    fn identity_jet() {
        let s = LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let j = s.eval_jet(c(2.0, 0.0)).unwrap();
        assert_eq!(j.d0, c(2.0, 0.0));
        assert_eq!(j.d1, c(1.0, 0.0));
        assert_eq!(j.d2, Complex64::ZERO);
        assert_eq!(j.d3, Complex64::ZERO);
    }

    #[test]
    fn square_jet_at_one_plus_i() {
        let s = LaurentSeries::monomial(2, c(1.0, 0.0)).unwrap();
        let j = s.eval_jet(c(1.0, 1.0)).unwrap();
        assert_close(j.d0, c(0.0, 2.0), 1e-15);
        assert_close(j.d1, c(2.0, 2.0), 1e-15);
        assert_close(j.d2, c(2.0, 0.0), 1e-15);
        assert_eq!(j.d3, Complex64::ZERO);
    }

    #[test]
    fn reciprocal_jet_at_i() {
        // 1/z at z = i: value -i, then 1, 2i, -6 by symbolic differentiation.
        let s = LaurentSeries::monomial(-1, c(1.0, 0.0)).unwrap();
        let j = s.eval_jet(c(0.0, 1.0)).unwrap();
        assert_close(j.d0, c(0.0, -1.0), 1e-15);
        assert_close(j.d1, c(1.0, 0.0), 1e-15);
        assert_close(j.d2, c(0.0, 2.0), 1e-15);
        assert_close(j.d3, c(-6.0, 0.0), 1e-14);
    }

    #[test]
    fn origin_evaluation() {
        let p = LaurentSeries::polynomial(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let j = p.eval_jet(Complex64::ZERO).unwrap();
        assert_eq!(j.d0, c(1.0, 0.0));
        assert_eq!(j.d1, c(2.0, 0.0));
        assert_eq!(j.d2, c(6.0, 0.0));
        assert_eq!(j.d3, c(24.0, 0.0));

        let l = LaurentSeries::monomial(-1, c(1.0, 0.0)).unwrap();
        assert!(matches!(
            l.eval_jet(Complex64::ZERO),
            Err(Error::OutOfValidity { .. })
        ));
    }

    #[test]
    fn validity_is_enforced() {
        let s = LaurentSeries::new([(1, c(1.0, 0.0))], 0.0, 0.5).unwrap();
        assert!(s.eval_jet(c(0.25, 0.0)).is_ok());
        assert!(matches!(
            s.eval_jet(c(0.75, 0.0)),
            Err(Error::OutOfValidity { .. })
        ));
    }

    #[test]
    fn closure_evaluation_and_divergence() {
        // Truncated geometric series sum (z/3)^k declared valid up to |z| = 1:
        // decays at the edge, so boundary evaluation is allowed.
        let geo = LaurentSeries::new(
            (0..40).map(|k| (k, c(3.0_f64.powi(-k), 0.0))),
            0.0,
            1.0,
        )
        .unwrap();
        let j = geo.eval_jet_on_closure(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(j.d0.re, 1.5, max_relative = 1e-12);

        // Non-decaying coefficients at the declared edge are refused.
        let bad = LaurentSeries::new((0..40).map(|k| (k, c(1.0, 0.0))), 0.0, 1.0).unwrap();
        assert!(matches!(
            bad.eval_jet_on_closure(c(1.0, 0.0)),
            Err(Error::SeriesDivergence { .. })
        ));

        // Far outside the closure stays an out-of-validity error.
        assert!(matches!(
            geo.eval_jet_on_closure(c(2.0, 0.0)),
            Err(Error::OutOfValidity { .. })
        ));
    }

    #[test]
    fn contains_domain_examples() {
        let entire = LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(entire.contains_domain(&Domain::unit_disk(), 1e-6));

        let inv = LaurentSeries::monomial(-1, c(1.0, 0.0)).unwrap();
        assert!(inv.contains_domain(&Domain::annulus(2.0).unwrap(), 1e-6));
        // 1/z is not usable on a disk containing the origin.
        assert!(!inv.contains_domain(&Domain::unit_disk(), 1e-6));

        let small = LaurentSeries::new([(1, c(1.0, 0.0))], 0.0, 0.5).unwrap();
        assert!(!small.contains_domain(&Domain::unit_disk(), 1e-6));
    }

    #[test]
    fn duplicate_exponents_merge() {
        let s = LaurentSeries::new(
            [(1, c(1.0, 0.0)), (1, c(2.0, 0.0)), (0, c(0.0, 0.0))],
            0.0,
            f64::INFINITY,
        )
        .unwrap();
        assert_eq!(s.coeff(1), c(3.0, 0.0));
        assert_eq!(s.k_min(), Some(1));
    }

    #[test]
    fn rejects_nonfinite_coefficients() {
        assert!(LaurentSeries::new([(0, c(f64::NAN, 0.0))], 0.0, 1.0).is_err());
        assert!(LaurentSeries::new([(0, c(1.0, f64::INFINITY))], 0.0, 1.0).is_err());
    }

    /// Falling-factorial closed form for the jet of z^k.
    fn monomial_jet(k: i32, z: Complex64) -> Jet3 {
        let kf = f64::from(k);
        let p = |e: i32| z.powi(e);
        Jet3 {
            d0: p(k),
            d1: kf * p(k - 1),
            d2: kf * (kf - 1.0) * p(k - 2),
            d3: kf * (kf - 1.0) * (kf - 2.0) * p(k - 3),
        }
    }

    #[test]
    fn monomial_exactness() {
        let z = c(0.7, -0.4);
        for k in -5..=8 {
            let s = LaurentSeries::monomial(k, c(1.0, 0.0)).unwrap();
            let j = s.eval_jet(z).unwrap();
            let e = monomial_jet(k, z);
            for (a, b) in [(j.d0, e.d0), (j.d1, e.d1), (j.d2, e.d2), (j.d3, e.d3)] {
                assert!(
                    (a - b).norm() <= 1e-12 * (1.0 + b.norm()),
                    "k = {k}: {a} vs {b}"
                );
            }
        }
    }

    fn arb_coeff() -> impl Strategy<Value = (i32, Complex64)> {
        (-6..=8i32, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(k, re, im)| (k, c(re, im)))
    }

    fn arb_series() -> impl Strategy<Value = LaurentSeries> {
        proptest::collection::vec(arb_coeff(), 1..8)
            .prop_map(|v| LaurentSeries::new(v, 0.0, f64::INFINITY).unwrap())
    }

    fn arb_point() -> impl Strategy<Value = Complex64> {
        (0.3..1.5f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn linearity(s in arb_series(), t in arb_series(), z in arb_point(),
                     ar in -2.0..2.0f64, br in -2.0..2.0f64) {
            let a = c(ar, 0.3);
            let b = c(br, -0.7);
            let lc = LaurentSeries::linear_combination(a, &s, b, &t).unwrap();
            let js = s.eval_jet(z).unwrap();
            let jt = t.eval_jet(z).unwrap();
            let jl = lc.eval_jet(z).unwrap();
            let scale = 1.0 + js.d3.norm() + jt.d3.norm();
            for (got, want) in [
                (jl.d0, a * js.d0 + b * jt.d0),
                (jl.d1, a * js.d1 + b * jt.d1),
                (jl.d2, a * js.d2 + b * jt.d2),
                (jl.d3, a * js.d3 + b * jt.d3),
            ] {
                prop_assert!((got - want).norm() <= 1e-9 * scale);
            }
        }

        #[test]
        fn derivative_consistency(s in arb_series(), z in arb_point()) {
            // Second-order central differences of each jet slot approximate
            // the next slot to O(step^2).
            let step = 1e-5;
            let j = s.eval_jet(z).unwrap();
            for (lower, upper) in [(0usize, 1usize), (1, 2), (2, 3)] {
                let pick = |j: Jet3, slot: usize| match slot {
                    0 => j.d0,
                    1 => j.d1,
                    2 => j.d2,
                    _ => j.d3,
                };
                let fp = pick(s.eval_jet(z + c(step, 0.0)).unwrap(), lower);
                let fm = pick(s.eval_jet(z - c(step, 0.0)).unwrap(), lower);
                let fd = (fp - fm) / (2.0 * step);
                let want = pick(j, upper);
                let scale = 1.0 + want.norm() + pick(j, lower).norm() / step.sqrt();
                prop_assert!(
                    (fd - want).norm() <= 1e-3 * scale,
                    "slot {lower}->{upper}: fd {fd} vs jet {want}"
                );
            }
        }
    }
}
