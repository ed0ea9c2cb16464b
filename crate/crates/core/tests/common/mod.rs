//! Shared fixtures for the integration suites: the six-map regression corpus
//! and the independent oracles the acceptance checks compare against.

use num_complex::Complex64;

use harmqc::series::LaurentSeries;
use harmqc::{Domain, HarmonicMap};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Truncated Taylor expansion of the Moebius map (z - 1/3)/(1 - z/3):
/// constant -1/3, then 8/3^{k+1} z^k. The tail at |z| = 1 is ~3^-K.
pub fn mobius_series(len: usize) -> LaurentSeries {
    let mut coeffs = vec![(0, c(-1.0 / 3.0, 0.0))];
    for k in 1..len as i32 {
        coeffs.push((k, c(8.0 * 3f64.powi(-k - 1), 0.0)));
    }
    LaurentSeries::new(coeffs, 0.0, 1.0).unwrap()
}

/// The regression corpus: identity, Moebius, z + z^2, the half-square shear
/// z + conj(z^2)/2, the affine shear z + 0.3 conj(z), and 1/z on annulus(2).
pub fn corpus() -> Vec<(&'static str, HarmonicMap)> {
    let z = LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]);
    vec![
        (
            "identity",
            HarmonicMap::new(z.clone(), LaurentSeries::zero(), Domain::unit_disk()).unwrap(),
        ),
        (
            "moebius",
            HarmonicMap::new(mobius_series(64), LaurentSeries::zero(), Domain::unit_disk())
                .unwrap(),
        ),
        (
            "z_plus_z_squared",
            HarmonicMap::new(
                LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
                LaurentSeries::zero(),
                Domain::unit_disk(),
            )
            .unwrap(),
        ),
        (
            "half_square_shear",
            HarmonicMap::new(
                z.clone(),
                LaurentSeries::polynomial(&[c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]),
                Domain::unit_disk(),
            )
            .unwrap(),
        ),
        (
            "affine_shear_0_3",
            HarmonicMap::new(
                z,
                LaurentSeries::polynomial(&[c(0.0, 0.0), c(0.3, 0.0)]),
                Domain::unit_disk(),
            )
            .unwrap(),
        ),
        (
            "reciprocal_on_annulus",
            HarmonicMap::new(
                LaurentSeries::monomial(-1, c(1.0, 0.0)).unwrap(),
                LaurentSeries::zero(),
                Domain::annulus(2.0).unwrap(),
            )
            .unwrap(),
        ),
    ]
}

/// Classical Schwarzian `h'''/h' - (3/2)(h''/h')^2` of an analytic map,
/// evaluated from the series jet.
pub fn classical_schwarzian(h: &LaurentSeries, z: Complex64) -> Complex64 {
    let j = h.eval_jet(z).unwrap();
    let a = j.d2 / j.d1;
    j.d3 / j.d1 - 1.5 * a * a
}

/// Fixed interior evaluation points per domain, chosen away from the
/// Jacobian degeneracies of the corpus (|1 + 2z| > 0.2 for z + z^2).
pub fn test_points(domain: &Domain) -> Vec<Complex64> {
    match domain {
        Domain::Disk { .. } => vec![
            c(0.1, 0.2),
            c(-0.3, 0.4),
            c(0.5, -0.1),
            c(-0.55, -0.25),
            c(0.7, 0.05),
            c(0.0, 0.6),
            c(0.25, 0.0),
            c(-0.2, -0.6),
        ],
        _ => vec![
            Complex64::from_polar(1.25, 2.0),
            Complex64::from_polar(1.5, 0.5),
            Complex64::from_polar(1.75, 4.1),
            Complex64::from_polar(1.4, std::f64::consts::PI),
            Complex64::from_polar(1.6, 5.7),
        ],
    }
}
