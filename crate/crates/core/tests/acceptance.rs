//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (run with `--nocapture` to see them).

mod common;

use common::{c, classical_schwarzian, corpus, test_points};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use harmqc::config::RunConfig;
use harmqc::decomposition::{annulus_decomposition, Decomposition, SectorPiece};
use harmqc::geometry::{bounded_turning, grid_injectivity, quasicircle_report, ClosedPolyline};
use harmqc::hyperbolic::{covering_pullback, density_annulus, density};
use harmqc::norm::{monotonicity_check, schwarzian_norm, BoundaryTrend, NormBudget};
use harmqc::series::LaurentSeries;
use harmqc::{Circle, Domain, HarmonicMap};

fn uniform_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random::<f64>() * TAU)
}

#[test]
fn criterion_01_analytic_reduction() {
    let start = Instant::now();
    let h = LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    let f = HarmonicMap::new(h.clone(), LaurentSeries::zero(), Domain::unit_disk()).unwrap();

    let s0 = f.schwarzian(Complex64::ZERO).unwrap();
    assert!(
        (s0 - c(-6.0, 0.0)).norm() <= 1e-12,
        "S(0) = {s0}, want -6"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut accepted = 0;
    let mut worst = 0.0_f64;
    while accepted < 200 {
        let z = uniform_disk(&mut rng, 0.999);
        if (c(1.0, 0.0) + 2.0 * z).norm() <= 0.1 {
            continue;
        }
        accepted += 1;
        let harmonic = f.schwarzian(z).unwrap();
        let classical = classical_schwarzian(&h, z);
        let rel = (harmonic - classical).norm() / classical.norm();
        worst = worst.max(rel);
        assert!(rel <= 1e-9, "z = {z}: relative error {rel}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "took {elapsed} s");
    println!(
        "[PASS] criterion 1: analytic reduction, 200 points, worst rel err {worst:.2e}, {elapsed:.3} s"
    );
}

#[test]
fn criterion_02_oracle_agreement() {
    let start = Instant::now();
    let step = 1e-4;
    let mut worst = 0.0_f64;
    let maps = corpus();
    assert_eq!(maps.len(), 6);
    for (name, f) in &maps {
        for z in test_points(f.domain()) {
            let closed = f.schwarzian(z).unwrap();
            let fd = f.schwarzian_fd(z, step).unwrap();
            let err = (closed - fd).norm();
            worst = worst.max(err);
            assert!(err <= 1e-5, "{name} at {z}: |closed - fd| = {err}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "took {elapsed} s");
    println!(
        "[PASS] criterion 2: oracle agreement on 6-map corpus, worst |diff| {worst:.2e}, {elapsed:.3} s"
    );
}

#[test]
fn criterion_03_affine_invariance() {
    let alpha = c(2.0, 1.0);
    let beta = c(0.5, 0.0);
    let gamma = c(3.0, 0.0);
    let mut worst = 0.0_f64;
    for (name, f) in &corpus() {
        let composed = f.post_compose_affine(alpha, beta, gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = match f.domain() {
                Domain::Disk { .. } => uniform_disk(&mut rng, 0.9),
                _ => {
                    let u: f64 = rng.random();
                    let r = (1.21 + u * (3.61 - 1.21)).sqrt();
                    Complex64::from_polar(r, rng.random::<f64>() * TAU)
                }
            };
            let s1 = f.schwarzian(z).unwrap();
            let s2 = composed.schwarzian(z).unwrap();
            let err = (s1 - s2).norm();
            worst = worst.max(err);
            assert!(err <= 1e-10, "{name} at {z}: |S_Af - S_f| = {err}");
        }
    }
    println!("[PASS] criterion 3: affine post-composition invariance, worst |diff| {worst:.2e}");
}

#[test]
fn criterion_04_norm_benchmark() {
    let start = Instant::now();
    let f = HarmonicMap::new(
        LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]),
        LaurentSeries::polynomial(&[c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]),
        Domain::unit_disk(),
    )
    .unwrap();
    let est = schwarzian_norm(&f, &NormBudget::default()).unwrap();
    assert!(
        (est.value - 1.5).abs() <= 0.015,
        "norm estimate {} not within 1% of 1.5",
        est.value
    );
    assert_eq!(est.boundary_trend, BoundaryTrend::Increasing);

    let mut worst = 0.0_f64;
    for z in f.domain().sample_grid(64, 1e-6) {
        let s = f.schwarzian(z).unwrap().norm();
        let lam = density(f.domain(), z).unwrap().lambda;
        let weighted = s / (lam * lam);
        let err = (weighted - 1.5 * z.norm_sqr()).abs();
        worst = worst.max(err);
        assert!(err <= 1e-6, "at {z}: weighted {weighted} vs {}", 1.5 * z.norm_sqr());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed} s");
    println!(
        "[PASS] criterion 4: norm benchmark {} (trend {}), pointwise err {worst:.2e}, {elapsed:.3} s",
        est.value, est.boundary_trend
    );
}

#[test]
fn criterion_05_covering_identity() {
    let mut worst = 0.0_f64;
    for outer_radius in [2.0, 4.0, 10.0] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let w = uniform_disk(&mut rng, 0.95);
            let (z, dz) = covering_pullback(w, outer_radius).unwrap();
            let lam = density_annulus(z, outer_radius).unwrap();
            let err = (lam * dz.norm() * (1.0 - w.norm_sqr()) - 1.0).abs();
            worst = worst.max(err);
            assert!(err <= 1e-8, "R = {outer_radius}, w = {w}: identity off by {err}");
        }
    }
    println!("[PASS] criterion 5: covering identity for R in {{2, 4, 10}}, worst dev {worst:.2e}");
}

#[test]
fn criterion_06_domain_monotonicity() {
    let sub = Domain::disk(Complex64::ZERO, 0.5).unwrap();
    let budget = NormBudget::default();
    let mut lines = Vec::new();
    for (name, f) in &corpus() {
        if !matches!(f.domain(), Domain::Disk { .. }) {
            continue;
        }
        let report = monotonicity_check(f, &sub, &Domain::unit_disk(), &budget).unwrap();
        assert!(
            report.holds,
            "{name}: ||S||_sub = {} > ||S||_disk = {}",
            report.sub.value, report.superdomain.value
        );
        if *name == "half_square_shear" {
            assert!(
                report.sub.value < report.superdomain.value,
                "expected strict inequality for the shear"
            );
        }
        if *name == "moebius" {
            // a Moebius map has vanishing Schwarzian
            assert!(report.superdomain.value <= 1e-9);
        }
        lines.push(format!(
            "{name}: {:.3e} <= {:.3e}",
            report.sub.value, report.superdomain.value
        ));
    }
    println!(
        "[PASS] criterion 6: domain monotonicity on B(0,1/2) vs disk ({})",
        lines.join("; ")
    );
}

#[test]
fn criterion_07_decomposition_covering() {
    for outer_radius in [1.1, 2.0, 10.0] {
        let d = annulus_decomposition(outer_radius).unwrap();
        // exhaustive 1-degree angular grid, radii alternating over the closure
        let radii = [1.0, outer_radius, 0.5 * (1.0 + outer_radius)];
        for a in 0..360_usize {
            for b in 0..360_usize {
                let z1 = Complex64::from_polar(radii[a % 3], PI * a as f64 / 180.0);
                let z2 = Complex64::from_polar(radii[b % 3], PI * b as f64 / 180.0);
                assert!(
                    d.covering_check(z1, z2).is_ok(),
                    "R = {outer_radius}: angles ({a}, {b}) uncovered"
                );
            }
        }
        let sweep = d.covering_sweep(10_000, 42);
        assert!(sweep.passed(), "R = {outer_radius}: random sweep failed");
    }

    // two pieces of width pi must fail with a witness
    let halves = Decomposition {
        pieces: vec![
            SectorPiece::new(1.0, 2.0, 0.0, PI).unwrap(),
            SectorPiece::new(1.0, 2.0, PI, TAU).unwrap(),
        ],
        ambient: Domain::annulus(2.0).unwrap(),
    };
    let sweep = halves.covering_sweep(10_000, 42);
    let w = sweep.witness.expect("width-pi pieces cannot cover");
    assert!(halves.covering_check(w.z1, w.z2).is_err());
    println!(
        "[PASS] criterion 7: covering exhaustive + 10^4 random pairs for R in {{1.1, 2, 10}}; width-pi counterexample refuted at ({}, {})",
        w.z1, w.z2
    );
}

#[test]
fn criterion_08_quasicircle_certification() {
    // circle at n = 512
    let circle = ClosedPolyline::new(
        (0..512)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 512.0))
            .collect(),
    )
    .unwrap();
    let t_circle = bounded_turning(&circle).unwrap();
    assert!(
        (t_circle - 1.0).abs() <= 0.05,
        "circle constant {t_circle}"
    );

    // ellipse 1.3/0.7 as the image of the unit circle under z + 0.3 conj(z)
    let f = HarmonicMap::new(
        LaurentSeries::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]),
        LaurentSeries::polynomial(&[c(0.0, 0.0), c(0.3, 0.0)]),
        Domain::unit_disk(),
    )
    .unwrap();
    let cert = quasicircle_report(&f, &Circle::new(Complex64::ZERO, 1.0), 512).unwrap();
    assert!(cert.jordan);
    let t1 = cert.turning_constant.unwrap();
    let t2 = cert.turning_constant_refined.unwrap();
    assert!(
        (t2 - t1).abs() < 0.05 * t1,
        "ellipse constant moved {t1} -> {t2} under doubling"
    );

    // near-slit: two unit segments meeting at angle pi/100
    let m = 64;
    let dir = Complex64::from_polar(1.0, PI / 100.0);
    let mut pts = vec![Complex64::ZERO];
    pts.extend((1..=m).map(|j| c(j as f64 / m as f64, 0.0)));
    pts.extend((1..=m).rev().map(|j| dir * (j as f64 / m as f64)));
    let slit = ClosedPolyline::new(pts).unwrap();
    let t_slit = bounded_turning(&slit).unwrap();
    assert!(t_slit > 10.0, "near-slit constant {t_slit}");

    println!(
        "[PASS] criterion 8: circle {t_circle:.3}, ellipse {t1:.3}->{t2:.3} (stable), near-slit {t_slit:.1}"
    );
}

#[test]
fn criterion_09_injectivity_oracles() {
    // z^2 on annulus(2): the witness pair must be antipodal to 1e-6 relative
    let square = HarmonicMap::new(
        LaurentSeries::monomial(2, c(1.0, 0.0)).unwrap(),
        LaurentSeries::zero(),
        Domain::annulus(2.0).unwrap(),
    )
    .unwrap();
    let report = grid_injectivity(&square, 64, 1e-6).unwrap();
    let w = report.witness.expect("z^2 is two-to-one on the annulus");
    assert!(
        (w.z1 + w.z2).norm() <= 1e-6 * w.z1.norm(),
        "witness ({}, {}) not antipodal",
        w.z1,
        w.z2
    );

    // spatial hash agrees with all-pairs on 50 x 50 grids for the corpus
    for (name, f) in &corpus() {
        let points = f.domain().sample_grid(50, 1e-6);
        let images: Vec<Complex64> = points.iter().map(|&z| f.value(z).unwrap()).collect();
        let fast = grid_injectivity(f, 50, 1e-6).unwrap();
        let mut brute_pass = true;
        'outer: for i in 0..points.len() {
            for j in 0..i {
                if (images[i] - images[j]).norm() < fast.collision_tol
                    && (points[i] - points[j]).norm() > fast.separation
                {
                    brute_pass = false;
                    break 'outer;
                }
            }
        }
        assert_eq!(
            fast.passed(),
            brute_pass,
            "{name}: spatial hash disagrees with all-pairs"
        );
    }
    println!(
        "[PASS] criterion 9: z^2 witness antipodal ({} vs {}), hash = all-pairs on corpus",
        w.z1, w.z2
    );
}

#[test]
fn criterion_10_sweep_sanity() {
    let text = "h = 1 1 0\ng_t = 2 0.5 0\ndomain = disk\nseed = 11\n\
                t_min = 0\nt_max = 1\nt_steps = 11\n";
    let cfg = RunConfig::parse(text).unwrap();

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    harmqc::commands::cmd_sweep(&cfg, dir_a.path()).unwrap();
    harmqc::commands::cmd_sweep(&cfg, dir_b.path()).unwrap();

    let bytes_a = std::fs::read(dir_a.path().join("sweep.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.path().join("sweep.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "sweep output is not deterministic");

    let csv = String::from_utf8(bytes_a).unwrap();
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(2)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            (cols[0].parse().unwrap(), cols[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0].1, 0.0, "t = 0 row must report norm 0");
    // strictly increasing norm on t in [0.1, 0.9]
    for pair in rows[1..=9].windows(2) {
        assert!(
            pair[1].1 > pair[0].1,
            "norm not strictly increasing: {} at t = {} vs {} at t = {}",
            pair[0].1,
            pair[0].0,
            pair[1].1,
            pair[1].0
        );
    }
    println!(
        "[PASS] criterion 10: sweep deterministic, norm strictly increasing on [0.1, 0.9] ({} rows)",
        rows.len()
    );
}
