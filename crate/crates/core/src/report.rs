//! Deterministic plain-text report fragments and versioned CSV writers.
//!
//! All floating-point output uses shortest-roundtrip scientific notation, so
//! identical runs produce byte-identical files.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{ClosedPolyline, CurveCertificate, InjectivityReport};
use crate::norm::NormEstimate;

pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("({}, {})", fmt_float(z.re), fmt_float(z.im))
}

pub fn describe_norm(est: &NormEstimate) -> String {
    let mut s = format!(
        "value {} at z = {}, samples {}, refinement depth {}, boundary trend {}",
        fmt_float(est.value),
        fmt_complex(est.argmax),
        est.samples,
        est.refinement_depth,
        est.boundary_trend
    );
    if let Some((lo, hi)) = est.bounds {
        let _ = write!(s, ", interval [{}, {}]", fmt_float(lo), fmt_float(hi));
    }
    s
}

pub fn describe_certificate(cert: &CurveCertificate) -> String {
    if !cert.jordan {
        let w = cert.witness.expect("non-jordan certificates carry a witness");
        return format!(
            "NOT JORDAN (segments {} and {} intersect, samples {}/{})",
            w.seg_a, w.seg_b, cert.samples.0, cert.samples.1
        );
    }
    format!(
        "jordan, turning constant {} (at {} samples) / {} (at {}), {}",
        fmt_float(cert.turning_constant.unwrap_or(f64::NAN)),
        cert.samples.0,
        fmt_float(cert.turning_constant_refined.unwrap_or(f64::NAN)),
        cert.samples.1,
        if cert.stable { "stable" } else { "UNSTABLE" }
    )
}

pub fn describe_injectivity(report: &InjectivityReport) -> String {
    match &report.witness {
        None => format!(
            "PASS (samples {}, collision tol {}, separation {})",
            report.samples,
            fmt_float(report.collision_tol),
            fmt_float(report.separation)
        ),
        Some(w) => format!(
            "FAIL witness z1 = {}, z2 = {}, |f(z1)-f(z2)| = {}, |z1-z2| = {}",
            fmt_complex(w.z1),
            fmt_complex(w.z2),
            fmt_float(w.image_distance),
            fmt_float(w.domain_distance)
        ),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_report(out_dir: &Path, report: &str) -> Result<()> {
    write_file(&out_dir.join("report.txt"), report)
}

/// One row of the weighted-Schwarzian field dump.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub z: Complex64,
    pub lambda: f64,
    pub schwarz_abs: f64,
    pub weighted: f64,
}

pub fn write_samples_csv(out_dir: &Path, rows: &[FieldSample]) -> Result<()> {
    let mut s = String::from("# harmqc samples v1\nre,im,lambda,schwarz_abs,weighted\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_float(r.z.re),
            fmt_float(r.z.im),
            fmt_float(r.lambda),
            fmt_float(r.schwarz_abs),
            fmt_float(r.weighted)
        );
    }
    write_file(&out_dir.join("samples.csv"), &s)
}

/// Boundary trace: `theta, Re f, Im f` at equally spaced parameters.
pub fn write_boundary_csv(out_dir: &Path, index: usize, points: &[Complex64]) -> Result<()> {
    let mut s = String::from("# harmqc boundary v1\ntheta,re,im\n");
    let n = points.len();
    for (k, p) in points.iter().enumerate() {
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_float(theta),
            fmt_float(p.re),
            fmt_float(p.im)
        );
    }
    write_file(&out_dir.join(format!("boundary_{index}.csv")), &s)
}

/// Decomposition piece outline: `param in [0,1), re, im`.
pub fn write_piece_csv(out_dir: &Path, index: usize, poly: &ClosedPolyline) -> Result<()> {
    let mut s = String::from("# harmqc piece v1\nparam,re,im\n");
    let n = poly.len();
    for (k, p) in poly.points().iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_float(k as f64 / n as f64),
            fmt_float(p.re),
            fmt_float(p.im)
        );
    }
    write_file(&out_dir.join(format!("piece_{index}.csv")), &s)
}

/// One sweep table row. `None` entries print as empty cells.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub t: f64,
    pub norm: Option<f64>,
    pub sup_omega: Option<f64>,
    pub injective: Option<bool>,
    pub pieces_ok: Option<bool>,
    pub status: String,
}

pub fn write_sweep_csv(out_dir: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut s = String::from("# harmqc sweep v1\nt,norm,sup_omega,injective,pieces_ok,status\n");
    let opt_f = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    let opt_b = |v: Option<bool>| match v {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => String::new(),
    };
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_float(r.t),
            opt_f(r.norm),
            opt_f(r.sup_omega),
            opt_b(r.injective),
            opt_b(r.pieces_ok),
            r.status
        );
    }
    write_file(&out_dir.join("sweep.csv"), &s)
}
