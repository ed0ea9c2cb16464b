//! Subcommand orchestration: each command builds the configured map, runs the
//! relevant checks, writes `report.txt` plus its CSV outputs into the output
//! directory, and reports whether a mathematical check failed (exit code 2
//! territory) as opposed to a configuration or numeric error (exit code 1).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::RunConfig;
use crate::decomposition::{annulus_decomposition, decomposition_certificate};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geometry::{grid_injectivity, quasicircle_report, trace_boundary};
use crate::hyperbolic;
use crate::norm::schwarzian_norm;
use crate::report::{self, FieldSample, SweepRow};

/// A finished command: the human-readable report (already written to
/// `report.txt`) and whether any mathematical check failed.
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub report: String,
    pub math_failure: bool,
}

impl CommandOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.math_failure {
            2
        } else {
            0
        }
    }
}

fn ensure_out_dir(out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))
}

/// Construction failures that represent a rejected map (a mathematical
/// verdict with a witness) rather than a malformed configuration.
fn rejection(e: &Error) -> bool {
    matches!(
        e,
        Error::DilatationBound { .. } | Error::NonPositiveJacobian { .. }
    )
}

/// Norm estimate, dilatation sup, local-univalence scan, grid injectivity,
/// and a CSV dump of the weighted Schwarzian samples.
pub fn cmd_analyze(cfg: &RunConfig, out_dir: &Path) -> Result<CommandOutcome> {
    ensure_out_dir(out_dir)?;
    let mut r = String::new();
    let _ = writeln!(r, "harmqc analyze");
    let _ = writeln!(r, "domain: {}", cfg.domain);

    let f = match cfg.build_map() {
        Ok(f) => f,
        Err(e) if rejection(&e) => {
            let _ = writeln!(r, "map rejected at construction: {e}");
            let _ = writeln!(r, "result: MATH CHECK FAILED");
            report::write_report(out_dir, &r)?;
            return Ok(CommandOutcome {
                report: r,
                math_failure: true,
            });
        }
        Err(e) => return Err(e),
    };
    let _ = writeln!(r, "h: {}", f.h());
    let _ = writeln!(r, "g: {}", f.g());

    let norm = schwarzian_norm(&f, &cfg.budget())?;
    let _ = writeln!(r, "schwarzian norm: {}", report::describe_norm(&norm));

    let dil = f.dilatation_sup(cfg.grid, cfg.margin)?;
    let _ = writeln!(
        r,
        "dilatation sup: {} at z = {} (samples {})",
        report::fmt_float(dil.sup),
        report::fmt_complex(dil.argmax),
        dil.samples
    );

    let scan = f.local_univalence_scan(cfg.grid, cfg.margin)?;
    match scan.witness {
        None => {
            let _ = writeln!(
                r,
                "local univalence: PASS (min J = {} at z = {}, samples {})",
                report::fmt_float(scan.min_jacobian),
                report::fmt_complex(scan.argmin),
                scan.samples
            );
        }
        Some((z, j)) => {
            let _ = writeln!(
                r,
                "local univalence: FAIL witness z = {}, J = {}",
                report::fmt_complex(z),
                report::fmt_float(j)
            );
        }
    }

    let inj = grid_injectivity(&f, cfg.grid, cfg.margin)?;
    let _ = writeln!(
        r,
        "grid injectivity: {}",
        report::describe_injectivity(&inj)
    );

    let mut rows = Vec::new();
    for z in f.domain().sample_grid(cfg.grid, cfg.margin) {
        let s = f.schwarzian(z)?.norm();
        let lambda = hyperbolic::density(f.domain(), z)?.lambda;
        rows.push(FieldSample {
            z,
            lambda,
            schwarz_abs: s,
            weighted: s / (lambda * lambda),
        });
    }
    report::write_samples_csv(out_dir, &rows)?;

    let math_failure = scan.witness.is_some() || inj.witness.is_some();
    let _ = writeln!(
        r,
        "result: {}",
        if math_failure {
            "MATH CHECK FAILED"
        } else {
            "OK"
        }
    );
    report::write_report(out_dir, &r)?;
    Ok(CommandOutcome {
        report: r,
        math_failure,
    })
}

/// Boundary polyline CSV plus a quasicircle certificate for one boundary
/// circle of the domain.
pub fn cmd_trace(cfg: &RunConfig, out_dir: &Path) -> Result<CommandOutcome> {
    ensure_out_dir(out_dir)?;
    let mut r = String::new();
    let _ = writeln!(r, "harmqc trace");
    let _ = writeln!(r, "domain: {}", cfg.domain);

    let f = cfg.build_map()?;
    let circles = f.domain().boundary_circles();
    let circle = circles.get(cfg.circle).ok_or_else(|| {
        Error::Config(format!(
            "circle index {} out of range (domain has {} boundary circles)",
            cfg.circle,
            circles.len()
        ))
    })?;
    let _ = writeln!(
        r,
        "circle {}: center {}, radius {}",
        cfg.circle,
        report::fmt_complex(circle.center),
        report::fmt_float(circle.radius)
    );

    let curve = trace_boundary(&f, circle, cfg.trace_samples)?;
    report::write_boundary_csv(out_dir, cfg.circle, curve.points())?;

    let cert = quasicircle_report(&f, circle, cfg.trace_samples)?;
    let _ = writeln!(r, "certificate: {}", report::describe_certificate(&cert));

    let math_failure = !cert.jordan;
    let _ = writeln!(
        r,
        "result: {}",
        if math_failure {
            "MATH CHECK FAILED"
        } else {
            "OK"
        }
    );
    report::write_report(out_dir, &r)?;
    Ok(CommandOutcome {
        report: r,
        math_failure,
    })
}

/// The three-sector decomposition: piece outlines, a seeded covering sweep,
/// and per-piece image certificates.
pub fn cmd_decompose(cfg: &RunConfig, out_dir: &Path) -> Result<CommandOutcome> {
    ensure_out_dir(out_dir)?;
    let outer_radius = match cfg.domain {
        Domain::Annulus { outer_radius } => outer_radius,
        _ => {
            return Err(Error::Config(
                "decompose requires an annulus domain".into(),
            ))
        }
    };
    let mut r = String::new();
    let _ = writeln!(r, "harmqc decompose");
    let _ = writeln!(r, "domain: {}", cfg.domain);

    let f = cfg.build_map()?;
    let d = annulus_decomposition(outer_radius)?;
    for (i, piece) in d.pieces.iter().enumerate() {
        report::write_piece_csv(out_dir, i, &piece.boundary_polyline(cfg.trace_samples))?;
        let _ = writeln!(
            r,
            "piece {i}: radii ({}, {}), angles ({}, {})",
            report::fmt_float(piece.r_in),
            report::fmt_float(piece.r_out),
            report::fmt_float(piece.theta_start),
            report::fmt_float(piece.theta_end)
        );
    }

    let sweep = d.covering_sweep(cfg.trials, cfg.seed);
    match sweep.witness {
        None => {
            let _ = writeln!(
                r,
                "covering sweep: PASS ({} trials, seed {})",
                sweep.trials, cfg.seed
            );
        }
        Some(w) => {
            let _ = writeln!(
                r,
                "covering sweep: FAIL witness z1 = {}, z2 = {}",
                report::fmt_complex(w.z1),
                report::fmt_complex(w.z2)
            );
        }
    }

    let certs = decomposition_certificate(&f, &d, cfg.trace_samples, cfg.grid)?;
    let mut all_passed = sweep.passed();
    for (i, cert) in certs.iter().enumerate() {
        let _ = writeln!(
            r,
            "piece {i} image: {}; injectivity {}",
            report::describe_certificate(&cert.curve),
            report::describe_injectivity(&cert.injectivity)
        );
        all_passed &= cert.passed();
    }

    let _ = writeln!(
        r,
        "result: {}",
        if all_passed { "OK" } else { "MATH CHECK FAILED" }
    );
    report::write_report(out_dir, &r)?;
    Ok(CommandOutcome {
        report: r,
        math_failure: !all_passed,
    })
}

fn sweep_row(cfg: &RunConfig, t: f64) -> Result<SweepRow> {
    let f = match cfg.build_map_at(t) {
        Ok(f) => f,
        Err(e) if rejection(&e) => {
            return Ok(SweepRow {
                t,
                norm: None,
                sup_omega: None,
                injective: None,
                pieces_ok: None,
                status: "rejected".into(),
            })
        }
        Err(e) => return Err(e),
    };
    let norm = schwarzian_norm(&f, &cfg.budget())?;
    let dil = f.dilatation_sup(cfg.grid, cfg.margin)?;
    let inj = grid_injectivity(&f, cfg.grid, cfg.margin)?;
    let pieces_ok = match cfg.domain {
        Domain::Annulus { outer_radius } => {
            let d = annulus_decomposition(outer_radius)?;
            let certs = decomposition_certificate(&f, &d, cfg.trace_samples, cfg.grid)?;
            Some(certs.iter().all(|c| c.passed()))
        }
        _ => None,
    };
    Ok(SweepRow {
        t,
        norm: Some(norm.value),
        sup_omega: Some(dil.sup),
        injective: Some(inj.passed()),
        pieces_ok,
        status: "ok".into(),
    })
}

/// Parameter sweep over the configured family `t -> (h + t h_t, g + t g_t)`.
/// Per-row failures are recorded in the table, not raised.
pub fn cmd_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<CommandOutcome> {
    ensure_out_dir(out_dir)?;
    let spec = cfg
        .sweep
        .ok_or_else(|| Error::Config("sweep requires t_min, t_max, t_steps".into()))?;

    let mut r = String::new();
    let _ = writeln!(r, "harmqc sweep");
    let _ = writeln!(r, "domain: {}", cfg.domain);
    let _ = writeln!(
        r,
        "family: t in [{}, {}], {} steps",
        report::fmt_float(spec.t_min),
        report::fmt_float(spec.t_max),
        spec.steps
    );

    let mut rows = Vec::with_capacity(spec.steps);
    for t in spec.values() {
        rows.push(sweep_row(cfg, t)?);
    }
    report::write_sweep_csv(out_dir, &rows)?;

    let passing = |row: &SweepRow| {
        row.status == "ok"
            && row.injective == Some(true)
            && row.pieces_ok != Some(false)
    };
    match rows.iter().rev().find(|row| passing(row)) {
        Some(best) => {
            let _ = writeln!(
                r,
                "largest passing t = {} with norm estimate {}",
                report::fmt_float(best.t),
                report::fmt_float(best.norm.unwrap_or(f64::NAN))
            );
        }
        None => {
            let _ = writeln!(r, "no parameter in the range passed all checks");
        }
    }
    for row in &rows {
        let _ = writeln!(
            r,
            "t = {}: norm {}, sup|omega| {}, injective {}, status {}",
            report::fmt_float(row.t),
            row.norm.map(report::fmt_float).unwrap_or_default(),
            row.sup_omega.map(report::fmt_float).unwrap_or_default(),
            row.injective
                .map(|b| b.to_string())
                .unwrap_or_default(),
            row.status
        );
    }
    let _ = writeln!(r, "result: OK");
    report::write_report(out_dir, &r)?;
    Ok(CommandOutcome {
        report: r,
        math_failure: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    const SHEAR_DISK: &str = "h = 1 1 0\ng = 2 0.5 0\ndomain = disk\ngrid = 24\nrefinements = 3\ntrace_samples = 64\n";

    #[test]
    fn analyze_shear_passes() {
        let cfg = RunConfig::parse(SHEAR_DISK).unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_analyze(&cfg, dir.path()).unwrap();
        assert!(!out.math_failure, "{}", out.report);
        assert!(out.report.contains("schwarzian norm"));
        assert!(dir.path().join("report.txt").exists());
        assert!(dir.path().join("samples.csv").exists());
    }

    #[test]
    fn analyze_rejects_unbounded_dilatation() {
        let cfg = RunConfig::parse("h = 1 1 0\ng = 1 2 0\ndomain = disk\ngrid = 16\n").unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_analyze(&cfg, dir.path()).unwrap();
        assert!(out.math_failure);
        assert!(out.report.contains("rejected at construction"));
    }

    #[test]
    fn trace_writes_boundary_csv() {
        let cfg = RunConfig::parse(SHEAR_DISK).unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_trace(&cfg, dir.path()).unwrap();
        assert!(!out.math_failure, "{}", out.report);
        let csv = std::fs::read_to_string(dir.path().join("boundary_0.csv")).unwrap();
        assert!(csv.starts_with("# harmqc boundary v1\ntheta,re,im\n"));
        assert_eq!(csv.lines().count(), 2 + 64);
    }

    #[test]
    fn decompose_requires_annulus() {
        let cfg = RunConfig::parse(SHEAR_DISK).unwrap();
        let dir = tempdir().unwrap();
        assert!(matches!(
            cmd_decompose(&cfg, dir.path()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn decompose_identity_on_annulus() {
        let cfg = RunConfig::parse(
            "h = 1 1 0\ndomain = annulus 2\ngrid = 24\ntrials = 500\ntrace_samples = 96\n",
        )
        .unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_decompose(&cfg, dir.path()).unwrap();
        assert!(!out.math_failure, "{}", out.report);
        for i in 0..3 {
            assert!(dir.path().join(format!("piece_{i}.csv")).exists());
        }
    }

    #[test]
    fn decompose_square_map_reports_witness() {
        let cfg = RunConfig::parse(
            "h = 2 1 0\ndomain = annulus 2\ngrid = 32\ntrials = 200\ntrace_samples = 96\n",
        )
        .unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_decompose(&cfg, dir.path()).unwrap();
        assert!(out.math_failure);
        assert!(out.report.contains("FAIL witness"));
    }

    #[test]
    fn sweep_family_runs_and_is_deterministic() {
        let text = "h = 1 1 0\ng_t = 2 0.5 0\ndomain = disk\ngrid = 16\nrefinements = 2\n\
                    t_min = 0\nt_max = 1\nt_steps = 5\nseed = 4\n";
        let cfg = RunConfig::parse(text).unwrap();
        let dir_a = tempdir().unwrap();
        let dir_b = tempdir().unwrap();
        cmd_sweep(&cfg, dir_a.path()).unwrap();
        cmd_sweep(&cfg, dir_b.path()).unwrap();
        let a = std::fs::read(dir_a.path().join("sweep.csv")).unwrap();
        let b = std::fs::read(dir_b.path().join("sweep.csv")).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# harmqc sweep v1\n"));
        // t = 0 row is the identity: norm exactly zero
        let row0 = text.lines().nth(2).unwrap();
        assert!(row0.starts_with("0e0,0e0,"), "row: {row0}");
    }

    #[test]
    fn sweep_records_rejected_rows() {
        // g_t = t conj(z): rejected once t >= 1
        let text = "h = 1 1 0\ng_t = 1 1 0\ndomain = disk\ngrid = 12\nrefinements = 1\n\
                    t_min = 0\nt_max = 1.5\nt_steps = 4\n";
        let cfg = RunConfig::parse(text).unwrap();
        let dir = tempdir().unwrap();
        let out = cmd_sweep(&cfg, dir.path()).unwrap();
        assert!(!out.math_failure);
        let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        assert!(csv.contains("rejected"));
        assert!(out.report.contains("largest passing t"));
    }
}
