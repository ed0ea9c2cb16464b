//! Run configuration: a flat key-value text format with repeated keys for
//! series coefficients.
//!
//! ```text
//! # comment
//! h = 1 1.0 0.0          # coefficient of z^1 in h: "exponent re im"
//! g = 2 0.0 0.5          # repeated keys accumulate
//! h_t = ...               # sweep families: coefficient slopes in t
//! g_t = 2 0.25 0.0
//! domain = disk           # or: disk <cx> <cy> <r> | annulus <R>
//!                         # or: circles <cx cy r> ; <cx cy r> ; ...
//! h_validity = 0 inf      # optional validity annulus override
//! grid = 64
//! refinements = 6
//! rel_tol = 1e-3
//! margin = 1e-6
//! seed = 42
//! trials = 10000
//! circle = 0
//! trace_samples = 512
//! t_min = 0.0
//! t_max = 1.0
//! t_steps = 11
//! ```

use num_complex::Complex64;
use std::path::Path;

use crate::domain::{Circle, Domain, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::map::HarmonicMap;
use crate::norm::NormBudget;
use crate::series::LaurentSeries;

/// Sweep family specification: coefficients affine in the parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.steps;
        (0..n).map(move |i| {
            self.t_min + (self.t_max - self.t_min) * i as f64 / (n - 1) as f64
        })
    }
}

/// Parsed run configuration shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub h: Vec<(i32, Complex64)>,
    pub g: Vec<(i32, Complex64)>,
    pub h_slope: Vec<(i32, Complex64)>,
    pub g_slope: Vec<(i32, Complex64)>,
    pub h_validity: Option<(f64, f64)>,
    pub g_validity: Option<(f64, f64)>,
    pub domain: Domain,
    pub grid: usize,
    pub refinements: usize,
    pub rel_tol: f64,
    pub margin: f64,
    pub seed: u64,
    pub trials: usize,
    pub circle: usize,
    pub trace_samples: usize,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h: Vec::new(),
            g: Vec::new(),
            h_slope: Vec::new(),
            g_slope: Vec::new(),
            h_validity: None,
            g_validity: None,
            domain: Domain::unit_disk(),
            grid: 64,
            refinements: 6,
            rel_tol: 1e-3,
            margin: DEFAULT_MARGIN,
            seed: 0,
            trials: 10_000,
            circle: 0,
            trace_samples: 512,
            sweep: None,
        }
    }
}

fn parse_float(tok: &str, key: &str) -> Result<f64> {
    if tok.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    tok.parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{tok}' as a number")))
}

fn parse_coeff(value: &str, key: &str) -> Result<(i32, Complex64)> {
    let toks: Vec<&str> = value.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(Error::Config(format!(
            "{key}: expected 'exponent re im', got '{value}'"
        )));
    }
    let k = toks[0]
        .parse::<i32>()
        .map_err(|_| Error::Config(format!("{key}: bad exponent '{}'", toks[0])))?;
    let re = parse_float(toks[1], key)?;
    let im = parse_float(toks[2], key)?;
    Ok((k, Complex64::new(re, im)))
}

fn parse_domain(value: &str) -> Result<Domain> {
    let toks: Vec<&str> = value.split_whitespace().collect();
    match toks.first() {
        Some(&"disk") if toks.len() == 1 => Ok(Domain::unit_disk()),
        Some(&"disk") if toks.len() == 4 => Domain::disk(
            Complex64::new(
                parse_float(toks[1], "domain")?,
                parse_float(toks[2], "domain")?,
            ),
            parse_float(toks[3], "domain")?,
        ),
        Some(&"annulus") if toks.len() == 2 => Domain::annulus(parse_float(toks[1], "domain")?),
        Some(&"circles") => {
            let rest = value.trim_start_matches("circles").trim();
            let mut circles = Vec::new();
            for part in rest.split(';') {
                let t: Vec<&str> = part.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(Error::Config(format!(
                        "domain circles: expected 'cx cy r', got '{part}'"
                    )));
                }
                circles.push(Circle::new(
                    Complex64::new(
                        parse_float(t[0], "domain")?,
                        parse_float(t[1], "domain")?,
                    ),
                    parse_float(t[2], "domain")?,
                ));
            }
            if circles.is_empty() {
                return Err(Error::Config("domain circles: no circles given".into()));
            }
            let outer = circles.remove(0);
            Domain::circle_domain(outer, circles)
        }
        _ => Err(Error::Config(format!(
            "domain: expected 'disk [cx cy r]', 'annulus R' or 'circles ...', got '{value}'"
        ))),
    }
}

fn parse_validity(value: &str, key: &str) -> Result<(f64, f64)> {
    let toks: Vec<&str> = value.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Config(format!(
            "{key}: expected 'r_inner r_outer', got '{value}'"
        )));
    }
    Ok((parse_float(toks[0], key)?, parse_float(toks[1], key)?))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut saw_domain = false;
        let mut t_min = None;
        let mut t_max = None;
        let mut t_steps = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "h" => cfg.h.push(parse_coeff(value, key)?),
                "g" => cfg.g.push(parse_coeff(value, key)?),
                "h_t" => cfg.h_slope.push(parse_coeff(value, key)?),
                "g_t" => cfg.g_slope.push(parse_coeff(value, key)?),
                "h_validity" => cfg.h_validity = Some(parse_validity(value, key)?),
                "g_validity" => cfg.g_validity = Some(parse_validity(value, key)?),
                "domain" => {
                    cfg.domain = parse_domain(value)?;
                    saw_domain = true;
                }
                "grid" => {
                    cfg.grid = value
                        .parse()
                        .map_err(|_| Error::Config(format!("grid: bad count '{value}'")))?
                }
                "refinements" => {
                    cfg.refinements = value.parse().map_err(|_| {
                        Error::Config(format!("refinements: bad count '{value}'"))
                    })?
                }
                "rel_tol" => cfg.rel_tol = parse_float(value, key)?,
                "margin" => cfg.margin = parse_float(value, key)?,
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| Error::Config(format!("seed: bad integer '{value}'")))?
                }
                "trials" => {
                    cfg.trials = value
                        .parse()
                        .map_err(|_| Error::Config(format!("trials: bad count '{value}'")))?
                }
                "circle" => {
                    cfg.circle = value
                        .parse()
                        .map_err(|_| Error::Config(format!("circle: bad index '{value}'")))?
                }
                "trace_samples" => {
                    cfg.trace_samples = value.parse().map_err(|_| {
                        Error::Config(format!("trace_samples: bad count '{value}'"))
                    })?
                }
                "t_min" => t_min = Some(parse_float(value, key)?),
                "t_max" => t_max = Some(parse_float(value, key)?),
                "t_steps" => {
                    t_steps = Some(value.parse::<usize>().map_err(|_| {
                        Error::Config(format!("t_steps: bad count '{value}'"))
                    })?)
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }

        if !saw_domain {
            return Err(Error::Config("missing 'domain' key".into()));
        }
        if cfg.h.is_empty() {
            return Err(Error::Config("missing 'h' coefficients".into()));
        }
        if cfg.grid == 0 || cfg.trace_samples < 4 {
            return Err(Error::Config("grid and trace_samples must be positive".into()));
        }
        let margin_ok = cfg.margin > 0.0 && cfg.margin < 0.5;
        if cfg.rel_tol <= 0.0 || cfg.rel_tol.is_nan() || !margin_ok {
            return Err(Error::Config(
                "rel_tol must be positive and margin in (0, 0.5)".into(),
            ));
        }
        match (t_min, t_max, t_steps) {
            (None, None, None) => {}
            (Some(a), Some(b), Some(n)) => {
                if a >= b || a.is_nan() || b.is_nan() || n < 2 {
                    return Err(Error::Config(
                        "sweep needs t_min < t_max and t_steps >= 2".into(),
                    ));
                }
                cfg.sweep = Some(SweepSpec {
                    t_min: a,
                    t_max: b,
                    steps: n,
                });
            }
            _ => {
                return Err(Error::Config(
                    "sweep needs all of t_min, t_max, t_steps".into(),
                ))
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    fn series(
        coeffs: &[(i32, Complex64)],
        validity: Option<(f64, f64)>,
    ) -> Result<LaurentSeries> {
        let (r_inner, r_outer) = validity.unwrap_or((0.0, f64::INFINITY));
        LaurentSeries::new(coeffs.iter().copied(), r_inner, r_outer)
    }

    /// The configured map at the base coefficients (sweep slopes ignored).
    pub fn build_map(&self) -> Result<HarmonicMap> {
        HarmonicMap::new(
            Self::series(&self.h, self.h_validity)?,
            Self::series(&self.g, self.g_validity)?,
            self.domain.clone(),
        )
    }

    /// The family member at parameter `t`: coefficients `base + t * slope`.
    pub fn build_map_at(&self, t: f64) -> Result<HarmonicMap> {
        let at = |base: &[(i32, Complex64)],
                  slope: &[(i32, Complex64)],
                  validity: Option<(f64, f64)>| {
            let coeffs = base
                .iter()
                .copied()
                .chain(slope.iter().map(|&(k, c)| (k, t * c)));
            let (r_inner, r_outer) = validity.unwrap_or((0.0, f64::INFINITY));
            LaurentSeries::new(coeffs, r_inner, r_outer)
        };
        HarmonicMap::new(
            at(&self.h, &self.h_slope, self.h_validity)?,
            at(&self.g, &self.g_slope, self.g_validity)?,
            self.domain.clone(),
        )
    }

    pub fn budget(&self) -> NormBudget {
        NormBudget {
            grid: self.grid,
            max_refinements: self.refinements,
            rel_tol: self.rel_tol,
            margin: self.margin,
        }
    }
}
