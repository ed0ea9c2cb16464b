//! C ABI for the harmqc library.
//!
//! Maps are opaque handles created by `hqc_map_new_*` and released with
//! `hqc_map_free`. Every fallible call returns an `HqcStatus` code and writes
//! its results through out-pointers; `hqc_status_message` gives a static
//! description of a code. The header `include/harmqc.h` is regenerated by the
//! build script via cbindgen.

use std::ffi::{c_char, CStr};

use num_complex::Complex64;

use harmqc::geometry::{grid_injectivity, quasicircle_report};
use harmqc::hyperbolic;
use harmqc::norm::{schwarzian_norm, BoundaryTrend, NormBudget};
use harmqc::series::LaurentSeries;
use harmqc::{Domain, Error, HarmonicMap};

/// Status code of every fallible ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HqcStatus {
    Ok = 0,
    NullArgument,
    InvalidArgument,
    OutOfDomain,
    NonPositiveJacobian,
    DilatationBound,
    DegenerateDerivative,
    SeriesDivergence,
    NotJordan,
    NotCovered,
    Unsupported,
    IoError,
}

fn status_of(e: &Error) -> HqcStatus {
    match e {
        Error::OutOfValidity { .. } | Error::OutsideDomain { .. } => HqcStatus::OutOfDomain,
        Error::NonPositiveJacobian { .. } => HqcStatus::NonPositiveJacobian,
        Error::DilatationBound { .. } | Error::AffineNotSensePreserving => {
            HqcStatus::DilatationBound
        }
        Error::DegenerateDerivative { .. } => HqcStatus::DegenerateDerivative,
        Error::StencilOutsideDomain { .. } => HqcStatus::OutOfDomain,
        Error::SeriesDivergence { .. } => HqcStatus::SeriesDivergence,
        Error::NotJordan { .. } => HqcStatus::NotJordan,
        Error::NotCovered { .. } => HqcStatus::NotCovered,
        Error::UnsupportedPair | Error::NotABoundaryCircle { .. } => HqcStatus::Unsupported,
        Error::InvalidModulus { .. }
        | Error::SeriesDomainMismatch(_)
        | Error::InvalidSeries(_)
        | Error::InvalidPolyline(_)
        | Error::InvalidDomain(_)
        | Error::Config(_) => HqcStatus::InvalidArgument,
        Error::Io(_) => HqcStatus::IoError,
    }
}

/// One Laurent coefficient: `(re + i im) z^exponent`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HqcCoeff {
    pub exponent: i32,
    pub re: f64,
    pub im: f64,
}

/// Schwarzian-norm estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HqcNormEstimate {
    pub value: f64,
    pub argmax_re: f64,
    pub argmax_im: f64,
    pub samples: u64,
    pub refinement_depth: u32,
    /// 1 when the running max was still growing toward the boundary.
    pub boundary_increasing: u8,
}

/// Quasicircle certificate for one traced boundary circle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HqcCurveCertificate {
    pub jordan: u8,
    pub turning_constant: f64,
    pub turning_constant_refined: f64,
    pub samples_coarse: u64,
    pub samples_fine: u64,
    pub stable: u8,
}

/// Injectivity scan result; the witness fields are valid when `injective` is 0.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HqcInjectivityReport {
    pub injective: u8,
    pub samples: u64,
    pub z1_re: f64,
    pub z1_im: f64,
    pub z2_re: f64,
    pub z2_im: f64,
    pub image_distance: f64,
    pub domain_distance: f64,
}

/// Opaque harmonic-map handle.
pub struct HqcMap {
    inner: HarmonicMap,
}

/// # Safety
/// `ptr` must be either null (only with `len == 0`) or valid for reading
/// `len` elements.
unsafe fn coeffs(ptr: *const HqcCoeff, len: usize) -> Option<Vec<(i32, Complex64)>> {
    if len == 0 {
        return Some(Vec::new());
    }
    if ptr.is_null() {
        return None;
    }
    let slice = std::slice::from_raw_parts(ptr, len);
    Some(
        slice
            .iter()
            .map(|c| (c.exponent, Complex64::new(c.re, c.im)))
            .collect(),
    )
}

unsafe fn build_map(
    h: *const HqcCoeff,
    h_len: usize,
    g: *const HqcCoeff,
    g_len: usize,
    domain: Domain,
    out: *mut *mut HqcMap,
) -> HqcStatus {
    if out.is_null() {
        return HqcStatus::NullArgument;
    }
    let (Some(h), Some(g)) = (coeffs(h, h_len), coeffs(g, g_len)) else {
        return HqcStatus::NullArgument;
    };
    let series = |v: Vec<(i32, Complex64)>| LaurentSeries::new(v, 0.0, f64::INFINITY);
    let (hs, gs) = match (series(h), series(g)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return status_of(&e),
    };
    match HarmonicMap::new(hs, gs, domain) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(HqcMap { inner }));
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Creates a harmonic map `h + conj(g)` on the disk `|z - (cx + i cy)| < radius`.
/// Coefficients get the default whole-plane validity annulus.
///
/// # Safety
/// `h`/`g` must point to `h_len`/`g_len` readable elements (or be null with
/// length zero); `out` must be a valid destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hqc_map_new_disk(
    h: *const HqcCoeff,
    h_len: usize,
    g: *const HqcCoeff,
    g_len: usize,
    center_re: f64,
    center_im: f64,
    radius: f64,
    out: *mut *mut HqcMap,
) -> HqcStatus {
    let domain = match Domain::disk(Complex64::new(center_re, center_im), radius) {
        Ok(d) => d,
        Err(e) => return status_of(&e),
    };
    build_map(h, h_len, g, g_len, domain, out)
}

/// Creates a harmonic map on the annulus `1 < |z| < outer_radius`.
///
/// # Safety
/// Same contract as [`hqc_map_new_disk`].
#[no_mangle]
pub unsafe extern "C" fn hqc_map_new_annulus(
    h: *const HqcCoeff,
    h_len: usize,
    g: *const HqcCoeff,
    g_len: usize,
    outer_radius: f64,
    out: *mut *mut HqcMap,
) -> HqcStatus {
    let domain = match Domain::annulus(outer_radius) {
        Ok(d) => d,
        Err(e) => return status_of(&e),
    };
    build_map(h, h_len, g, g_len, domain, out)
}

/// Releases a map handle. Null is a no-op.
///
/// # Safety
/// `map` must have been returned by a constructor and not freed before.
#[no_mangle]
pub unsafe extern "C" fn hqc_map_free(map: *mut HqcMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

unsafe fn with_map<T>(
    map: *const HqcMap,
    out: *mut T,
    f: impl FnOnce(&HarmonicMap) -> Result<T, Error>,
) -> HqcStatus {
    if map.is_null() || out.is_null() {
        return HqcStatus::NullArgument;
    }
    match f(&(*map).inner) {
        Ok(v) => {
            *out = v;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Jacobian `|h'|^2 - |g'|^2` at `z = re + i im`.
///
/// # Safety
/// `map` must be a live handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_jacobian(
    map: *const HqcMap,
    re: f64,
    im: f64,
    out: *mut f64,
) -> HqcStatus {
    with_map(map, out, |f| f.jacobian(Complex64::new(re, im)))
}

/// Second dilatation `g'/h'` at `z`.
///
/// # Safety
/// `map` must be a live handle; `out_re`, `out_im` valid destinations.
#[no_mangle]
pub unsafe extern "C" fn hqc_dilatation(
    map: *const HqcMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HqcStatus {
    if map.is_null() || out_re.is_null() || out_im.is_null() {
        return HqcStatus::NullArgument;
    }
    match (*map).inner.dilatation(Complex64::new(re, im)) {
        Ok(w) => {
            *out_re = w.re;
            *out_im = w.im;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Harmonic Schwarzian derivative at `z`.
///
/// # Safety
/// `map` must be a live handle; `out_re`, `out_im` valid destinations.
#[no_mangle]
pub unsafe extern "C" fn hqc_schwarzian(
    map: *const HqcMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HqcStatus {
    if map.is_null() || out_re.is_null() || out_im.is_null() {
        return HqcStatus::NullArgument;
    }
    match (*map).inner.schwarzian(Complex64::new(re, im)) {
        Ok(s) => {
            *out_re = s.re;
            *out_im = s.im;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Adaptive estimate of `sup lambda^-2 |S_f|` over the map's domain.
/// Pass `grid = 0`, `refinements = 0` or `rel_tol <= 0` for the defaults
/// (64, 6, 1e-3).
///
/// # Safety
/// `map` must be a live handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_schwarzian_norm(
    map: *const HqcMap,
    grid: u32,
    refinements: u32,
    rel_tol: f64,
    out: *mut HqcNormEstimate,
) -> HqcStatus {
    let defaults = NormBudget::default();
    let budget = NormBudget {
        grid: if grid == 0 { defaults.grid } else { grid as usize },
        max_refinements: if refinements == 0 {
            defaults.max_refinements
        } else {
            refinements as usize
        },
        rel_tol: if rel_tol > 0.0 { rel_tol } else { defaults.rel_tol },
        margin: defaults.margin,
    };
    with_map(map, out, |f| {
        let est = schwarzian_norm(f, &budget)?;
        Ok(HqcNormEstimate {
            value: est.value,
            argmax_re: est.argmax.re,
            argmax_im: est.argmax.im,
            samples: est.samples as u64,
            refinement_depth: est.refinement_depth as u32,
            boundary_increasing: u8::from(est.boundary_trend == BoundaryTrend::Increasing),
        })
    })
}

/// Traces boundary circle `circle_index` (outer first) at `samples` and
/// `2 * samples` vertices and certifies the image curve.
///
/// # Safety
/// `map` must be a live handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_quasicircle_report(
    map: *const HqcMap,
    circle_index: u32,
    samples: u32,
    out: *mut HqcCurveCertificate,
) -> HqcStatus {
    with_map(map, out, |f| {
        let circles = f.domain().boundary_circles();
        let circle = circles
            .get(circle_index as usize)
            .ok_or(Error::Config("circle index out of range".into()))?;
        let cert = quasicircle_report(f, circle, samples.max(8) as usize)?;
        Ok(HqcCurveCertificate {
            jordan: u8::from(cert.jordan),
            turning_constant: cert.turning_constant.unwrap_or(f64::NAN),
            turning_constant_refined: cert.turning_constant_refined.unwrap_or(f64::NAN),
            samples_coarse: cert.samples.0 as u64,
            samples_fine: cert.samples.1 as u64,
            stable: u8::from(cert.stable),
        })
    })
}

/// Spatial-hash injectivity scan on an `n x n` domain grid.
///
/// # Safety
/// `map` must be a live handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_grid_injectivity(
    map: *const HqcMap,
    grid: u32,
    out: *mut HqcInjectivityReport,
) -> HqcStatus {
    with_map(map, out, |f| {
        let report = grid_injectivity(f, grid.max(2) as usize, harmqc::DEFAULT_MARGIN)?;
        Ok(match report.witness {
            None => HqcInjectivityReport {
                injective: 1,
                samples: report.samples as u64,
                z1_re: 0.0,
                z1_im: 0.0,
                z2_re: 0.0,
                z2_im: 0.0,
                image_distance: 0.0,
                domain_distance: 0.0,
            },
            Some(w) => HqcInjectivityReport {
                injective: 0,
                samples: report.samples as u64,
                z1_re: w.z1.re,
                z1_im: w.z1.im,
                z2_re: w.z2.re,
                z2_im: w.z2.im,
                image_distance: w.image_distance,
                domain_distance: w.domain_distance,
            },
        })
    })
}

/// Hyperbolic density of the disk `|z - c| < radius` at `z`.
///
/// # Safety
/// `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_density_disk(
    z_re: f64,
    z_im: f64,
    center_re: f64,
    center_im: f64,
    radius: f64,
    out: *mut f64,
) -> HqcStatus {
    if out.is_null() {
        return HqcStatus::NullArgument;
    }
    match hyperbolic::density_disk(
        Complex64::new(z_re, z_im),
        Complex64::new(center_re, center_im),
        radius,
    ) {
        Ok(v) => {
            *out = v;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Hyperbolic density of the annulus `1 < |z| < outer_radius` at `z`.
///
/// # Safety
/// `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn hqc_density_annulus(
    z_re: f64,
    z_im: f64,
    outer_radius: f64,
    out: *mut f64,
) -> HqcStatus {
    if out.is_null() {
        return HqcStatus::NullArgument;
    }
    match hyperbolic::density_annulus(Complex64::new(z_re, z_im), outer_radius) {
        Ok(v) => {
            *out = v;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Universal covering of the annulus: `z = pi(w)` and `dz = pi'(w)`.
///
/// # Safety
/// All out-pointers must be valid destinations.
#[no_mangle]
pub unsafe extern "C" fn hqc_covering_pullback(
    w_re: f64,
    w_im: f64,
    outer_radius: f64,
    out_z_re: *mut f64,
    out_z_im: *mut f64,
    out_dz_re: *mut f64,
    out_dz_im: *mut f64,
) -> HqcStatus {
    if out_z_re.is_null() || out_z_im.is_null() || out_dz_re.is_null() || out_dz_im.is_null() {
        return HqcStatus::NullArgument;
    }
    match hyperbolic::covering_pullback(Complex64::new(w_re, w_im), outer_radius) {
        Ok((z, dz)) => {
            *out_z_re = z.re;
            *out_z_im = z.im;
            *out_dz_re = dz.re;
            *out_dz_im = dz.im;
            HqcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hqc_status_message(status: HqcStatus) -> *const c_char {
    let msg: &CStr = match status {
        HqcStatus::Ok => c"ok",
        HqcStatus::NullArgument => c"null argument",
        HqcStatus::InvalidArgument => c"invalid argument",
        HqcStatus::OutOfDomain => c"point outside domain or validity annulus",
        HqcStatus::NonPositiveJacobian => c"jacobian not positive",
        HqcStatus::DilatationBound => c"dilatation bound |omega| < 1 violated",
        HqcStatus::DegenerateDerivative => c"derivative h' below tolerance",
        HqcStatus::SeriesDivergence => c"series does not decay on the boundary circle",
        HqcStatus::NotJordan => c"curve is not a Jordan curve",
        HqcStatus::NotCovered => c"point pair not covered by the decomposition",
        HqcStatus::Unsupported => c"unsupported request",
        HqcStatus::IoError => c"io error",
    };
    msg.as_ptr()
}
