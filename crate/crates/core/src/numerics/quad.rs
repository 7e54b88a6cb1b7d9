//! Adaptive Gauss-Kronrod quadrature on finite intervals plus a truncated
//! semi-infinite driver.
//!
//! Semi-infinite integrals are evaluated by cutting the tail at a caller
//! supplied truncation point (derived from a certified exponential bound on
//! the integrand, see `fund_model`) and running the adaptive rule on the
//! remaining finite interval.

use crate::error::{Error, Result};

/// Tolerances and tail truncation for a semi-infinite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    abs_tol: f64,
    rel_tol: f64,
    truncation: f64,
}

/// Default absolute tolerance; the reference tables carry up to 8 decimals.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default relative tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

impl QuadratureSpec {
    /// Build a spec; tolerances must be strictly positive and the truncation
    /// point finite.
    pub fn new(abs_tol: f64, rel_tol: f64, truncation: f64) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::domain(format!(
                "quadrature tolerances must be strictly positive, got abs {abs_tol}, rel {rel_tol}"
            )));
        }
        if !truncation.is_finite() {
            return Err(Error::domain(format!(
                "truncation point must be finite, got {truncation}"
            )));
        }
        Ok(QuadratureSpec { abs_tol, rel_tol, truncation })
    }

    /// Spec with the default tolerances and the given truncation point.
    pub fn with_truncation(truncation: f64) -> Result<Self> {
        QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, truncation)
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }
}

// 21-point Kronrod nodes (positive half), embedding the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One G10/K21 evaluation on [a, b]: returns (kronrod, error_estimate).
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = 0.0;
    let mut res_kron = f_center * WGK[10];
    let mut res_abs = res_kron.abs();
    let mut fv1 = [0.0f64; 10];
    let mut fv2 = [0.0f64; 10];

    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kron += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kron += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kron;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let result = res_kron * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_kron - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

const MAX_SEGMENTS: usize = 1024;

/// Adaptive quadrature of `f` over the finite interval [a, b].
///
/// Splits the segment with the largest error estimate until the summed error
/// bound meets `max(abs_tol, rel_tol * |result|)` or the segment budget is
/// exhausted (in which case the achieved estimate is carried in the error).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }

    struct Segment {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }

    let (v, e) = qk21(&f, a, b);
    let mut segments = vec![Segment { a, b, value: v, err: e }];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err_sum: f64 = segments.iter().map(|s| s.err).sum();
        if err_sum <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature { estimate: total, error_bound: err_sum });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval no longer splittable in f64; accept what we have
            let total: f64 = segments.iter().map(|s| s.value).sum::<f64>() + seg.value;
            let err_sum: f64 = segments.iter().map(|s| s.err).sum::<f64>() + seg.err;
            return Err(Error::Quadrature { estimate: total, error_bound: err_sum });
        }
        let (v1, e1) = qk21(&f, seg.a, mid);
        let (v2, e2) = qk21(&f, mid, seg.b);
        segments.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        segments.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
    }
}

/// Integral of `f` over [lower, infinity), truncated at `spec.truncation()`.
///
/// The caller certifies that the mass beyond the truncation point is below
/// `abs_tol / 10`; the remaining finite integral is done adaptively.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, lower: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !lower.is_finite() {
        return Err(Error::domain(format!("lower bound must be finite, got {lower}")));
    }
    if spec.truncation < lower {
        return Err(Error::domain(format!(
            "truncation point {} below integration lower bound {lower}",
            spec.truncation
        )));
    }
    integrate(f, lower, spec.truncation, spec.abs_tol, spec.rel_tol)
}
