//! Probability that four random collinear points admit an equal-angle witness.
//!
//! # Euclidean case
//!
//! Put `A = 1`, `D = 0` and draw `B > C` as the order statistics of two
//! uniform points. The witness condition `(BC/BA) / (DC/DA) < 3` reads
//! `(b − c) / ((1 − b) c) < 3`, i.e. `b − c < 3c − 3bc`, i.e.
//!
//! ```text
//! b (1 + 3c) < 4c      ⇔      b < 4c / (1 + 3c).
//! ```
//!
//! Since `c ≤ 4c/(1+3c) ≤ 1` on `[0, 1]`, the ordered pair `(b, c)` (density 2
//! on the triangle `c < b`) succeeds with probability
//!
//! ```text
//! 2 ∫₀¹ (4c/(1+3c) − c) dc = 2 (4/3 − (8/9) ln 2 − 1/2) = (15 − 16 ln 2) / 9.
//! ```
//!
//! # Hyperbolic case
//!
//! Heights are drawn with density proportional to `1/y` on `[d, a]`. With
//! `R = a/d`, `L = ln R` and heights `d·e^{Lu}`, `d·e^{Lv}` for `u > v`, the
//! witness condition on squared heights `X = e^{2Lu}`, `Y = e^{2Lv}` is
//!
//! ```text
//! (X − Y)(R² − 1) < 3 (R² − X)(Y − 1),
//! ```
//!
//! which is linear in `X` and holds exactly for `X < X*(Y)`. Writing
//! `m = Y − 1` and `k = R² − 1`, `X* − 1 = 4mk / (k + 3m)`, so the success
//! region is `v < u < ln(1 + 4mk/(k+3m)) / (2L)` and the probability reduces
//! to a smooth one-dimensional integral. The value depends on `R`; it tends
//! to the Euclidean value as `R → 1` and decreases toward zero as `R` grows.

pub mod quadrature;
pub mod stream;

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourpoint::{exists_euclid, exists_hyper, FourConfig};
use quadrature::adaptive_simpson;
pub use stream::{SampleStream, StreamFamily};

/// Reference decimal for the hyperbolic probability; the default calibration
/// target. It differs from [`ph_closed_form_printed`] in the ninth digit.
pub const PH_PRINTED: f64 = 0.4201514924;

/// A Monte Carlo estimate of a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbEstimate {
    pub mean: f64,
    /// `√(mean (1 − mean) / n)`.
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

impl ProbEstimate {
    fn from_count(successes: u64, n: u64, seed: u64) -> Self {
        let mean = successes as f64 / n as f64;
        ProbEstimate {
            mean,
            stderr: (mean * (1.0 - mean) / n as f64).sqrt(),
            n,
            seed,
        }
    }
}

/// Endpoint ratio `a/d` of the hyperbolic segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperProbSetup {
    ratio: f64,
}

impl HyperProbSetup {
    pub fn new(ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(Error::invalid("ratio", format!("must be finite and > 1, got {ratio}")));
        }
        Ok(HyperProbSetup { ratio })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Length of the segment in the log measure.
    pub fn log_length(&self) -> f64 {
        self.ratio.ln()
    }
}

/// `(15 − 16 ln 2) / 9`.
pub fn pe_closed_form() -> f64 {
    (15.0 - 16.0 * std::f64::consts::LN_2) / 9.0
}

/// Reference closed form `(2√5 ln(2 + √5) − 5) / (5 ln 2)` for the
/// hyperbolic probability. It is not [`ph_quadrature`] at any particular
/// ratio; see [`calibrate_ratio`].
pub fn ph_closed_form_printed() -> f64 {
    let s5 = 5f64.sqrt();
    (2.0 * s5 * (2.0 + s5).ln() - 5.0) / (5.0 * std::f64::consts::LN_2)
}

/// Euclidean configuration `(1, max(u,v), min(u,v), 0)`.
pub fn euclid_config_from_uniforms(u: f64, v: f64) -> Result<FourConfig> {
    FourConfig::euclid(1.0, u.max(v), u.min(v), 0.0)
}

/// Draws `(1, b, c, 0)` with `b > c` the order statistics of two uniforms.
pub fn sample_config_euclid(stream: &mut SampleStream) -> FourConfig {
    sample_config_euclid_on(stream, 1.0, 0.0)
}

/// Like [`sample_config_euclid`] on the segment from `d` up to `a`.
pub fn sample_config_euclid_on(stream: &mut SampleStream, a: f64, d: f64) -> FourConfig {
    loop {
        let (hi, lo) = stream.ordered_pair();
        let len = a - d;
        if let Ok(cfg) = FourConfig::euclid(a, d + len * hi, d + len * lo, d) {
            return cfg;
        }
    }
}

/// Height `e^{uL}` in `[1, ratio]`.
pub fn hyper_height(setup: &HyperProbSetup, u: f64) -> f64 {
    (u * setup.log_length()).exp()
}

/// Draws `(ratio, b, c, 1)` with `b > c` log-uniform on `[1, ratio]`.
pub fn sample_config_hyper(stream: &mut SampleStream, setup: &HyperProbSetup) -> FourConfig {
    sample_config_hyper_on(stream, 1.0, setup.ratio)
}

/// Like [`sample_config_hyper`] on the segment from `d` up to `a`.
pub fn sample_config_hyper_on(stream: &mut SampleStream, d: f64, a: f64) -> FourConfig {
    let log_len = (a / d).ln();
    loop {
        let (hi, lo) = stream.ordered_pair();
        let b = d * (hi * log_len).exp();
        let c = d * (lo * log_len).exp();
        if let Ok(cfg) = FourConfig::hyper(a, b, c, d) {
            return cfg;
        }
    }
}

fn check_count(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one sample"));
    }
    Ok(())
}

fn count_successes<F>(n: u64, seed: u64, success: F) -> u64
where
    F: Fn(&mut SampleStream) -> bool + Sync,
{
    let family = StreamFamily::new(seed);
    (0..n)
        .into_par_iter()
        .filter(|&i| success(&mut family.stream(i)))
        .count() as u64
}

/// Witness indicators of the Euclidean samples with the given indices, drawn
/// on the segment `[d, a]`.
pub fn euclid_indicators(seed: u64, indices: Range<u64>, a: f64, d: f64) -> Vec<bool> {
    let family = StreamFamily::new(seed);
    indices
        .map(|i| {
            let cfg = sample_config_euclid_on(&mut family.stream(i), a, d);
            matches!(exists_euclid(&cfg), Ok(true))
        })
        .collect()
}

/// Witness indicators of the hyperbolic samples with the given indices,
/// drawn on the segment `[d, a]`.
pub fn hyper_indicators(seed: u64, indices: Range<u64>, d: f64, a: f64) -> Vec<bool> {
    let family = StreamFamily::new(seed);
    indices
        .map(|i| {
            let cfg = sample_config_hyper_on(&mut family.stream(i), d, a);
            matches!(exists_hyper(&cfg), Ok(true))
        })
        .collect()
}

/// Fraction of uniform Euclidean configurations admitting a witness.
///
/// Runs on the current rayon pool; the result does not depend on its size.
pub fn estimate_pe(n: u64, seed: u64) -> Result<ProbEstimate> {
    check_count(n)?;
    let hits = count_successes(n, seed, |s| {
        matches!(exists_euclid(&sample_config_euclid(s)), Ok(true))
    });
    Ok(ProbEstimate::from_count(hits, n, seed))
}

/// Fraction of log-uniform hyperbolic configurations admitting a witness.
pub fn estimate_ph(n: u64, seed: u64, setup: &HyperProbSetup) -> Result<ProbEstimate> {
    check_count(n)?;
    let hits = count_successes(n, seed, |s| {
        matches!(exists_hyper(&sample_config_hyper(s, setup)), Ok(true))
    });
    Ok(ProbEstimate::from_count(hits, n, seed))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    Ok(())
}

/// `2 ∫₀¹ (4c/(1+3c) − c) dc` by adaptive quadrature.
pub fn pe_quadrature(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    // The doubled integrand carries the factor 2, so halve the tolerance.
    Ok(adaptive_simpson(
        |c| 2.0 * (4.0 * c / (1.0 + 3.0 * c) - c),
        0.0,
        1.0,
        0.5 * tol,
    ))
}

/// Hyperbolic success probability for endpoint ratio `R`.
pub fn ph_quadrature(setup: &HyperProbSetup, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let log_len = setup.log_length();
    let k = (2.0 * log_len).exp_m1();
    let inner = |v: f64| {
        let m = (2.0 * log_len * v).exp_m1();
        let upper = (4.0 * m * k / (k + 3.0 * m)).ln_1p() / (2.0 * log_len);
        2.0 * (upper - v)
    };
    Ok(adaptive_simpson(inner, 0.0, 1.0, 0.5 * tol).clamp(0.0, 1.0))
}

/// [`ph_quadrature`] evaluated from the raw endpoint heights `d < a`, without
/// normalizing `d` to 1 first.
pub fn ph_quadrature_on(d: f64, a: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(d > 0.0 && a > d && a.is_finite()) {
        return Err(Error::invalid("endpoints", format!("need 0 < d < a, got d={d}, a={a}")));
    }
    let log_len = (a / d).ln();
    let (a2, d2) = (a * a, d * d);
    let inner = |v: f64| {
        let y = d * (log_len * v).exp();
        let y2 = y * y;
        let x2 = (y2 * (a2 - d2) + 3.0 * a2 * (y2 - d2)) / ((a2 - d2) + 3.0 * (y2 - d2));
        let upper = (x2 / d2).ln() / (2.0 * log_len);
        2.0 * (upper - v)
    };
    Ok(adaptive_simpson(inner, 0.0, 1.0, 0.5 * tol).clamp(0.0, 1.0))
}

fn ph_at(ratio: f64, tol: f64) -> Result<f64> {
    ph_quadrature(&HyperProbSetup::new(ratio)?, tol)
}

/// Endpoint ratio at which [`ph_quadrature`] equals `target` to within
/// `tol`, found by bisection in `ln ratio` over `bracket`.
pub fn calibrate_ratio(target: f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let quad_tol = (tol * 1e-2).max(1e-14);
    let (mut lo, mut hi) = bracket;
    let f_lo = ph_at(lo, quad_tol)? - target;
    let f_hi = ph_at(hi, quad_tol)? - target;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(Error::NoStraddle {
            target,
            lo_value: f_lo + target,
            hi_value: f_hi + target,
        });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        let f_mid = ph_at(mid, quad_tol)? - target;
        if f_mid.abs() <= tol || hi / lo - 1.0 < 1e-15 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo.ln() + hi.ln())).exp())
}

/// Outcome of searching for the endpoint ratio that reproduces a target
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub target: f64,
    pub bracket: (f64, f64),
    /// Ratio found by [`calibrate_ratio`], if the bracket straddles the target.
    pub ratio: Option<f64>,
    /// `ph_quadrature` at the found ratio.
    pub value: Option<f64>,
    /// Whether the found value lies within `match_tol` of the target.
    pub reproduces: bool,
    pub match_tol: f64,
    /// `(ratio, ph_quadrature(ratio))` for the fixed candidate ratios.
    pub candidates: Vec<(f64, f64)>,
}

pub const CALIBRATION_CANDIDATES: [f64; 2] = [2.0, 32.0];

pub fn calibration_report(target: f64, bracket: (f64, f64), match_tol: f64) -> Result<CalibrationReport> {
    let candidates = CALIBRATION_CANDIDATES
        .iter()
        .map(|&r| Ok((r, ph_at(r, 1e-12)?)))
        .collect::<Result<Vec<_>>>()?;
    let ratio = match calibrate_ratio(target, bracket, match_tol * 1e-3) {
        Ok(r) => Some(r),
        Err(Error::NoStraddle { .. }) => None,
        Err(e) => return Err(e),
    };
    let value = ratio.map(|r| ph_at(r, 1e-12)).transpose()?;
    Ok(CalibrationReport {
        target,
        bracket,
        ratio,
        value,
        reproduces: value.is_some_and(|v| (v - target).abs() <= match_tol),
        match_tol,
        candidates,
    })
}
