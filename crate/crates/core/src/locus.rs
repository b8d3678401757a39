//! The hyperbolic Apollonius curve and its Euclidean counterpart.
//!
//! For heights `a > b > c > 0` the locus is `α r⁴ − 2β r² cos 2θ − γ = 0` with
//!
//! ```text
//! α = 2b² − a² − c²,   β = a²c² − b⁴,   γ = b²(2a²c² − a²b² − c²b²).
//! ```
//!
//! Read as a quadratic in `s = r²` it is solved per polar angle, which is how
//! the curve is sampled. Its shape falls into seven regimes according to where
//! `b` sits relative to the quadratic, geometric and harmonic-quadratic means
//! of `a` and `c`.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::halfplane::{check_decreasing, unsigned_angle, HPoint, Vec2};

/// Relative tolerance used to detect the three boundary regimes.
pub const DEFAULT_CLASSIFY_EPS: f64 = 1e-12;

/// Roots `s = r²` at or below this are the lemniscate's node at the origin.
pub const MIN_ROOT: f64 = 1e-300;

/// Samples with `|cos θ|` below this sit on the y-axis, where the equal-angle
/// condition is undefined.
pub const AXIS_EXCLUSION: f64 = 1e-6;

/// Heights of `A(0,a)`, `B(0,b)`, `C(0,c)` with `a > b > c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleConfig {
    a: f64,
    b: f64,
    c: f64,
}

impl TripleConfig {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositive { name, value: v });
            }
        }
        check_decreasing(&[a, b, c])?;
        Ok(TripleConfig { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        TripleConfig::new(lambda * self.a, lambda * self.b, lambda * self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// The seven shapes of the locus, ordered from large to small `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocusClass {
    /// `b > Q`: the far analog of the below-harmonic case.
    AboveQuadratic,
    /// `b = Q`: half of the hyperbola `r² cos 2θ + b² = 0`.
    QuadraticHyperbola,
    BetweenGeometricAndQuadratic,
    /// `b = G`: the semicircle `r = b`.
    GeometricCircle,
    BetweenHarmonicAndGeometric,
    /// `b = H`: half of the lemniscate `r² + b² cos 2θ = 0`.
    HarmonicLemniscate,
    BelowHarmonic,
}

impl LocusClass {
    pub const ALL: [LocusClass; 7] = [
        LocusClass::AboveQuadratic,
        LocusClass::QuadraticHyperbola,
        LocusClass::BetweenGeometricAndQuadratic,
        LocusClass::GeometricCircle,
        LocusClass::BetweenHarmonicAndGeometric,
        LocusClass::HarmonicLemniscate,
        LocusClass::BelowHarmonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LocusClass::AboveQuadratic => "AboveQuadratic",
            LocusClass::QuadraticHyperbola => "QuadraticHyperbola",
            LocusClass::BetweenGeometricAndQuadratic => "BetweenGeometricAndQuadratic",
            LocusClass::GeometricCircle => "GeometricCircle",
            LocusClass::BetweenHarmonicAndGeometric => "BetweenHarmonicAndGeometric",
            LocusClass::HarmonicLemniscate => "HarmonicLemniscate",
            LocusClass::BelowHarmonic => "BelowHarmonic",
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            LocusClass::QuadraticHyperbola
                | LocusClass::GeometricCircle
                | LocusClass::HarmonicLemniscate
        )
    }
}

impl fmt::Display for LocusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the curve at polar coordinates `(r, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    pub r: f64,
    pub point: HPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EuclideanLocus {
    HorizontalLine { height: f64 },
    Circle { center_y: f64, radius: f64 },
}

pub fn coefficients(cfg: &TripleConfig) -> QuarticCoeffs {
    let (a2, b2, c2) = (cfg.a * cfg.a, cfg.b * cfg.b, cfg.c * cfg.c);
    QuarticCoeffs {
        alpha: 2.0 * b2 - a2 - c2,
        beta: a2 * c2 - b2 * b2,
        gamma: b2 * (2.0 * a2 * c2 - a2 * b2 - c2 * b2),
    }
}

/// `α r⁴ − 2β r² cos 2θ − γ`.
pub fn eval_quartic(cfg: &TripleConfig, r: f64, theta: f64) -> f64 {
    let k = coefficients(cfg);
    let r2 = r * r;
    r2 * r2 * k.alpha - 2.0 * r2 * k.beta * (2.0 * theta).cos() - k.gamma
}

/// Regime of the curve, comparing `b²` with `Q² = (a²+c²)/2`, `G² = ac` and
/// `H² = 2a²c²/(a²+c²)`. A boundary class is returned when `b²` is within
/// `eps` (relative) of the corresponding mean.
pub fn classify(cfg: &TripleConfig, eps: f64) -> LocusClass {
    let (a2, b2, c2) = (cfg.a * cfg.a, cfg.b * cfg.b, cfg.c * cfg.c);
    let q2 = 0.5 * (a2 + c2);
    let g2 = cfg.a * cfg.c;
    let h2 = 2.0 * a2 * c2 / (a2 + c2);
    let near = |m2: f64| (b2 - m2).abs() <= eps * m2;
    if near(q2) {
        LocusClass::QuadraticHyperbola
    } else if b2 > q2 {
        LocusClass::AboveQuadratic
    } else if near(g2) {
        LocusClass::GeometricCircle
    } else if b2 > g2 {
        LocusClass::BetweenGeometricAndQuadratic
    } else if near(h2) {
        LocusClass::HarmonicLemniscate
    } else if b2 > h2 {
        LocusClass::BetweenHarmonicAndGeometric
    } else {
        LocusClass::BelowHarmonic
    }
}

/// Exact classification of integer heights. All comparisons are carried out
/// on cleared denominators, so boundary triples are recognized without any
/// tolerance.
pub fn classify_exact(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<LocusClass> {
    if !(c.is_positive() && a > b && b > c) {
        return Err(Error::Ordering(format!("[{a}, {b}, {c}]")));
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let sum = &a2 + &c2;
    let two_b2 = &b2 * 2u32;
    let ac = a * c;
    let lhs_h = &b2 * &sum;
    let rhs_h = &a2 * &c2 * 2u32;
    use std::cmp::Ordering::*;
    Ok(match two_b2.cmp(&sum) {
        Greater => LocusClass::AboveQuadratic,
        Equal => LocusClass::QuadraticHyperbola,
        Less => match b2.cmp(&ac) {
            Greater => LocusClass::BetweenGeometricAndQuadratic,
            Equal => LocusClass::GeometricCircle,
            Less => match lhs_h.cmp(&rhs_h) {
                Greater => LocusClass::BetweenHarmonicAndGeometric,
                Equal => LocusClass::HarmonicLemniscate,
                Less => LocusClass::BelowHarmonic,
            },
        },
    })
}

/// Coefficients with the vanishing one forced to zero on boundary regimes,
/// so that those regimes produce exactly their special curves.
fn snapped_coefficients(cfg: &TripleConfig) -> QuarticCoeffs {
    let mut k = coefficients(cfg);
    match classify(cfg, DEFAULT_CLASSIFY_EPS) {
        LocusClass::QuadraticHyperbola => k.alpha = 0.0,
        LocusClass::GeometricCircle => k.beta = 0.0,
        LocusClass::HarmonicLemniscate => k.gamma = 0.0,
        _ => {}
    }
    k
}

/// Positive roots `s = r²` of `α s² − 2β cos 2θ · s − γ = 0`, ascending.
pub fn solve_r2(cfg: &TripleConfig, theta: f64) -> Vec<f64> {
    roots_with(&snapped_coefficients(cfg), theta)
}

fn roots_with(k: &QuarticCoeffs, theta: f64) -> Vec<f64> {
    let qa = k.alpha;
    let qb = -2.0 * k.beta * (2.0 * theta).cos();
    let qc = -k.gamma;
    let mut roots = Vec::with_capacity(2);
    if qa == 0.0 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return roots;
        }
        let q = -0.5 * (qb + qb.signum() * disc.sqrt());
        if q == 0.0 {
            roots.push(0.0);
        } else {
            roots.push(q / qa);
            roots.push(qc / q);
        }
    }
    roots.retain(|s| s.is_finite() && *s > MIN_ROOT);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// `n` polar angles evenly spread over `(0, π)`, keeping `π/(4n)` away from
/// both ends.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let margin = PI / (4.0 * n as f64);
    let step = (PI - 2.0 * margin) / (n - 1) as f64;
    (0..n).map(|i| margin + i as f64 * step).collect()
}

/// All curve points found along the given polar angles, sorted by `(θ, r)`.
pub fn samples_at(cfg: &TripleConfig, thetas: &[f64]) -> Vec<CurveSample> {
    let k = snapped_coefficients(cfg);
    let mut out: Vec<CurveSample> = thetas
        .par_iter()
        .flat_map_iter(|&theta| {
            let on_axis = theta.cos().abs() < AXIS_EXCLUSION;
            roots_with(&k, theta)
                .into_iter()
                .filter(move |_| !on_axis)
                .filter_map(move |s| {
                    let r = s.sqrt();
                    HPoint::from_polar(r, theta)
                        .ok()
                        .map(|point| CurveSample { theta, r, point })
                })
        })
        .collect();
    out.sort_by(|p, q| p.theta.total_cmp(&q.theta).then(p.r.total_cmp(&q.r)));
    out
}

/// Samples the curve on [`theta_grid`]`(n)`.
pub fn sample_curve(cfg: &TripleConfig, n: usize) -> Result<Vec<CurveSample>> {
    if n < 2 {
        return Err(Error::invalid("n", format!("need at least 2 angles, got {n}")));
    }
    Ok(samples_at(cfg, &theta_grid(n)))
}

/// A run of consecutive polar angles that all carry the same number of
/// roots, following the root with a fixed rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub root_index: usize,
    pub root_count: usize,
    pub samples: Vec<CurveSample>,
}

/// Splits samples sorted by `(θ, r)` into branches. Two neighbouring angles
/// belong to the same run when both carry the same number of roots.
pub fn group_branches(samples: &[CurveSample]) -> Vec<Branch> {
    let mut columns: Vec<&[CurveSample]> = Vec::new();
    let mut start = 0;
    for i in 1..=samples.len() {
        if i == samples.len() || samples[i].theta != samples[start].theta {
            columns.push(&samples[start..i]);
            start = i;
        }
    }
    let mut branches = Vec::new();
    let mut open: Vec<Branch> = Vec::new();
    for col in columns {
        if open.first().map(|b| b.root_count) != Some(col.len()) {
            branches.append(&mut open);
            open = (0..col.len())
                .map(|k| Branch {
                    root_index: k,
                    root_count: col.len(),
                    samples: Vec::new(),
                })
                .collect();
        }
        for (branch, s) in open.iter_mut().zip(col) {
            branch.samples.push(*s);
        }
    }
    branches.append(&mut open);
    branches
}

/// Euclidean Apollonius locus for heights `a > b > c` (any sign).
pub(crate) fn euclidean_locus_of(a: f64, b: f64, c: f64) -> EuclideanLocus {
    let mid = 0.5 * (a + c);
    let scale = a.abs().max(b.abs()).max(c.abs());
    if (b - mid).abs() <= 1e-12 * scale {
        return EuclideanLocus::HorizontalLine { height: mid };
    }
    // D is the harmonic conjugate of B with respect to A and C.
    let y_d = (2.0 * a * c - b * c - a * b) / (a + c - 2.0 * b);
    EuclideanLocus::Circle {
        center_y: 0.5 * (b + y_d),
        radius: 0.5 * (b - y_d).abs(),
    }
}

/// Points of the Euclidean plane seeing `AB` and `BC` under equal angles.
pub fn euclidean_locus(cfg: &TripleConfig) -> EuclideanLocus {
    euclidean_locus_of(cfg.a, cfg.b, cfg.c)
}

/// Consecutive differences of Euclidean angles at `p` subtended by adjacent
/// pairs of the given axis heights.
pub(crate) fn euclidean_residuals(p: Vec2, heights: &[f64]) -> Result<Vec<f64>> {
    if p.0 == 0.0 {
        return Err(Error::OnAxis { x: p.0, y: p.1 });
    }
    let dir = |h: f64| (-p.0, h - p.1);
    let angles: Vec<f64> = heights
        .windows(2)
        .map(|w| unsigned_angle(dir(w[0]), dir(w[1])))
        .collect();
    Ok(angles.windows(2).map(|w| w[0] - w[1]).collect())
}

/// Euclidean `∠APB − ∠BPC`.
pub fn euclidean_equal_angle_residual(p: Vec2, cfg: &TripleConfig) -> Result<f64> {
    Ok(euclidean_residuals(p, &[cfg.a, cfg.b, cfg.c])?[0])
}
