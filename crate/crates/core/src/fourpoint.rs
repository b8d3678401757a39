//! Four collinear points `A, B, C, D` and a point `P` off their line seeing
//! `AB`, `BC` and `CD` under equal angles.
//!
//! In the Euclidean plane such a `P` exists iff the cross-ratio
//! `(BC/BA) / (DC/DA)` is below 3. In the half-plane model the same test
//! applies to the squared heights.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::halfplane::{check_decreasing, hyp_angle, HPoint};
use crate::locus::{euclidean_locus_of, euclidean_residuals, solve_r2, EuclideanLocus, TripleConfig};

/// Cross-ratio threshold; existence requires a value strictly below it.
pub const CROSS_RATIO_BOUND: f64 = 3.0;

/// Bound on both angle residuals of an accepted witness.
pub const WITNESS_TOL: f64 = 1e-8;

/// Initial number of polar angles scanned by [`find_witness_hyper`].
pub const SEARCH_RESOLUTION: usize = 4096;

const BISECT_G_TOL: f64 = 1e-10;
const BISECT_THETA_TOL: f64 = 1e-13;
const MAX_REFINEMENTS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }
}

/// Heights `a > b > c > d` on the y-axis. Hyperbolic configurations also
/// require `d > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub geometry: Geometry,
}

impl FourConfig {
    pub fn euclid(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::build(a, b, c, d, Geometry::Euclidean)
    }

    pub fn hyper(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::NonPositive { name: "d", value: d });
        }
        Self::build(a, b, c, d, Geometry::Hyperbolic)
    }

    fn build(a: f64, b: f64, c: f64, d: f64, geometry: Geometry) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {v}")));
            }
        }
        check_decreasing(&[a, b, c, d])?;
        Ok(FourConfig { a, b, c, d, geometry })
    }

    pub fn heights(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn expect(&self, geometry: Geometry) -> Result<()> {
        if self.geometry != geometry {
            return Err(Error::invalid(
                "geometry",
                format!("expected {} configuration", geometry.name()),
            ));
        }
        Ok(())
    }
}

/// A point seeing the three segments under equal angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    /// `(∠APB − ∠BPC, ∠BPC − ∠CPD)`.
    pub residuals: (f64, f64),
}

impl Witness {
    pub fn max_residual(&self) -> f64 {
        self.residuals.0.abs().max(self.residuals.1.abs())
    }
}

fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
    ((b - c) * (a - d)) / ((a - b) * (c - d))
}

/// `(BC/BA) / (DC/DA)`.
pub fn cross_ratio_euclid(cfg: &FourConfig) -> Result<f64> {
    cfg.expect(Geometry::Euclidean)?;
    Ok(cross_ratio(cfg.a, cfg.b, cfg.c, cfg.d))
}

/// `(b²−c²)(a²−d²) / ((a²−b²)(c²−d²))`: the Euclidean cross-ratio of the
/// squared heights.
pub fn cross_ratio_hyper(cfg: &FourConfig) -> Result<f64> {
    cfg.expect(Geometry::Hyperbolic)?;
    let [a, b, c, d] = cfg.heights().map(|h| h * h);
    Ok(cross_ratio(a, b, c, d))
}

pub fn exists_euclid(cfg: &FourConfig) -> Result<bool> {
    Ok(cross_ratio_euclid(cfg)? < CROSS_RATIO_BOUND)
}

pub fn exists_hyper(cfg: &FourConfig) -> Result<bool> {
    Ok(cross_ratio_hyper(cfg)? < CROSS_RATIO_BOUND)
}

/// Returns `(x², y)` for the intersection of two loci, both symmetric about
/// the y-axis.
fn intersect(l1: EuclideanLocus, l2: EuclideanLocus) -> Option<(f64, f64)> {
    use EuclideanLocus::*;
    let on_circle = |center: f64, radius: f64, y: f64| {
        let dy = y - center;
        (radius - dy) * (radius + dy)
    };
    match (l1, l2) {
        (HorizontalLine { .. }, HorizontalLine { .. }) => None,
        (Circle { center_y, radius }, HorizontalLine { height })
        | (HorizontalLine { height }, Circle { center_y, radius }) => {
            Some((on_circle(center_y, radius, height), height))
        }
        (
            Circle { center_y: c1, radius: r1 },
            Circle { center_y: c2, radius: r2 },
        ) => {
            if c1 == c2 {
                return None;
            }
            let y = 0.5 * (c1 + c2) + (r1 - r2) * (r1 + r2) / (2.0 * (c2 - c1));
            Some((on_circle(c1, r1, y), y))
        }
    }
}

/// Intersects the Apollonius loci of `(A, B, C)` and `(B, C, D)` and returns
/// the intersection with `x > 0`.
pub fn find_witness_euclid(cfg: &FourConfig) -> Result<Option<Witness>> {
    if !exists_euclid(cfg)? {
        return Ok(None);
    }
    let l1 = euclidean_locus_of(cfg.a, cfg.b, cfg.c);
    let l2 = euclidean_locus_of(cfg.b, cfg.c, cfg.d);
    let Some((x2, y)) = intersect(l1, l2) else {
        return Err(Error::SearchFailure("loci do not meet".into()));
    };
    // Tangency happens only on the axis, which is not a witness.
    let scale = cfg.heights().iter().fold(1f64, |m, h| m.max(h.abs()));
    if x2 <= 1e-12 * scale * scale {
        return Err(Error::SearchFailure(format!(
            "loci meet only on the axis (x² = {x2:e})"
        )));
    }
    let x = x2.sqrt();
    let r = euclidean_residuals((x, y), &cfg.heights())?;
    Ok(Some(Witness { x, y, residuals: (r[0], r[1]) }))
}

struct HyperSearch {
    triple: TripleConfig,
    axis: [HPoint; 4],
}

impl HyperSearch {
    fn point(&self, theta: f64, root_index: usize, root_count: usize) -> Option<HPoint> {
        let roots = solve_r2(&self.triple, theta);
        if roots.len() != root_count {
            return None;
        }
        HPoint::from_polar(roots[root_index].sqrt(), theta).ok()
    }

    /// Hyperbolic `(∠APB − ∠BPC, ∠BPC − ∠CPD)` at `p`.
    fn residuals(&self, p: HPoint) -> Option<(f64, f64)> {
        let [a, b, c, d] = self.axis;
        let apb = hyp_angle(p, a, b).ok()?;
        let bpc = hyp_angle(p, b, c).ok()?;
        let cpd = hyp_angle(p, c, d).ok()?;
        Some((apb - bpc, bpc - cpd))
    }

    fn g(&self, theta: f64, root_index: usize, root_count: usize) -> Option<f64> {
        let p = self.point(theta, root_index, root_count)?;
        self.residuals(p).map(|r| r.1)
    }

    /// Sign-change bisection of `g` in θ along one root branch.
    fn bisect(
        &self,
        mut lo: f64,
        mut hi: f64,
        mut g_lo: f64,
        root_index: usize,
        root_count: usize,
    ) -> Option<Witness> {
        let mut best = lo;
        let mut best_g = g_lo.abs();
        while hi - lo > BISECT_THETA_TOL && best_g > BISECT_G_TOL {
            let mid = 0.5 * (lo + hi);
            let g_mid = self.g(mid, root_index, root_count)?;
            if g_mid.abs() < best_g {
                best = mid;
                best_g = g_mid.abs();
            }
            if (g_mid < 0.0) == (g_lo < 0.0) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        // Polish: re-solve r at the final angle.
        let p = self.point(best, root_index, root_count)?;
        let residuals = self.residuals(p)?;
        let w = Witness { x: p.x, y: p.y, residuals };
        (w.max_residual() <= WITNESS_TOL).then_some(w)
    }

    /// Scans `n` angles in `(0, π/2)`. Returns the witness, or the largest
    /// radius seen when none is found.
    fn scan(&self, n: usize) -> std::result::Result<Witness, f64> {
        let step = FRAC_PI_2 / n as f64;
        let columns: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|i| {
                let theta = (i as f64 + 0.5) * step;
                (theta, solve_r2(&self.triple, theta))
            })
            .collect();
        let max_r = columns
            .iter()
            .flat_map(|(_, roots)| roots.iter())
            .fold(0f64, |m, s| m.max(s.sqrt()));
        let mut start = 0;
        while start < columns.len() {
            let count = columns[start].1.len();
            let mut end = start + 1;
            while end < columns.len() && columns[end].1.len() == count {
                end += 1;
            }
            for k in 0..count {
                let mut prev: Option<(f64, f64)> = None;
                for (theta, roots) in &columns[start..end] {
                    let Some(g) = HPoint::from_polar(roots[k].sqrt(), *theta)
                        .ok()
                        .and_then(|p| self.residuals(p))
                        .map(|r| r.1)
                    else {
                        prev = None;
                        continue;
                    };
                    if let Some((t0, g0)) = prev {
                        if g == 0.0 || (g < 0.0) != (g0 < 0.0) {
                            if let Some(w) = self.bisect(t0, *theta, g0, k, count) {
                                return Ok(w);
                            }
                        }
                    }
                    prev = Some((*theta, g));
                }
            }
            start = end;
        }
        Err(max_r)
    }
}

/// Locates a hyperbolic witness with `x > 0` by following the `(A, B, C)`
/// locus in θ and bisecting on `∠BPC − ∠CPD`.
///
/// The scan starts at [`SEARCH_RESOLUTION`] angles and is refined
/// geometrically, which reaches further out along unbounded branches, until a
/// witness is found or the sampled radius exceeds `1e6 · a`.
pub fn find_witness_hyper(cfg: &FourConfig) -> Result<Option<Witness>> {
    if !exists_hyper(cfg)? {
        return Ok(None);
    }
    let search = HyperSearch {
        triple: TripleConfig::new(cfg.a, cfg.b, cfg.c)?,
        axis: cfg.heights().map(|h| HPoint { x: 0.0, y: h }),
    };
    let mut n = SEARCH_RESOLUTION;
    let mut last_r = 0.0;
    for _ in 0..=MAX_REFINEMENTS {
        match search.scan(n) {
            Ok(w) => return Ok(Some(w)),
            Err(max_r) => last_r = max_r,
        }
        if last_r > 1e6 * cfg.a {
            break;
        }
        n *= 4;
    }
    Err(Error::SearchFailure(format!(
        "no sign change up to {n} angles (largest radius sampled {last_r:e})"
    )))
}
