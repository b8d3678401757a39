//! Primitives of the upper half-plane model.
//!
//! Geodesics are vertical rays or semicircles centered on the boundary axis.
//! The hyperbolic angle between two geodesics at a point equals the Euclidean
//! angle between their tangent lines there, so everything reduces to
//! two-dimensional vector arithmetic.

use crate::error::{Error, Result};

/// Abscissas closer than this (relative to `max(1, |x|)`) span a vertical geodesic.
pub const VERTICAL_REL_TOL: f64 = 1e-12;

/// Relative tolerance for "P lies on G".
pub const ON_CURVE_REL_TOL: f64 = 1e-9;

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid("x", format!("must be finite, got {x}")));
        }
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::NonPositive { name: "y", value: y });
        }
        Ok(HPoint { x, y })
    }

    /// Point at polar coordinates `(r, theta)` about the origin.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        HPoint::new(r * theta.cos(), r * theta.sin())
    }

    pub fn on_axis(h: AxisPoint) -> Self {
        HPoint { x: 0.0, y: h.h }
    }

    /// Image under the hyperbolic isometry `(x, y) -> (λx, λy)`.
    pub fn scaled(self, lambda: f64) -> Self {
        HPoint {
            x: lambda * self.x,
            y: lambda * self.y,
        }
    }

    /// Image under the hyperbolic isometry `(x, y) -> (x + t, y)`.
    pub fn translated(self, t: f64) -> Self {
        HPoint {
            x: self.x + t,
            y: self.y,
        }
    }

    /// Reflection across the y-axis.
    pub fn mirrored(self) -> Self {
        HPoint {
            x: -self.x,
            y: self.y,
        }
    }

    fn scale(self) -> f64 {
        1f64.max(self.x.abs()).max(self.y.abs())
    }
}

/// A point `(0, h)` on the y-axis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AxisPoint {
    pub h: f64,
}

impl AxisPoint {
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::NonPositive { name: "h", value: h });
        }
        Ok(AxisPoint { h })
    }
}

impl From<AxisPoint> for HPoint {
    fn from(p: AxisPoint) -> Self {
        HPoint::on_axis(p)
    }
}

/// A hyperbolic line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geodesic {
    VerticalRay { x0: f64 },
    Arc { center: f64, radius: f64 },
}

impl Geodesic {
    /// Distance from `p` to the underlying Euclidean circle or line, relative
    /// to the geodesic's scale.
    pub fn on_curve_residual(&self, p: HPoint) -> f64 {
        match *self {
            Geodesic::VerticalRay { x0 } => (p.x - x0).abs() / 1f64.max(x0.abs()),
            Geodesic::Arc { center, radius } => {
                ((p.x - center).hypot(p.y) - radius).abs() / 1f64.max(radius).max(center.abs())
            }
        }
    }

    pub fn contains(&self, p: HPoint) -> bool {
        self.on_curve_residual(p) <= ON_CURVE_REL_TOL
    }
}

/// Difference of two unsigned angles, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngleResidual(pub f64);

impl AngleResidual {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn abs(self) -> f64 {
        self.0.abs()
    }
}

pub type Vec2 = (f64, f64);

fn normalize(v: Vec2) -> Vec2 {
    let n = v.0.hypot(v.1);
    (v.0 / n, v.1 / n)
}

/// Unsigned angle between two vectors, in `[0, π]`.
pub fn unsigned_angle(u: Vec2, v: Vec2) -> f64 {
    let cross = u.0 * v.1 - u.1 * v.0;
    let dot = u.0 * v.0 + u.1 * v.1;
    cross.abs().atan2(dot)
}

/// The geodesic through two distinct points.
///
/// The arc center is where the perpendicular bisector of `PQ` meets the
/// boundary axis; for `Q = (0, a)` this is `(x² + y² − a²) / (2x)`.
pub fn geodesic_through(p: HPoint, q: HPoint) -> Result<Geodesic> {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::Degenerate("geodesic through coincident points"));
    }
    if dx.abs() < VERTICAL_REL_TOL * 1f64.max(p.x.abs()).max(q.x.abs()) {
        return Ok(Geodesic::VerticalRay { x0: p.x });
    }
    // |Q|² − |P|² factored to avoid cancellation.
    let center = 0.5 * (q.x + p.x) + dy * (q.y + p.y) / (2.0 * dx);
    let radius = (p.x - center).hypot(p.y);
    Ok(Geodesic::Arc { center, radius })
}

/// Unit tangent to `g` at `p`. The orientation is unspecified.
pub fn tangent_direction(g: &Geodesic, p: HPoint) -> Result<Vec2> {
    if !g.contains(p) {
        return Err(Error::OffCurve { x: p.x, y: p.y });
    }
    Ok(match *g {
        Geodesic::VerticalRay { .. } => (0.0, 1.0),
        Geodesic::Arc { center, .. } => normalize((-p.y, p.x - center)),
    })
}

/// Unit tangent at `p` of the geodesic from `p` to `q`, pointing toward `q`.
///
/// The Möbius map `z ↦ (z − p)/(z − p̄)` sends `p` to the disk center, where
/// geodesics are diameters. Pulling the direction of the image of `q` back
/// gives a tangent proportional to `i (q − p)(q̄ − p)`, i.e.
/// `(2 p.y dx, dx² + dy (q.y + p.y))`. No arc center is formed, so this stays
/// accurate when the geodesic is nearly vertical or `q` is close to `p`.
pub fn tangent_toward(p: HPoint, q: HPoint) -> Result<Vec2> {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::Degenerate("tangent toward the point itself"));
    }
    Ok(normalize((2.0 * p.y * dx, dx * dx + dy * (q.y + p.y))))
}

/// Hyperbolic angle at `p` between the geodesics toward `q1` and `q2`, in `[0, π]`.
pub fn hyp_angle(p: HPoint, q1: HPoint, q2: HPoint) -> Result<f64> {
    if q1 == q2 {
        return Err(Error::Degenerate("angle between coincident rays"));
    }
    let t1 = tangent_toward(p, q1)?;
    let t2 = tangent_toward(p, q2)?;
    Ok(unsigned_angle(t1, t2))
}

pub(crate) fn check_decreasing(heights: &[f64]) -> Result<()> {
    for w in heights.windows(2) {
        if !(w[0] > w[1]) {
            return Err(Error::Ordering(format!("{:?}", heights)));
        }
    }
    Ok(())
}

pub(crate) fn check_off_axis(p: HPoint) -> Result<()> {
    if p.x.abs() < VERTICAL_REL_TOL * p.scale() {
        return Err(Error::OnAxis { x: p.x, y: p.y });
    }
    Ok(())
}

/// `∠APB − ∠BPC` measured hyperbolically; zero exactly on the locus.
pub fn equal_angle_residual(
    p: HPoint,
    a: AxisPoint,
    b: AxisPoint,
    c: AxisPoint,
) -> Result<AngleResidual> {
    check_decreasing(&[a.h, b.h, c.h])?;
    check_off_axis(p)?;
    let (a, b, c) = (HPoint::from(a), HPoint::from(b), HPoint::from(c));
    Ok(AngleResidual(hyp_angle(p, a, b)? - hyp_angle(p, b, c)?))
}

/// Hyperbolic distance, `arccosh(1 + |PQ|² / (2 p.y q.y))`.
pub fn hyp_distance(p: HPoint, q: HPoint) -> f64 {
    // 2·asinh(|PQ| / (2√(p.y q.y))) is the same quantity without the
    // cancellation arccosh suffers near 1.
    let chord = (q.x - p.x).hypot(q.y - p.y);
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}
