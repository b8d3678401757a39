//! Integer triples on the three boundary regimes of the locus.
//!
//! * quadratic mean, `2b² = a² + c²`, from a Pythagorean-style parametrization;
//! * geometric mean, `b² = ac`, from `a = kp²`, `b = kpq`, `c = kq²`;
//! * harmonic-quadratic mean, `2a²c² = a²b² + c²b²`, from products of three
//!   binary quadratic forms `F₁ = 46m²+24mn+n²`, `F₂ = 74m²+10mn+n²`,
//!   `F₃ = 94m²+4mn−n²` satisfying `F₁² + F₃² = 2F₂²`.
//!
//! Everything is exact big-integer arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::locus::{classify_exact, LocusClass};

/// Raw generator output; values may be negative or unordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl IntTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        IntTriple {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Absolute values sorted descending; errors when two coincide or one is
    /// zero, since the geometry needs `a > b > c > 0`.
    pub fn normalized(&self) -> Result<IntTriple> {
        let mut v = [self.a.abs(), self.b.abs(), self.c.abs()];
        v.sort_by(|x, y| y.cmp(x));
        if v[0] == v[1] || v[1] == v[2] || v[2].is_zero() {
            return Err(Error::Ordering(format!(
                "[{}, {}, {}] has repeated or zero magnitudes",
                self.a, self.b, self.c
            )));
        }
        let [a, b, c] = v;
        Ok(IntTriple { a, b, c })
    }

    /// Exact regime of a normalized triple.
    pub fn classify(&self) -> Result<LocusClass> {
        let n = self.normalized()?;
        classify_exact(&n.a, &n.b, &n.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `2b² = a² + c²`.
    QuadraticMean,
    /// `b² = ac`.
    GeometricMean,
    /// `2a²c² = a²b² + c²b²`.
    HarmonicQuadratic,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::QuadraticMean => "quadratic",
            FamilyKind::GeometricMean => "geometric",
            FamilyKind::HarmonicQuadratic => "harmonic",
        }
    }

    /// Regime a normalized triple of this family falls into.
    pub fn locus_class(self) -> LocusClass {
        match self {
            FamilyKind::QuadraticMean => LocusClass::QuadraticHyperbola,
            FamilyKind::GeometricMean => LocusClass::GeometricCircle,
            FamilyKind::HarmonicQuadratic => LocusClass::HarmonicLemniscate,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a = |m²+2mn−n²|`, `b = m²+n²`, `c = |m²−2mn−n²|`.
pub fn pythagorean_family(m: i64, n: i64) -> Result<IntTriple> {
    if m == 0 && n == 0 {
        return Err(Error::invalid("(m, n)", "must not both be zero"));
    }
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    let (m2, n2): (BigInt, BigInt) = (&m * &m, &n * &n);
    let mn2: BigInt = &m * &n * 2;
    Ok(IntTriple {
        a: (&m2 + &mn2 - &n2).abs(),
        b: &m2 + &n2,
        c: (&m2 - &mn2 - &n2).abs(),
    })
}

/// `(kp², kpq, kq²)`.
pub fn geometric_family(p: i64, q: i64, k: i64) -> Result<IntTriple> {
    if p <= 0 || q <= 0 || k <= 0 {
        return Err(Error::invalid("(p, q, k)", "must all be positive"));
    }
    if p == q {
        return Err(Error::invalid("(p, q)", "p = q gives a = b = c"));
    }
    let (p, q, k) = (BigInt::from(p), BigInt::from(q), BigInt::from(k));
    Ok(IntTriple {
        a: &k * &p * &p,
        b: &k * &p * &q,
        c: &k * &q * &q,
    })
}

/// `a = F₁F₂`, `b = F₁F₃`, `c = F₃F₂`, signs kept.
pub fn quadratic_form_family(m: i64, n: i64) -> Result<IntTriple> {
    if m == 0 && n == 0 {
        return Err(Error::invalid("(m, n)", "must not both be zero"));
    }
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    let (m2, n2, mn) = (&m * &m, &n * &n, &m * &n);
    let f1 = &m2 * 46 + &mn * 24 + &n2;
    let f2 = &m2 * 74 + &mn * 10 + &n2;
    let f3 = &m2 * 94 + &mn * 4 - &n2;
    Ok(IntTriple {
        a: &f1 * &f2,
        b: &f1 * &f3,
        c: &f3 * &f2,
    })
}

/// Exact check of the family identity on `|a|, |b|, |c|`.
pub fn verify_identity(t: &IntTriple, kind: FamilyKind) -> bool {
    let (a, b, c) = (t.a.abs(), t.b.abs(), t.c.abs());
    let (a2, b2, c2) = (&a * &a, &b * &b, &c * &c);
    match kind {
        FamilyKind::QuadraticMean => &b2 * 2 == &a2 + &c2,
        FamilyKind::GeometricMean => b2 == &a * &c,
        FamilyKind::HarmonicQuadratic => &a2 * &c2 * 2 == &a2 * &b2 + &c2 * &b2,
    }
}
