//! Hyperbolic analog of the Apollonius circle in the upper half-plane model.
//!
//! Given three points `A(0,a)`, `B(0,b)`, `C(0,c)` with `a > b > c > 0`, the
//! points `P` from which the hyperbolic angles `APB` and `BPC` are equal form a
//! quartic curve in polar coordinates:
//!
//! ```text
//! r^4 (2b^2 - a^2 - c^2) = 2 r^2 (a^2 c^2 - b^4) cos(2θ) + b^2 (2a^2c^2 - a^2b^2 - c^2b^2)
//! ```
//!
//! The crate is organized as:
//!
//! * [`halfplane`]: points, geodesics, hyperbolic angles and distances; the
//!   equal-angle residual used as the independent oracle everywhere else.
//! * [`locus`]: coefficients, evaluation, seven-regime classification and
//!   polar sampling of the quartic, plus the Euclidean Apollonius circle.
//! * [`fourpoint`]: cross-ratio existence tests and witness search for four
//!   collinear points seen under three equal angles.
//! * [`probability`]: seeded Monte Carlo estimators and quadrature for the
//!   probability that such a witness exists.
//! * [`diophantine`]: integer families realizing the boundary regimes.
//! * [`cli`]: the `apollonius` command-line front end.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diophantine;
mod error;
pub mod fourpoint;
pub mod halfplane;
pub mod locus;
pub mod probability;

pub use error::{Error, Result};
pub use fourpoint::{FourConfig, Geometry, Witness};
pub use halfplane::{AngleResidual, AxisPoint, Geodesic, HPoint};
pub use locus::{CurveSample, EuclideanLocus, LocusClass, QuarticCoeffs, TripleConfig};
pub use probability::{HyperProbSetup, ProbEstimate};
