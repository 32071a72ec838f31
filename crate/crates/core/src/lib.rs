//! Numeric reparametrization of nearly improper rational plane curves.
//!
//! Given a tolerance `eps` and a parametrization `P` with floating-point
//! coefficients, [`reparam::reparametrize`] finds a rational function `R` and
//! an ε-proper parametrization `Q` with `P ≈ Q(R)`, and [`errorbound`] turns
//! the result into pointwise and offset-region distance bounds. The [`exact`]
//! module runs the same construction over arbitrary-precision rationals.

pub mod approxgcd;
pub mod error;
pub mod errorbound;
pub mod exact;
pub mod linalg;
pub mod numpoly;
pub mod reparam;
pub mod resultants;

pub use error::{Error, PipelineError, Result, Stage};
pub use numpoly::{BiPoly, PlaneParametrization, Poly, RationalFunction};
