//! Dense polynomial and rational-function arithmetic over complex floats.

mod bipoly;
mod poly;
mod rational;

pub use bipoly::BiPoly;
pub use poly::{Poly, DEFAULT_TRIM_FACTOR};
pub use rational::{
    approx_eq, approx_zero_along, cross_difference, num_cross_difference_r, PlaneParametrization,
    RationalFunction,
};

/// Infinity norm of a univariate or bivariate polynomial.
pub trait NormInf {
    fn norm_inf(&self) -> f64;
}

impl NormInf for Poly {
    fn norm_inf(&self) -> f64 {
        Poly::norm_inf(self)
    }
}

impl NormInf for BiPoly {
    fn norm_inf(&self) -> f64 {
        BiPoly::norm_inf(self)
    }
}

pub fn norm_inf<P: NormInf + ?Sized>(p: &P) -> f64 {
    p.norm_inf()
}
