use num_complex::Complex64;
use num_traits::One;

use super::{BiPoly, Poly};
use crate::approxgcd::egcd_uni;
use crate::error::{Error, Result};

/// Quotient `num / den` of two polynomials; `den` is never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    /// The identity map `t`.
    pub fn identity() -> Self {
        Self::polynomial(Poly::identity())
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Poly::from_real(num), Poly::from_real(den))
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.num.eval(t) / self.den.eval(t)
    }

    pub fn eval_real(&self, t: f64) -> Complex64 {
        self.eval(Complex64::new(t, 0.0))
    }

    /// Max of the coefficient infinity norms of numerator and denominator.
    pub fn norm_inf(&self) -> f64 {
        self.num.norm_inf().max(self.den.norm_inf())
    }

    /// Divides numerator and denominator by the denominator's leading coefficient.
    pub fn normalize(&self) -> Self {
        let lc = self.den.lc();
        if lc == Complex64::one() {
            return self.clone();
        }
        let inv = Complex64::one() / lc;
        RationalFunction {
            num: self.num.scale(inv),
            den: self.den.monic(),
        }
    }

    /// Removes ε-gcds of numerator and denominator until they are ε-coprime,
    /// then normalizes the denominator to be monic.
    pub fn reduce(&self, eps: f64) -> Self {
        let mut cur = self.clone();
        for _ in 0..self.degree() + 1 {
            if cur.num.is_zero() {
                return RationalFunction::polynomial(Poly::zero());
            }
            if cur.num.is_constant() || cur.den.is_constant() {
                break;
            }
            let Ok(cert) = egcd_uni(&cur.num, &cur.den, eps) else {
                break;
            };
            if cert.degree() == 0 {
                break;
            }
            cur = RationalFunction { num: cert.f1, den: cert.g1 };
        }
        cur.normalize()
    }

    /// Numerator and denominator of `self(r(t))`.
    pub fn compose(&self, r: &RationalFunction) -> RationalFunction {
        let d = self.degree();
        RationalFunction {
            num: self.num.homogenized_compose(&r.num, &r.den, d),
            den: self.den.homogenized_compose(&r.num, &r.den, d),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64 + Copy) -> Self {
        RationalFunction {
            num: Poly::new(self.num.coeffs().iter().map(|&c| f(c)).collect()),
            den: Poly::new(self.den.coeffs().iter().map(|&c| f(c)).collect()),
        }
    }
}

/// A plane curve parametrization `(x(t), y(t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneParametrization {
    pub x: RationalFunction,
    pub y: RationalFunction,
}

impl PlaneParametrization {
    pub fn new(x: RationalFunction, y: RationalFunction) -> Self {
        PlaneParametrization { x, y }
    }

    pub fn components(&self) -> [&RationalFunction; 2] {
        [&self.x, &self.y]
    }

    pub fn component(&self, k: usize) -> &RationalFunction {
        match k {
            0 => &self.x,
            1 => &self.y,
            _ => panic!("component index {k} out of range"),
        }
    }

    /// Max over both components of `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.x.degree().max(self.y.degree())
    }

    pub fn is_real(&self) -> bool {
        self.x.is_real() && self.y.is_real()
    }

    pub fn eval(&self, t: Complex64) -> (Complex64, Complex64) {
        (self.x.eval(t), self.y.eval(t))
    }

    pub fn eval_real(&self, t: f64) -> (f64, f64) {
        let (a, b) = self.eval(Complex64::new(t, 0.0));
        (a.re, b.re)
    }

    /// Max of the four coefficient infinity norms.
    pub fn norm_inf(&self) -> f64 {
        self.x.norm_inf().max(self.y.norm_inf())
    }

    pub fn compose(&self, r: &RationalFunction) -> PlaneParametrization {
        PlaneParametrization::new(self.x.compose(r), self.y.compose(r))
    }

    pub fn reduce(&self, eps: f64) -> PlaneParametrization {
        PlaneParametrization::new(self.x.reduce(eps), self.y.reduce(eps))
    }

    pub fn normalize(&self) -> PlaneParametrization {
        PlaneParametrization::new(self.x.normalize(), self.y.normalize())
    }

    /// True when both components are ε-constant, i.e. every cross difference
    /// is below `eps` relative to the component norm.
    pub fn is_degenerate(&self, eps: f64) -> bool {
        self.components().iter().all(|c| {
            let h = cross_difference(c, c);
            h.norm_inf() <= eps * c.norm_inf().powi(2)
        })
    }
}

/// `p.num(t) q.den(s) - q.num(s) p.den(t)`.
pub fn cross_difference(p: &RationalFunction, q: &RationalFunction) -> BiPoly {
    let a = BiPoly::outer(&p.num, &q.den);
    let b = BiPoly::outer(&p.den, &q.num);
    &a - &b
}

/// `M(t) N(s) - M(s) N(t)` for `r = M / N`.
pub fn num_cross_difference_r(r: &RationalFunction) -> Result<BiPoly> {
    let h = cross_difference(r, r);
    if h.is_zero() {
        return Err(Error::ConstantFunction);
    }
    Ok(h)
}

/// Closeness of two bivariate polynomials after rescaling each to unit
/// infinity norm. Trimmed degrees must agree in both variables.
pub fn approx_eq(a: &BiPoly, b: &BiPoly, eps: f64) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.deg_t() != b.deg_t() || a.deg_s() != b.deg_s() {
        return Ok(false);
    }
    let (na, nb) = (a.norm_inf(), b.norm_inf());
    let dist = a
        .iter()
        .map(|(i, j, c)| (c / na - b.get(i, j) / nb).norm())
        .fold(0.0, f64::max);
    Ok(dist <= eps)
}

/// `‖num(a(t, r(t)))‖∞ <= eps ‖a‖∞`, clearing denominators with `N^deg_s(a)`.
pub fn approx_zero_along(a: &BiPoly, r: &RationalFunction, eps: f64) -> bool {
    let ds = a.deg_s().unwrap_or(0);
    let num = a.substitute_s_rational(&r.num, &r.den, ds);
    num.norm_inf() <= eps * a.norm_inf()
}
