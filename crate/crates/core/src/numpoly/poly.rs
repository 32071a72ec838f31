use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Multiple of machine epsilon used as the default relative trimming tolerance.
pub const DEFAULT_TRIM_FACTOR: f64 = 10.0;

pub(crate) fn default_trim_tol(norm: f64) -> f64 {
    DEFAULT_TRIM_FACTOR * f64::EPSILON * norm
}

/// Dense univariate polynomial with complex coefficients, ascending degree.
///
/// Trailing coefficients with magnitude at or below the trimming tolerance are
/// dropped on construction, so the last stored coefficient is the leading one.
/// The zero polynomial stores no coefficients and has degree `None`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Builds a polynomial, trimming with the default tolerance
    /// `10 * f64::EPSILON * norm_inf`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let norm = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self::with_tol(coeffs, default_trim_tol(norm))
    }

    /// Builds a polynomial, trimming trailing coefficients with `|c| <= tol`.
    pub fn with_tol(mut coeffs: Vec<Complex64>, tol: f64) -> Self {
        while let Some(c) = coeffs.last() {
            if c.norm() <= tol {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    /// Builds a polynomial without trimming anything but exact zeros.
    pub fn from_raw(coeffs: Vec<Complex64>) -> Self {
        Self::with_tol(coeffs, 0.0)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::one())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_raw(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::from_raw(vec![Complex64::zero(), Complex64::one()])
    }

    /// `c * t^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut v = vec![Complex64::zero(); k + 1];
        v[k] = c;
        Self::from_raw(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Poly::one(), |acc, &r| {
            &acc * &Poly::from_raw(vec![-r, Complex64::one()])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `t^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(Complex64::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial read as 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// Degree ignoring trailing coefficients below `rel_tol * norm_inf`.
    pub fn numerical_degree(&self, rel_tol: f64) -> Option<usize> {
        let tol = rel_tol * self.norm_inf();
        self.coeffs.iter().rposition(|c| c.norm() > tol)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_else(Complex64::zero)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Poly {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        let lc = self.lc();
        if lc.is_zero() || lc == Complex64::one() {
            return self.clone();
        }
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|&a| a / lc).collect();
        *coeffs.last_mut().unwrap() = Complex64::one();
        Poly::from_raw(coeffs)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Reversed coefficient order relative to a formal degree `n`: `t^n p(1/t)`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut v = vec![Complex64::zero(); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate().take(n + 1) {
            v[n - k] = c;
        }
        Poly::new(v)
    }

    /// Long division `self = q * divisor + r`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let Some(dd) = divisor.degree() else {
            panic!("division by the zero polynomial");
        };
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let lc = divisor.lc();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lc;
            quot[k] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Numerator of `self(num/den)` over the formal degree `total`:
    /// `sum_k c_k num^k den^(total - k)`.
    pub fn homogenized_compose(&self, num: &Poly, den: &Poly, total: usize) -> Poly {
        let n = self.degree_or_zero().max(total);
        let mut num_pows = vec![Poly::one()];
        let mut den_pows = vec![Poly::one()];
        for k in 1..=n {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut acc = Poly::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = (&num_pows[k] * &den_pows[n - k]).scale(c);
            acc = &acc + &term;
        }
        acc
    }

    /// All complex roots via Aberth-Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        aberth_roots(self)
    }

    /// Real parts of the roots whose imaginary part is below `imag_tol`.
    pub fn real_roots(&self, imag_tol: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .roots()
            .into_iter()
            .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.norm()))
            .map(|z| z.re)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

fn aberth_roots(p: &Poly) -> Vec<Complex64> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let c = monic.coeffs();
    let dp = monic.derivative();
    // Cauchy-type radius for the initial circle.
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let r0 = radius.min(
        c[..n]
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            * 2.0,
    );
    let r0 = if r0 > 0.0 { r0 } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = monic.eval(z[i]);
            if pv.is_zero() {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_raw(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => f.write_str("*t")?,
                _ => write!(f, "*t^{k}")?,
            }
        }
        Ok(())
    }
}
