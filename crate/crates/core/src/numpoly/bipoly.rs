use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use super::poly::{default_trim_tol, Poly};

/// Dense bivariate polynomial. `coeffs[i][j]` multiplies `t^i s^j`; all rows
/// share one length. The variable names follow the `(t, s)` convention but the
/// same type carries `(s, x)` and `(x1, x2)` polynomials.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiPoly {
    rows: Vec<Vec<Complex64>>,
}

impl BiPoly {
    /// Builds from a coefficient matrix, trimming with the default tolerance.
    pub fn new(rows: Vec<Vec<Complex64>>) -> Self {
        let norm = rows
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        Self::with_tol(rows, default_trim_tol(norm))
    }

    /// Builds from a coefficient matrix, dropping trailing rows and columns
    /// whose entries are all at or below `tol`.
    pub fn with_tol(mut rows: Vec<Vec<Complex64>>, tol: f64) -> Self {
        let ns = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in rows.iter_mut() {
            r.resize(ns, Complex64::zero());
        }
        while rows
            .last()
            .is_some_and(|r| r.iter().all(|c| c.norm() <= tol))
        {
            rows.pop();
        }
        let mut ns = rows.first().map_or(0, |r| r.len());
        while ns > 0 && rows.iter().all(|r| r[ns - 1].norm() <= tol) {
            ns -= 1;
        }
        for r in rows.iter_mut() {
            r.truncate(ns);
        }
        if ns == 0 {
            rows.clear();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn from_fn(nt: usize, ns: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Self::new((0..nt).map(|i| (0..ns).map(|j| f(i, j)).collect()).collect())
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// `p(t)` as a bivariate polynomial constant in `s`.
    pub fn from_poly_t(p: &Poly) -> Self {
        Self::new(p.coeffs().iter().map(|&c| vec![c]).collect())
    }

    /// `p(s)` as a bivariate polynomial constant in `t`.
    pub fn from_poly_s(p: &Poly) -> Self {
        Self::new(vec![p.coeffs().to_vec()])
    }

    /// `a(t) * b(s)`
    pub fn outer(a: &Poly, b: &Poly) -> Self {
        Self::new(
            a.coeffs()
                .iter()
                .map(|&x| b.coeffs().iter().map(|&y| x * y).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.rows.iter().flatten().all(|c| c.im == 0.0)
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_s(&self) -> Option<usize> {
        self.rows.first().and_then(|r| r.len().checked_sub(1))
    }

    /// Total degree, ignoring entries at or below `tol`.
    pub fn total_degree(&self, tol: f64) -> Option<usize> {
        self.iter()
            .filter(|(_, _, c)| c.norm() > tol)
            .map(|(i, j, _)| i + j)
            .max()
    }

    /// Iterates `(i, j, coeff)` over the stored matrix.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &c)| (i, j, c)))
    }

    pub fn norm_inf(&self) -> f64 {
        self.iter().map(|(_, _, c)| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.iter().map(|(_, _, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> BiPoly {
        BiPoly::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&c| f(c)).collect())
                .collect(),
        )
    }

    pub fn scale(&self, k: Complex64) -> BiPoly {
        self.map(|c| c * k)
    }

    /// Rescaled to unit infinity norm by a positive real factor.
    pub fn normalized(&self) -> BiPoly {
        let n = self.norm_inf();
        if n == 0.0 {
            return self.clone();
        }
        self.map(|c| c / n)
    }

    pub fn eval(&self, t: Complex64, s: Complex64) -> Complex64 {
        self.rows.iter().rev().fold(Complex64::zero(), |acc, row| {
            acc * t + row.iter().rev().fold(Complex64::zero(), |a, &c| a * s + c)
        })
    }

    /// Swaps the roles of the two variables.
    pub fn swap_vars(&self) -> BiPoly {
        let (Some(dt), Some(ds)) = (self.deg_t(), self.deg_s()) else {
            return BiPoly::zero();
        };
        BiPoly::from_fn(ds + 1, dt + 1, |i, j| self.get(j, i))
    }

    /// Coefficient of `s^j`, a polynomial in `t`.
    pub fn coeff_s(&self, j: usize) -> Poly {
        Poly::new(self.rows.iter().map(|r| r.get(j).copied().unwrap_or_default()).collect())
    }

    /// Coefficient of `t^i`, a polynomial in `s`.
    pub fn coeff_t(&self, i: usize) -> Poly {
        self.rows.get(i).map_or_else(Poly::zero, |r| Poly::new(r.clone()))
    }

    /// `A(t, s0)` as a polynomial in `t`.
    pub fn specialize_s(&self, s0: Complex64) -> Poly {
        Poly::new(
            self.rows
                .iter()
                .map(|r| r.iter().rev().fold(Complex64::zero(), |a, &c| a * s0 + c))
                .collect(),
        )
    }

    /// Like [`specialize_s`](Self::specialize_s) but keeps all `deg_t + 1`
    /// coefficients, including a vanishing leading one.
    pub fn specialize_s_formal(&self, s0: Complex64) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|r| r.iter().rev().fold(Complex64::zero(), |a, &c| a * s0 + c))
            .collect()
    }

    /// `A(t0, s)` as a polynomial in `s`.
    pub fn specialize_t(&self, t0: Complex64) -> Poly {
        self.swap_vars().specialize_s(t0)
    }

    /// `num(A(t, M(t)/N(t)))` taken over the formal `s`-degree `deg_s_formal`:
    /// `sum_{i,j} a_ij t^i M^j N^(D - j)`.
    pub fn substitute_s_rational(&self, m: &Poly, n: &Poly, deg_s_formal: usize) -> Poly {
        let d = self.deg_s().unwrap_or(0).max(deg_s_formal);
        let mut m_pows = vec![Poly::one()];
        let mut n_pows = vec![Poly::one()];
        for k in 1..=d {
            m_pows.push(&m_pows[k - 1] * m);
            n_pows.push(&n_pows[k - 1] * n);
        }
        let mut acc = vec![Complex64::zero(); 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = &m_pows[j] * &n_pows[d - j];
                let needed = i + term.coeffs().len();
                if acc.len() < needed {
                    acc.resize(needed, Complex64::zero());
                }
                for (k, &tc) in term.coeffs().iter().enumerate() {
                    acc[i + k] += c * tc;
                }
            }
        }
        Poly::new(acc)
    }

    /// `num(A(M1/N1, M2/N2))` over formal degrees `(dt, ds)` in the two variables.
    pub fn substitute_both_rational(
        &self,
        first: (&Poly, &Poly, usize),
        second: (&Poly, &Poly, usize),
    ) -> Poly {
        let (m1, n1, d1) = first;
        let (m2, n2, d2) = second;
        let d1 = self.deg_t().unwrap_or(0).max(d1);
        let d2 = self.deg_s().unwrap_or(0).max(d2);
        let pows = |m: &Poly, n: &Poly, d: usize| {
            let mut mp = vec![Poly::one()];
            let mut np = vec![Poly::one()];
            for k in 1..=d {
                mp.push(&mp[k - 1] * m);
                np.push(&np[k - 1] * n);
            }
            (0..=d).map(|k| &mp[k] * &np[d - k]).collect::<Vec<_>>()
        };
        let a = pows(m1, n1, d1);
        let b = pows(m2, n2, d2);
        let mut acc = Poly::zero();
        for (i, j, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&a[i] * &b[j]).scale(c);
        }
        acc
    }

    /// `k`-th partial derivative in the second variable.
    pub fn derivative_s(&self, k: usize) -> BiPoly {
        let Some(ds) = self.deg_s() else {
            return BiPoly::zero();
        };
        if k > ds {
            return BiPoly::zero();
        }
        BiPoly::from_fn(self.rows.len(), ds + 1 - k, |i, j| {
            let factor: f64 = ((j + 1)..=(j + k)).map(|x| x as f64).product();
            self.get(i, j + k) * factor
        })
    }

    pub fn pow(&self, n: usize) -> BiPoly {
        let one = BiPoly::new(vec![vec![Complex64::new(1.0, 0.0)]]);
        (0..n).fold(one, |acc, _| &acc * self)
    }

    /// Homogeneous component of maximal total degree, ignoring entries at or
    /// below the default trimming tolerance.
    pub fn leading_form(&self) -> BiPoly {
        let tol = default_trim_tol(self.norm_inf());
        let Some(d) = self.total_degree(tol) else {
            return BiPoly::zero();
        };
        let (nt, ns) = (self.rows.len(), self.deg_s().map_or(0, |x| x + 1));
        BiPoly::from_fn(nt, ns, |i, j| if i + j == d { self.get(i, j) } else { Complex64::zero() })
    }

    /// Infinity-norm distance after the optimal complex rescaling of `other`
    /// onto `self`, relative to `‖self‖∞`. Zero iff the two are proportional.
    pub fn proportionality_residual(&self, other: &BiPoly) -> f64 {
        let nt = self.rows.len().max(other.rows.len());
        let ns = self.deg_s().map_or(0, |d| d + 1).max(other.deg_s().map_or(0, |d| d + 1));
        let mut dot = Complex64::zero();
        let mut oo = 0.0;
        for i in 0..nt {
            for j in 0..ns {
                let a = self.get(i, j);
                let b = other.get(i, j);
                dot += b.conj() * a;
                oo += b.norm_sqr();
            }
        }
        let scale = if oo > 0.0 { dot / oo } else { Complex64::zero() };
        let mut worst: f64 = 0.0;
        for i in 0..nt {
            for j in 0..ns {
                worst = worst.max((self.get(i, j) - other.get(i, j) * scale).norm());
            }
        }
        let n = self.norm_inf();
        if n == 0.0 {
            return worst;
        }
        worst / n
    }
}

fn combine(a: &BiPoly, b: &BiPoly, f: impl Fn(Complex64, Complex64) -> Complex64) -> BiPoly {
    let nt = a.rows.len().max(b.rows.len());
    let ns = a.deg_s().map_or(0, |d| d + 1).max(b.deg_s().map_or(0, |d| d + 1));
    BiPoly::from_fn(nt, ns, |i, j| f(a.get(i, j), b.get(i, j)))
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, |a, b| a + b)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, |a, b| a - b)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.map(|c| -c)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let (Some(at), Some(a_s), Some(bt), Some(bs)) =
            (self.deg_t(), self.deg_s(), rhs.deg_t(), rhs.deg_s())
        else {
            return BiPoly::zero();
        };
        let mut out = vec![vec![Complex64::zero(); a_s + bs + 1]; at + bt + 1];
        for (i, j, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (k, l, b) in rhs.iter() {
                out[i + k][j + l] += a * b;
            }
        }
        BiPoly::new(out)
    }
}
