//! Sylvester resultants: univariate determinants and parametric resultants
//! in `t` recovered by evaluation and interpolation.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det, lstsq, qr, Matrix};
use crate::numpoly::{BiPoly, PlaneParametrization, Poly, RationalFunction};

/// Relative least-squares residual above which an interpolated resultant is rejected.
pub const INTERPOLATION_TOL: f64 = 1e-8;
/// Oversampling factor of the interpolation grid in each variable.
pub const OVERSAMPLING: f64 = 1.5;
/// Half-width of the interval carrying the Chebyshev nodes.
pub const GRID_RADIUS: f64 = 2.0;

/// Sylvester matrix of `f` and `g` over their formal degrees `f.len() - 1`
/// and `g.len() - 1`: first `deg g` rows shift `f`, the next `deg f` rows shift `g`,
/// coefficients in descending order.
pub fn sylvester_matrix(f: &[Complex64], g: &[Complex64]) -> Matrix {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    let size = m + n;
    Matrix::from_fn(size, size, |i, j| {
        let (p, shift, deg) = if i < n { (f, i, m) } else { (g, i - n, n) };
        if j >= shift && j - shift <= deg {
            p[deg - (j - shift)]
        } else {
            Complex64::zero()
        }
    })
}

/// Resultant over the formal degrees `f.len() - 1`, `g.len() - 1`.
pub fn resultant_formal(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    match (m, n) {
        (0, 0) => Complex64::one(),
        (0, _) => f.first().copied().unwrap_or_default().powu(n as u32),
        (_, 0) => g.first().copied().unwrap_or_default().powu(m as u32),
        _ => det(&sylvester_matrix(f, g)).expect("Sylvester matrix is square"),
    }
}

/// Resultant of `f` and `g` at their trimmed degrees, `res(t - a, t - b) = a - b`.
pub fn resultant_uni(f: &Poly, g: &Poly) -> Result<Complex64> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(resultant_formal(f.coeffs(), g.coeffs()))
}

/// `n` Chebyshev nodes of the first kind scaled to `[-GRID_RADIUS, GRID_RADIUS]`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| GRID_RADIUS * (std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64).cos())
        .collect()
}

fn grid_size(deg: usize) -> usize {
    (OVERSAMPLING * (deg + 1) as f64).ceil() as usize
}

/// Interpolation setup and conditioning of one parametric resultant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultantPlan {
    pub deg_s: usize,
    pub deg_x: usize,
    /// `(s, x)` evaluation nodes.
    pub grid: Vec<(f64, f64)>,
    /// Largest and smallest `|R_ii|` of the column-equilibrated Vandermonde QR.
    pub pivot_max: f64,
    pub pivot_min: f64,
    /// `‖V c - y‖₂ / ‖y‖₂`
    pub fit_residual: f64,
}

/// `res_t(G(t, x), B(t, s))` as a polynomial in `(s, x)` with
/// `deg_s <= deg_s`, `deg_x <= deg_x`.
pub fn parametric_resultant_t(g: &BiPoly, b: &BiPoly, deg_x: usize, deg_s: usize) -> Result<BiPoly> {
    parametric_resultant_t_with_plan(g, b, deg_x, deg_s).map(|(r, _)| r)
}

/// As [`parametric_resultant_t`], also returning the interpolation plan.
pub fn parametric_resultant_t_with_plan(
    g: &BiPoly,
    b: &BiPoly,
    deg_x: usize,
    deg_s: usize,
) -> Result<(BiPoly, ResultantPlan)> {
    if g.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s_nodes = chebyshev_nodes(grid_size(deg_s));
    let x_nodes = chebyshev_nodes(grid_size(deg_x));
    let ns = deg_s + 1;
    let nx = deg_x + 1;

    let g_at: Vec<Vec<Complex64>> = x_nodes
        .iter()
        .map(|&x| g.specialize_s_formal(Complex64::new(x, 0.0)))
        .collect();
    let b_at: Vec<Vec<Complex64>> = s_nodes
        .iter()
        .map(|&s| b.specialize_s_formal(Complex64::new(s, 0.0)))
        .collect();

    let mut grid = Vec::with_capacity(s_nodes.len() * x_nodes.len());
    let mut values = Vec::with_capacity(grid.capacity());
    for (a, &s) in s_nodes.iter().enumerate() {
        for (c, &x) in x_nodes.iter().enumerate() {
            grid.push((s, x));
            values.push(resultant_formal(&g_at[c], &b_at[a]));
        }
    }

    let mut vander = Matrix::from_fn(grid.len(), ns * nx, |r, col| {
        let (s, x) = grid[r];
        let (i, j) = (col / nx, col % nx);
        Complex64::new(s.powi(i as i32) * x.powi(j as i32), 0.0)
    });
    let scales: Vec<f64> = (0..ns * nx)
        .map(|col| {
            (0..grid.len())
                .map(|r| vander.get(r, col).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    for r in 0..grid.len() {
        for (col, &sc) in scales.iter().enumerate() {
            vander.set(r, col, vander.get(r, col) / sc);
        }
    }
    let (_, rmat) = qr(&vander)?;
    let pivots: Vec<f64> = (0..ns * nx).map(|i| rmat.get(i, i).norm()).collect();
    let sol = lstsq(&vander, &values)?;
    let ynorm = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let fit_residual = if ynorm > 0.0 { sol.residual / ynorm } else { sol.residual };
    if fit_residual > INTERPOLATION_TOL {
        return Err(Error::InterpolationMismatch { residual: fit_residual });
    }
    let result = BiPoly::from_fn(ns, nx, |i, j| sol.x[i * nx + j] / scales[i * nx + j]);
    let plan = ResultantPlan {
        deg_s,
        deg_x,
        grid,
        pivot_max: pivots.iter().copied().fold(0.0, f64::max),
        pivot_min: pivots.iter().copied().fold(f64::INFINITY, f64::min),
        fit_residual,
    };
    Ok((result, plan))
}

/// `G(t, x) = x den(t) - num(t)` as a polynomial in `(t, x)`.
pub fn implicit_generator(f: &RationalFunction) -> BiPoly {
    let n = f.num.coeffs().len().max(f.den.coeffs().len());
    BiPoly::from_fn(n, 2, |i, j| if j == 0 { -f.num.coeff(i) } else { f.den.coeff(i) })
}

/// Implicit equation `res_t(x1 p12 - p11, x2 p22 - p21)` in `(x1, x2)`,
/// scaled to unit infinity norm.
pub fn implicitize(p: &PlaneParametrization) -> Result<BiPoly> {
    if p.x.is_constant() && p.y.is_constant() {
        return Err(Error::DegenerateParametrization("constant parametrization".into()));
    }
    let g1 = implicit_generator(&p.x);
    let g2 = implicit_generator(&p.y);
    let deg_x1 = g2.deg_t().unwrap_or(0);
    let deg_x2 = g1.deg_t().unwrap_or(0);
    let f = parametric_resultant_t(&g1, &g2, deg_x1, deg_x2)?.swap_vars();
    let f = if p.is_real() { f.map(|c| Complex64::new(c.re, 0.0)) } else { f };
    Ok(f.normalized())
}

/// Homogeneous component of maximal total degree. Coefficients at or below
/// `INTERPOLATION_TOL ‖f‖∞` are treated as interpolation noise.
pub fn leading_form(f: &BiPoly) -> BiPoly {
    let Some(d) = f.total_degree(INTERPOLATION_TOL * f.norm_inf()) else {
        return BiPoly::zero();
    };
    let (nt, ns) = (f.deg_t().map_or(0, |x| x + 1), f.deg_s().map_or(0, |x| x + 1));
    BiPoly::from_fn(nt, ns, |i, j| if i + j == d { f.get(i, j) } else { Complex64::zero() })
}
