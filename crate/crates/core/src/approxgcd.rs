//! Approximate gcds: univariate ε-gcd certificates and bivariate recovery
//! of the ε-gcd of the cross differences by specialization.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{convolution_matrix, lstsq, smallest_singular, Matrix};
use crate::numpoly::{cross_difference, BiPoly, PlaneParametrization, Poly};

/// Alternating least-squares passes used to polish a gcd candidate.
const REFINE_PASSES: usize = 8;
/// Alternating passes of the bivariate polish of `S`.
const POLISH_PASSES: usize = 20;
/// Size of the first batch of specializations used to estimate the index.
const INITIAL_SAMPLES: usize = 9;
/// Largest tolerated fraction of specializations disagreeing with the majority.
const MAX_DISAGREEMENT: f64 = 0.4;
/// Radius of the sampling region for the specialization points.
const SAMPLE_RADIUS: f64 = 2.0;
/// Relative magnitude below which a denominator counts as vanishing at a sample.
const POLE_GUARD: f64 = 1e-6;

/// ε-gcd `d` of `f`, `g` with cofactors and Bézout-like multipliers, plus the
/// residual norms that witness it.
#[derive(Clone, Debug, PartialEq)]
pub struct EgcdCertificate {
    pub d: Poly,
    pub u: Poly,
    pub v: Poly,
    pub f1: Poly,
    pub g1: Poly,
    /// `‖u f + v g - d‖₂`
    pub r_bezout: f64,
    /// `‖f - d f1‖₂`
    pub r_f: f64,
    /// `‖g - d g1‖₂`
    pub r_g: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    /// 2-norm of the concatenated coefficients of `f, g, u, v, d`.
    pub norm_all: f64,
    pub eps: f64,
}

impl EgcdCertificate {
    pub fn degree(&self) -> usize {
        self.d.degree_or_zero()
    }

    /// All three residual inequalities hold strictly.
    pub fn accepted(&self) -> bool {
        let below = |r: f64, bound: f64| r < bound || (r == 0.0 && bound == 0.0);
        below(self.r_bezout, self.eps * self.norm_all)
            && below(self.r_f, self.eps * self.norm_f)
            && below(self.r_g, self.eps * self.norm_g)
    }

    /// `max(r_f / ‖f‖, r_g / ‖g‖)`
    pub fn relative_residual(&self) -> f64 {
        let rf = if self.norm_f > 0.0 { self.r_f / self.norm_f } else { 0.0 };
        let rg = if self.norm_g > 0.0 { self.r_g / self.norm_g } else { 0.0 };
        rf.max(rg)
    }
}

fn padded(p: &Poly, len: usize) -> Vec<Complex64> {
    (0..len).map(|k| p.coeff(k)).collect()
}

fn mul_coeffs(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
    (0..n).map(|k| (get(a, k) - get(b, k)).norm_sqr()).sum::<f64>().sqrt()
}

/// Least-squares `x` with `conv(p, n) x ≈ target`.
fn solve_factor(p: &[Complex64], n: usize, target: &[Complex64]) -> Result<Vec<Complex64>> {
    let a = convolution_matrix(p, n);
    let rhs: Vec<Complex64> = (0..a.rows()).map(|k| target.get(k).copied().unwrap_or_default()).collect();
    Ok(lstsq(&a, &rhs)?.x)
}

/// `d` minimizing `‖d f1 - f‖² + ‖d g1 - g‖²` with `k + 1` coefficients.
fn solve_common(f1: &[Complex64], g1: &[Complex64], f: &[Complex64], g: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    let a = convolution_matrix(f1, k + 1).vstack(&convolution_matrix(g1, k + 1))?;
    let mut rhs = f.to_vec();
    rhs.resize(f1.len() + k, Complex64::zero());
    let mut rg = g.to_vec();
    rg.resize(g1.len() + k, Complex64::zero());
    rhs.extend(rg);
    Ok(lstsq(&a, &rhs)?.x)
}

/// Bézout-like multipliers for `u f + v g ≈ d`, with `deg u < deg g - deg d`
/// and `deg v < deg f - deg d` (one constant coefficient when both bounds are empty).
fn bezout(f: &Poly, g: &Poly, d: &Poly) -> Result<(Poly, Poly)> {
    let (m, n, k) = (f.degree_or_zero(), g.degree_or_zero(), d.degree_or_zero());
    let mut nu = n.saturating_sub(k);
    let nv = m.saturating_sub(k);
    if nu == 0 && nv == 0 {
        nu = 1;
    }
    let cf = convolution_matrix(f.coeffs(), nu);
    let cg = convolution_matrix(g.coeffs(), nv);
    let rows = cf.rows().max(cg.rows()).max(k + 1);
    let a = Matrix::from_fn(rows, nu + nv, |i, j| {
        if j < nu {
            if i < cf.rows() { cf.get(i, j) } else { Complex64::zero() }
        } else if i < cg.rows() {
            cg.get(i, j - nu)
        } else {
            Complex64::zero()
        }
    });
    let rhs = padded(d, rows);
    let x = if rows >= nu + nv {
        lstsq(&a, &rhs)?.x
    } else {
        // Underdetermined: minimum-norm solution through the adjoint system.
        let aah = a.mul(&a.adjoint());
        let y = lstsq(&aah, &rhs)?.x;
        a.adjoint().mul_vec(&y)
    };
    Ok((Poly::new(x[..nu].to_vec()), Poly::new(x[nu..].to_vec())))
}

fn certify(f: &Poly, g: &Poly, d: Poly, f1: Poly, g1: Poly, eps: f64) -> Result<EgcdCertificate> {
    let (u, v) = bezout(f, g, &d)?;
    let uf = &u * f;
    let vg = &v * g;
    let r_bezout = diff_norm((&uf + &vg).coeffs(), d.coeffs());
    let r_f = diff_norm(f.coeffs(), (&d * &f1).coeffs());
    let r_g = diff_norm(g.coeffs(), (&d * &g1).coeffs());
    let norm_all = [f, g, &u, &v, &d]
        .iter()
        .map(|p| p.norm2().powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(EgcdCertificate {
        d,
        u,
        v,
        f1,
        g1,
        r_bezout,
        r_f,
        r_g,
        norm_f: f.norm2(),
        norm_g: g.norm2(),
        norm_all,
        eps,
    })
}

/// Best gcd candidate of exact degree `k` for `f`, `g` (both of degree >= k).
fn candidate(f: &Poly, g: &Poly, k: usize, eps: f64) -> Result<EgcdCertificate> {
    let (m, n) = (f.degree_or_zero(), g.degree_or_zero());
    let (nf, ng) = (f.norm2(), g.norm2());
    let fs: Vec<Complex64> = f.coeffs().iter().map(|c| c / nf).collect();
    let gs: Vec<Complex64> = g.coeffs().iter().map(|c| c / ng).collect();
    let (lf, lg) = (m - k + 1, n - k + 1);

    // fs g1 - gs f1 = 0 for the cofactors.
    let cf = convolution_matrix(&fs, lg);
    let cg = convolution_matrix(&gs, lf);
    let sylv = Matrix::from_fn(cf.rows(), lg + lf, |i, j| {
        if j < lg { cf.get(i, j) } else { cg.get(i, j - lg) }
    });
    let (_, null) = smallest_singular(&sylv);
    let mut g1: Vec<Complex64> = null[..lg].to_vec();
    let mut f1: Vec<Complex64> = null[lg..].iter().map(|c| -c).collect();
    let mut d = solve_common(&f1, &g1, &fs, &gs, k)?;
    for _ in 0..REFINE_PASSES {
        f1 = solve_factor(&d, lf, &fs)?;
        g1 = solve_factor(&d, lg, &gs)?;
        d = solve_common(&f1, &g1, &fs, &gs, k)?;
    }

    let lc = d[k];
    if lc.norm() == 0.0 || !lc.is_finite() {
        return Err(Error::DegenerateGcdInput);
    }
    let mut dm: Vec<Complex64> = d.iter().map(|c| c / lc).collect();
    dm[k] = Complex64::one();
    let f1: Vec<Complex64> = f1.iter().map(|c| c * lc * nf).collect();
    let g1: Vec<Complex64> = g1.iter().map(|c| c * lc * ng).collect();
    // Final cofactor fit against the unscaled inputs.
    let f1 = {
        let refit = solve_factor(&dm, lf, f.coeffs())?;
        if diff_norm(f.coeffs(), &mul_coeffs(&dm, &refit)) <= diff_norm(f.coeffs(), &mul_coeffs(&dm, &f1)) {
            refit
        } else {
            f1
        }
    };
    let g1 = {
        let refit = solve_factor(&dm, lg, g.coeffs())?;
        if diff_norm(g.coeffs(), &mul_coeffs(&dm, &refit)) <= diff_norm(g.coeffs(), &mul_coeffs(&dm, &g1)) {
            refit
        } else {
            g1
        }
    };
    certify(f, g, Poly::from_raw(dm), Poly::from_raw(f1), Poly::from_raw(g1), eps)
}

fn trivial_certificate(f: &Poly, g: &Poly, eps: f64) -> Result<EgcdCertificate> {
    certify(f, g, Poly::one(), f.clone(), g.clone(), eps)
}

/// ε-gcd of two univariate polynomials with a residual certificate.
///
/// Candidate degrees are tried from `min(deg f, deg g)` down to 1 and the
/// first accepted certificate is returned; otherwise the degree-0 certificate
/// `d = 1` is returned. `d` is monic.
pub fn egcd_uni(f: &Poly, g: &Poly, eps: f64) -> Result<EgcdCertificate> {
    let f_small = f.norm2() <= eps;
    let g_small = g.norm2() <= eps;
    if f_small && g_small {
        return Err(Error::DegenerateGcdInput);
    }
    if f.is_zero() || g.is_zero() {
        let (nz, f_is_zero) = if f.is_zero() { (g, true) } else { (f, false) };
        let lc = nz.lc();
        let d = nz.monic();
        let unit = Poly::constant(lc);
        let inv = Poly::constant(Complex64::one() / lc);
        let (f1, g1, u, v) = if f_is_zero {
            (Poly::zero(), unit, Poly::zero(), inv)
        } else {
            (unit, Poly::zero(), inv, Poly::zero())
        };
        let r_bezout = diff_norm((&(&u * f) + &(&v * g)).coeffs(), d.coeffs());
        let norm_all = [f, g, &u, &v, &d].iter().map(|p| p.norm2().powi(2)).sum::<f64>().sqrt();
        return Ok(EgcdCertificate {
            r_f: diff_norm(f.coeffs(), (&d * &f1).coeffs()),
            r_g: diff_norm(g.coeffs(), (&d * &g1).coeffs()),
            d,
            u,
            v,
            f1,
            g1,
            r_bezout,
            norm_f: f.norm2(),
            norm_g: g.norm2(),
            norm_all,
            eps,
        });
    }
    let kmax = f.degree_or_zero().min(g.degree_or_zero());
    for k in (1..=kmax).rev() {
        if let Ok(cert) = candidate(f, g, k, eps) {
            if cert.accepted() {
                return Ok(cert);
            }
        }
    }
    trivial_certificate(f, g, eps)
}

/// Best common factor of exactly degree `k` with its certificate, whether or
/// not the certificate is accepted at `eps`.
pub fn egcd_of_degree(f: &Poly, g: &Poly, k: usize, eps: f64) -> Result<EgcdCertificate> {
    if k == 0 {
        return trivial_certificate(f, g, eps);
    }
    if k > f.degree_or_zero().min(g.degree_or_zero()) {
        return Err(Error::DegenerateGcdInput);
    }
    candidate(f, g, k, eps)
}

/// ε-gcd of one specialization, restricted to degrees dividing `degree_gcd`:
/// the index of a reduced `P` divides the degree of each component. Falls
/// back to the unrestricted certificate when no admissible degree is accepted.
fn index_egcd(f: &Poly, g: &Poly, eps: f64, degree_gcd: usize) -> Result<EgcdCertificate> {
    let cert = egcd_uni(f, g, eps)?;
    if degree_gcd == 0 || cert.degree() == 0 || degree_gcd % cert.degree() == 0 {
        return Ok(cert);
    }
    for k in (1..cert.degree()).rev().filter(|k| degree_gcd % k == 0) {
        if let Ok(c) = egcd_of_degree(f, g, k, eps) {
            if c.accepted() {
                return Ok(c);
            }
        }
    }
    Ok(cert)
}

/// Relative residual `max(r_f/‖f‖, r_g/‖g‖)` of the best candidate at each
/// gcd degree `1..=min(deg f, deg g)`.
pub fn gcd_degree_profile(f: &Poly, g: &Poly) -> Result<Vec<(usize, f64)>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let kmax = f.degree_or_zero().min(g.degree_or_zero());
    (1..=kmax)
        .map(|k| candidate(f, g, k, 0.0).map(|c| (k, c.relative_residual())))
        .collect()
}

/// Recovered bivariate ε-gcd `S(t, s)` of the cross differences.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateGcdResult {
    pub s: BiPoly,
    /// `deg_t S`, the approximate improper index.
    pub ell: usize,
    pub sample_points: Vec<Complex64>,
    /// Smallest singular value of the stacked projection system.
    pub fit_residual: f64,
    /// `(degree, count)` over all specializations, ascending by degree.
    pub votes: Vec<(usize, usize)>,
    /// Per-specialization certificates, in sample order.
    pub certificates: Vec<EgcdCertificate>,
}

/// Diagnostics of an index computation for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexDiagnostics {
    pub n_samples: usize,
    pub votes: Vec<(usize, usize)>,
    pub fit_residual: f64,
}

impl BivariateGcdResult {
    pub fn diagnostics(&self) -> IndexDiagnostics {
        IndexDiagnostics {
            n_samples: self.sample_points.len(),
            votes: self.votes.clone(),
            fit_residual: self.fit_residual,
        }
    }
}

fn draw_point(rng: &mut ChaCha8Rng, real: bool) -> Complex64 {
    if real {
        Complex64::new(rng.random_range(-SAMPLE_RADIUS..SAMPLE_RADIUS), 0.0)
    } else {
        let r = SAMPLE_RADIUS * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        Complex64::from_polar(r, theta)
    }
}

struct Sample {
    s: Complex64,
    cert: EgcdCertificate,
}

fn majority(samples: &[Sample]) -> (usize, usize, Vec<(usize, usize)>) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for sm in samples {
        *counts.entry(sm.cert.degree()).or_default() += 1;
    }
    let votes: Vec<(usize, usize)> = counts.into_iter().collect();
    // Ascending degree order makes ties resolve toward the smaller degree.
    let (deg, count) = votes
        .iter()
        .copied()
        .fold((0, 0), |best, (d, c)| if c > best.1 { (d, c) } else { best });
    (deg, count, votes)
}

/// Approximate improper index of `p` and the bivariate ε-gcd `S` it comes from.
///
/// Specializations `s_k` are drawn from a generator seeded with `seed`
/// (uniform on `[-2, 2]` for real input, on the disc of radius 2 otherwise),
/// the index is the majority gcd degree, and `S` is fitted to the per-sample
/// gcds of that degree. `S` is returned with unit infinity norm.
pub fn approx_improper_index(
    p: &PlaneParametrization,
    eps: f64,
    n_samples: Option<usize>,
    seed: u64,
) -> Result<BivariateGcdResult> {
    if p.is_degenerate(eps) {
        return Err(Error::DegenerateParametrization("both components are ε-constant".into()));
    }
    let h1 = cross_difference(&p.x, &p.x);
    let h2 = cross_difference(&p.y, &p.y);
    let real = p.is_real();
    let dens = [&p.x.den, &p.y.den];
    let degree_gcd = p.x.degree().gcd(&p.y.degree());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Sample> = Vec::new();
    let mut attempts = 0usize;

    let mut draw_until = |target: usize, samples: &mut Vec<Sample>| -> Result<()> {
        while samples.len() < target {
            attempts += 1;
            if attempts > 200 * target.max(10) {
                return Err(Error::DegenerateParametrization(
                    "could not find admissible specialization points".into(),
                ));
            }
            let s = draw_point(&mut rng, real);
            if dens.iter().any(|d| d.eval(s).norm() < POLE_GUARD * d.norm_inf()) {
                continue;
            }
            let f = h1.specialize_s(s);
            let g = h2.specialize_s(s);
            if f.is_zero() && g.is_zero() {
                continue;
            }
            let Ok(cert) = index_egcd(&f, &g, eps, degree_gcd) else {
                continue;
            };
            samples.push(Sample { s, cert });
        }
        Ok(())
    };

    draw_until(INITIAL_SAMPLES, &mut samples)?;
    let (ell0, _, _) = majority(&samples);
    let target = n_samples.unwrap_or(3 * (ell0 + 1) * (ell0 + 1)).max(INITIAL_SAMPLES);
    draw_until(target, &mut samples)?;
    let (ell, agreeing, votes) = majority(&samples);
    let total = samples.len();
    if (total - agreeing) as f64 > MAX_DISAGREEMENT * total as f64 {
        return Err(Error::UnstableIndex { degree: ell, agreeing, total, votes });
    }
    if ell == 0 {
        return Err(Error::DegenerateParametrization(
            "specialized cross differences have no common factor".into(),
        ));
    }

    let (s, fit_residual) = fit_bivariate(&samples, ell, real)?;
    let (s, _) = polish_bivariate(&[h1.clone(), h2.clone()], s, ell)?;
    let s = normalize_phase(s, real);
    Ok(BivariateGcdResult {
        ell: s.deg_t().unwrap_or(0),
        s,
        sample_points: samples.iter().map(|sm| sm.s).collect(),
        fit_residual,
        votes,
        certificates: samples.into_iter().map(|sm| sm.cert).collect(),
    })
}

/// Fits `S` with `deg_t = deg_s = ell` so that each `S(t, s_k)` is parallel to
/// the per-sample gcd `d_k`: the component of `S(t, s_k)` orthogonal to the
/// unit vector `d_k` is minimized, which removes the per-sample scale.
fn fit_bivariate(samples: &[Sample], ell: usize, real: bool) -> Result<(BiPoly, f64)> {
    let n = ell + 1;
    let unknowns = n * n;
    let used: Vec<&Sample> = samples.iter().filter(|sm| sm.cert.degree() == ell).collect();
    let mut a = Matrix::zeros(used.len() * n, unknowns);
    for (b, sm) in used.iter().enumerate() {
        let dn = sm.cert.d.norm2();
        let d: Vec<Complex64> = (0..n).map(|i| sm.cert.d.coeff(i) / dn).collect();
        let pows: Vec<Complex64> = (0..n).map(|j| sm.s.powu(j as u32)).collect();
        // Row i of V_k: coefficient of t^i in S(t, s_k); column (i', j) -> i' * n + j.
        for i in 0..n {
            for col_i in 0..n {
                let proj = if i == col_i { Complex64::one() } else { Complex64::zero() }
                    - d[i] * d[col_i].conj();
                if proj.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(b * n + i, col_i * n + j, proj * pows[j]);
                }
            }
        }
    }
    let (sigma, v) = smallest_singular(&a);
    let rows: Vec<Vec<Complex64>> = (0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect();
    Ok((normalize_phase(BiPoly::new(rows), real), sigma))
}

/// Dense coefficient vector of `b` on a `(nt, ns)` grid, row-major in `t`.
fn grid_vec(b: &BiPoly, nt: usize, ns: usize) -> Vec<Complex64> {
    (0..nt).flat_map(|i| (0..ns).map(move |j| b.get(i, j))).collect()
}

/// Matrix of `x ↦ a x` for `x` on an `(nt, ns)` grid.
fn biconv(a: &BiPoly, nt: usize, ns: usize) -> Matrix {
    let (at, as_) = (a.deg_t().unwrap_or(0) + 1, a.deg_s().unwrap_or(0) + 1);
    let (rt, rs) = (at + nt - 1, as_ + ns - 1);
    let mut m = Matrix::zeros(rt * rs, nt * ns);
    for (i, j, c) in a.iter() {
        for k in 0..nt {
            for l in 0..ns {
                m.set((i + k) * rs + j + l, k * ns + l, c);
            }
        }
    }
    m
}

fn from_grid(v: &[Complex64], nt: usize, ns: usize) -> BiPoly {
    BiPoly::new((0..nt).map(|i| v[i * ns..(i + 1) * ns].to_vec()).collect())
}

/// Polishes `S` as an approximate common factor of the full cross differences:
/// Gauss-Newton on `Σ_k ‖S A_k - H_k‖₂²` over `S` and the cofactors `A_k`,
/// with the scale of `S` fixed by `⟨S₀, S⟩ = ⟨S₀, S₀⟩`. Keeps the best iterate
/// and returns it with its residual.
fn polish_bivariate(hs: &[BiPoly], s0: BiPoly, ell: usize) -> Result<(BiPoly, f64)> {
    let n = ell + 1;
    let ns = n * n;
    let targets: Vec<(Vec<Complex64>, usize, usize)> = hs
        .iter()
        .filter(|h| h.deg_t().unwrap_or(0) >= ell && h.deg_s().unwrap_or(0) >= ell)
        .map(|h| {
            let (nt, nsd) = (h.deg_t().unwrap() + 1, h.deg_s().unwrap() + 1);
            let scale = h.norm2();
            let v = grid_vec(h, nt, nsd).into_iter().map(|c| c / scale).collect();
            (v, nt, nsd)
        })
        .collect();
    if targets.is_empty() {
        return Ok((s0, 0.0));
    }
    let cof_dims: Vec<(usize, usize)> = targets.iter().map(|(_, nt, nsd)| (nt - ell, nsd - ell)).collect();
    let n_rows: usize = targets.iter().map(|(v, _, _)| v.len()).sum::<usize>() + 1;
    let n_cols: usize = ns + cof_dims.iter().map(|(a, b)| a * b).sum::<usize>();

    let fit_cofactors = |s: &BiPoly| -> Result<(f64, Vec<BiPoly>)> {
        let mut total = 0.0;
        let mut cofs = Vec::new();
        for ((v, _, _), &(ct, cs)) in targets.iter().zip(&cof_dims) {
            let sol = lstsq(&biconv(s, ct, cs), v)?;
            total += sol.residual.powi(2);
            cofs.push(from_grid(&sol.x, ct, cs));
        }
        Ok((total.sqrt(), cofs))
    };
    let (r0, mut cofs) = fit_cofactors(&s0)?;
    let s0v = grid_vec(&s0, n, n);
    let s0_sq: f64 = s0v.iter().map(|c| c.norm_sqr()).sum();
    let mut best = (s0.clone(), r0);
    let mut s = s0;
    for _ in 0..POLISH_PASSES {
        let sv = grid_vec(&s, n, n);
        let mut jac = Matrix::zeros(n_rows, n_cols);
        let mut rhs = vec![Complex64::zero(); n_rows];
        let (mut row, mut col) = (0usize, ns);
        for (((v, nt, nsd), cof), &(ct, cs)) in targets.iter().zip(&cofs).zip(&cof_dims) {
            let by_s = biconv(cof, n, n);
            let by_cof = biconv(&s, ct, cs);
            let prod = biconv(&s, ct, cs).mul_vec(&grid_vec(cof, ct, cs));
            // `biconv` sizes rows by the actual degrees; place them on the target grid.
            let place = |shape: (usize, usize), k: usize| -> Option<usize> {
                let rs = shape.1;
                let (i, j) = (k / rs, k % rs);
                (i < *nt && j < *nsd).then_some(i * nsd + j)
            };
            let s_shape = (s.deg_t().unwrap_or(0) + ct, s.deg_s().unwrap_or(0) + cs);
            let c_shape = (cof.deg_t().unwrap_or(0) + n, cof.deg_s().unwrap_or(0) + n);
            for k in 0..by_s.rows() {
                if let Some(r) = place(c_shape, k) {
                    for c in 0..ns {
                        jac.set(row + r, c, by_s.get(k, c));
                    }
                }
            }
            let mut model = vec![Complex64::zero(); v.len()];
            for k in 0..by_cof.rows() {
                if let Some(r) = place(s_shape, k) {
                    for c in 0..ct * cs {
                        jac.set(row + r, col + c, by_cof.get(k, c));
                    }
                    model[r] = prod[k];
                }
            }
            for (r, (m, t)) in model.iter().zip(v).enumerate() {
                rhs[row + r] = t - m;
            }
            row += v.len();
            col += ct * cs;
        }
        for (c, z) in s0v.iter().enumerate() {
            jac.set(row, c, z.conj());
        }
        let dot: Complex64 = s0v.iter().zip(&sv).map(|(a, b)| a.conj() * b).sum();
        rhs[row] = Complex64::new(s0_sq, 0.0) - dot;
        let step = lstsq(&jac, &rhs)?.x;
        let next: Vec<Complex64> = sv.iter().zip(&step[..ns]).map(|(a, d)| a + d).collect();
        s = from_grid(&next, n, n);
        let (r, next_cofs) = fit_cofactors(&s)?;
        cofs = next_cofs;
        let improved = r < best.1;
        let converged = r >= best.1 * (1.0 - 1e-6);
        if improved {
            best = (s.clone(), r);
        }
        if converged {
            break;
        }
    }
    Ok(best)
}

/// Scales to unit infinity norm, making the largest coefficient of the
/// highest `t`-degree row real and positive; drops imaginary parts for real data.
pub(crate) fn normalize_phase(s: BiPoly, real: bool) -> BiPoly {
    let m = s.norm_inf();
    let Some(top) = s.rows().last() else {
        return s;
    };
    let pivot = top
        .iter()
        .copied()
        .fold(Complex64::zero(), |best, c| if c.norm() > best.norm() { c } else { best });
    if pivot.is_zero() {
        return s;
    }
    let k = pivot.conj() / (pivot.norm() * m);
    let out = s.scale(k);
    if real {
        out.map(|c| Complex64::new(c.re, 0.0))
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numpoly::{approx_eq, RationalFunction};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rf(num: &[f64], den: &[f64]) -> RationalFunction {
        RationalFunction::from_real(num, den).unwrap()
    }

    #[test]
    fn identical_inputs() {
        let f = Poly::from_real(&[2.0, -3.0, 1.0]);
        let cert = egcd_uni(&f, &f, 1e-8).unwrap();
        assert_eq!(cert.degree(), 2);
        assert!(cert.accepted());
        assert!(cert.r_f < 1e-12 && cert.r_g < 1e-12);
        assert!((cert.f1.coeff(0) - c(1.0)).norm() < 1e-10);
    }

    #[test]
    fn exact_common_linear_factor() {
        let f = Poly::from_roots(&[c(1.0), c(-2.0)]);
        let g = Poly::from_roots(&[c(1.0), c(-3.0)]);
        let cert = egcd_uni(&f, &g, 1e-8).unwrap();
        assert_eq!(cert.degree(), 1);
        assert!((cert.d.coeff(0) - c(-1.0)).norm() < 1e-8);
    }

    #[test]
    fn perturbation_below_tolerance_keeps_degree() {
        let f = &Poly::from_roots(&[c(1.0), c(-2.0)]) + &Poly::from_real(&[1e-6]);
        let g = Poly::from_roots(&[c(1.0), c(-3.0)]);
        let cert = egcd_uni(&f, &g, 1e-4).unwrap();
        assert_eq!(cert.degree(), 1);
        assert!(cert.accepted());
    }

    #[test]
    fn coprime_inputs_give_trivial_gcd() {
        let f = Poly::from_real(&[0.0, 1.0]);
        let g = Poly::from_real(&[1.0, 1.0]);
        let cert = egcd_uni(&f, &g, 1e-6).unwrap();
        assert_eq!(cert.degree(), 0);
        assert!(cert.accepted());
    }

    #[test]
    fn zero_inputs() {
        let f = Poly::from_real(&[2.0, 4.0]);
        let cert = egcd_uni(&f, &Poly::zero(), 1e-8).unwrap();
        assert_eq!(cert.d, Poly::from_real(&[0.5, 1.0]));
        assert_eq!(egcd_uni(&Poly::zero(), &Poly::zero(), 1e-8), Err(Error::DegenerateGcdInput));
    }

    #[test]
    fn profile_cases() {
        let p = gcd_degree_profile(&Poly::from_real(&[0.0, 1.0]), &Poly::from_real(&[1.0, 1.0])).unwrap();
        assert!(p[0].1 >= 0.1);
        let sq = Poly::from_real(&[0.0, 0.0, 1.0]);
        let p = gcd_degree_profile(&sq, &sq).unwrap();
        assert!(p[1].1 < 1e-12);
        let f = Poly::from_roots(&[c(1.0), c(-2.0)]);
        let g = Poly::from_roots(&[c(1.0), c(-3.0)]);
        let p = gcd_degree_profile(&f, &g).unwrap();
        assert!(p[0].1 < 1e-10);
        assert!(p[1].1 > 0.01);
    }

    #[test]
    fn brute_force_linear_gcd_residual_bounds_profile() {
        // Oracle: grid search over d = t + a, with the cofactor scalars chosen
        // optimally, i.e. distances of f and g to the line spanned by d.
        let f = Poly::from_real(&[0.0, 1.0]);
        let g = Poly::from_real(&[1.0, 1.0]);
        let dist = |p: [f64; 2], a: f64| {
            let dd = a * a + 1.0;
            let dot = p[0] * a + p[1];
            let pp = p[0] * p[0] + p[1] * p[1];
            ((pp - dot * dot / dd).max(0.0) / pp).sqrt()
        };
        let best = (0..=40000)
            .map(|i| {
                let a = -10.0 + i as f64 * 5e-4;
                dist([0.0, 1.0], a).max(dist([1.0, 1.0], a))
            })
            .fold(f64::INFINITY, f64::min);
        let prof = gcd_degree_profile(&f, &g).unwrap();
        assert!(prof[0].1 >= best - 1e-3);
        assert!(best >= 0.1);
    }

    #[test]
    fn proper_parabola_has_index_one() {
        let p = PlaneParametrization::new(rf(&[0.0, 1.0], &[1.0]), rf(&[0.0, 0.0, 1.0], &[1.0]));
        let res = approx_improper_index(&p, 1e-6, None, 1).unwrap();
        assert_eq!(res.ell, 1);
        let ts = BiPoly::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(approx_eq(&res.s, &ts, 1e-6).unwrap());
    }

    #[test]
    fn composed_with_square_has_index_two() {
        // Q0(t^2) with Q0 = (t/(t^2+1), t^2/(t^2+1)).
        let p = PlaneParametrization::new(
            rf(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0, 1.0]),
            rf(&[0.0, 0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0, 1.0]),
        );
        let res = approx_improper_index(&p, 1e-6, None, 3).unwrap();
        assert_eq!(res.ell, 2);
        let expected = BiPoly::from_real(&[&[0.0, 0.0, -1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert!(approx_eq(&res.s, &expected, 1e-6).unwrap());
    }

    #[test]
    fn index_is_scale_invariant() {
        let p = PlaneParametrization::new(
            rf(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0, 1.0]),
            rf(&[0.0, 0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0, 1.0]),
        );
        let k = c(-7.5);
        let scaled = PlaneParametrization::new(p.x.map_coeffs(|z| z * k), p.y.map_coeffs(|z| z * k));
        let a = approx_improper_index(&p, 1e-6, None, 5).unwrap();
        let b = approx_improper_index(&scaled, 1e-6, None, 5).unwrap();
        assert_eq!(a.ell, b.ell);
    }

    #[test]
    fn constant_input_is_degenerate() {
        let p = PlaneParametrization::new(rf(&[2.0], &[1.0]), rf(&[3.0], &[1.0]));
        assert!(matches!(
            approx_improper_index(&p, 1e-6, None, 0),
            Err(Error::DegenerateParametrization(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use proptest::test_runner::RngSeed;

        fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
            prop::collection::vec(-3.0f64..3.0, 2..=max_deg + 1)
                .prop_filter("nonzero leading", |v| v.last().unwrap().abs() > 0.1)
                .prop_map(|v| Poly::from_real(&v))
        }

        proptest! {
            #![proptest_config(ProptestConfig {
                cases: 48,
                rng_seed: RngSeed::Fixed(0x5eed),
                ..ProptestConfig::default()
            })]

            #[test]
            fn accepted_certificates_satisfy_inequalities(f in poly_strategy(5), g in poly_strategy(5), eps in 1e-8f64..1e-2) {
                let cert = egcd_uni(&f, &g, eps).unwrap();
                prop_assert!(cert.accepted() || cert.degree() == 0);
                if cert.accepted() {
                    prop_assert!(cert.r_bezout < eps * cert.norm_all);
                    prop_assert!(cert.r_f < eps * cert.norm_f);
                    prop_assert!(cert.r_g < eps * cert.norm_g);
                }
            }

            #[test]
            fn gcd_is_symmetric(common in poly_strategy(2), a in poly_strategy(3), b in poly_strategy(3)) {
                let f = &common * &a;
                let g = &common * &b;
                let x = egcd_uni(&f, &g, 1e-8).unwrap();
                let y = egcd_uni(&g, &f, 1e-8).unwrap();
                prop_assert_eq!(x.degree(), y.degree());
                for k in 0..=x.degree() {
                    prop_assert!((x.d.coeff(k) - y.d.coeff(k)).norm() <= 1e-8 * x.d.norm_inf().max(1.0));
                }
            }
        }
    }
}
