//! Closeness certificates for `P ≈ Q(R)` on a real interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numpoly::{PlaneParametrization, Poly, RationalFunction};

pub const DEFAULT_GRID: usize = 4096;
/// Denominator minimum below which an interval is taken to contain a pole.
pub const POLE_FLOOR: f64 = 1e-9;
/// Relative half-width of the band removed around each pole when splitting.
pub const GUARD_BAND: f64 = 1e-3;
const GOLDEN_STEPS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntervalSpec {
    pub d1: f64,
    pub d2: f64,
    pub grid_n: usize,
}

impl IntervalSpec {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        Self::with_grid(d1, d2, DEFAULT_GRID)
    }

    pub fn with_grid(d1: f64, d2: f64, grid_n: usize) -> Result<Self> {
        if !(d1.is_finite() && d2.is_finite()) || d1 >= d2 {
            return Err(Error::InvalidInterval(format!("need finite d1 < d2, got ({d1}, {d2})")));
        }
        if grid_n < 2 {
            return Err(Error::InvalidInterval("grid needs at least two points".into()));
        }
        Ok(IntervalSpec { d1, d2, grid_n })
    }

    /// `max(|d1|, |d2|)`
    pub fn d(&self) -> f64 {
        self.d1.abs().max(self.d2.abs())
    }

    /// `n` equispaced points including both ends.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = (self.d2 - self.d1) / (n - 1) as f64;
        (0..n).map(move |k| if k == n - 1 { self.d2 } else { self.d1 + step * k as f64 })
    }
}

/// `d`, `M`, `C` and the degrees they were computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub d: f64,
    pub m: f64,
    pub c: f64,
    pub ell: usize,
    pub deg_p: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorBoundReport {
    pub interval: IntervalSpec,
    pub d: f64,
    pub m: f64,
    pub c: f64,
    pub ell: usize,
    pub deg_p: usize,
    pub norm_p: f64,
    pub norm_q: f64,
    pub point_bound: f64,
    pub offset_bound: f64,
    pub empirical_max: f64,
    pub eps_used: f64,
}

/// `min_i min(|q_i2(R(t))|, |p_i2(t)|)` at one point.
fn denominator_floor(p: &PlaneParametrization, q: &PlaneParametrization, r: &RationalFunction, t: f64) -> f64 {
    let rt = r.eval_real(t);
    if !(rt.re.is_finite() && rt.im.is_finite()) {
        return 0.0;
    }
    let mut m = f64::INFINITY;
    for k in 0..2 {
        m = m.min(p.component(k).den.eval_real(t).norm());
        m = m.min(q.component(k).den.eval(rt).norm());
    }
    m
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Lower bound `M` of the four denominators over the closed interval: grid
/// minimum refined by golden-section search in the neighbouring cells.
pub fn denominator_minimum(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    interval: &IntervalSpec,
) -> f64 {
    let f = |t: f64| denominator_floor(p, q, r, t);
    let pts: Vec<f64> = interval.grid(interval.grid_n).collect();
    let (kmin, mut best) = pts
        .iter()
        .map(|&t| f(t))
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let lo = pts[kmin.saturating_sub(1)];
    let hi = pts[(kmin + 1).min(pts.len() - 1)];
    if hi > lo {
        best = best.min(golden_min(f, lo, hi).1);
    }
    best
}

/// `C` from `d`, `ℓ` and `deg P`; `d` within `1e-12` of one uses the `d = 1` case.
pub fn c_constant(d: f64, ell: usize, deg_p: usize) -> f64 {
    let inv = 1.0 / ell as f64;
    if (d - 1.0).abs() <= 1e-12 {
        ((ell * deg_p) as f64).powf(inv)
    } else if d > 1.0 {
        d.powi(deg_p as i32 + 1) / (d - 1.0).powf(inv)
    } else {
        1.0 / (1.0 - d).powf(inv)
    }
}

pub fn bound_constants(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    interval: &IntervalSpec,
) -> Result<BoundConstants> {
    let m = denominator_minimum(p, q, r, interval);
    if !(m >= POLE_FLOOR) {
        return Err(Error::PoleInInterval { d1: interval.d1, d2: interval.d2, minimum: m });
    }
    let d = interval.d();
    let ell = r.degree();
    let deg_p = p.degree();
    Ok(BoundConstants { d, m, c: c_constant(d, ell, deg_p), ell, deg_p })
}

/// Simplified upper bound on `C`: `d^(deg P + 1)` for `d >= 2`,
/// `2^(deg P + 1)` for `1 < d < 2`, none for `d <= 1`.
pub fn corollary_bound(d: f64, deg_p: usize) -> Option<f64> {
    if d >= 2.0 {
        Some(d.powi(deg_p as i32 + 1))
    } else if d > 1.0 {
        Some(2f64.powi(deg_p as i32 + 1))
    } else {
        None
    }
}

/// `2 / M² · ε · C · ‖p‖ ‖q‖`
pub fn point_bound(m: f64, eps: f64, c: f64, norm_p: f64, norm_q: f64) -> f64 {
    2.0 / (m * m) * eps * c * norm_p * norm_q
}

/// `4√2 / M² · ε · C · ‖p‖ ‖q‖`
pub fn offset_bound(m: f64, eps: f64, c: f64, norm_p: f64, norm_q: f64) -> f64 {
    4.0 * std::f64::consts::SQRT_2 / (m * m) * eps * c * norm_p * norm_q
}

/// `max |p_i(t) - q_i(R(t))|` over `n` equispaced points of the closed interval.
pub fn empirical_max_deviation(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    interval: &IntervalSpec,
    n: usize,
) -> f64 {
    interval
        .grid(n.max(2))
        .map(|t| {
            let rt = r.eval_real(t);
            (0..2)
                .map(|k| (p.component(k).eval_real(t) - q.component(k).eval(rt)).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Constants, bounds and empirical deviation in one report.
pub fn error_bound(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    interval: &IntervalSpec,
    eps_used: f64,
    n_empirical: usize,
) -> Result<ErrorBoundReport> {
    let k = bound_constants(p, q, r, interval)?;
    let norm_p = p.norm_inf();
    let norm_q = q.norm_inf();
    Ok(ErrorBoundReport {
        interval: *interval,
        d: k.d,
        m: k.m,
        c: k.c,
        ell: k.ell,
        deg_p: k.deg_p,
        norm_p,
        norm_q,
        point_bound: point_bound(k.m, eps_used, k.c, norm_p, norm_q),
        offset_bound: offset_bound(k.m, eps_used, k.c, norm_p, norm_q),
        empirical_max: empirical_max_deviation(p, q, r, interval, n_empirical),
        eps_used,
    })
}

/// Real roots in `(d1, d2)` of every denominator involved: `p_i2`, `den R`
/// and `num(q_i2(R))`.
pub fn pole_candidates(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    d1: f64,
    d2: f64,
) -> Vec<f64> {
    let mut polys: Vec<Poly> = vec![p.x.den.clone(), p.y.den.clone(), r.den.clone()];
    for qk in q.components() {
        let n = qk.den.degree_or_zero();
        polys.push(qk.den.homogenized_compose(&r.num, &r.den, n));
    }
    let mut roots: Vec<f64> = polys
        .iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .flat_map(|p| p.real_roots(1e-8))
        .filter(|&x| x > d1 && x < d2)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}

/// Splits `(d1, d2)` at approximate real poles, removing a guard band of
/// `GUARD_BAND · (d2 - d1)` on each side of every pole.
pub fn split_at_poles(
    p: &PlaneParametrization,
    q: &PlaneParametrization,
    r: &RationalFunction,
    interval: &IntervalSpec,
) -> Vec<IntervalSpec> {
    let band = GUARD_BAND * (interval.d2 - interval.d1);
    let mut out = Vec::new();
    let mut lo = interval.d1;
    for pole in pole_candidates(p, q, r, interval.d1, interval.d2) {
        if let Ok(piece) = IntervalSpec::with_grid(lo, pole - band, interval.grid_n) {
            out.push(piece);
        }
        lo = lo.max(pole + band);
    }
    if let Ok(piece) = IntervalSpec::with_grid(lo, interval.d2, interval.grid_n) {
        out.push(piece);
    }
    out
}
