//! Fixtures and corpus checks shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use numreparam::approxgcd::{approx_improper_index, egcd_uni, gcd_degree_profile};
use numreparam::errorbound::{error_bound, split_at_poles, IntervalSpec};
use numreparam::exact::{exact_parametric_resultant_t, rat_to_f64, RatBiPoly, RatPoly};
use numreparam::reparam::{reparametrize, Options, ReparamReport};
use numreparam::resultants::parametric_resultant_t;
use numreparam::{BiPoly, Error, PlaneParametrization, Poly, RationalFunction};

pub fn rf(num: &[f64], den: &[f64]) -> RationalFunction {
    RationalFunction::from_real(num, den).unwrap()
}

/// Largest pointwise distance between two parametrizations on `[lo, hi]`.
pub fn max_distance(a: &PlaneParametrization, b: &PlaneParametrization, lo: f64, hi: f64, n: usize) -> f64 {
    (0..=n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            let (ax, ay) = a.eval_real(t);
            let (bx, by) = b.eval_real(t);
            (ax - bx).abs().max((ay - by).abs())
        })
        .fold(0.0, f64::max)
}

/// Cosine similarity of two coefficient vectors, sign-insensitive.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let dot: f64 = (0..n).map(|i| get(a, i) * get(b, i)).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).abs()
}

pub fn real_coeffs(p: &Poly) -> Vec<f64> {
    p.coeffs().iter().map(|c| c.re).collect()
}

/// `R` as the concatenated coefficients of `num` and `den`, after making
/// `den` monic.
pub fn r_vector(r: &RationalFunction) -> Vec<f64> {
    let n = r.normalize();
    let mut v = real_coeffs(&n.num);
    v.resize(4, 0.0);
    v.extend(real_coeffs(&n.den));
    v
}

pub mod example1 {
    use super::*;

    pub const EPS: f64 = 0.01;

    pub fn p() -> PlaneParametrization {
        let den = [0.25, 0.0, 0.00025, 0.0, 1.0];
        PlaneParametrization::new(rf(&[-0.25025, 0.0005, 0.0, 0.0, 1.0], &den), rf(&[-0.00025, 0.0, 1.0], &den))
    }

    /// `R = (52160 t² + 83 t) / (-52077)`
    pub fn r() -> RationalFunction {
        rf(&[0.0, 83.0, 52160.0], &[-52077.0])
    }

    pub fn q() -> PlaneParametrization {
        let den = [0.2492042101, -0.0002445955365, 1.0];
        PlaneParametrization::new(
            rf(&[-0.2494538109, 0.000005006649227, 1.0], &den),
            rf(&[-0.0002529376363, -0.9984087427], &den),
        )
    }

    pub const M: f64 = 0.2492042100;
    pub const C: f64 = 2.828427125;
    pub const BOUND: f64 = 0.9108864449;
}

pub mod example2 {
    use super::*;

    pub const EPS: f64 = 0.0001;
    pub const EPS_BAR: f64 = 0.0005;

    pub fn p() -> PlaneParametrization {
        PlaneParametrization::new(
            rf(
                &[0.4973756561, 0.0, 0.0, 1.0, 0.0, 0.0, 0.7498125469],
                &[0.2499375156, 0.0, 0.0, 1.749812547, 0.0, 0.0, 1.749562609],
            ),
            rf(
                &[0.0, 0.0002499375156, 0.0, 0.0, 0.0, 0.0, 2.499375156],
                &[2.499375156, 0.0, 0.0, 17.49812547, 0.0, 0.0, 17.49562609],
            ),
        )
    }

    /// Printed `R` with the sign of its leading coefficient corrected:
    /// `4 t (17492734796 + 133873149568025200725 t²) / 535492598272100802900`.
    pub fn r() -> RationalFunction {
        let den = 535492598272100802900.0;
        rf(&[0.0, 4.0 * 17492734796.0 / den, 0.0, 4.0 * 133873149568025200725.0 / den], &[1.0])
    }

    /// `R` exactly as printed, `-4 t (…) / …`.
    pub fn r_as_printed() -> RationalFunction {
        let r = r();
        RationalFunction::polynomial(r.num.scale_real(-1.0))
    }

    pub fn q() -> PlaneParametrization {
        let den = [0.2499375114, 1.749812559, 1.749562581];
        PlaneParametrization::new(
            rf(&[0.4973756559, 1.0, 0.7498125351], &den),
            rf(&[-0.5495954487e-8, 0.5551941368e-8, 0.2499375117], &den),
        )
    }

    pub const M: f64 = 1322.925998;
    pub const C: f64 = 4807498.567;
    pub const BOUND: f64 = 0.08410680133;
    pub const NORM_P: f64 = 17.49812547;
    pub const NORM_Q: f64 = 1.749812559;
}

pub mod intro {
    use super::*;

    pub const EPS: f64 = 0.2;

    pub fn p() -> PlaneParametrization {
        let den = [2.005, 3.997, 6.004, 4.002, 0.998];
        PlaneParametrization::new(
            rf(&[2.005, 3.999, 1.999, 0.001, -0.003], &den),
            rf(&[0.001, -4.005, -5.996, -4.003, -0.998], &den),
        )
    }

    pub fn q() -> PlaneParametrization {
        let den = [0.233345983511073, -0.475516806696674, 0.472790306463932];
        PlaneParametrization::new(
            rf(&[0.230804565878748, -0.455587113115768, -0.00139214373770521], &den),
            rf(&[-0.00421763512489261, 0.473001908925789, -0.472791477433681], &den),
        )
    }

    /// Points of the printed curve traced over the whole real line via `t = tan θ`.
    pub fn printed_trace(n: usize) -> Vec<(f64, f64)> {
        let q = q();
        let half = std::f64::consts::FRAC_PI_2;
        (1..n)
            .map(|k| q.eval_real((-half + std::f64::consts::PI * k as f64 / n as f64).tan()))
            .collect()
    }

    /// Largest distance from `Q(t)`, `t ∈ [0, 1]`, to the printed trace.
    pub fn trace_distance(q: &PlaneParametrization) -> f64 {
        let trace = printed_trace(20000);
        (0..=100)
            .map(|k| {
                let (x, y) = q.eval_real(k as f64 / 100.0);
                trace
                    .iter()
                    .map(|&(a, b)| (a - x).hypot(b - y))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// One instance `P = Q₀(R₀) + noise` of the random improper corpus.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub q0: PlaneParametrization,
    pub r0: RationalFunction,
    pub p: PlaneParametrization,
}

pub const CORPUS_EPS: f64 = 1e-4;
pub const CORPUS_SIZE: usize = 50;
pub const CORPUS_SEED: u64 = 20240607;
/// Coprimality and properness margin required of the generated `Q₀`, `R₀`.
pub const CONDITION_MARGIN: f64 = 1e-2;

fn random_coeffs(rng: &mut ChaCha8Rng, deg: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    c[deg] = sign * rng.random_range(0.5..1.0);
    c
}

fn random_component(rng: &mut ChaCha8Rng, deg: usize) -> RationalFunction {
    let num_deg = rng.random_range(0..=deg);
    let (dn, dd) = if rng.random_bool(0.5) { (deg, num_deg) } else { (num_deg.max(1).min(deg), deg) };
    rf(&random_coeffs(rng, dn), &random_coeffs(rng, dd))
}

/// Relative perturbation `c (1 + δ)`, `|δ| <= amp`, of every coefficient.
fn add_noise(rng: &mut ChaCha8Rng, p: &Poly, amp: f64) -> Poly {
    Poly::new(p.coeffs().iter().map(|c| c * (1.0 + rng.random_range(-amp..amp))).collect())
}

/// Numerator and denominator stay coprime under perturbations of relative size `margin`.
fn well_separated(f: &RationalFunction, margin: f64) -> bool {
    if f.num.degree_or_zero() == 0 || f.den.degree_or_zero() == 0 {
        return true;
    }
    gcd_degree_profile(&f.num, &f.den).is_ok_and(|prof| prof.first().is_none_or(|&(_, r)| r >= margin))
}

/// Reduced components with a margin, and index one at a loose tolerance.
fn well_conditioned(q0: &PlaneParametrization, r0: &RationalFunction) -> bool {
    q0.components().iter().all(|c| well_separated(c, CONDITION_MARGIN))
        && well_separated(r0, CONDITION_MARGIN)
        && approx_improper_index(q0, CONDITION_MARGIN, None, 0).is_ok_and(|g| g.ell == 1)
}

fn unit_component(f: &RationalFunction) -> RationalFunction {
    let s = 1.0 / f.norm_inf();
    RationalFunction::new(f.num.scale_real(s), f.den.scale_real(s)).unwrap()
}

/// Deterministic corpus: well-conditioned `Q₀`, `R₀` with `deg Q₀ ∈ {1, 2, 3}`,
/// `deg R₀ ∈ {2, 3}`; each component of `Q₀(R₀)` is scaled to unit norm and
/// every coefficient perturbed by a relative amount of at most `eps / 10`.
/// Instances violating the input contract are redrawn.
pub fn corpus(n: usize, eps: f64, seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = eps / 10.0;
    (0..n)
        .map(|k| {
            let dq = 1 + k % 3;
            let dr = 2 + (k / 3) % 2;
            loop {
                let q0 = PlaneParametrization::new(random_component(&mut rng, dq), random_component(&mut rng, dq));
                let r0 = if rng.random_bool(0.5) {
                    rf(&random_coeffs(&mut rng, dr), &[1.0])
                } else {
                    rf(&random_coeffs(&mut rng, dr), &random_coeffs(&mut rng, dr - 1))
                };
                if !well_conditioned(&q0, &r0) {
                    continue;
                }
                let exact = q0.compose(&r0);
                let mut noisy = |f: &RationalFunction| {
                    let f = unit_component(f);
                    RationalFunction::new(add_noise(&mut rng, &f.num, amp), add_noise(&mut rng, &f.den, amp)).unwrap()
                };
                let p = PlaneParametrization::new(noisy(&exact.x), noisy(&exact.y));
                if meets_input_contract(&p, eps) {
                    break CorpusCase { q0, r0, p };
                }
            }
        })
        .collect()
}

/// Numerator and denominator of each component are ε-coprime.
pub fn meets_input_contract(p: &PlaneParametrization, eps: f64) -> bool {
    p.components()
        .iter()
        .all(|f| egcd_uni(&f.num, &f.den, eps).is_ok_and(|c| c.degree() == 0))
}

/// Pipeline outcome for one corpus case.
pub struct CaseRun {
    pub case: CorpusCase,
    pub result: Result<ReparamReport, numreparam::PipelineError>,
}

pub fn run_corpus(eps: f64) -> Vec<CaseRun> {
    corpus(CORPUS_SIZE, eps, CORPUS_SEED)
        .into_iter()
        .map(|case| {
            let result = reparametrize(&case.p, eps, Options::default());
            CaseRun { case, result }
        })
        .collect()
}

/// Pass count and failure notes of one property over the corpus.
#[derive(Debug, Default)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
    pub notes: Vec<String>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.notes.push(note());
        }
    }

    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.passed as f64 / self.total as f64
        }
    }
}

/// Degree law on every success.
pub fn degree_law(runs: &[CaseRun]) -> Tally {
    let mut t = Tally::default();
    for (k, run) in runs.iter().enumerate() {
        if let Ok(rep) = &run.result {
            let lhs = run.case.p.degree();
            let rhs = rep.q.degree() * rep.r.degree();
            t.record(lhs == rhs, || format!("case {k}: deg P = {lhs}, deg Q · deg R = {rhs}"));
        }
    }
    t
}

/// Recovered index equals `deg R₀`; failures must be explained by an
/// unstable-index diagnostic.
pub fn index_recovery(runs: &[CaseRun]) -> (Tally, bool) {
    let mut t = Tally::default();
    let mut explained = true;
    for (k, run) in runs.iter().enumerate() {
        let want = run.case.r0.degree();
        match &run.result {
            Ok(rep) => t.record(rep.ell == want, || format!("case {k}: ell {} != {want}", rep.ell)),
            Err(e) => {
                let unstable = matches!(e.source, Error::UnstableIndex { .. });
                explained &= unstable;
                t.record(false, || format!("case {k}: {e}"));
            }
        }
    }
    (t, explained)
}

/// Output `Q` has index one.
pub fn output_properness(runs: &[CaseRun], eps: f64) -> Tally {
    let mut t = Tally::default();
    for (k, run) in runs.iter().enumerate() {
        if let Ok(rep) = &run.result {
            let ell = approx_improper_index(&rep.q, eps, None, 0).map(|g| g.ell);
            t.record(matches!(ell, Ok(1)), || format!("case {k}: index of Q is {ell:?}"));
        }
    }
    t
}

pub const BOUND_INTERVALS: [(f64, f64); 3] = [(-1.0, 1.0), (0.25, 1.5), (-3.0, -1.2)];

/// The point bound dominates the sampled deviation on every pole-free piece.
pub fn bound_domination(runs: &[CaseRun]) -> Tally {
    let mut t = Tally::default();
    for (k, run) in runs.iter().enumerate() {
        let Ok(rep) = &run.result else { continue };
        for &(d1, d2) in &BOUND_INTERVALS {
            let whole = IntervalSpec::new(d1, d2).unwrap();
            for piece in split_at_poles(&run.case.p, &rep.q, &rep.r, &whole) {
                let Ok(b) = error_bound(&run.case.p, &rep.q, &rep.r, &piece, rep.eps_bar, 400) else {
                    continue;
                };
                t.record(b.empirical_max <= b.point_bound, || {
                    format!(
                        "case {k} on ({}, {}): deviation {:.3e} > bound {:.3e}",
                        piece.d1, piece.d2, b.empirical_max, b.point_bound
                    )
                });
            }
        }
    }
    t
}

/// Every stored ε-gcd certificate satisfies its three inequalities.
pub fn certificate_inequalities(runs: &[CaseRun], eps: f64) -> Tally {
    let mut t = Tally::default();
    for (k, run) in runs.iter().enumerate() {
        let Ok(g) = approx_improper_index(&run.case.p, eps, None, 0) else { continue };
        for c in &g.certificates {
            let ok = c.r_bezout < c.eps * c.norm_all && c.r_f < c.eps * c.norm_f && c.r_g < c.eps * c.norm_g;
            t.record(ok, || format!("case {k}: certificate of degree {} violates its bounds", c.degree()));
        }
    }
    t
}

fn rat_bipoly(rows: &[Vec<i64>]) -> RatBiPoly {
    RatBiPoly::new(rows.iter().map(|r| RatPoly::from_i64(r)).collect())
}

fn f64_bipoly(rows: &[Vec<i64>]) -> BiPoly {
    BiPoly::new(
        rows.iter()
            .map(|r| r.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect())
            .collect(),
    )
}

/// Numeric parametric resultant against the exact Sylvester determinant on
/// random small integer instances; returns the worst relative error.
pub fn resultant_agreement(n: usize, seed: u64) -> (Tally, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let dt_g = rng.random_range(1..=3usize);
        let dt_b = rng.random_range(1..=3usize);
        let dx = rng.random_range(1..=2usize);
        let ds = rng.random_range(1..=3usize);
        let mut gen = |dt: usize, dv: usize| -> Vec<Vec<i64>> {
            let mut rows: Vec<Vec<i64>> = (0..=dt).map(|_| (0..=dv).map(|_| rng.random_range(-5..=5)).collect()).collect();
            if rows[dt].iter().all(|&c| c == 0) {
                rows[dt][0] = 1;
            }
            rows
        };
        let g = gen(dt_g, dx);
        let b = gen(dt_b, ds);
        let exact = exact_parametric_resultant_t(&rat_bipoly(&g), &rat_bipoly(&b));
        let numeric = parametric_resultant_t(&f64_bipoly(&g), &f64_bipoly(&b), dt_b * dx, dt_g * ds);
        let Ok(numeric) = numeric else {
            t.record(false, || format!("instance {k}: numeric resultant failed"));
            continue;
        };
        let scale = exact.all_coeffs().iter().map(|c| rat_to_f64(c).abs()).fold(0.0, f64::max);
        let mut diff: f64 = 0.0;
        let rows = exact.rows().len().max(numeric.rows().len());
        for i in 0..rows {
            let cols = exact.row(i).coeffs().len().max(numeric.rows().get(i).map_or(0, Vec::len));
            for j in 0..cols {
                let e = rat_to_f64(&exact.row(i).coeff(j));
                diff = diff.max((numeric.get(i, j) - Complex64::new(e, 0.0)).norm());
            }
        }
        let rel = if scale > 0.0 { diff / scale } else { diff };
        worst = worst.max(rel);
        t.record(rel <= 1e-8, || format!("instance {k}: relative error {rel:.3e}"));
    }
    (t, worst)
}
