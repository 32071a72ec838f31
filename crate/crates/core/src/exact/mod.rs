//! Exact rational implementation of the symbolic reparametrization algorithm.
//! Serves as ground truth for the numeric pipeline.

mod ratpoly;

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use ratpoly::{exact_gcd, exact_gcd_bivariate, rat, rat_to_f64, Rat, RatBiPoly, RatPoly};

use crate::error::{Error, Result};
use crate::numpoly::{BiPoly, PlaneParametrization, Poly, RationalFunction};

/// Rational function with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRational {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl ExactRational {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational { num, den })
    }

    pub fn identity() -> Self {
        ExactRational { num: RatPoly::identity(), den: RatPoly::one() }
    }

    pub fn polynomial(p: RatPoly) -> Self {
        ExactRational { num: p, den: RatPoly::one() }
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(RatPoly::from_i64(num), RatPoly::from_i64(den))
    }

    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.reduced().degree() == 0
    }

    /// Cancels the exact gcd and makes the denominator monic.
    pub fn reduced(&self) -> ExactRational {
        let g = exact_gcd(&self.num, &self.den);
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        let k = Rat::one() / den.lc();
        ExactRational { num: num.scale(&k), den: den.scale(&k) }
    }

    /// `self(r(t))`, reduced.
    pub fn compose(&self, r: &ExactRational) -> ExactRational {
        let n = self.degree();
        ExactRational {
            num: self.num.homogenized_compose(&r.num, &r.den, n),
            den: self.den.homogenized_compose(&r.num, &r.den, n),
        }
        .reduced()
    }

    /// Equality as rational functions.
    pub fn same_function(&self, other: &ExactRational) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.num.eval_f64(t) / self.den.eval_f64(t)
    }

    pub fn to_numeric(&self) -> RationalFunction {
        RationalFunction {
            num: to_poly(&self.num),
            den: to_poly(&self.den),
        }
    }

    pub fn from_numeric(f: &RationalFunction) -> Result<Self> {
        Self::new(from_poly(&f.num)?, from_poly(&f.den)?)
    }
}

/// Plane parametrization with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactParametrization {
    pub x: ExactRational,
    pub y: ExactRational,
}

impl ExactParametrization {
    pub fn new(x: ExactRational, y: ExactRational) -> Self {
        ExactParametrization { x, y }
    }

    pub fn components(&self) -> [&ExactRational; 2] {
        [&self.x, &self.y]
    }

    pub fn degree(&self) -> usize {
        self.x.degree().max(self.y.degree())
    }

    pub fn compose(&self, r: &ExactRational) -> ExactParametrization {
        ExactParametrization { x: self.x.compose(r), y: self.y.compose(r) }
    }

    pub fn reduced(&self) -> ExactParametrization {
        ExactParametrization { x: self.x.reduced(), y: self.y.reduced() }
    }

    pub fn same_map(&self, other: &ExactParametrization) -> bool {
        self.x.same_function(&other.x) && self.y.same_function(&other.y)
    }

    pub fn to_numeric(&self) -> PlaneParametrization {
        PlaneParametrization::new(self.x.to_numeric(), self.y.to_numeric())
    }

    /// Rationalizes each coefficient through its shortest decimal representation.
    pub fn from_numeric(p: &PlaneParametrization) -> Result<Self> {
        Ok(ExactParametrization {
            x: ExactRational::from_numeric(&p.x)?,
            y: ExactRational::from_numeric(&p.y)?,
        })
    }
}

pub fn to_poly(p: &RatPoly) -> Poly {
    Poly::from_raw(
        p.coeffs()
            .iter()
            .map(|c| Complex64::new(rat_to_f64(c), 0.0))
            .collect(),
    )
}

/// Rationalizes a real polynomial; complex coefficients are rejected.
pub fn from_poly(p: &Poly) -> Result<RatPoly> {
    p.coeffs()
        .iter()
        .map(|c| {
            if c.im != 0.0 {
                return Err(Error::Exact(format!("complex coefficient {c} has no rational value")));
            }
            rat_from_f64(c.re)
        })
        .collect::<Result<Vec<_>>>()
        .map(RatPoly::new)
}

/// The rational with the shortest decimal expansion that rounds to `x`.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::Exact(format!("non-finite coefficient {x}")));
    }
    parse_decimal(&format!("{x:e}"))
        .ok_or_else(|| Error::Exact(format!("cannot rationalize {x}")))
}

/// Parses `[-+]digits[.digits][e[-+]digits]` or `p/q` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Rat> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p = parse_decimal(p)?;
        let q = parse_decimal(q)?;
        return (!q.is_zero()).then(|| p / q);
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: num_bigint::BigInt = format!("{int}{frac}0").parse().ok()?;
    let ten = Rat::from_integer(10.into());
    let mut value = Rat::from_integer(digits) / &ten;
    let shift = exp - frac.len() as i32;
    value *= ten.pow(shift);
    Some(if neg { -value } else { value })
}

/// `H(t, s) = num(t) den(s) - num(s) den(t)`.
pub fn cross_difference(f: &ExactRational) -> RatBiPoly {
    &RatBiPoly::outer(&f.num, &f.den) - &RatBiPoly::outer(&f.den, &f.num)
}

/// Exact gcd of the two cross differences, normalized to coprime integer
/// coefficients with positive leading term.
pub fn fiber_gcd(p: &ExactParametrization) -> Result<RatBiPoly> {
    let h1 = cross_difference(&p.x);
    let h2 = cross_difference(&p.y);
    if h1.is_zero() && h2.is_zero() {
        return Err(Error::DegenerateParametrization("both components are constant".into()));
    }
    Ok(exact_gcd_bivariate(&h1, &h2))
}

/// Tracing index: `deg_t` of the fiber gcd.
pub fn tracing_index(p: &ExactParametrization) -> Result<usize> {
    Ok(fiber_gcd(p)?.deg_first().unwrap_or(0))
}

/// Fraction-free Gaussian elimination over `Q[u, v]`.
pub fn bareiss_det(mut m: Vec<Vec<RatBiPoly>>) -> RatBiPoly {
    let n = m.len();
    if n == 0 {
        return RatBiPoly::constant(Rat::one());
    }
    let mut negate = false;
    let mut prev = RatBiPoly::constant(Rat::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return RatBiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Resultant of two polynomials in `t` with coefficients in `Q[u, v]`,
/// over the formal degrees `f.len() - 1` and `g.len() - 1`, with the same
/// Sylvester layout as the numeric routine.
pub fn sylvester_resultant(f: &[RatBiPoly], g: &[RatBiPoly]) -> RatBiPoly {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    let size = m + n;
    let mat = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let (p, shift, deg) = if i < n { (f, i, m) } else { (g, i - n, n) };
                    if j >= shift && j - shift <= deg {
                        p[deg - (j - shift)].clone()
                    } else {
                        RatBiPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    bareiss_det(mat)
}

/// Exact `res_t(G(t, x), B(t, s))` in `(s, x)`; `g` is stored with rows in
/// `t` and inner variable `x`, `b` with rows in `t` and inner variable `s`.
pub fn exact_parametric_resultant_t(g: &RatBiPoly, b: &RatBiPoly) -> RatBiPoly {
    let f: Vec<RatBiPoly> = g.rows().iter().map(RatBiPoly::from_second).collect();
    let h: Vec<RatBiPoly> = b.rows().iter().map(RatBiPoly::from_first).collect();
    sylvester_resultant(&f, &h)
}

/// `x den(t) - num(t)` with rows in `t` and inner variable `x`.
pub fn implicit_generator(f: &ExactRational) -> RatBiPoly {
    let n = f.num.coeffs().len().max(f.den.coeffs().len());
    RatBiPoly::new(
        (0..n)
            .map(|i| RatPoly::new(vec![-f.num.coeff(i), f.den.coeff(i)]))
            .collect(),
    )
}

/// Implicit equation in `(x, y)`, integer-normalized.
pub fn implicitize(p: &ExactParametrization) -> RatBiPoly {
    let f: Vec<RatBiPoly> = implicit_generator(&p.x)
        .rows()
        .iter()
        .map(RatBiPoly::from_first)
        .collect();
    let g: Vec<RatBiPoly> = implicit_generator(&p.y)
        .rows()
        .iter()
        .map(RatBiPoly::from_second)
        .collect();
    sylvester_resultant(&f, &g).normalize_integer()
}

/// Output of the exact algorithm.
#[derive(Clone, Debug)]
pub struct ExactReparametrization {
    pub q: ExactParametrization,
    pub r: ExactRational,
    pub ell: usize,
    pub s: RatBiPoly,
    /// Indices `(i, j)` with `R = C_i / C_j`; `None` for proper input.
    pub pair: Option<(usize, usize)>,
    /// `L_k(s, x)`, rows in `s`, inner variable `x`.
    pub l: Vec<RatBiPoly>,
    /// Whether each `L_k` is a scalar multiple of `(x q_k2(s) - q_k1(s))^ell`.
    pub l_is_power: Vec<bool>,
}

/// First pair in descending `(i, j)` order with `C_i C_j` nonconstant and
/// `gcd(C_i, C_j) = 1`.
pub fn admissible_pair(s: &RatBiPoly) -> Option<(usize, usize)> {
    let m = s.deg_second()?;
    let c: Vec<RatPoly> = (0..=m).map(|j| s.coeff_second(j)).collect();
    for i in (0..=m).rev() {
        for j in (0..=m).rev() {
            if i == j || c[i].is_zero() || c[j].is_zero() {
                continue;
            }
            if (&c[i] * &c[j]).is_constant() {
                continue;
            }
            if exact_gcd(&c[i], &c[j]).is_constant() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Symbolic reparametrization: returns a proper `Q` and `R` with `P = Q(R)`.
pub fn exact_reparametrize(p: &ExactParametrization) -> Result<ExactReparametrization> {
    let s = fiber_gcd(p)?;
    let ell = s.deg_first().unwrap_or(0);
    if ell <= 1 {
        return Ok(ExactReparametrization {
            q: p.clone(),
            r: ExactRational::identity(),
            ell: 1,
            s,
            pair: None,
            l: Vec::new(),
            l_is_power: Vec::new(),
        });
    }
    let (i, j) = admissible_pair(&s).ok_or(Error::NoAdmissiblePair)?;
    let ci = s.coeff_second(i);
    let cj = s.coeff_second(j);
    let r = ExactRational::new(ci.clone(), cj.clone())?.reduced();

    // B(t, s) = s C_j(t) - C_i(t), rows in t.
    let nb = ci.coeffs().len().max(cj.coeffs().len());
    let b = RatBiPoly::new(
        (0..nb)
            .map(|k| RatPoly::new(vec![-ci.coeff(k), cj.coeff(k)]))
            .collect(),
    );

    let mut comps = Vec::with_capacity(2);
    let mut ls = Vec::with_capacity(2);
    let mut powers = Vec::with_capacity(2);
    for (k, f) in p.components().into_iter().enumerate() {
        let l = exact_parametric_resultant_t(&implicit_generator(f), &b);
        let lx = l.swap_vars();
        let top = lx.row(ell);
        if top.is_zero() {
            return Err(Error::DegenerateLeadingCoefficient { component: k + 1, ell });
        }
        let q = ExactRational::new(-&lx.row(ell - 1), top.scale(&rat(ell as i64)))?.reduced();
        let power = RatBiPoly::new(vec![-&q.num, q.den.clone()]).pow(ell).swap_vars();
        powers.push(proportional(&l, &power));
        ls.push(l);
        comps.push(q);
    }
    let q = ExactParametrization::new(comps.remove(0), comps.remove(0));
    Ok(ExactReparametrization { q, r, ell, s, pair: Some((i, j)), l: ls, l_is_power: powers })
}

/// `a = c b` for some nonzero rational `c`.
pub fn proportional(a: &RatBiPoly, b: &RatBiPoly) -> bool {
    let (ca, cb) = (a.all_coeffs(), b.all_coeffs());
    let Some(k) = (0..cb.len()).find(|&k| !cb[k].is_zero()) else {
        return a.is_zero();
    };
    let Some(ak) = ca.get(k).cloned().filter(|c| !c.is_zero()) else {
        return false;
    };
    a.scale(&cb[k]) == b.scale(&ak)
}

/// `S` as a floating-point [`BiPoly`].
pub fn to_bipoly(s: &RatBiPoly) -> BiPoly {
    BiPoly::new(
        s.rows()
            .iter()
            .map(|r| r.coeffs().iter().map(|c| Complex64::new(rat_to_f64(c), 0.0)).collect())
            .collect(),
    )
}
