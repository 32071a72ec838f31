use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Univariate polynomial with exact rational coefficients, ascending degree.
/// The last stored coefficient is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> RatPoly {
        (0..n).fold(RatPoly::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rat::one() / self.lc()))
    }

    /// Long division over the rationals.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(nd) = self.degree() else {
            return (RatPoly::zero(), RatPoly::zero());
        };
        if nd < dd {
            return (RatPoly::zero(), self.clone());
        }
        let lc = d.lc();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] / &lc;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Exact quotient, `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) self mod d`.
    pub fn prem(&self, d: &RatPoly) -> RatPoly {
        let (Some(n), Some(m)) = (self.degree(), d.degree()) else {
            return RatPoly::zero();
        };
        if n < m {
            return self.clone();
        }
        let factor = d.lc().pow((n - m + 1) as i32);
        self.scale(&factor).div_rem(d).1
    }

    /// Rational content: positive `c` with `self / c` integer and primitive.
    pub fn content(&self) -> Rat {
        content_of(&self.coeffs)
    }

    /// Integer-coefficient primitive associate with positive leading coefficient.
    pub fn primitive(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let p = self.scale(&(Rat::one() / c));
        if p.lc().is_negative() {
            -&p
        } else {
            p
        }
    }

    /// `sum_k c_k num^k den^(total - k)`.
    pub fn homogenized_compose(&self, num: &RatPoly, den: &RatPoly, total: usize) -> RatPoly {
        let n = self.degree_or_zero().max(total);
        let mut np = vec![RatPoly::one()];
        let mut dp = vec![RatPoly::one()];
        for k in 1..=n {
            np.push(&np[k - 1] * num);
            dp.push(&dp[k - 1] * den);
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(RatPoly::zero(), |acc, (k, c)| &acc + &(&np[k] * &dp[n - k]).scale(c))
    }
}

/// Positive rational `c` such that all `v / c` are coprime integers.
pub(crate) fn content_of(v: &[Rat]) -> Rat {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in v.iter().filter(|c| !c.is_zero()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return Rat::one();
    }
    Rat::new(num, den)
}

pub fn rat_to_f64(c: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: divide in pieces.
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact gcd by the subresultant polynomial remainder sequence, returned as
/// a primitive integer polynomial with positive leading coefficient.
/// `gcd(f, 0) = primitive(f)`.
pub fn exact_gcd(f: &RatPoly, g: &RatPoly) -> RatPoly {
    let (mut a, mut b) = if f.degree_or_zero() >= g.degree_or_zero() {
        (f.primitive(), g.primitive())
    } else {
        (g.primitive(), f.primitive())
    };
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return b;
    }
    let mut g_ = Rat::one();
    let mut h = Rat::one();
    loop {
        let delta = a.degree_or_zero() - b.degree_or_zero();
        let r = a.prem(&b);
        if r.is_zero() {
            return b.primitive();
        }
        if r.degree() == Some(0) {
            return RatPoly::one();
        }
        a = b;
        let divisor = &g_ * h.pow(delta as i32);
        b = r.scale(&(Rat::one() / divisor));
        g_ = a.lc();
        h = if delta == 0 {
            h
        } else {
            g_.pow(delta as i32) / h.pow(delta as i32 - 1)
        };
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RatPoly {
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
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Bivariate polynomial over the rationals stored as a polynomial in the
/// first variable with coefficients in the second: `rows[i]` multiplies `t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatBiPoly {
    rows: Vec<RatPoly>,
}

impl RatBiPoly {
    pub fn new(mut rows: Vec<RatPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        RatBiPoly { rows }
    }

    pub fn zero() -> Self {
        RatBiPoly { rows: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![RatPoly::constant(c)])
    }

    /// `a(t) b(s)`
    pub fn outer(a: &RatPoly, b: &RatPoly) -> Self {
        Self::new(a.coeffs().iter().map(|c| b.scale(c)).collect())
    }

    /// `p` in the first variable only.
    pub fn from_first(p: &RatPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| RatPoly::constant(c.clone())).collect())
    }

    /// `p` in the second variable only.
    pub fn from_second(p: &RatPoly) -> Self {
        Self::new(vec![p.clone()])
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| RatPoly::from_i64(r)).collect())
    }

    pub fn rows(&self) -> &[RatPoly] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> RatPoly {
        self.rows.get(i).cloned().unwrap_or_default()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.rows.get(i).map_or_else(Rat::zero, |r| r.coeff(j))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_first(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_second(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    /// Coefficient of `s^j` as a polynomial in the first variable.
    pub fn coeff_second(&self, j: usize) -> RatPoly {
        RatPoly::new(self.rows.iter().map(|r| r.coeff(j)).collect())
    }

    pub fn swap_vars(&self) -> RatBiPoly {
        let ds = self.deg_second().map_or(0, |d| d + 1);
        RatBiPoly::new((0..ds).map(|j| self.coeff_second(j)).collect())
    }

    pub fn scale(&self, c: &Rat) -> RatBiPoly {
        RatBiPoly::new(self.rows.iter().map(|r| r.scale(c)).collect())
    }

    pub fn scale_poly(&self, p: &RatPoly) -> RatBiPoly {
        RatBiPoly::new(self.rows.iter().map(|r| r * p).collect())
    }

    pub fn lc_first(&self) -> RatPoly {
        self.rows.last().cloned().unwrap_or_default()
    }

    /// Multiply by `t^k`.
    pub fn shift_first(&self, k: usize) -> RatBiPoly {
        let mut rows = vec![RatPoly::zero(); k];
        rows.extend(self.rows.iter().cloned());
        RatBiPoly::new(rows)
    }

    pub fn eval(&self, t: &Rat, s: &Rat) -> Rat {
        self.rows
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, r| acc * t + r.eval(s))
    }

    /// `A(t, s0)` as a polynomial in `t`.
    pub fn specialize_second(&self, s0: &Rat) -> RatPoly {
        RatPoly::new(self.rows.iter().map(|r| r.eval(s0)).collect())
    }

    /// `A(t0, s)` as a polynomial in `s`.
    pub fn specialize_first(&self, t0: &Rat) -> RatPoly {
        self.rows
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, r| &acc.scale(t0) + r)
    }

    /// All coefficients, row by row.
    pub fn all_coeffs(&self) -> Vec<Rat> {
        self.rows.iter().flat_map(|r| r.coeffs().iter().cloned()).collect()
    }

    /// Content in the second variable: gcd of all rows.
    pub fn content_first(&self) -> RatPoly {
        self.rows
            .iter()
            .fold(RatPoly::zero(), |acc, r| exact_gcd(&acc, r))
    }

    /// Divides every row by `c`, which must divide them exactly.
    pub fn div_rows_exact(&self, c: &RatPoly) -> Option<RatBiPoly> {
        self.rows
            .iter()
            .map(|r| r.div_exact(c))
            .collect::<Option<Vec<_>>>()
            .map(RatBiPoly::new)
    }

    /// Primitive part with respect to the first variable.
    pub fn primitive_first(&self) -> RatBiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_first();
        self.div_rows_exact(&c).expect("content divides every row")
    }

    /// Integer-coefficient associate with coprime coefficients and positive
    /// lexicographically leading coefficient (highest first-variable power,
    /// then highest second-variable power).
    pub fn normalize_integer(&self) -> RatBiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = content_of(&self.all_coeffs());
        let out = self.scale(&(Rat::one() / c));
        if out.lc_first().lc().is_negative() {
            -&out
        } else {
            out
        }
    }

    /// Sparse pseudo-remainder in the first variable.
    pub fn prem_first(&self, d: &RatBiPoly) -> RatBiPoly {
        let dd = d.deg_first().expect("pseudo-division by zero");
        let lc = d.lc_first();
        let mut r = self.clone();
        while let Some(rd) = r.deg_first() {
            if rd < dd {
                break;
            }
            let lr = r.lc_first();
            r = &r.scale_poly(&lc) - &d.scale_poly(&lr).shift_first(rd - dd);
        }
        r
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &RatBiPoly) -> Option<RatBiPoly> {
        let dd = d.deg_first()?;
        let lc = d.lc_first();
        let mut r = self.clone();
        let mut q = vec![RatPoly::zero(); r.deg_first().map_or(0, |n| n.saturating_sub(dd) + 1)];
        while let Some(rd) = r.deg_first() {
            if rd < dd {
                return None;
            }
            let c = r.lc_first().div_exact(&lc)?;
            r = &r - &d.scale_poly(&c).shift_first(rd - dd);
            if r.deg_first() == Some(rd) {
                return None;
            }
            q[rd - dd] = c;
        }
        Some(RatBiPoly::new(q))
    }

    pub fn pow(&self, n: usize) -> RatBiPoly {
        (0..n).fold(RatBiPoly::constant(Rat::one()), |acc, _| &acc * self)
    }

    /// Derivative in the second variable.
    pub fn derivative_second(&self) -> RatBiPoly {
        RatBiPoly::new(self.rows.iter().map(|r| r.derivative()).collect())
    }

    /// `num(A(t, M/N))` over the formal second-variable degree `total`.
    pub fn substitute_second(&self, m: &RatPoly, n: &RatPoly, total: usize) -> RatPoly {
        let d = self.deg_second().unwrap_or(0).max(total);
        let mut mp = vec![RatPoly::one()];
        let mut np = vec![RatPoly::one()];
        for k in 1..=d {
            mp.push(&mp[k - 1] * m);
            np.push(&np[k - 1] * n);
        }
        let mut acc = RatPoly::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let mut ti = vec![Rat::zero(); i];
            ti.push(Rat::one());
            let ti = RatPoly::new(ti);
            for (j, c) in row.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&(&mp[j] * &np[d - j]) * &ti).scale(c);
            }
        }
        acc
    }
}

/// gcd in `Q[t, s]` by the primitive remainder sequence in `t` over `Q[s]`,
/// normalized as in [`RatBiPoly::normalize_integer`].
pub fn exact_gcd_bivariate(a: &RatBiPoly, b: &RatBiPoly) -> RatBiPoly {
    if a.is_zero() {
        return b.normalize_integer();
    }
    if b.is_zero() {
        return a.normalize_integer();
    }
    let c = exact_gcd(&a.content_first(), &b.content_first());
    let (mut x, mut y) = (a.primitive_first(), b.primitive_first());
    if x.deg_first() < y.deg_first() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let r = x.prem_first(&y);
        x = y;
        y = if r.is_zero() { r } else { r.primitive_first() };
    }
    let g = if x.deg_first() == Some(0) {
        RatBiPoly::constant(Rat::one())
    } else {
        x.primitive_first()
    };
    g.scale_poly(&c).normalize_integer()
}

impl Add for &RatBiPoly {
    type Output = RatBiPoly;
    fn add(self, rhs: &RatBiPoly) -> RatBiPoly {
        let n = self.rows.len().max(rhs.rows.len());
        RatBiPoly::new((0..n).map(|i| &self.row(i) + &rhs.row(i)).collect())
    }
}

impl Sub for &RatBiPoly {
    type Output = RatBiPoly;
    fn sub(self, rhs: &RatBiPoly) -> RatBiPoly {
        let n = self.rows.len().max(rhs.rows.len());
        RatBiPoly::new((0..n).map(|i| &self.row(i) - &rhs.row(i)).collect())
    }
}

impl Neg for &RatBiPoly {
    type Output = RatBiPoly;
    fn neg(self) -> RatBiPoly {
        RatBiPoly::new(self.rows.iter().map(|r| -r).collect())
    }
}

impl Mul for &RatBiPoly {
    type Output = RatBiPoly;
    fn mul(self, rhs: &RatBiPoly) -> RatBiPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatBiPoly::zero();
        }
        let mut out = vec![RatPoly::zero(); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        RatBiPoly::new(out)
    }
}
