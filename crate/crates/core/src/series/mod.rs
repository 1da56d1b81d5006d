//! Truncated power-series kernel over exact rationals.
//!
//! Univariate series live in a single formal variable (usually `t` along a
//! parametrization, or `x` for coefficient series), bivariate series in
//! `x, y` with truncation by total degree. Every value carries its own
//! truncation order; "zero" always means zero below that order.

pub mod expr;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient. Always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term is zero: not a unit")]
    NotAUnit,
    #[error("constant term has no rational {k}-th root")]
    NoRationalRoot { k: u32 },
    #[error("series not y-general to precision (no unit y^n coefficient)")]
    NotYGeneral,
    #[error("precision exhausted at truncation order {trunc}")]
    PrecisionExhausted { trunc: usize },
}

// ---------------------------------------------------------------------------
// Univariate truncated series
// ---------------------------------------------------------------------------

/// Truncated univariate power series: coefficients for exponents `0..trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<Rat>,
    trunc: usize,
}

impl TSeries {
    pub fn zero(trunc: usize) -> Self {
        assert!(trunc > 0, "truncation order must be positive");
        TSeries { coeffs: vec![Rat::zero(); trunc], trunc }
    }

    pub fn constant(c: Rat, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rat::one(), trunc)
    }

    /// `c * t^k`, or zero if `k >= trunc`.
    pub fn monomial(c: Rat, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if k < trunc {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rat>, trunc: usize) -> Self {
        let mut c = coeffs;
        c.resize(trunc, Rat::zero());
        TSeries { coeffs: c, trunc }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> Rat {
        if k < self.trunc { self.coeffs[k].clone() } else { Rat::zero() }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Restrict to a (smaller) truncation order.
    pub fn truncated(&self, trunc: usize) -> Self {
        let n = trunc.min(self.trunc);
        let mut c = self.coeffs[..n].to_vec();
        c.resize(trunc, Rat::zero());
        TSeries { coeffs: c, trunc }
    }

    /// Least exponent with nonzero coefficient, `None` if zero to precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.order().is_none()
    }

    /// Leading coefficient, if any nonzero coefficient exists below trunc.
    pub fn lead_coeff(&self) -> Option<Rat> {
        self.order().map(|o| self.coeffs[o].clone())
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut c = vec![Rat::zero(); trunc];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = &self.coeffs[i] + &other.coeffs[i];
        }
        TSeries { coeffs: c, trunc }
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut c = vec![Rat::zero(); trunc];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = &self.coeffs[i] - &other.coeffs[i];
        }
        TSeries { coeffs: c, trunc }
    }

    pub fn neg(&self) -> TSeries {
        let c = self.coeffs.iter().map(|x| -x).collect();
        TSeries { coeffs: c, trunc: self.trunc }
    }

    pub fn scale(&self, s: &Rat) -> TSeries {
        let c = self.coeffs.iter().map(|x| x * s).collect();
        TSeries { coeffs: c, trunc: self.trunc }
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut c = vec![Rat::zero(); trunc];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        TSeries { coeffs: c, trunc }
    }

    /// Formal derivative; truncation drops by one.
    pub fn derivative(&self) -> TSeries {
        let trunc = self.trunc.saturating_sub(1).max(1);
        let mut c = vec![Rat::zero(); trunc];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = &self.coeffs[k + 1] * Rat::from_integer(BigInt::from(k as i64 + 1));
        }
        TSeries { coeffs: c, trunc }
    }

    /// Multiplicative inverse of a unit, to the same truncation.
    pub fn invert(&self) -> Result<TSeries, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let mut b = vec![Rat::zero(); self.trunc];
        b[0] = self.coeffs[0].recip();
        for k in 1..self.trunc {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            b[k] = -(acc / &self.coeffs[0]);
        }
        Ok(TSeries { coeffs: b, trunc: self.trunc })
    }

    /// Exact rational k-th root of a unit series, when the constant term
    /// admits one.
    pub fn kth_root(&self, k: u32) -> Result<TSeries, SeriesError> {
        assert!(k >= 1);
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let r0 = rat_kth_root(&self.coeffs[0], k)?;
        if k == 1 {
            return Ok(self.clone());
        }
        // s = c0 (1 + u), root = r0 (1 + v) with (1+v)^k = 1+u.
        // Differentiating: u' (1+v) = k (1+u) v', solved degree by degree.
        let n = self.trunc;
        let c0 = self.coeffs[0].clone();
        let u: Vec<Rat> = (0..n)
            .map(|i| if i == 0 { Rat::zero() } else { &self.coeffs[i] / &c0 })
            .collect();
        let kk = Rat::from_integer(BigInt::from(k as i64));
        let mut v = vec![Rat::zero(); n];
        for d in 1..n {
            // [t^{d-1}] u'(1+v)  =  k [t^{d-1}] (1+u) v'
            let mut lhs = Rat::zero();
            for a in 1..=d {
                // u' has coeff a*u_a at t^{a-1}; pair with v_{d-a} (v_0 = 1).
                let ua = &u[a] * Rat::from_integer(BigInt::from(a as i64));
                if ua.is_zero() {
                    continue;
                }
                let vb = if d - a == 0 { Rat::one() } else { v[d - a].clone() };
                lhs += ua * vb;
            }
            // rhs = k ( d*v_d + sum_{a>=1} u_a (d-a) v_{d-a} )
            let mut rhs_known = Rat::zero();
            for a in 1..d {
                if !u[a].is_zero() && !v[d - a].is_zero() {
                    rhs_known +=
                        &u[a] * &v[d - a] * Rat::from_integer(BigInt::from((d - a) as i64));
                }
            }
            let dd = Rat::from_integer(BigInt::from(d as i64));
            v[d] = (lhs - &kk * rhs_known) / (&kk * dd);
        }
        let mut c = vec![Rat::zero(); n];
        for (i, vi) in v.iter().enumerate() {
            c[i] = if i == 0 { r0.clone() } else { &r0 * vi };
        }
        Ok(TSeries { coeffs: c, trunc: n })
    }
}

/// Exact rational k-th root, if it exists.
pub fn rat_kth_root(c: &Rat, k: u32) -> Result<Rat, SeriesError> {
    if c.is_zero() {
        return Err(SeriesError::NotAUnit);
    }
    let err = SeriesError::NoRationalRoot { k };
    if c.is_negative() && k % 2 == 0 {
        return Err(err);
    }
    let num = c.numer().abs();
    let den = c.denom().clone();
    let rn = num.nth_root(k);
    let rd = den.nth_root(k);
    if num != rn.pow(k) || den != rd.pow(k) {
        return Err(err);
    }
    let root = Rat::new(rn, rd);
    Ok(if c.is_negative() { -root } else { root })
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})t^{}", c, k)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc)
    }
}

// ---------------------------------------------------------------------------
// Bivariate truncated series
// ---------------------------------------------------------------------------

/// Bivariate series truncated by total degree: stored terms have `i + j < trunc`
/// and nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    terms: BTreeMap<(u32, u32), Rat>,
    trunc: usize,
}

impl BiSeries {
    pub fn zero(trunc: usize) -> Self {
        assert!(trunc > 0, "truncation order must be positive");
        BiSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn constant(c: Rat, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.set_coeff(0, 0, c);
        s
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rat::one(), trunc)
    }

    /// `c * x^i y^j`, zero if outside the truncation window.
    pub fn monomial(c: Rat, i: u32, j: u32, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if (i + j) < trunc as u32 {
            s.set_coeff(i, j, c);
        }
        s
    }

    pub fn var_x(trunc: usize) -> Self {
        Self::monomial(Rat::one(), 1, 0, trunc)
    }

    pub fn var_y(trunc: usize) -> Self {
        Self::monomial(Rat::one(), 0, 1, trunc)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set_coeff(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() || (i + j) as usize >= self.trunc {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    pub fn truncated(&self, trunc: usize) -> Self {
        let mut t = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            if ((i + j) as usize) < trunc {
                t.insert((i, j), c.clone());
            }
        }
        BiSeries { terms: t, trunc }
    }

    /// Total-degree order, `None` if zero to precision.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| (i + j) as usize).min()
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut r = self.truncated(trunc);
        for (&(i, j), c) in &other.terms {
            if ((i + j) as usize) < trunc {
                let v = r.coeff(i, j) + c;
                r.set_coeff(i, j, v);
            }
        }
        r
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BiSeries {
        let terms = self.terms.iter().map(|(&k, c)| (k, -c)).collect();
        BiSeries { terms, trunc: self.trunc }
    }

    pub fn scale(&self, s: &Rat) -> BiSeries {
        if s.is_zero() {
            return BiSeries::zero(self.trunc);
        }
        let terms = self.terms.iter().map(|(&k, c)| (k, c * s)).collect();
        BiSeries { terms, trunc: self.trunc }
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut r = BiSeries::zero(trunc);
        for (&(i1, j1), c1) in &self.terms {
            if (i1 + j1) as usize >= trunc {
                continue;
            }
            for (&(i2, j2), c2) in &other.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                if ((i + j) as usize) < trunc {
                    let v = r.coeff(i, j) + c1 * c2;
                    r.set_coeff(i, j, v);
                }
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> BiSeries {
        let mut acc = BiSeries::one(self.trunc);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative; truncation drops by one.
    pub fn partial(&self, var: Var) -> BiSeries {
        let trunc = self.trunc.saturating_sub(1).max(1);
        let mut r = BiSeries::zero(trunc);
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X if i > 0 => {
                    let v = r.coeff(i - 1, j) + c * Rat::from_integer(BigInt::from(i));
                    r.set_coeff(i - 1, j, v);
                }
                Var::Y if j > 0 => {
                    let v = r.coeff(i, j - 1) + c * Rat::from_integer(BigInt::from(j));
                    r.set_coeff(i, j - 1, v);
                }
                _ => {}
            }
        }
        r
    }

    /// Inverse of a unit by Newton iteration with doubling precision.
    pub fn invert(&self) -> Result<BiSeries, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let mut prec = 1usize;
        let mut inv = BiSeries::constant(c0.recip(), self.trunc);
        while prec < self.trunc {
            prec = (prec * 2).min(self.trunc);
            let s = self.truncated(prec);
            let cur = inv.truncated(prec);
            let two = BiSeries::constant(rat_int(2), prec);
            inv = cur.mul(&two.sub(&s.mul(&cur))).truncated(self.trunc);
        }
        Ok(inv.truncated(self.trunc))
    }

    /// Substitute `x = x_t(t)`, `y = y_t(t)`. Both substitutions must have
    /// zero constant term. The result window accounts for terms lost to the
    /// total-degree truncation of `self`.
    pub fn pullback(&self, x_t: &TSeries, y_t: &TSeries) -> TSeries {
        assert!(
            x_t.coeff(0).is_zero() && y_t.coeff(0).is_zero(),
            "pullback substitutions must vanish at 0"
        );
        let min_ord = x_t
            .order()
            .into_iter()
            .chain(y_t.order())
            .min()
            .unwrap_or(usize::MAX);
        let window = if min_ord == usize::MAX {
            x_t.trunc().min(y_t.trunc())
        } else {
            (self.trunc.saturating_mul(min_ord)).min(x_t.trunc()).min(y_t.trunc())
        };
        let window = window.max(1);
        let xs = x_t.truncated(window);
        let ys = y_t.truncated(window);
        // group by x-exponent, Horner in y inside, then Horner in x outside
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let mut acc = TSeries::zero(window);
        for i in (0..=max_i).rev() {
            let mut row = TSeries::zero(window);
            let max_j = self
                .terms
                .keys()
                .filter(|&&(ii, _)| ii == i)
                .map(|&(_, j)| j)
                .max();
            if let Some(max_j) = max_j {
                for j in (0..=max_j).rev() {
                    row = row.mul(&ys);
                    let c = self.coeff(i, j);
                    if !c.is_zero() {
                        row = row.add(&TSeries::constant(c, window));
                    }
                }
            }
            acc = acc.mul(&xs).add(&row);
        }
        acc
    }

    /// Swap the roles of x and y.
    pub fn transpose(&self) -> BiSeries {
        let mut out = BiSeries::zero(self.trunc());
        for (&(i, j), c) in self.terms() {
            out.set_coeff(j, i, c.clone());
        }
        out
    }

    /// Evaluate at `x = 0`, producing a univariate series in `y`.
    pub fn eval_x0(&self) -> TSeries {
        self.transpose().eval_y0()
    }

    /// Evaluate at `y = 0`, producing a univariate series in `x`.
    pub fn eval_y0(&self) -> TSeries {
        let mut s = TSeries::zero(self.trunc);
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                s = s.add(&TSeries::monomial(c.clone(), i as usize, self.trunc));
            }
        }
        s
    }

    /// Lift a univariate series into `x` (var = X) or `y` (var = Y).
    pub fn from_univariate(s: &TSeries, var: Var) -> BiSeries {
        let mut r = BiSeries::zero(s.trunc());
        for (k, c) in s.coeffs().iter().enumerate() {
            if !c.is_zero() {
                match var {
                    Var::X => r.set_coeff(k as u32, 0, c.clone()),
                    Var::Y => r.set_coeff(0, k as u32, c.clone()),
                }
            }
        }
        r
    }

    /// Total multiplicity m(f): least total degree with a nonzero term.
    pub fn multiplicity(&self) -> Option<usize> {
        self.order()
    }

    /// Deterministic sorted-monomial rendering, rationals as `a/b`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<_> = self.terms.keys().cloned().collect();
        keys.sort_by_key(|&(i, j)| (i + j, i));
        let mut out = String::new();
        for (idx, (i, j)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, j)];
            if idx > 0 {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                out.push('-');
            }
            let a = c.abs();
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (1, 0) => "x".into(),
                (0, 1) => "y".into(),
                (i, 0) => format!("x^{}", i),
                (0, j) => format!("y^{}", j),
                (1, 1) => "x*y".into(),
                (1, j) => format!("x*y^{}", j),
                (i, 1) => format!("x^{}*y", i),
                (i, j) => format!("x^{}*y^{}", i, j),
            };
            if mono.is_empty() {
                out.push_str(&format!("{}", a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", a, mono));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

// ---------------------------------------------------------------------------
// Weierstrass division
// ---------------------------------------------------------------------------

/// Division with remainder by a y-general series.
///
/// `f` must be y-general: `f(0, y)` nonzero to precision, of some order `n`,
/// with unit `y^n` coefficient. Returns `(q, r)` with `g = q f + r` to the
/// shared truncation and `deg_y r < n`.
pub fn weierstrass_divide(
    g: &BiSeries,
    f: &BiSeries,
) -> Result<(BiSeries, BiSeries), SeriesError> {
    let n_trunc = g.trunc().min(f.trunc());
    let f = f.truncated(n_trunc);
    let g = g.truncated(n_trunc);

    // f(0, y) = y^n * e(y), e a unit
    let f0: Vec<Rat> = (0..n_trunc).map(|j| f.coeff(0, j as u32)).collect();
    let n = match f0.iter().position(|c| !c.is_zero()) {
        Some(n) => n,
        None => return Err(SeriesError::NotYGeneral),
    };
    let e = TSeries::from_coeffs(f0[n..].to_vec(), n_trunc);
    let e_inv = e.invert().expect("leading y-coefficient is a unit");

    // view as series in x with coefficients series in y
    let col = |s: &BiSeries, i: usize| -> TSeries {
        let len = n_trunc - i;
        let mut c = vec![Rat::zero(); len];
        for (&(si, sj), v) in s.terms() {
            if si as usize == i && (sj as usize) < len {
                c[sj as usize] = v.clone();
            }
        }
        TSeries::from_coeffs(c, len)
    };

    let mut q_cols: Vec<TSeries> = Vec::with_capacity(n_trunc);
    let mut r = BiSeries::zero(n_trunc);
    for i in 0..n_trunc {
        let len = n_trunc - i;
        // G_i = g_i - sum_{j<i} q_j f_{i-j}
        let mut gi = col(&g, i).truncated(len);
        for (j, qj) in q_cols.iter().enumerate() {
            let fj = col(&f, i - j).truncated(len);
            if fj.is_zero_to_precision() {
                continue;
            }
            gi = gi.sub(&qj.truncated(len).mul(&fj));
        }
        // split G_i = A_i y^n + r_i, deg r_i < n
        let mut ai = vec![Rat::zero(); len];
        for k in n..len {
            ai[k - n] = gi.coeff(k);
        }
        let ai = TSeries::from_coeffs(ai, len);
        for k in 0..n.min(len) {
            let c = gi.coeff(k);
            if !c.is_zero() {
                r.set_coeff(i as u32, k as u32, c);
            }
        }
        let qi = ai.mul(&e_inv.truncated(len));
        q_cols.push(qi);
    }

    let mut q = BiSeries::zero(n_trunc);
    for (i, qi) in q_cols.iter().enumerate() {
        for (k, c) in qi.coeffs().iter().enumerate() {
            if !c.is_zero() {
                q.set_coeff(i as u32, k as u32, c.clone());
            }
        }
    }
    Ok((q, r))
}

/// Exact division `p / d` when `d` is a monomial times a unit, or when `d`
/// is y-general and divides `p` with zero Weierstrass remainder.
pub fn divide_exact(p: &BiSeries, d: &BiSeries) -> Result<BiSeries, SeriesError> {
    if p.is_zero_to_precision() {
        return Ok(BiSeries::zero(p.trunc().min(d.trunc())));
    }
    let min_i = d.terms().map(|(&(i, _), _)| i).min();
    let min_j = d.terms().map(|(&(_, j), _)| j).min();
    if let (Some(a), Some(b)) = (min_i, min_j) {
        if !d.coeff(a, b).is_zero() {
            // d = x^a y^b * unit
            let trunc = d.trunc();
            let mut u = BiSeries::zero(trunc);
            for (&(i, j), c) in d.terms() {
                u.set_coeff(i - a, j - b, c.clone());
            }
            if u.is_unit() {
                let mut ps = BiSeries::zero(p.trunc());
                for (&(i, j), c) in p.terms() {
                    if i < a || j < b {
                        return Err(SeriesError::NotYGeneral);
                    }
                    ps.set_coeff(i - a, j - b, c.clone());
                }
                return Ok(ps.mul(&u.invert()?));
            }
        }
    }
    let (q, r) = weierstrass_divide(p, d)?;
    if r.is_zero_to_precision() {
        Ok(q)
    } else {
        Err(SeriesError::NotYGeneral)
    }
}
