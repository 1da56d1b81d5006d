//! Differential 1-forms `A dx + B dy`, wedge products, cofactors for the
//! logarithmic condition, and valuations of forms along a branch.

use num_traits::Zero;
use thiserror::Error;

use crate::curve::Branch;
use crate::series::{divide_exact, weierstrass_divide, BiSeries, Rat, SeriesError, TSeries, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("wedge with df is not a multiple of f (remainder order {remainder_order:?})")]
    NotMultiple { remainder_order: Option<usize> },
    #[error("form is not logarithmic: wedge residual has a nonzero term at order {order}")]
    NotMember { order: usize },
    #[error("membership undecidable at the current truncation ({trunc})")]
    PrecisionExhausted { trunc: usize },
    #[error("pullback of the form vanishes to precision")]
    MembershipFailed,
    #[error("residue valuation cross-check failed: {via_a} vs {via_b}")]
    CrossCheckFailed { via_a: i64, via_b: i64 },
}

/// A differential 1-form `a dx + b dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub a: BiSeries,
    pub b: BiSeries,
}

impl OneForm {
    pub fn zero(trunc: usize) -> OneForm {
        OneForm { a: BiSeries::zero(trunc), b: BiSeries::zero(trunc) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero_to_precision() && self.b.is_zero_to_precision()
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm { a: self.a.add(&other.a), b: self.b.add(&other.b) }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm { a: self.a.sub(&other.a), b: self.b.sub(&other.b) }
    }

    pub fn neg(&self) -> OneForm {
        OneForm { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn scale(&self, c: &Rat) -> OneForm {
        OneForm { a: self.a.scale(c), b: self.b.scale(c) }
    }

    /// Multiply by a function germ.
    pub fn mul_fn(&self, g: &BiSeries) -> OneForm {
        OneForm { a: self.a.mul(g), b: self.b.mul(g) }
    }

    pub fn truncated(&self, trunc: usize) -> OneForm {
        OneForm { a: self.a.truncated(trunc), b: self.b.truncated(trunc) }
    }

    /// Pullback `t * (A(x(t),y(t)) x'(t) + B(x(t),y(t)) y'(t))`; this is
    /// `phi^*(omega)` written against `dt/t`, so its order is the valuation
    /// of the form along the branch.
    pub fn pull(&self, b: &Branch) -> TSeries {
        pull_form(&self.a, &self.b, b)
    }
}

pub fn pull_form(a: &BiSeries, bb: &BiSeries, b: &Branch) -> TSeries {
    let xp = b.x_t().derivative();
    let yp = b.y_t().derivative();
    let pa = a.pullback(b.x_t(), b.y_t());
    let pb = bb.pullback(b.x_t(), b.y_t());
    let s = pa.mul(&xp).add(&pb.mul(&yp));
    // multiply by t: shift coefficients up by one
    let window = s.trunc();
    let mut c = vec![Rat::zero(); window];
    for (k, v) in s.coeffs().iter().enumerate() {
        if k + 1 < window {
            c[k + 1] = v.clone();
        }
    }
    TSeries::from_coeffs(c, window)
}

/// Exterior derivative `df = f_x dx + f_y dy`.
pub fn exterior_d(f: &BiSeries) -> OneForm {
    OneForm { a: f.partial(Var::X), b: f.partial(Var::Y) }
}

/// Coefficient of `omega /\ eta` against `dx /\ dy`.
pub fn wedge(omega: &OneForm, eta: &OneForm) -> BiSeries {
    omega.a.mul(&eta.b).sub(&omega.b.mul(&eta.a))
}

/// Result of a logarithmic-membership check: the cofactor `h` with
/// `omega /\ df = h f dx /\ dy`, plus the order to which the residual of the
/// division was verified to vanish.
#[derive(Debug, Clone)]
pub struct CofactorResult {
    pub h: BiSeries,
    pub residual_order: usize,
}

/// Division with remainder by a curve equation, choosing the usable
/// direction: Weierstrass division along y when `f(0,y)` is nonzero, along x
/// otherwise, and exact monomial-times-unit division as a last resort.
pub fn divide_by_curve(w: &BiSeries, f: &BiSeries) -> Result<(BiSeries, BiSeries), SeriesError> {
    if !f.eval_x0().is_zero_to_precision() {
        return weierstrass_divide(w, f);
    }
    if !f.eval_y0().is_zero_to_precision() {
        let (q, r) = weierstrass_divide(&w.transpose(), &f.transpose())?;
        return Ok((q.transpose(), r.transpose()));
    }
    match divide_exact(w, f) {
        Ok(q) => Ok((q, BiSeries::zero(w.trunc().min(f.trunc())))),
        Err(SeriesError::NotYGeneral) => Ok((BiSeries::zero(w.trunc().min(f.trunc())), w.clone())),
        Err(e) => Err(e),
    }
}

/// Width of the degree range of `f`: highest total degree of a term minus
/// the order. Division of a truncated series by `f` can leave spurious
/// remainder terms this far below the truncation boundary.
pub fn degree_spread(f: &BiSeries) -> usize {
    let ord = match f.order() {
        Some(o) => o,
        None => return 0,
    };
    f.terms()
        .map(|(&(i, j), _)| (i + j) as usize)
        .max()
        .map_or(0, |d| d - ord)
}

/// Cofactor of a wedge: divide `w` by `f`, requiring the remainder to vanish
/// except for truncation noise within the tolerance window near the
/// precision boundary; when noise is present the quotient is truncated below
/// the window.
pub fn pair_cofactor(w: &BiSeries, f: &BiSeries) -> Result<BiSeries, FormError> {
    let trunc = w.trunc().min(f.trunc());
    let margin = degree_spread(f) + 2;
    let (q, r) = divide_by_curve(w, f)?;
    match r.order() {
        None => Ok(q),
        Some(o) if o + margin >= trunc => Ok(q.truncated(trunc.saturating_sub(margin).max(1))),
        Some(o) => Err(FormError::NotMultiple { remainder_order: Some(o) }),
    }
}

/// Decide whether `omega` is logarithmic for `f`, i.e. whether
/// `omega /\ df = h f dx /\ dy` for some germ `h`; on success returns the
/// cofactor. A nonzero remainder coefficient at order below
/// `trunc - margin` is a definite rejection; a nonzero tail inside the
/// final `margin` orders is reported as precision exhaustion.
pub fn saito_membership(omega: &OneForm, f: &BiSeries) -> Result<CofactorResult, FormError> {
    let w = wedge(omega, &exterior_d(f));
    let trunc = w.trunc().min(f.trunc());
    let margin = degree_spread(f) + 2;
    let (q, r) = divide_by_curve(&w, f)?;
    if let Some(ord) = r.order() {
        if ord + margin < trunc {
            return Err(FormError::NotMember { order: ord });
        }
        return Err(FormError::PrecisionExhausted { trunc });
    }
    Ok(CofactorResult { h: q, residual_order: trunc })
}

/// Valuation of a 1-form along a branch: the order of its pullback written
/// against `dt/t`. `None` when the pullback vanishes to precision.
pub fn form_valuation(omega: &OneForm, b: &Branch) -> Option<usize> {
    omega.pull(b).order()
}

/// Valuation of the residue of a logarithmic form `omega = A dx + B dy`
/// along a branch of `f`: `v(A) - v(f_x) = v(B) - v(f_y)` (may be negative).
/// Both routes are computed and must agree.
pub fn residue_valuation(omega: &OneForm, f: &BiSeries, b: &Branch) -> Result<i64, FormError> {
    let fx = f.partial(Var::X);
    let fy = f.partial(Var::Y);
    let va = omega.a.pullback(b.x_t(), b.y_t()).order();
    let vb = omega.b.pullback(b.x_t(), b.y_t()).order();
    let vfx = fx.pullback(b.x_t(), b.y_t()).order();
    let vfy = fy.pullback(b.x_t(), b.y_t()).order();
    let via_a = match (va, vfx) {
        (Some(a), Some(fx)) => Some(a as i64 - fx as i64),
        _ => None,
    };
    let via_b = match (vb, vfy) {
        (Some(b), Some(fy)) => Some(b as i64 - fy as i64),
        _ => None,
    };
    match (via_a, via_b) {
        (Some(a), Some(b)) if a == b => Ok(a),
        (Some(a), Some(b)) => Err(FormError::CrossCheckFailed { via_a: a, via_b: b }),
        (Some(v), None) | (None, Some(v)) => Ok(v),
        (None, None) => Err(FormError::MembershipFailed),
    }
}

/// Exact division helper for forms: `omega / g` componentwise.
pub fn form_divide_exact(omega: &OneForm, g: &BiSeries) -> Result<OneForm, SeriesError> {
    Ok(OneForm { a: divide_exact(&omega.a, g)?, b: divide_exact(&omega.b, g)? })
}
