//! Exact analytic invariants: local quotient dimensions (Milnor and Tjurina
//! numbers, intersection multiplicities), the identities tying them to a
//! basis of the logarithmic module, residue/GSV reporting, and the closed
//! classification formulas for multiplicity at most three.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::curve::{semigroup_of, Branch, CurveError};
use crate::forms::{residue_valuation, FormError};
use crate::saito::{candidate_forms, select_saito_pair, syzygy_rows, SaitoBasis, SaitoError};
use crate::series::{BiSeries, Rat, SeriesError, Var};
use crate::stdbasis::{algorithm1, lambda_gaps, SBError, SBResult};

#[derive(Debug, Error)]
pub enum InvError {
    #[error("quotient dimension keeps growing: the ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("quotient dimension did not stabilize within the truncation ({trunc})")]
    PrecisionExhausted { trunc: usize },
    #[error("Milnor number {mu} does not match the conductor {conductor}")]
    ConductorMismatch { mu: usize, conductor: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("form error: {0}")]
    Form(#[from] FormError),
    #[error("curve error: {0}")]
    Curve(#[from] CurveError),
    #[error("standard basis error: {0}")]
    StdBasis(#[from] SBError),
    #[error("logarithmic basis error: {0}")]
    Saito(#[from] SaitoError),
}

// ---------------------------------------------------------------------------
// Local quotient dimension by truncated monomial linear algebra
// ---------------------------------------------------------------------------

/// Monomials of total degree < d, in (degree, x-exponent) order.
fn monomials_below(d: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for deg in 0..d {
        for i in 0..=deg {
            out.push((i as u32, (deg - i) as u32));
        }
    }
    out
}

/// dim of C{x,y}/(I + m^d): Gaussian elimination over the monomials of
/// degree < d on all monomial multiples of the generators.
fn quotient_dim_at(gens: &[&BiSeries], d: usize) -> usize {
    let monos = monomials_below(d);
    let index: std::collections::HashMap<(u32, u32), usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monos.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for g in gens {
        let ord = match g.order() {
            Some(o) => o,
            None => continue,
        };
        if ord >= d {
            continue;
        }
        for shift_deg in 0..(d - ord) {
            for a in 0..=shift_deg {
                let (sa, sb) = (a as u32, (shift_deg - a) as u32);
                let mut row = vec![Rat::zero(); n];
                let mut nonzero = false;
                for (&(i, j), c) in g.terms() {
                    let key = (i + sa, j + sb);
                    if let Some(&col) = index.get(&key) {
                        row[col] = c.clone();
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    // row reduction over the rationals
    let mut rank = 0usize;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut reduced: Vec<Vec<Rat>> = Vec::new();
    for mut row in rows {
        loop {
            let lead = match row.iter().position(|c| !c.is_zero()) {
                Some(p) => p,
                None => break,
            };
            match pivot_of_col[lead] {
                Some(r) => {
                    let factor = row[lead].clone();
                    let pivot_row = reduced[r].clone();
                    for k in lead..n {
                        let sub = &pivot_row[k] * &factor;
                        row[k] -= sub;
                    }
                }
                None => {
                    let inv = row[lead].clone();
                    for k in lead..n {
                        row[k] = &row[k] / &inv;
                    }
                    pivot_of_col[lead] = Some(reduced.len());
                    reduced.push(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    n - rank
}

/// Dimension of the local quotient by the ideal generated by `gens`.
/// Computed on monomials of total degree < d for increasing d until the
/// value stabilizes over three consecutive degrees; errors with
/// `NotZeroDimensional` when growth persists to the truncation cap.
pub fn local_quotient_dim(gens: &[BiSeries]) -> Result<usize, InvError> {
    let gens: Vec<&BiSeries> = gens.iter().filter(|g| !g.is_zero_to_precision()).collect();
    if gens.is_empty() {
        return Err(InvError::NotZeroDimensional);
    }
    if gens.iter().any(|g| g.is_unit()) {
        return Ok(0);
    }
    let cap = gens.iter().map(|g| g.trunc()).min().unwrap();
    let mut history: Vec<usize> = Vec::new();
    for d in 1..=cap {
        let dim = quotient_dim_at(&gens, d);
        history.push(dim);
        let l = history.len();
        if l >= 3 && history[l - 1] == history[l - 2] && history[l - 2] == history[l - 3] {
            return Ok(history[l - 1]);
        }
    }
    let l = history.len();
    if l >= 2 && history[l - 1] > history[l - 2] {
        Err(InvError::NotZeroDimensional)
    } else {
        Err(InvError::PrecisionExhausted { trunc: cap })
    }
}

// ---------------------------------------------------------------------------
// Resultant oracle for intersection multiplicities of polynomial pairs
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over the rationals (coefficients of x^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly(pub Vec<Rat>);

impl XPoly {
    fn normalize(mut self) -> XPoly {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn zero() -> XPoly {
        XPoly(Vec::new())
    }

    pub fn one() -> XPoly {
        XPoly(vec![Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    fn mul(&self, other: &XPoly) -> XPoly {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        XPoly(out).normalize()
    }

    fn sub(&self, other: &XPoly) -> XPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] = a.clone();
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        XPoly(out).normalize()
    }

    /// Exact division; panics are avoided — a nonzero remainder returns None.
    fn div_exact(&self, other: &XPoly) -> Option<XPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(XPoly::zero());
        }
        if self.0.len() < other.0.len() {
            return None;
        }
        let mut rem = self.0.clone();
        let dlen = other.0.len();
        let lead = other.0.last().unwrap().clone();
        let mut q = vec![Rat::zero(); rem.len() - dlen + 1];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dlen - 1] / &lead;
            if !c.is_zero() {
                for (i, b) in other.0.iter().enumerate() {
                    let sub = b * &c;
                    rem[k + i] -= sub;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(XPoly(q).normalize())
    }
}

/// Read a bivariate polynomial as a polynomial in y with XPoly coefficients.
fn y_coefficients(g: &BiSeries) -> Vec<XPoly> {
    let mut degy = 0u32;
    for (&(_, j), _) in g.terms() {
        degy = degy.max(j);
    }
    let mut coeffs = vec![XPoly::zero(); degy as usize + 1];
    for (&(i, j), c) in g.terms() {
        let v = &mut coeffs[j as usize].0;
        if v.len() <= i as usize {
            v.resize(i as usize + 1, Rat::zero());
        }
        v[i as usize] = c.clone();
    }
    coeffs.into_iter().map(|p| p.normalize()).collect()
}

/// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
fn poly_determinant(mut m: Vec<Vec<XPoly>>) -> XPoly {
    let n = m.len();
    if n == 0 {
        return XPoly::one();
    }
    let mut sign = false;
    let mut prev = XPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return XPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = XPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        XPoly::zero().sub(&det)
    } else {
        det
    }
}

/// x-order of the y-resultant of two polynomial generators: an independent
/// oracle for the intersection multiplicity at the origin when both curves
/// are y-general and meet the line x = 0 only at the origin. `None` when the
/// resultant vanishes identically (common component).
pub fn resultant_x_order(g1: &BiSeries, g2: &BiSeries) -> Option<usize> {
    let a = y_coefficients(g1);
    let b = y_coefficients(g2);
    let (p, q) = (a.len() - 1, b.len() - 1);
    if p == 0 && q == 0 {
        // both independent of y: resultant convention degenerates
        return None;
    }
    let n = p + q;
    let mut m = vec![vec![XPoly::zero(); n]; n];
    for r in 0..q {
        for (k, c) in a.iter().enumerate() {
            m[r][r + p - k] = c.clone();
        }
    }
    for r in 0..p {
        for (k, c) in b.iter().enumerate() {
            m[q + r][r + q - k] = c.clone();
        }
    }
    let det = poly_determinant(m);
    det.order()
}

// ---------------------------------------------------------------------------
// Named invariants
// ---------------------------------------------------------------------------

/// Milnor number: dimension of the Jacobian quotient. With a branch the
/// value is cross-checked against the conductor of the value semigroup.
pub fn milnor(f: &BiSeries, branch: Option<&Branch>) -> Result<usize, InvError> {
    let mu = local_quotient_dim(&[f.partial(Var::X), f.partial(Var::Y)])?;
    if let Some(b) = branch {
        let (sg, _) = semigroup_of(b, f.trunc())?;
        if sg.conductor() != mu {
            return Err(InvError::ConductorMismatch { mu, conductor: sg.conductor() });
        }
    }
    Ok(mu)
}

/// Tjurina number: dimension of the quotient by the Tjurina ideal
/// (f and both partials).
pub fn tjurina(f: &BiSeries) -> Result<usize, InvError> {
    local_quotient_dim(&[f.clone(), f.partial(Var::X), f.partial(Var::Y)])
}

/// Intersection number of the two cofactors of a verified basis (the
/// cofactor ideal is the Jacobian colon ideal, so this is basis-independent).
pub fn cofactor_intersection(basis: &SaitoBasis) -> Result<usize, InvError> {
    let gens: Vec<BiSeries> = [&basis.h1, &basis.h2]
        .into_iter()
        .filter(|h| !h.is_zero_to_precision())
        .cloned()
        .collect();
    if gens.iter().any(|h| h.is_unit()) {
        return Ok(0);
    }
    local_quotient_dim(&gens)
}

/// Tjurina number via the basis cofactors: mu - I(h1, h2).
pub fn tjurina_via_cofactors(f: &BiSeries, basis: &SaitoBasis) -> Result<usize, InvError> {
    let mu = milnor(f, None)?;
    let i = cofactor_intersection(basis)?;
    Ok(mu - i)
}

/// Residue valuations (GSV indices) of the two basis members; the minimum
/// bounds the residue value set from below.
pub fn gsv_indices(basis: &SaitoBasis, f: &BiSeries, b: &Branch) -> Result<(i64, i64), InvError> {
    let g1 = residue_valuation(&basis.omega1, f, b)?;
    let g2 = residue_valuation(&basis.omega2, f, b)?;
    Ok((g1, g2))
}

/// Milnor number of a product from the factor data:
/// sum(mu_i) + 2 sum(I(f_i, f_j)) - r + 1.
pub fn composite_milnor(mu_list: &[usize], pairwise_i: &[usize]) -> usize {
    let r = mu_list.len();
    mu_list.iter().sum::<usize>() + 2 * pairwise_i.iter().sum::<usize>() + 1 - r
}

// ---------------------------------------------------------------------------
// Classification formulas for multiplicity <= 3
// ---------------------------------------------------------------------------

fn param(params: &[(&str, i64)], name: &str) -> Result<i64, InvError> {
    params
        .iter()
        .find(|(k, _)| *k == name)
        .map(|(_, v)| *v)
        .ok_or_else(|| InvError::BadParams(format!("missing parameter {name}")))
}

/// Closed-form Tjurina numbers for the multiplicity <= 3 classification.
/// Case ids name the normal forms; parameters are validated against each
/// case's constraints.
pub fn classification_tau(case_id: &str, params: &[(&str, i64)]) -> Result<usize, InvError> {
    let bad = |msg: &str| InvError::BadParams(format!("{case_id}: {msg}"));
    match case_id {
        // multiplicity 1: smooth
        "m1" => Ok(0),
        // multiplicity 2, irreducible: y^2 - x^n, n odd > 2
        "m2-irreducible" => {
            let n = param(params, "n")?;
            if n <= 2 || n % 2 == 0 {
                return Err(bad("need odd n > 2"));
            }
            Ok((n - 1) as usize)
        }
        // multiplicity 2, transversal lines: xy
        "m2-transversal" => Ok(1),
        // multiplicity 2, same tangent: y(y - x^n), n > 1
        "m2-same-tangent" => {
            let n = param(params, "n")?;
            if n <= 1 {
                return Err(bad("need n > 1"));
            }
            Ok((2 * n - 1) as usize)
        }
        // multiplicity 3 irreducible, quasi-homogeneous: y^3 - x^n
        "m3-r1-qh" => {
            let n = param(params, "n")?;
            if n <= 3 || n % 3 == 0 {
                return Err(bad("need n > 3 coprime to 3"));
            }
            Ok((2 * (n - 1)) as usize)
        }
        // multiplicity 3 irreducible: y^3 - x^m + x^{m-k} y, 2 <= k <= m/3
        "m3-r1-general" => {
            let m = param(params, "m")?;
            let k = param(params, "k")?;
            if k < 2 || k > m / 3 {
                return Err(bad("need 2 <= k <= m/3"));
            }
            Ok((2 * m - k - 1) as usize)
        }
        // y(x^2 - y^n): double branch tangent to x = 0
        "m3-r2-tangent-x" => {
            let n = param(params, "n")?;
            if n <= 2 || n % 2 == 0 {
                return Err(bad("need odd n > 2"));
            }
            Ok((n + 2) as usize)
        }
        // y * ((y - x^m)^2 - x^n) with 2m < n
        "m3-r2-2a" => {
            let n = param(params, "n")?;
            let m = param(params, "m")?;
            if m < 1 || 2 * m >= n || n % 2 == 0 {
                return Err(bad("need odd n > 2m >= 2"));
            }
            Ok((n + 3 * m - 1) as usize)
        }
        // y(y^2 - x^n), n odd
        "m3-r2-2bi" => {
            let n = param(params, "n")?;
            if n <= 2 || n % 2 == 0 {
                return Err(bad("need odd n > 2"));
            }
            Ok((3 * n - 2) as usize)
        }
        // y * (y^2 - 2 x^{(n+2m-1)/2} y - x^n + x^{n+2m-1}), 1 <= m <= (n-3)/2
        "m3-r2-2bii" => {
            let n = param(params, "n")?;
            let m = param(params, "m")?;
            if n % 2 == 0 || m < 1 || 2 * m > n - 3 {
                return Err(bad("need odd n and 1 <= m <= (n-3)/2"));
            }
            Ok(((5 * n + 2 * m - 3) / 2) as usize)
        }
        // xy(y - x^n): three lines, two tangent directions
        "m3-r3-1" => {
            let n = param(params, "n")?;
            if n < 1 {
                return Err(bad("need n >= 1"));
            }
            Ok((2 * n + 2) as usize)
        }
        // y(y - x^n)(y - x^m), 1 < n < m
        "m3-r3-2a" => {
            let n = param(params, "n")?;
            let m = param(params, "m")?;
            if n <= 1 || m <= n {
                return Err(bad("need 1 < n < m"));
            }
            Ok((3 * n + 2 * m - 1) as usize)
        }
        // y(y - x^n)(y + x^n): one tangent, equal contacts, a = 0
        "m3-r3-2bi" => {
            let n = param(params, "n")?;
            if n <= 1 {
                return Err(bad("need n > 1"));
            }
            Ok((6 * n - 2) as usize)
        }
        // y(y - x^n)(y + x^n - a x^k), a != 0, n < k < 2n - 1
        "m3-r3-2bii" => {
            let n = param(params, "n")?;
            let k = param(params, "k")?;
            if n <= 1 || k <= n || k >= 2 * n - 1 {
                return Err(bad("need n < k < 2n - 1"));
            }
            Ok((4 * n + k - 1) as usize)
        }
        _ => Err(InvError::BadParams(format!("unknown case id {case_id}"))),
    }
}

// ---------------------------------------------------------------------------
// Full report for an irreducible curve
// ---------------------------------------------------------------------------

/// The three independent routes to the Tjurina number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauRoutes {
    /// dim of the quotient by the Tjurina ideal
    pub quotient_dim: usize,
    /// mu - I(h1, h2) from the basis cofactors
    pub mu_minus_i: usize,
    /// mu - #(value gaps of the differential module)
    pub berger: usize,
    pub agree: bool,
}

/// Invariant report for an irreducible germ with parametrized branch.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub mu: usize,
    pub tau: usize,
    pub lambda_gaps: BTreeSet<usize>,
    pub gsv: (i64, i64),
    pub min_delta: i64,
    pub tau_routes: TauRoutes,
}

/// Run the full pipeline on an irreducible curve: semigroup, standard basis,
/// value gaps, logarithmic basis, and all three Tjurina routes.
pub fn invariant_report(f: &BiSeries, branch: &Branch) -> Result<InvariantReport, InvError> {
    let (sg, ring) = semigroup_of(branch, f.trunc())?;
    let res = algorithm1(branch, &sg, &ring)?;
    let basis = saito_from_stdbasis(f, branch, &res)?;
    report_from_parts(f, branch, &res, &basis)
}

/// The Algorithm 2 tail of the pipeline, reusing a standard-basis result.
pub fn saito_from_stdbasis(
    f: &BiSeries,
    branch: &Branch,
    res: &SBResult,
) -> Result<SaitoBasis, InvError> {
    let rows = syzygy_rows(res);
    let g = candidate_forms(&rows, res, f, branch)?;
    Ok(select_saito_pair(&g, f)?)
}

/// Assemble the report from precomputed pipeline stages.
pub fn report_from_parts(
    f: &BiSeries,
    branch: &Branch,
    res: &SBResult,
    basis: &SaitoBasis,
) -> Result<InvariantReport, InvError> {
    let gaps: BTreeSet<usize> = lambda_gaps(res).into_iter().collect();
    let mu = milnor(f, Some(branch))?;
    let quotient_dim = tjurina(f)?;
    let mu_minus_i = tjurina_via_cofactors(f, basis)?;
    let berger = mu - gaps.len();
    let agree = quotient_dim == mu_minus_i && mu_minus_i == berger;
    let gsv = gsv_indices(basis, f, branch)?;
    Ok(InvariantReport {
        mu,
        tau: quotient_dim,
        lambda_gaps: gaps,
        gsv,
        min_delta: gsv.0.min(gsv.1),
        tau_routes: TauRoutes { quotient_dim, mu_minus_i, berger, agree },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{refine_branch, validate_branch};
    use crate::saito::{closed_form_basis, ClosedForm};
    use crate::series::{rat, rat_int, TSeries};

    fn bmono(c: i64, i: u32, j: u32, n: usize) -> BiSeries {
        BiSeries::monomial(rat_int(c), i, j, n)
    }

    fn family(n: u32, m: u32, k: u32, trunc: usize, window: usize) -> (BiSeries, Branch) {
        let f = bmono(1, 0, n, trunc)
            .sub(&bmono(1, m, 0, trunc))
            .add(&bmono(1, m - k, n - 2, trunc));
        let w = (n as usize - 1) * m as usize - k as usize * n as usize;
        let x_t = TSeries::monomial(rat_int(1), n as usize, window);
        let seed = TSeries::monomial(rat_int(1), m as usize, window)
            .add(&TSeries::monomial(rat(-1, n as i64), w, window));
        let y_t = refine_branch(&f, &x_t, &seed).unwrap();
        (f.clone(), validate_branch(x_t, y_t).unwrap())
    }

    #[test]
    fn quotient_dims_of_simple_ideals() {
        let t = 16;
        let x = bmono(1, 1, 0, t);
        let y = bmono(1, 0, 1, t);
        assert_eq!(local_quotient_dim(&[x.clone(), y.clone()]).unwrap(), 1);
        // <y, y - x^4> = <y, x^4> has dimension 4
        let g = y.sub(&bmono(1, 4, 0, t));
        assert_eq!(local_quotient_dim(&[y.clone(), g]).unwrap(), 4);
        // a unit generator collapses the quotient
        let u = BiSeries::one(t).add(&x.clone());
        assert_eq!(local_quotient_dim(&[u]).unwrap(), 0);
        // <x> alone is not zero-dimensional
        assert!(matches!(
            local_quotient_dim(&[x]),
            Err(InvError::NotZeroDimensional)
        ));
    }

    #[test]
    fn milnor_and_tjurina_of_the_family() {
        let (f, b) = family(3, 10, 2, 30, 180);
        assert_eq!(milnor(&f, Some(&b)).unwrap(), 18);
        assert_eq!(tjurina(&f).unwrap(), 17);
        let (f, _) = family(3, 10, 3, 30, 180);
        assert_eq!(milnor(&f, None).unwrap(), 18);
        assert_eq!(tjurina(&f).unwrap(), 16);
    }

    #[test]
    fn milnor_of_small_curves() {
        let t = 16;
        let cusp = bmono(1, 0, 2, t).sub(&bmono(1, 3, 0, t));
        assert_eq!(milnor(&cusp, None).unwrap(), 2);
        assert_eq!(tjurina(&cusp).unwrap(), 2);
        let xy = bmono(1, 1, 1, t);
        assert_eq!(milnor(&xy, None).unwrap(), 1);
        assert_eq!(tjurina(&xy).unwrap(), 1);
    }

    #[test]
    fn tjurina_via_cofactors_matches() {
        // quasi-homogeneous: unit cofactor, I = 0, tau = mu
        let f = bmono(1, 0, 2, 16).sub(&bmono(1, 3, 0, 16));
        let basis =
            closed_form_basis(ClosedForm::QuasiHomogeneous { wx: 2, wy: 3, f: f.clone() }).unwrap();
        assert_eq!(cofactor_intersection(&basis).unwrap(), 0);
        assert_eq!(tjurina_via_cofactors(&f, &basis).unwrap(), 2);
    }

    #[test]
    fn resultant_oracle_matches_quotient_dim() {
        let t = 16;
        let y = bmono(1, 0, 1, t);
        let g = y.sub(&bmono(1, 4, 0, t));
        assert_eq!(resultant_x_order(&y, &g), Some(4));
        // cusp partials: I(f_x, f_y) = mu = 2
        let f = bmono(1, 0, 2, t).sub(&bmono(1, 3, 0, t));
        assert_eq!(
            resultant_x_order(&f.partial(Var::X), &f.partial(Var::Y)),
            Some(2)
        );
        // common component: resultant vanishes
        let xy = bmono(1, 1, 1, t);
        let xyy = bmono(1, 1, 2, t);
        assert_eq!(resultant_x_order(&xy, &xyy), None);
    }

    #[test]
    fn composite_milnor_formula() {
        // xy: two smooth transversal branches
        assert_eq!(composite_milnor(&[0, 0], &[1]), 1);
        // single factor
        assert_eq!(composite_milnor(&[7], &[]), 7);
        // y * ((y - x^2)^2 - x^5): mu = 0 + 4 + 2*4 - 2 + 1 = 11
        assert_eq!(composite_milnor(&[0, 4], &[4]), 11);
    }

    #[test]
    fn classification_values_and_constraints() {
        assert_eq!(classification_tau("m1", &[]).unwrap(), 0);
        assert_eq!(classification_tau("m2-irreducible", &[("n", 3)]).unwrap(), 2);
        assert_eq!(classification_tau("m2-transversal", &[]).unwrap(), 1);
        assert_eq!(classification_tau("m2-same-tangent", &[("n", 2)]).unwrap(), 3);
        assert_eq!(classification_tau("m3-r1-qh", &[("n", 4)]).unwrap(), 6);
        assert_eq!(
            classification_tau("m3-r1-general", &[("m", 10), ("k", 2)]).unwrap(),
            17
        );
        assert_eq!(classification_tau("m3-r2-tangent-x", &[("n", 3)]).unwrap(), 5);
        assert_eq!(
            classification_tau("m3-r2-2a", &[("n", 5), ("m", 2)]).unwrap(),
            10
        );
        assert_eq!(classification_tau("m3-r2-2bi", &[("n", 5)]).unwrap(), 13);
        assert_eq!(
            classification_tau("m3-r2-2bii", &[("n", 5), ("m", 1)]).unwrap(),
            12
        );
        assert_eq!(classification_tau("m3-r3-1", &[("n", 4)]).unwrap(), 10);
        assert_eq!(
            classification_tau("m3-r3-2a", &[("n", 2), ("m", 3)]).unwrap(),
            11
        );
        assert_eq!(classification_tau("m3-r3-2bi", &[("n", 2)]).unwrap(), 10);
        assert_eq!(
            classification_tau("m3-r3-2bii", &[("n", 3), ("k", 4)]).unwrap(),
            15
        );
        // constraint violations
        assert!(classification_tau("m2-irreducible", &[("n", 4)]).is_err());
        assert!(classification_tau("m3-r1-general", &[("m", 10), ("k", 4)]).is_err());
        assert!(classification_tau("m3-r3-2bii", &[("n", 3), ("k", 5)]).is_err());
        assert!(classification_tau("nope", &[]).is_err());
    }

    #[test]
    fn full_report_on_the_family() {
        let (f, b) = family(3, 10, 2, 30, 180);
        let rep = invariant_report(&f, &b).unwrap();
        assert_eq!(rep.mu, 18);
        assert_eq!(rep.tau, 17);
        assert_eq!(rep.lambda_gaps, BTreeSet::from([17]));
        assert!(rep.tau_routes.agree);
        assert_eq!(rep.tau_routes.mu_minus_i, 17);
        assert_eq!(rep.tau_routes.berger, 17);
        // the residue of some member has negative valuation, bounded by
        // -m(f) + 1 = -2
        assert!(rep.min_delta <= -2);
    }
}
