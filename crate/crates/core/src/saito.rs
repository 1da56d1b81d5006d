//! Bases of the logarithmic module: syzygies of the standard basis yield a
//! generating set (the Schreyer step), from which a pair satisfying the
//! wedge criterion is selected; plus closed-form bases for regular,
//! quasi-homogeneous and multiplicity-two curves, and composite
//! constructions for products.

use num_traits::Zero;
use thiserror::Error;

use crate::curve::{semigroup_of, valuation, Branch, CurveError};
use crate::forms::{
    divide_by_curve, exterior_d, form_divide_exact, pair_cofactor, saito_membership, wedge,
    FormError, OneForm,
};
use crate::series::{divide_exact, BiSeries, Rat, SeriesError, TSeries, Var};
use crate::stdbasis::{algorithm1, FPoly, SBError, SBResult};

#[derive(Debug, Error)]
pub enum SaitoError {
    #[error("no pair of candidates satisfies the wedge criterion")]
    NoBasisFound,
    #[error("a generated candidate failed the membership check: {0}")]
    MembershipFailed(FormError),
    #[error("construction hypothesis failed: {reason}")]
    HypothesisFailed { reason: String },
    #[error("both basis dx-components vanish on y = 0")]
    DegenerateA,
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
}

/// A verified basis of the logarithmic module: `omega1 /\ omega2 = u f`
/// with `u` a unit, and `omega_i /\ df = h_i f`.
#[derive(Debug, Clone)]
pub struct SaitoBasis {
    pub omega1: OneForm,
    pub omega2: OneForm,
    pub u: BiSeries,
    pub h1: BiSeries,
    pub h2: BiSeries,
    pub f: BiSeries,
}

/// Verify the wedge criterion for a pair and package the result.
pub fn verify_pair(omega1: &OneForm, omega2: &OneForm, f: &BiSeries) -> Result<SaitoBasis, SaitoError> {
    let u = pair_cofactor(&wedge(omega1, omega2), f)?;
    if !u.is_unit() {
        return Err(SaitoError::NoBasisFound);
    }
    let h1 = pair_cofactor(&wedge(omega1, &exterior_d(f)), f).map_err(SaitoError::MembershipFailed)?;
    let h2 = pair_cofactor(&wedge(omega2, &exterior_d(f)), f).map_err(SaitoError::MembershipFailed)?;
    Ok(SaitoBasis {
        omega1: omega1.clone(),
        omega2: omega2.clone(),
        u,
        h1,
        h2,
        f: f.clone(),
    })
}

// ---------------------------------------------------------------------------
// Algorithm 2: syzygies -> generating set -> pair selection
// ---------------------------------------------------------------------------

/// One syzygy of the standard basis elements, read off a logged S-process
/// reduction: coefficient polynomials (in the ring representatives) whose
/// combination of the elements lands in the logarithmic module.
#[derive(Debug, Clone)]
pub struct SyzygyRow {
    pub coeffs: Vec<FPoly>,
    pub source: (usize, usize, usize),
}

/// Build the syzygy rows: quotients of each reduction relation minus the
/// S-process terms themselves.
pub fn syzygy_rows(res: &SBResult) -> Vec<SyzygyRow> {
    let n = res.elements.len();
    let mut rows = Vec::new();
    for rec in &res.records {
        let mut coeffs = rec.quotients(n);
        let p = &rec.process;
        coeffs[p.j].push((p.alpha.clone(), -p.a.clone()));
        coeffs[p.k].push((p.beta.clone(), -p.b.clone()));
        rows.push(SyzygyRow { coeffs, source: (p.j, p.k, p.l) });
    }
    rows
}

fn eval_fpoly(p: &FPoly, reps: &[BiSeries], trunc: usize) -> BiSeries {
    let mut out = BiSeries::zero(trunc);
    for (expo, c) in p {
        let mut m = BiSeries::constant(c.clone(), trunc);
        for (i, &e) in expo.iter().enumerate() {
            for _ in 0..e {
                m = m.mul(&reps[i]);
            }
        }
        out = out.add(&m);
    }
    out
}

/// A verified member of the logarithmic module generated by a syzygy row.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub form: OneForm,
    pub source: (usize, usize, usize),
    pub h: BiSeries,
    pub h_val: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub forms: Vec<Candidate>,
}

/// Evaluate each syzygy row into an explicit 1-form and verify membership;
/// zero forms are dropped.
pub fn candidate_forms(
    rows: &[SyzygyRow],
    res: &SBResult,
    f: &BiSeries,
    branch: &Branch,
) -> Result<CandidateSet, SaitoError> {
    let trunc = f.trunc();
    let mut forms = Vec::new();
    for row in rows {
        let mut form = OneForm::zero(trunc);
        for (i, poly) in row.coeffs.iter().enumerate() {
            if poly.is_empty() {
                continue;
            }
            let g = eval_fpoly(poly, &res.ring.reps, trunc);
            form = form.add(&res.elements[i].form.mul_fn(&g));
        }
        if form.is_zero() {
            continue;
        }
        // candidates are members by construction; use the noise-tolerant
        // division so a truncation tail does not abort the set
        let h = pair_cofactor(&wedge(&form, &exterior_d(f)), f)
            .map_err(SaitoError::MembershipFailed)?;
        let h_val = valuation(&h, branch);
        forms.push(Candidate { form, source: row.source, h, h_val });
    }
    Ok(CandidateSet { forms })
}

/// Select a pair from the generating set satisfying the wedge criterion.
/// Candidates are ordered by cofactor valuation (lowest first, infinite
/// last), pairs are tried lexicographically, and as a fallback small scalar
/// combinations of candidates are scanned.
pub fn select_saito_pair(g: &CandidateSet, f: &BiSeries) -> Result<SaitoBasis, SaitoError> {
    let mut order: Vec<usize> = (0..g.forms.len()).collect();
    order.sort_by_key(|&i| (g.forms[i].h_val.unwrap_or(usize::MAX), i));
    // rank all unit pairs: a constant cofactor is preferred (it matches the
    // closed-form normalizations), then lower cofactor valuations
    let mut best: Option<(
        (usize, usize, usize, usize, usize),
        SaitoBasis,
    )> = None;
    for a in 0..order.len() {
        for b in (a + 1)..order.len() {
            let (ca, cb) = (&g.forms[order[a]], &g.forms[order[b]]);
            if let Ok(u) = pair_cofactor(&wedge(&ca.form, &cb.form), f) {
                if u.is_unit() {
                    let constant = u
                        .sub(&BiSeries::constant(u.coeff(0, 0), u.trunc()))
                        .is_zero_to_precision();
                    let key = (
                        if constant { 0 } else { 1 },
                        ca.h_val.unwrap_or(usize::MAX),
                        cb.h_val.unwrap_or(usize::MAX),
                        a,
                        b,
                    );
                    if best.as_ref().map_or(true, |(k, _)| key < *k) {
                        best = Some((
                            key,
                            SaitoBasis {
                                omega1: ca.form.clone(),
                                omega2: cb.form.clone(),
                                u,
                                h1: ca.h.clone(),
                                h2: cb.h.clone(),
                                f: f.clone(),
                            },
                        ));
                    }
                }
            }
        }
    }
    if let Some((_, basis)) = best {
        return normalize_unit(basis);
    }
    // fallback: scalar-linear combinations of the leading candidates
    let scalars: [i64; 5] = [0, 1, -1, 2, -2];
    let lead: Vec<&Candidate> = order.iter().take(4).map(|&i| &g.forms[i]).collect();
    let mut combos: Vec<OneForm> = Vec::new();
    for i in 0..lead.len() {
        for j in (i + 1)..lead.len() {
            for &s in &scalars {
                for &t in &scalars {
                    if s == 0 && t == 0 {
                        continue;
                    }
                    combos.push(
                        lead[i]
                            .form
                            .scale(&crate::series::rat_int(s))
                            .add(&lead[j].form.scale(&crate::series::rat_int(t))),
                    );
                }
            }
        }
    }
    for i in 0..combos.len() {
        for j in (i + 1)..combos.len() {
            if let Ok(u) = pair_cofactor(&wedge(&combos[i], &combos[j]), f) {
                if u.is_unit() {
                    return verify_pair(&combos[i], &combos[j], f);
                }
            }
        }
    }
    Err(SaitoError::NoBasisFound)
}

/// Rescale the first member of a basis by the unit `u(0)/u`, making the
/// criterion cofactor exactly the constant `u(0)`; a unit scaling keeps the
/// form in the logarithmic module and preserves cofactor valuations.
pub fn normalize_unit(basis: SaitoBasis) -> Result<SaitoBasis, SaitoError> {
    let u0 = basis.u.coeff(0, 0);
    if basis
        .u
        .sub(&BiSeries::constant(u0.clone(), basis.u.trunc()))
        .is_zero_to_precision()
    {
        return Ok(basis);
    }
    let scale = basis.u.invert()?.scale(&u0);
    Ok(SaitoBasis {
        omega1: basis.omega1.mul_fn(&scale),
        omega2: basis.omega2,
        u: BiSeries::constant(u0, scale.trunc()),
        h1: basis.h1.mul(&scale),
        h2: basis.h2,
        f: basis.f,
    })
}

/// End-to-end pipeline for an irreducible curve: value semigroup, standard
/// basis, syzygies, candidates, pair selection.
pub fn saito_basis(f: &BiSeries, branch: &Branch) -> Result<SaitoBasis, SaitoError> {
    let (sg, ring) = semigroup_of(branch, f.trunc())?;
    let res = algorithm1(branch, &sg, &ring)?;
    let rows = syzygy_rows(&res);
    let g = candidate_forms(&rows, &res, f, branch)?;
    select_saito_pair(&g, f)
}

/// Express a member of the logarithmic module in a basis:
/// `omega = q1 omega1 + q2 omega2` with `q1 = u^{-1} N2`, `q2 = -u^{-1} N1`
/// where `omega /\ omega_i = N_i f`.
pub fn express_in_basis(
    omega: &OneForm,
    basis: &SaitoBasis,
) -> Result<(BiSeries, BiSeries), SaitoError> {
    match saito_membership(omega, &basis.f) {
        // a residual tail inside the truncation window still allows
        // coordinates to the available precision
        Ok(_) | Err(FormError::PrecisionExhausted { .. }) => {}
        Err(e) => return Err(SaitoError::MembershipFailed(e)),
    }
    let n1 = pair_cofactor(&wedge(omega, &basis.omega1), &basis.f)?;
    let n2 = pair_cofactor(&wedge(omega, &basis.omega2), &basis.f)?;
    let uinv = basis.u.invert()?;
    let q1 = uinv.mul(&n2);
    let q2 = uinv.mul(&n1).neg();
    Ok((q1, q2))
}

// ---------------------------------------------------------------------------
// Closed-form bases
// ---------------------------------------------------------------------------

pub enum ClosedForm {
    /// Regular curve `f = alpha x + beta y + h`, `h` of order >= 2; the
    /// basis is `{f dg, df}` for a transversal linear `g`.
    Regular { f: BiSeries },
    /// Weighted-homogeneous `f` with weights `(wx, wy)`: the basis is
    /// `{wx x dy - wy y dx, df}` with constant criterion unit.
    QuasiHomogeneous { wx: u32, wy: u32, f: BiSeries },
    /// `f = y^2 + A(x) y + B(x)` of multiplicity two.
    Multiplicity2 { a: TSeries, b: TSeries },
}

fn tshift_up(s: &TSeries) -> TSeries {
    let mut c = vec![Rat::zero(); s.trunc()];
    for (k, v) in s.coeffs().iter().enumerate() {
        if k + 1 < c.len() {
            c[k + 1] = v.clone();
        }
    }
    TSeries::from_coeffs(c, s.trunc())
}

fn tshift_down(s: &TSeries, k: usize) -> TSeries {
    let mut c = Vec::new();
    for i in k..s.trunc() {
        c.push(s.coeff(i));
    }
    TSeries::from_coeffs(c, s.trunc() - k)
}

pub fn closed_form_basis(kind: ClosedForm) -> Result<SaitoBasis, SaitoError> {
    match kind {
        ClosedForm::Regular { f } => {
            let trunc = f.trunc();
            let alpha = f.coeff(1, 0);
            let beta = f.coeff(0, 1);
            if !f.coeff(0, 0).is_zero() {
                return Err(SaitoError::BadParams("f must vanish at the origin".into()));
            }
            if alpha.is_zero() && beta.is_zero() {
                return Err(SaitoError::BadParams("curve is not regular".into()));
            }
            // g = y when f_x(0) != 0, g = x otherwise; dg is constant
            let (gx, gy) = if !alpha.is_zero() {
                (Rat::zero(), Rat::from_integer(1.into()))
            } else {
                (Rat::from_integer(1.into()), Rat::zero())
            };
            let omega1 = OneForm { a: f.scale(&gx), b: f.scale(&gy) };
            let omega2 = exterior_d(&f);
            // (f dg) /\ df = f (gx f_y - gy f_x)
            let u = f
                .partial(Var::Y)
                .scale(&gx)
                .sub(&f.partial(Var::X).scale(&gy));
            if !u.is_unit() {
                return Err(SaitoError::BadParams("transversal direction failed".into()));
            }
            let h1 = u.clone();
            let h2 = BiSeries::zero(trunc);
            Ok(SaitoBasis { omega1, omega2, u, h1, h2, f })
        }
        ClosedForm::QuasiHomogeneous { wx, wy, f } => {
            let trunc = f.trunc();
            let x = BiSeries::var_x(trunc);
            let y = BiSeries::var_y(trunc);
            let euler = x
                .mul(&f.partial(Var::X))
                .scale(&crate::series::rat_int(wx as i64))
                .add(&y.mul(&f.partial(Var::Y)).scale(&crate::series::rat_int(wy as i64)));
            // Euler identity: wx x f_x + wy y f_y = d f for a constant d
            let (lead_key, lead_coeff) = match f.terms().next() {
                Some((&k, c)) => (k, c.clone()),
                None => return Err(SaitoError::BadParams("f is zero".into())),
            };
            let d = euler.coeff(lead_key.0, lead_key.1) / lead_coeff;
            if d.is_zero() || !euler.sub(&f.scale(&d)).is_zero_to_precision() {
                return Err(SaitoError::BadParams(
                    "f is not weighted-homogeneous for these weights".into(),
                ));
            }
            let omega1 = OneForm {
                a: y.scale(&-crate::series::rat_int(wy as i64)),
                b: x.scale(&crate::series::rat_int(wx as i64)),
            };
            let omega2 = exterior_d(&f);
            let u = BiSeries::constant(-d.clone(), trunc);
            debug_assert!(wedge(&omega1, &omega2).sub(&f.scale(&-d)).is_zero_to_precision());
            let h1 = u.clone();
            let h2 = BiSeries::zero(trunc);
            Ok(SaitoBasis { omega1, omega2, u, h1, h2, f })
        }
        ClosedForm::Multiplicity2 { a, b } => {
            let trunc = a.trunc().min(b.trunc());
            if a.order().map_or(false, |o| o < 1) || b.order().map_or(false, |o| o < 2) {
                return Err(SaitoError::BadParams("need mult(A) >= 1 and mult(B) >= 2".into()));
            }
            // A^2/4 - B = x^k u(x), u a unit
            let c = a.mul(&a).scale(&crate::series::rat(1, 4)).sub(&b);
            let k = c
                .order()
                .ok_or_else(|| SaitoError::BadParams("A^2/4 - B vanishes: f is not reduced".into()))?;
            let unit = tshift_down(&c, k);
            // s = k + x u'/u; the dx coefficient is -(s (y + A/2) - x A')
            let s = TSeries::constant(crate::series::rat_int(k as i64), unit.trunc())
                .add(&tshift_up(&unit.derivative().mul(&unit.invert()?)));
            let bs = |t: &TSeries| BiSeries::from_univariate(t, Var::X).truncated(trunc);
            let y = BiSeries::var_y(trunc);
            let f = y
                .mul(&y)
                .add(&y.mul(&bs(&a)))
                .add(&bs(&b));
            let dx_coeff = bs(&s)
                .mul(&y.add(&bs(&a.scale(&crate::series::rat(1, 2)))))
                .sub(&bs(&tshift_up(&a.derivative())))
                .neg();
            let omega1 = OneForm {
                a: dx_coeff,
                b: BiSeries::monomial(crate::series::rat_int(2), 1, 0, trunc),
            };
            let omega2 = exterior_d(&f);
            let u = bs(&s).scale(&crate::series::rat_int(-2));
            if !wedge(&omega1, &omega2).sub(&f.mul(&u)).is_zero_to_precision() {
                return Err(SaitoError::BadParams("multiplicity-two identity failed".into()));
            }
            let h1 = u.clone();
            let h2 = BiSeries::zero(trunc);
            Ok(SaitoBasis { omega1, omega2, u, h1, h2, f })
        }
    }
}

// ---------------------------------------------------------------------------
// Composite constructions
// ---------------------------------------------------------------------------

/// Lift a basis for `f1` to one for `f1 f2`: with
/// `omega_i /\ df2 = (R_i + H_i f2) dx /\ dy` and `G` dividing both `R_i`,
/// caller-supplied `S1, S2` must satisfy `S1 R1/G + S2 R2/G = v f2` with `v`
/// a unit. The split `R_i` may be supplied explicitly (any representative
/// with `R_i` not a multiple of `f2` works); by default it is the remainder
/// of division by `f2`.
pub fn basis_product(
    basis1: &SaitoBasis,
    f2: &BiSeries,
    s1: &BiSeries,
    s2: &BiSeries,
    g: &BiSeries,
    split: Option<(&BiSeries, &BiSeries)>,
) -> Result<SaitoBasis, SaitoError> {
    if !f2.coeff(0, 0).is_zero() {
        return Err(SaitoError::BadParams("f2 must vanish at the origin".into()));
    }
    let df2 = exterior_d(f2);
    let w1 = wedge(&basis1.omega1, &df2);
    let w2 = wedge(&basis1.omega2, &df2);
    let (r1, r2) = match split {
        Some((r1, r2)) => {
            for (w, r) in [(&w1, r1), (&w2, r2)] {
                let (_, rem) = divide_by_curve(&w.sub(r), f2)?;
                if !rem.is_zero_to_precision() {
                    return Err(SaitoError::HypothesisFailed {
                        reason: "supplied split differs from the wedge modulo f2".into(),
                    });
                }
            }
            (r1.clone(), r2.clone())
        }
        None => {
            let (_, r1) = divide_by_curve(&w1, f2)?;
            let (_, r2) = divide_by_curve(&w2, f2)?;
            (r1, r2)
        }
    };
    if r1.is_zero_to_precision() || r2.is_zero_to_precision() {
        return Err(SaitoError::HypothesisFailed {
            reason: "a wedge with df2 is a multiple of f2".into(),
        });
    }
    let r1g = divide_exact(&r1, g).map_err(|_| SaitoError::HypothesisFailed {
        reason: "G does not divide R1".into(),
    })?;
    let r2g = divide_exact(&r2, g).map_err(|_| SaitoError::HypothesisFailed {
        reason: "G does not divide R2".into(),
    })?;
    let p = s1.mul(&r1g).add(&s2.mul(&r2g));
    let (v, rem) = divide_by_curve(&p, f2)?;
    if !rem.is_zero_to_precision() || !v.is_unit() {
        return Err(SaitoError::HypothesisFailed {
            reason: "S1 R1/G + S2 R2/G is not a unit multiple of f2".into(),
        });
    }
    let eta1 = form_divide_exact(
        &basis1.omega1.mul_fn(&r2).sub(&basis1.omega2.mul_fn(&r1)),
        g,
    )
    .map_err(|_| SaitoError::HypothesisFailed { reason: "G does not divide eta1".into() })?;
    let eta2 = basis1.omega1.mul_fn(s1).add(&basis1.omega2.mul_fn(s2));
    let f = basis1.f.mul(f2);
    verify_pair(&eta1, &eta2, &f)
}

/// Basis for `y f` from a basis for `f`: sort so the first member's
/// dx-component has the lower order on `y = 0`, then
/// `eta1 = (A2(x,0)/x^a) omega1 - (A1(x,0)/x^a) omega2`, `eta2 = y omega1`.
pub fn basis_times_y(basis: &SaitoBasis) -> Result<SaitoBasis, SaitoError> {
    let a1 = basis.omega1.a.eval_y0();
    let a2 = basis.omega2.a.eval_y0();
    let (o1, o2) = (a1.order(), a2.order());
    if o1.is_none() && o2.is_none() {
        return Err(SaitoError::DegenerateA);
    }
    let swap = match (o1, o2) {
        (None, Some(_)) => true,
        (Some(p), Some(q)) => p > q,
        _ => false,
    };
    let (w1, w2, a1, a2) = if swap {
        (&basis.omega2, &basis.omega1, a2, a1)
    } else {
        (&basis.omega1, &basis.omega2, a1, a2)
    };
    let alpha = a1.order().unwrap();
    let trunc = basis.f.trunc();
    let bs = |t: &TSeries| BiSeries::from_univariate(t, Var::X).truncated(trunc);
    let eta1 = w1
        .mul_fn(&bs(&tshift_down(&a2, alpha)))
        .sub(&w2.mul_fn(&bs(&tshift_down(&a1, alpha))));
    let eta2 = w1.mul_fn(&BiSeries::var_y(trunc));
    let f = basis.f.mul(&BiSeries::var_y(trunc));
    verify_pair(&eta1, &eta2, &f)
}

/// Membership in the logarithmic module of a product, checked factorwise;
/// the direct check against `f1 f2` must agree.
pub fn intersection_membership(
    omega: &OneForm,
    f1: &BiSeries,
    f2: &BiSeries,
) -> Result<bool, SaitoError> {
    let check = |f: &BiSeries| -> Result<bool, SaitoError> {
        match saito_membership(omega, f) {
            Ok(_) => Ok(true),
            Err(FormError::NotMember { .. }) => Ok(false),
            Err(FormError::NotMultiple { .. }) => Ok(false),
            Err(e) => Err(SaitoError::Form(e)),
        }
    };
    let both = check(f1)? && check(f2)?;
    let direct = check(&f1.mul(f2))?;
    if both != direct {
        return Err(SaitoError::HypothesisFailed {
            reason: "factorwise and direct membership disagree".into(),
        });
    }
    Ok(both)
}
