//! Branch parametrizations, value semigroups and their ring representatives.

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::series::{BiSeries, Rat, SeriesError, TSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("parametrization is not primitive (exponent gcd {gcd})")]
    NotPrimitive { gcd: usize },
    #[error("parametrization is not normalized: {reason}")]
    NotNormalized { reason: String },
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("precision exhausted while resolving an order (window {window})")]
    PrecisionExhausted { window: usize },
}

/// Primitive parametrization `t -> (x(t), y(t))` of a branch.
#[derive(Debug, Clone)]
pub struct Branch {
    x_t: TSeries,
    y_t: TSeries,
}

impl Branch {
    pub fn x_t(&self) -> &TSeries {
        &self.x_t
    }

    pub fn y_t(&self) -> &TSeries {
        &self.y_t
    }

    pub fn trunc(&self) -> usize {
        self.x_t.trunc().min(self.y_t.trunc())
    }

    /// Multiplicity m(f) of the branch, the order of x(t).
    pub fn mult(&self) -> usize {
        self.x_t.order().expect("validated branch has finite x-order")
    }
}

/// Validate a parametrization: primitive, zero constant terms, normalized so
/// that ord x < ord y and ord x does not divide ord y (unless ord x = 1).
pub fn validate_branch(x_t: TSeries, y_t: TSeries) -> Result<Branch, CurveError> {
    if !x_t.coeff(0).is_zero() || !y_t.coeff(0).is_zero() {
        return Err(CurveError::NotNormalized {
            reason: "parametrization must vanish at t = 0".into(),
        });
    }
    let mut gcd = 0usize;
    for s in [&x_t, &y_t] {
        for (k, c) in s.coeffs().iter().enumerate() {
            if !c.is_zero() {
                gcd = gcd.gcd(&k);
            }
        }
    }
    if gcd == 0 {
        return Err(CurveError::NotNormalized { reason: "zero parametrization".into() });
    }
    if gcd > 1 {
        return Err(CurveError::NotPrimitive { gcd });
    }
    let ox = x_t.order().ok_or_else(|| CurveError::NotNormalized {
        reason: "x(t) vanishes to precision".into(),
    })?;
    if let Some(oy) = y_t.order() {
        if ox >= oy {
            return Err(CurveError::NotNormalized {
                reason: format!("ord x = {} must be < ord y = {}", ox, oy),
            });
        }
        if ox > 1 && oy % ox == 0 {
            return Err(CurveError::NotNormalized {
                reason: format!("ord x = {} divides ord y = {}", ox, oy),
            });
        }
    }
    Ok(Branch { x_t, y_t })
}

/// Valuation of a function germ along a branch: order of its pullback.
/// `None` means infinite to precision (e.g. the defining equation itself).
pub fn valuation(h: &BiSeries, b: &Branch) -> Option<usize> {
    h.pullback(&b.x_t, &b.y_t).order()
}

/// True iff the branch lies on the curve `f = 0`, to precision.
pub fn verify_incidence(f: &BiSeries, b: &Branch) -> bool {
    f.pullback(&b.x_t, &b.y_t).is_zero_to_precision()
}

/// Newton refinement of a seed parametrization: keeps `x(t)` fixed and
/// lifts `y(t)` until `f(x(t), y(t))` vanishes to precision. Returns `None`
/// if the iteration makes no progress.
pub fn refine_branch(f: &BiSeries, x_t: &TSeries, y_seed: &TSeries) -> Option<TSeries> {
    let fy = f.partial(crate::series::Var::Y);
    let mut y = y_seed.clone();
    let mut last_order = f.pullback(x_t, &y).order();
    for _ in 0..64 {
        let val = f.pullback(x_t, &y);
        let num_ord = match val.order() {
            None => return Some(y),
            Some(o) => o,
        };
        let den = fy.pullback(x_t, &y);
        let den_ord = den.order()?;
        if num_ord < den_ord {
            return None;
        }
        let delta = tseries_div(&val, &den, den_ord)?;
        y = y.sub(&delta);
        let new_order = f.pullback(x_t, &y).order();
        match (last_order, new_order) {
            (_, None) => return Some(y),
            (Some(prev), Some(cur)) if cur <= prev => return None,
            _ => last_order = new_order,
        }
    }
    None
}

/// `num / den` when ord(num) >= ord(den) = `den_ord`.
fn tseries_div(num: &TSeries, den: &TSeries, den_ord: usize) -> Option<TSeries> {
    let window = num.trunc().min(den.trunc());
    if window <= den_ord {
        return None;
    }
    let shift = |s: &TSeries| {
        let mut c = Vec::with_capacity(window - den_ord);
        for k in den_ord..window {
            c.push(s.coeff(k));
        }
        TSeries::from_coeffs(c, window - den_ord)
    };
    let n = shift(num);
    let d = shift(den);
    let q = n.mul(&d.invert().ok()?);
    // re-expand to the original window
    let mut c = vec![Rat::zero(); window];
    for (k, v) in q.coeffs().iter().enumerate() {
        c[k] = v.clone();
    }
    Some(TSeries::from_coeffs(c, window))
}

// ---------------------------------------------------------------------------
// Numerical semigroups
// ---------------------------------------------------------------------------

/// Numerical semigroup given by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    gens: Vec<usize>,
    conductor: usize,
    gaps: Vec<usize>,
}

impl Semigroup {
    /// Build from generators with gcd 1; minimalizes the generating set.
    pub fn from_gens(gens: &[usize]) -> Semigroup {
        let mut gs: Vec<usize> = gens.iter().copied().filter(|&g| g > 0).collect();
        gs.sort_unstable();
        gs.dedup();
        assert!(!gs.is_empty(), "semigroup needs at least one generator");
        let g = gs.iter().fold(0usize, |a, &b| a.gcd(&b));
        assert_eq!(g, 1, "generators must have gcd 1");
        let bound = sieve_bound(&gs);
        let reach = reachable(&gs, bound);
        let gaps: Vec<usize> = (1..bound).filter(|&v| !reach[v]).collect();
        let conductor = gaps.last().map_or(0, |&g| g + 1);
        // minimality: drop any generator representable by the others
        let mut minimal = Vec::new();
        for (i, &v) in gs.iter().enumerate() {
            let others: Vec<usize> =
                gs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| w).collect();
            if others.is_empty() || !reachable(&others, v + 1)[v] {
                minimal.push(v);
            }
        }
        Semigroup { gens: minimal, conductor, gaps }
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= self.conductor || !self.gaps.contains(&v)
    }
}

fn sieve_bound(gens: &[usize]) -> usize {
    let lo = *gens.first().unwrap();
    let hi = *gens.last().unwrap();
    lo * hi + hi + 2
}

fn reachable(gens: &[usize], bound: usize) -> Vec<bool> {
    let mut r = vec![false; bound.max(1)];
    r[0] = true;
    for &g in gens {
        if g == 0 || g >= r.len() {
            continue;
        }
        for v in g..r.len() {
            if r[v - g] {
                r[v] = true;
            }
        }
    }
    r
}

/// Lexicographically least exponent vector with `sum alpha_i v_i = v`,
/// or `None` if `v` is not in the semigroup generated by `gens`.
pub fn gamma_repr(v: usize, gens: &[usize]) -> Option<Vec<u32>> {
    fn go(v: usize, gens: &[usize]) -> Option<Vec<u32>> {
        if gens.is_empty() {
            return if v == 0 { Some(vec![]) } else { None };
        }
        let g = gens[0];
        for a in 0..=(v / g) {
            if let Some(mut rest) = go(v - a * g, &gens[1..]) {
                let mut out = vec![a as u32];
                out.append(&mut rest);
                return Some(out);
            }
        }
        None
    }
    go(v, gens)
}

/// One minimal Diophantine solution pair, as in the S-process construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DioSolution {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl DioSolution {
    fn dominates(&self, other: &DioSolution) -> bool {
        self.alpha.iter().zip(&other.alpha).all(|(a, b)| a >= b)
            && self.beta.iter().zip(&other.beta).all(|(a, b)| a >= b)
    }
}

/// All exponent vectors over `gens` with value exactly `target`, each
/// exponent at most `cap`.
fn all_reprs(target: usize, gens: &[usize], cap: u32) -> Vec<Vec<u32>> {
    fn go(target: usize, gens: &[usize], cap: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
        if gens.is_empty() {
            if target == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = gens[0];
        let max = ((target / g) as u32).min(cap);
        for a in 0..=max {
            cur.push(a);
            go(target - a as usize * g, &gens[1..], cap, out, cur);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(target, gens, cap, &mut out, &mut Vec::new());
    out
}

/// Componentwise-minimal nonnegative solutions of
/// `sum alpha_i v_i + val_left = sum beta_i v_i + val_right`,
/// in a deterministic order (by matched value, then lexicographically).
pub fn min_dio_solutions(val_left: usize, val_right: usize, s: &Semigroup) -> Vec<DioSolution> {
    minimal_solutions(val_left, val_right, s.gens(), s.conductor(), false)
}

/// Minimal nonzero relations `sum alpha v = sum beta v` among the generators
/// themselves (used for ring-level cancellations); the trivial solution and
/// pairs with shared support are excluded.
pub fn minimal_relations(gens: &[usize]) -> Vec<DioSolution> {
    let bound = sieve_bound(gens);
    minimal_solutions(0, 0, gens, bound, true)
}

fn minimal_solutions(
    val_left: usize,
    val_right: usize,
    gens: &[usize],
    conductor_bound: usize,
    relations_mode: bool,
) -> Vec<DioSolution> {
    let max_lcm = gens
        .iter()
        .flat_map(|&a| gens.iter().map(move |&b| a.lcm(&b)))
        .max()
        .unwrap_or(1);
    let vmax = val_left + val_right + conductor_bound + max_lcm + 1;
    let cap = (conductor_bound.max(*gens.last().unwrap_or(&1)) as u32).max(1);
    let mut sols: Vec<(usize, DioSolution)> = Vec::new();
    let lo = val_left.max(val_right);
    for v in lo..=vmax {
        let lefts = all_reprs(v - val_left, gens, cap);
        if lefts.is_empty() {
            continue;
        }
        let rights = all_reprs(v - val_right, gens, cap);
        for a in &lefts {
            for b in &rights {
                if relations_mode {
                    if a == b {
                        continue;
                    }
                    let disjoint =
                        a.iter().zip(b.iter()).all(|(&x, &y)| x == 0 || y == 0);
                    if !disjoint {
                        continue;
                    }
                }
                sols.push((v, DioSolution { alpha: a.clone(), beta: b.clone() }));
            }
        }
    }
    // keep only componentwise-minimal solutions
    let mut keep: Vec<(usize, DioSolution)> = Vec::new();
    'outer: for (v, s) in sols {
        keep.retain(|(_, k)| !k.dominates(&s) || *k == s);
        for (_, k) in &keep {
            if s.dominates(k) {
                continue 'outer;
            }
        }
        keep.push((v, s));
    }
    keep.sort_by(|(va, a), (vb, b)| {
        va.cmp(vb).then(a.alpha.cmp(&b.alpha)).then(a.beta.cmp(&b.beta))
    });
    keep.into_iter().map(|(_, s)| s).collect()
}

// ---------------------------------------------------------------------------
// Semigroup of a branch, with ring representatives
// ---------------------------------------------------------------------------

/// Ring representatives f_0 = x, f_1 = y, ... with valuation(f_i) = v_i.
#[derive(Debug, Clone)]
pub struct RingBasis {
    pub reps: Vec<BiSeries>,
}

/// Value semigroup of a branch, with ring representatives of its minimal
/// generators, by standard elimination: cancel equal-valued products of the
/// representatives and adjoin any nonzero final reduction as a new generator.
pub fn semigroup_of(
    b: &Branch,
    bi_trunc: usize,
) -> Result<(Semigroup, RingBasis), CurveError> {
    let x = BiSeries::var_x(bi_trunc);
    let y = BiSeries::var_y(bi_trunc);
    let v0 = b.mult();
    if v0 == 1 {
        return Ok((Semigroup::from_gens(&[1]), RingBasis { reps: vec![x] }));
    }

    let mut reps = vec![x, y];
    let mut pulls: Vec<TSeries> = reps
        .iter()
        .map(|r| r.pullback(b.x_t(), b.y_t()))
        .collect();
    let mut vals: Vec<usize> = Vec::new();
    for p in &pulls {
        vals.push(p.order().ok_or(CurveError::PrecisionExhausted { window: b.trunc() })?);
    }

    loop {
        let gcd = vals.iter().fold(0usize, |a, &v| a.gcd(&v));
        let bound = sieve_bound(&vals);
        let reach = reachable(&vals, bound);
        let stop = if gcd == 1 {
            (1..bound).rev().find(|&v| !reach[v]).map_or(0, |g| g + 1)
        } else {
            bound - 1
        };
        let window = pulls.iter().map(|p| p.trunc()).min().unwrap();
        if window <= stop + vals.iter().max().copied().unwrap_or(0) {
            return Err(CurveError::PrecisionExhausted { window });
        }

        let mut added = false;
        for rel in minimal_relations(&vals) {
            let (ma, pa) = monomial_of(&reps, &pulls, &rel.alpha);
            let (mb, pb) = monomial_of(&reps, &pulls, &rel.beta);
            let la = pa.lead_coeff().unwrap();
            let lb = pb.lead_coeff().unwrap();
            let mut h = ma.scale(&lb).sub(&mb.scale(&la));
            let mut ph = pa.scale(&lb).sub(&pb.scale(&la));
            // reduce: subtract matching-value monomials while the order
            // stays inside the current semigroup
            loop {
                let ord = match ph.order() {
                    None => break,
                    Some(o) => o,
                };
                if ord > stop {
                    break;
                }
                if ord < reach.len() && reach[ord] {
                    let gamma = gamma_repr(ord, &vals).expect("reachable value");
                    let (mg, pg) = monomial_of(&reps, &pulls, &gamma);
                    let scale = ph.lead_coeff().unwrap() / pg.lead_coeff().unwrap();
                    h = h.sub(&mg.scale(&scale));
                    ph = ph.sub(&pg.scale(&scale));
                } else {
                    // new generator; normalize the leading pullback coefficient
                    let lc = ph.lead_coeff().unwrap();
                    let inv = lc.recip();
                    reps.push(h.scale(&inv));
                    pulls.push(ph.scale(&inv));
                    vals.push(ord);
                    added = true;
                    break;
                }
            }
            if added {
                break;
            }
        }
        if !added && gcd == 1 {
            break;
        }
        if !added && gcd != 1 {
            // primitivity guarantees gcd 1 eventually; the branch was validated
            return Err(CurveError::PrecisionExhausted { window });
        }
    }

    // sort generators by value
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by_key(|&i| vals[i]);
    let reps: Vec<BiSeries> = idx.iter().map(|&i| reps[i].clone()).collect();
    let vals: Vec<usize> = idx.iter().map(|&i| vals[i]).collect();
    let sg = Semigroup::from_gens(&vals);
    // keep only representatives of the minimal generators
    let reps = sg
        .gens()
        .iter()
        .map(|g| reps[vals.iter().position(|v| v == g).unwrap()].clone())
        .collect();
    Ok((sg, RingBasis { reps }))
}

/// Product of representative powers, with its pullback.
pub fn monomial_of(
    reps: &[BiSeries],
    pulls: &[TSeries],
    expo: &[u32],
) -> (BiSeries, TSeries) {
    let trunc = reps[0].trunc();
    let window = pulls[0].trunc();
    let mut m = BiSeries::one(trunc);
    let mut p = TSeries::one(window);
    for (i, &e) in expo.iter().enumerate() {
        for _ in 0..e {
            m = m.mul(&reps[i]);
            p = p.mul(&pulls[i]);
        }
    }
    (m, p)
}
