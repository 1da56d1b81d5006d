//! Standard basis of the module of 1-forms modulo the logarithmic forms
//! along an irreducible curve: value-cancelling S-processes, logged
//! reductions, the fixed-point loop, and the resulting value-gap set.

use thiserror::Error;

use crate::curve::{gamma_repr, min_dio_solutions, monomial_of, Branch, RingBasis, Semigroup};
use crate::forms::{exterior_d, OneForm};
use crate::series::{BiSeries, Rat, TSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SBError {
    #[error("precision exhausted: pullback window {window} cannot resolve values up to {needed}")]
    PrecisionExhausted { window: usize, needed: usize },
    #[error("fixed-point loop exceeded the iteration cap {cap}")]
    NonTermination { cap: usize },
    #[error("reduction step failed to increase the value at {value}")]
    NoAscent { value: usize },
}

/// How a standard-basis element came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// `d f_i` for the i-th ring representative.
    Initial(usize),
    /// Final reduction of the l-th minimal S-process of elements (j, k).
    SProcess { j: usize, k: usize, l: usize },
}

/// One element of the standard basis, with its class value.
#[derive(Debug, Clone)]
pub struct SBElement {
    pub form: OneForm,
    pub value: usize,
    pub origin: Origin,
}

/// One reduction step: subtract `scalar * (prod f_i^monomial) * element`.
#[derive(Debug, Clone)]
pub struct RedStep {
    pub scalar: Rat,
    pub monomial: Vec<u32>,
    pub element: usize,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Zero,
    Nonzero { value: usize },
}

#[derive(Debug, Clone)]
pub struct ReductionLog {
    pub steps: Vec<RedStep>,
    pub outcome: Outcome,
}

/// Polynomial in the ring representatives f_0..f_g: sum of scalar * f^expo.
pub type FPoly = Vec<(Vec<u32>, Rat)>;

/// A minimal S-process of a pair of elements, before reduction.
#[derive(Debug, Clone)]
pub struct SProcess {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub a: Rat,
    pub b: Rat,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub form: OneForm,
    pub matched_value: usize,
}

/// An S-process together with its logged reduction modulo the basis and the
/// exact 1-form left over once the class has been reduced to zero.
#[derive(Debug, Clone)]
pub struct SProcessRecord {
    pub process: SProcess,
    pub log: ReductionLog,
    pub remainder: OneForm,
}

impl SProcessRecord {
    /// Quotients of the reduction relation, element index -> polynomial in
    /// the ring representatives.
    pub fn quotients(&self, n_elems: usize) -> Vec<FPoly> {
        let mut q = vec![FPoly::new(); n_elems];
        for step in &self.log.steps {
            q[step.element].push((step.monomial.clone(), step.scalar.clone()));
        }
        q
    }
}

#[derive(Debug, Clone)]
pub struct SBResult {
    pub elements: Vec<SBElement>,
    pub records: Vec<SProcessRecord>,
    pub semigroup: Semigroup,
    pub ring: RingBasis,
}

/// Shared data for the standard-basis run.
pub struct SBContext<'a> {
    pub branch: &'a Branch,
    pub sg: &'a Semigroup,
    pub ring: &'a RingBasis,
    pub ring_pulls: Vec<TSeries>,
}

impl<'a> SBContext<'a> {
    pub fn new(branch: &'a Branch, sg: &'a Semigroup, ring: &'a RingBasis) -> SBContext<'a> {
        let ring_pulls = ring
            .reps
            .iter()
            .map(|r| r.pullback(branch.x_t(), branch.y_t()))
            .collect();
        SBContext { branch, sg, ring, ring_pulls }
    }

    fn monomial(&self, expo: &[u32]) -> (BiSeries, TSeries) {
        monomial_of(&self.ring.reps, &self.ring_pulls, expo)
    }

    fn window(&self) -> usize {
        self.ring_pulls.iter().map(|p| p.trunc()).min().unwrap()
    }
}

/// All minimal S-processes of the pair (j, k): for each minimal solution of
/// `sum alpha v + value_j = sum beta v + value_k`, scale so the leading
/// pullback terms cancel; scalars follow the convention that makes
/// `(dx, dy)` on `y^n - x^m + ...` produce `n x dy - m y dx`.
pub fn s_processes(j: usize, k: usize, elems: &[SBElement], ctx: &SBContext) -> Vec<SProcess> {
    let (vj, vk) = (elems[j].value, elems[k].value);
    let mut out = Vec::new();
    for (l, sol) in min_dio_solutions(vj, vk, ctx.sg).iter().enumerate() {
        let (ma, pa) = ctx.monomial(&sol.alpha);
        let (mb, pb) = ctx.monomial(&sol.beta);
        let pj = elems[j].form.pull(ctx.branch).mul(&pa);
        let pk = elems[k].form.pull(ctx.branch).mul(&pb);
        let (lj, lk) = match (pj.lead_coeff(), pk.lead_coeff()) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        // s = a * f^alpha * eta_j + b * f^beta * eta_k with a*lj + b*lk = 0
        let a = -lk;
        let b = lj;
        let form = elems[j].form.mul_fn(&ma.scale(&a)).add(&elems[k].form.mul_fn(&mb.scale(&b)));
        out.push(SProcess {
            j,
            k,
            l,
            a,
            b,
            alpha: sol.alpha.clone(),
            beta: sol.beta.clone(),
            form,
            matched_value: vj + sol.alpha.iter().zip(ctx.sg.gens()).map(|(&e, &v)| e as usize * v).sum::<usize>(),
        });
    }
    out
}

/// Reduce a class modulo the current elements. Each step subtracts a scaled
/// ring monomial times an element matching the current value and must
/// strictly increase it; the reducer is the least element index, then the
/// lexicographically least monomial.
///
/// Outcome `Nonzero` when the current value is matched by no
/// (monomial, element) combination; outcome `Zero` when the pullback dies to
/// precision. With `full_log` false the chain may stop early (with a partial
/// log) once the value passes `stop_bound`, past which every value is
/// reachable and the chain converges to zero.
pub fn reduce_modulo(
    form: &OneForm,
    elems: &[SBElement],
    elem_pulls: &[TSeries],
    ctx: &SBContext,
    stop_bound: usize,
    full_log: bool,
) -> Result<(ReductionLog, OneForm), SBError> {
    let mut r = form.clone();
    let mut pr = r.pull(ctx.branch);
    let mut steps = Vec::new();
    loop {
        let v = match pr.order() {
            None => return Ok((ReductionLog { steps, outcome: Outcome::Zero }, r)),
            Some(v) => v,
        };
        if !full_log && v > stop_bound {
            return Ok((ReductionLog { steps, outcome: Outcome::Zero }, r));
        }
        let mut reducer = None;
        for (e, elem) in elems.iter().enumerate() {
            if v >= elem.value && ctx.sg.contains(v - elem.value) {
                let gamma = gamma_repr(v - elem.value, ctx.sg.gens()).expect("contained value");
                reducer = Some((e, gamma));
                break;
            }
        }
        let (e, gamma) = match reducer {
            None => {
                return Ok((ReductionLog { steps, outcome: Outcome::Nonzero { value: v } }, r));
            }
            Some(x) => x,
        };
        let (mg, pg) = ctx.monomial(&gamma);
        let pe = pg.mul(&elem_pulls[e]);
        let scalar = pr.lead_coeff().unwrap() / pe.lead_coeff().unwrap();
        r = r.sub(&elems[e].form.mul_fn(&mg.scale(&scalar)));
        pr = pr.sub(&pe.scale(&scalar));
        match pr.order() {
            Some(nv) if nv <= v => return Err(SBError::NoAscent { value: v }),
            _ => {}
        }
        steps.push(RedStep { scalar, monomial: gamma, element: e });
    }
}

/// The fixed-point loop: start from the differentials of the ring
/// representatives, adjoin every nonzero final reduction of a minimal
/// S-process, and stop when all pairs reduce to zero. A final logging sweep
/// over all pairs records the full reduction relations for the syzygy step.
pub fn algorithm1(
    branch: &Branch,
    sg: &Semigroup,
    ring: &RingBasis,
) -> Result<SBResult, SBError> {
    let ctx = SBContext::new(branch, sg, ring);
    let mut elems: Vec<SBElement> = Vec::new();
    let mut pulls: Vec<TSeries> = Vec::new();
    for (i, rep) in ring.reps.iter().enumerate() {
        let form = exterior_d(rep);
        let p = form.pull(branch);
        let value = p.order().ok_or(SBError::PrecisionExhausted {
            window: ctx.window(),
            needed: sg.conductor(),
        })?;
        elems.push(SBElement { form, value, origin: Origin::Initial(i) });
        pulls.push(p);
    }

    let stop_bound = |elems: &[SBElement]| {
        sg.conductor() + elems.iter().map(|e| e.value).max().unwrap_or(0)
    };
    let margin = sg.gens().last().copied().unwrap_or(1);
    let guard = |elems: &[SBElement]| -> Result<(), SBError> {
        let needed = stop_bound(elems) + margin;
        if ctx.window() <= needed {
            return Err(SBError::PrecisionExhausted { window: ctx.window(), needed });
        }
        Ok(())
    };
    guard(&elems)?;

    // discovery: process each pair once; adjoining an element enqueues its
    // pairs against everything already present
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for k in 0..elems.len() {
        for j in 0..k {
            queue.push((j, k));
        }
    }
    let cap = sg.conductor().max(4);
    let mut qi = 0;
    while qi < queue.len() {
        let (j, k) = queue[qi];
        qi += 1;
        for sp in s_processes(j, k, &elems, &ctx) {
            let (log, rem) =
                reduce_modulo(&sp.form, &elems, &pulls, &ctx, stop_bound(&elems), false)?;
            if let Outcome::Nonzero { value } = log.outcome {
                let new = elems.len();
                if new > cap {
                    return Err(SBError::NonTermination { cap });
                }
                elems.push(SBElement {
                    form: rem,
                    value,
                    origin: Origin::SProcess { j, k, l: sp.l },
                });
                pulls.push(elems[new].form.pull(branch));
                guard(&elems)?;
                for j2 in 0..new {
                    queue.push((j2, new));
                }
            }
        }
    }

    // logging sweep at the fixed point: every S-process of every pair must
    // now reduce to zero, with the full relation recorded
    let mut records = Vec::new();
    for k in 0..elems.len() {
        for j in 0..k {
            for sp in s_processes(j, k, &elems, &ctx) {
                let (log, rem) =
                    reduce_modulo(&sp.form, &elems, &pulls, &ctx, stop_bound(&elems), true)?;
                if let Outcome::Nonzero { value } = log.outcome {
                    // not a fixed point after all — should be unreachable
                    return Err(SBError::NoAscent { value });
                }
                records.push(SProcessRecord { process: sp, log, remainder: rem });
            }
        }
    }

    Ok(SBResult { elements: elems, records, semigroup: sg.clone(), ring: ring.clone() })
}

/// The value-set gaps contributed by the standard basis: semigroup gaps of
/// the form (element value) + (semigroup member).
pub fn lambda_gaps(res: &SBResult) -> Vec<usize> {
    let mut out = Vec::new();
    for &gap in res.semigroup.gaps() {
        let hit = res
            .elements
            .iter()
            .any(|e| gap >= e.value && res.semigroup.contains(gap - e.value));
        if hit {
            out.push(gap);
        }
    }
    out
}
