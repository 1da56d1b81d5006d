//! Pipeline orchestration: evaluate the curve file at a working precision,
//! run the requested stages, and escalate precision (doubling, capped) when
//! a stage reports that the truncation window cannot resolve an order.

use std::collections::BTreeMap;
use std::time::Instant;

use saito_core::curve::{
    refine_branch, semigroup_of, validate_branch, valuation, verify_incidence, Branch, CurveError,
    RingBasis, Semigroup,
};
use saito_core::forms::{degree_spread, FormError, OneForm};
use saito_core::invariants::{milnor, report_from_parts, saito_from_stdbasis, tjurina, InvError};
use saito_core::saito::{verify_pair, SaitoBasis, SaitoError};
use saito_core::series::expr::{parse_expr, var_set, Expr};
use saito_core::series::{BiSeries, SeriesError};
use saito_core::stdbasis::{algorithm1, lambda_gaps, SBError, SBResult};

use crate::error::CliError;
use crate::file::CurveFile;

pub const DEFAULT_PRECISION: usize = 24;
pub const PRECISION_CAP: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Semigroup,
    Stdbasis,
    Saito,
    Invariants,
    Verify,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Semigroup => "semigroup",
            Command::Stdbasis => "stdbasis",
            Command::Saito => "saito",
            Command::Invariants => "invariants",
            Command::Verify => "verify",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub sections: BTreeMap<String, String>,
    /// Stage label and elapsed milliseconds; excluded from the machine format.
    pub timings: Vec<(String, f64)>,
}

impl Report {
    /// Canonical machine format: sorted `key = value` lines, no timings.
    pub fn machine_format(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.sections {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn text_format(&self) -> String {
        let mut out = String::new();
        let mut last_prefix = String::new();
        for (k, v) in &self.sections {
            let prefix = k.split('.').next().unwrap_or("").to_string();
            if prefix != last_prefix {
                if !last_prefix.is_empty() {
                    out.push('\n');
                }
                last_prefix = prefix;
            }
            out.push_str(&format!("{:<28} {}\n", k, v));
        }
        out.push_str("\ntimings:\n");
        for (label, ms) in &self.timings {
            out.push_str(&format!("  {:<26} {:.1} ms\n", label, ms));
        }
        out
    }
}

enum Attempt {
    /// A truncation window was too small; retry at doubled precision.
    Escalate,
    Fatal(CliError),
}

fn classify(e: InvError) -> Attempt {
    fn saito_precision(e: &SaitoError) -> bool {
        match e {
            SaitoError::Series(SeriesError::PrecisionExhausted { .. })
            | SaitoError::Form(FormError::PrecisionExhausted { .. })
            | SaitoError::Curve(CurveError::PrecisionExhausted { .. })
            | SaitoError::MembershipFailed(FormError::PrecisionExhausted { .. }) => true,
            _ => false,
        }
    }
    let precision = match &e {
        InvError::PrecisionExhausted { .. }
        | InvError::Series(SeriesError::PrecisionExhausted { .. })
        | InvError::Form(FormError::PrecisionExhausted { .. })
        | InvError::Curve(CurveError::PrecisionExhausted { .. })
        | InvError::StdBasis(SBError::PrecisionExhausted { .. }) => true,
        InvError::Saito(se) => saito_precision(se),
        _ => false,
    };
    if precision {
        return Attempt::Escalate;
    }
    match e {
        InvError::Curve(CurveError::NotNormalized { reason }) => {
            Attempt::Fatal(CliError::NotNormalized { reason })
        }
        InvError::Curve(CurveError::NotPrimitive { gcd }) => Attempt::Fatal(CliError::NotNormalized {
            reason: format!("parametrization is not primitive (exponent gcd {})", gcd),
        }),
        other => Attempt::Fatal(CliError::Math { msg: other.to_string() }),
    }
}

/// Run `command` on a loaded curve file, escalating precision on demand.
pub fn run_report(
    cf: &CurveFile,
    command: Command,
    precision_override: Option<usize>,
) -> Result<Report, CliError> {
    let mut n = precision_override.or(cf.precision).unwrap_or(DEFAULT_PRECISION);
    loop {
        match attempt(cf, command, n) {
            Ok(report) => return Ok(report),
            Err(Attempt::Fatal(e)) => return Err(e),
            Err(Attempt::Escalate) => {
                if n >= PRECISION_CAP {
                    return Err(CliError::PrecisionCap { cap: PRECISION_CAP });
                }
                n = (n * 2).min(PRECISION_CAP);
            }
        }
    }
}

struct BranchData {
    branch: Branch,
    semigroup: Semigroup,
    ring: RingBasis,
    window: usize,
}

/// Evaluate one `[branch]` pair at a window wide enough for all valuations
/// the pipeline reads (twice the conductor plus one generator step), refining
/// the y-seed onto the curve when the equation is available.
fn build_branch(
    xe: &Expr,
    ye: &Expr,
    idx: usize,
    n: usize,
    f: Option<&BiSeries>,
) -> Result<BranchData, Attempt> {
    let mut window = 2 * n + 4;
    loop {
        let x_t = xe.eval_uni("t", window);
        let y_seed = ye.eval_uni("t", window);
        let y_t = match f {
            Some(fb) => refine_branch(fb, &x_t, &y_seed)
                .ok_or(Attempt::Fatal(CliError::IncidenceFailed { branch: idx + 1 }))?,
            None => y_seed,
        };
        let branch = validate_branch(x_t, y_t).map_err(|e| classify(e.into()))?;
        if let Some(fb) = f {
            if !verify_incidence(fb, &branch) {
                return Err(Attempt::Fatal(CliError::IncidenceFailed { branch: idx + 1 }));
            }
        }
        let (semigroup, ring) = semigroup_of(&branch, n).map_err(|e| classify(e.into()))?;
        let needed =
            2 * semigroup.conductor() + 2 * semigroup.gens().iter().max().copied().unwrap_or(1) + 4;
        if needed > window {
            window = needed;
            continue;
        }
        return Ok(BranchData { branch, semigroup, ring, window });
    }
}

fn render_list(values: &[usize]) -> String {
    if values.is_empty() {
        "-".to_string()
    } else {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn fill_stdbasis(sections: &mut BTreeMap<String, String>, res: &SBResult) {
    sections.insert("stdbasis.count".into(), res.elements.len().to_string());
    for (i, e) in res.elements.iter().enumerate() {
        let p = format!("stdbasis.{}", i + 1);
        sections.insert(format!("{}.dx", p), e.form.a.render());
        sections.insert(format!("{}.dy", p), e.form.b.render());
        sections.insert(format!("{}.value", p), e.value.to_string());
    }
    let gaps = lambda_gaps(res);
    sections.insert("lambda.gaps".into(), render_list(&gaps));
}

fn fill_saito(sections: &mut BTreeMap<String, String>, basis: &SaitoBasis, branch: &Branch) {
    sections.insert("saito.omega1.dx".into(), basis.omega1.a.render());
    sections.insert("saito.omega1.dy".into(), basis.omega1.b.render());
    sections.insert("saito.omega2.dx".into(), basis.omega2.a.render());
    sections.insert("saito.omega2.dy".into(), basis.omega2.b.render());
    sections.insert("saito.u".into(), basis.u.render());
    sections.insert("saito.u0".into(), basis.u.constant_term().to_string());
    sections.insert("saito.h1".into(), basis.h1.render());
    sections.insert("saito.h2".into(), basis.h2.render());
    let val = |h: &BiSeries| {
        valuation(h, branch).map(|v| v.to_string()).unwrap_or_else(|| "-".to_string())
    };
    sections.insert("saito.h1.valuation".into(), val(&basis.h1));
    sections.insert("saito.h2.valuation".into(), val(&basis.h2));
}

fn attempt(cf: &CurveFile, command: Command, n: usize) -> Result<Report, Attempt> {
    let mut sections: BTreeMap<String, String> = BTreeMap::new();
    let mut timings: Vec<(String, f64)> = Vec::new();
    let clock = |label: &str, start: Instant, timings: &mut Vec<(String, f64)>| {
        timings.push((label.to_string(), start.elapsed().as_secs_f64() * 1e3));
    };

    let f = cf.f.as_ref().map(|e| e.eval_bi(n));
    sections.insert("name".into(), cf.name.clone());
    sections.insert("precision".into(), n.to_string());
    sections.insert("branches".into(), cf.branches.len().to_string());

    let want_semigroup = matches!(command, Command::Semigroup | Command::Verify | Command::All);
    let want_stdbasis = matches!(command, Command::Stdbasis | Command::Verify | Command::All);
    let want_saito = matches!(command, Command::Saito | Command::Verify | Command::All);
    let want_invariants =
        matches!(command, Command::Invariants | Command::Verify | Command::All);

    // branch preparation (shared by every branch-consuming stage)
    let needs_branch = want_semigroup || want_stdbasis || want_saito;
    let mut branch_data: Vec<BranchData> = Vec::new();
    if needs_branch || (want_invariants && cf.branches.len() == 1) {
        if cf.branches.is_empty() && matches!(command, Command::Semigroup | Command::Stdbasis | Command::Saito) {
            return Err(Attempt::Fatal(CliError::MissingBranch { command: command.name() }));
        }
        let t0 = Instant::now();
        for (i, (xe, ye)) in cf.branches.iter().enumerate() {
            branch_data.push(build_branch(xe, ye, i, n, f.as_ref())?);
        }
        clock("branches", t0, &mut timings);
    }

    if want_semigroup {
        for (i, bd) in branch_data.iter().enumerate() {
            let p = format!("semigroup.{}", i + 1);
            sections.insert(format!("{}.gens", p), render_list(bd.semigroup.gens()));
            sections.insert(format!("{}.conductor", p), bd.semigroup.conductor().to_string());
            sections.insert(format!("{}.gaps", p), render_list(bd.semigroup.gaps()));
            sections.insert(format!("{}.window", p), bd.window.to_string());
        }
    }

    let single = branch_data.len() == 1;
    let mut res: Option<SBResult> = None;
    if (want_stdbasis || want_saito || (want_invariants && single)) && single {
        let bd = &branch_data[0];
        let t0 = Instant::now();
        res = Some(
            algorithm1(&bd.branch, &bd.semigroup, &bd.ring).map_err(|e| classify(e.into()))?,
        );
        clock("standard basis", t0, &mut timings);
    }
    if matches!(command, Command::Stdbasis) && !single {
        return Err(Attempt::Fatal(CliError::MissingBranch { command: "stdbasis" }));
    }
    if let (true, Some(res)) = (want_stdbasis, res.as_ref()) {
        fill_stdbasis(&mut sections, res);
    }

    let mut basis: Option<SaitoBasis> = None;
    if want_saito || (want_invariants && single) {
        if matches!(command, Command::Saito) && (!single || f.is_none()) {
            return Err(Attempt::Fatal(CliError::MissingBranch { command: "saito" }));
        }
        if let (Some(fb), Some(res), true) = (f.as_ref(), res.as_ref(), single) {
            let bd = &branch_data[0];
            let t0 = Instant::now();
            basis = Some(
                saito_from_stdbasis(fb, &bd.branch, res).map_err(classify)?,
            );
            clock("logarithmic basis", t0, &mut timings);
        }
    }
    if let (true, Some(basis)) = (want_saito, basis.as_ref()) {
        fill_saito(&mut sections, basis, &branch_data[0].branch);
    }

    if want_invariants {
        let fb = f.as_ref().ok_or(Attempt::Fatal(CliError::MissingCurve))?;
        let t0 = Instant::now();
        if let (Some(res), Some(basis), true) = (res.as_ref(), basis.as_ref(), single) {
            let bd = &branch_data[0];
            let rep = report_from_parts(fb, &bd.branch, res, basis).map_err(classify)?;
            sections.insert("invariants.mu".into(), rep.mu.to_string());
            sections.insert("invariants.tau".into(), rep.tau.to_string());
            sections
                .insert("invariants.tau.quotient".into(), rep.tau_routes.quotient_dim.to_string());
            sections
                .insert("invariants.tau.cofactors".into(), rep.tau_routes.mu_minus_i.to_string());
            sections.insert("invariants.tau.berger".into(), rep.tau_routes.berger.to_string());
            sections.insert("invariants.routes.agree".into(), rep.tau_routes.agree.to_string());
            let gaps: Vec<usize> = rep.lambda_gaps.iter().copied().collect();
            sections.insert("invariants.lambda.gaps".into(), render_list(&gaps));
            sections.insert("invariants.gsv1".into(), rep.gsv.0.to_string());
            sections.insert("invariants.gsv2".into(), rep.gsv.1.to_string());
            sections.insert("invariants.min_delta".into(), rep.min_delta.to_string());
        } else {
            // reducible or unparametrized input: the quotient-dimension routes
            let mu = milnor(fb, None).map_err(classify)?;
            let tau = tjurina(fb).map_err(classify)?;
            sections.insert("invariants.mu".into(), mu.to_string());
            sections.insert("invariants.tau".into(), tau.to_string());
        }
        clock("invariants", t0, &mut timings);
    }

    if matches!(command, Command::Verify) {
        let t0 = Instant::now();
        let failures = verification_failures(cf, &sections, f.as_ref(), n);
        clock("verification", t0, &mut timings);
        if !failures.is_empty() {
            return Err(Attempt::Fatal(CliError::Mismatch { failures }));
        }
        sections.insert("verified".into(), "true".to_string());
    }

    Ok(Report { sections, timings })
}

/// Cross-checks for `verify`: internal route agreement, a round trip of the
/// printed basis through the parser and the wedge criterion, and any
/// `expected.*` values from the curve file.
fn verification_failures(
    cf: &CurveFile,
    sections: &BTreeMap<String, String>,
    f: Option<&BiSeries>,
    n: usize,
) -> Vec<String> {
    let mut failures = Vec::new();

    if let Some(agree) = sections.get("invariants.routes.agree") {
        if agree != "true" {
            failures.push("tau routes disagree".to_string());
        }
    }

    // round trip: the printed basis re-parses and re-verifies the criterion
    if let (Some(fb), Some(_)) = (f, sections.get("saito.u")) {
        let xy = var_set(&["x", "y"]);
        let get = |key: &str| -> Result<BiSeries, String> {
            let text = sections.get(key).ok_or_else(|| format!("missing {}", key))?;
            parse_expr(text, &xy)
                .map(|e| e.eval_bi(n))
                .map_err(|e| format!("printed {} does not re-parse: {}", key, e))
        };
        let parts: Result<Vec<BiSeries>, String> =
            ["saito.omega1.dx", "saito.omega1.dy", "saito.omega2.dx", "saito.omega2.dy"]
                .iter()
                .map(|k| get(k))
                .collect();
        match parts {
            Ok(p) => {
                let w1 = OneForm { a: p[0].clone(), b: p[1].clone() };
                let w2 = OneForm { a: p[2].clone(), b: p[3].clone() };
                match verify_pair(&w1, &w2, fb) {
                    Ok(re) => {
                        // the stored unit comes from a quotient reliable below
                        // trunc - (spread + 2); dividing the re-computed wedge
                        // by f costs the same window again
                        let boundary = n.saturating_sub(2 * (degree_spread(fb) + 2)).max(1);
                        let stored = sections
                            .get("saito.u")
                            .and_then(|s| parse_expr(s, &xy).ok())
                            .map(|e| e.eval_bi(n));
                        let ok = stored.map_or(false, |s| {
                            re.u.sub(&s).truncated(boundary).is_zero_to_precision()
                        });
                        if !ok {
                            failures.push("round trip: re-verified unit differs".to_string());
                        }
                    }
                    Err(e) => failures
                        .push(format!("round trip: re-parsed basis fails the criterion: {}", e)),
                }
            }
            Err(msg) => failures.push(msg),
        }
    }

    for (key, expected) in &cf.expected {
        match sections.get(key) {
            None => failures.push(format!("expected.{}: report has no such key", key)),
            Some(actual) if actual != expected => {
                failures.push(format!("expected.{} = {}, got {}", key, expected, actual));
            }
            Some(_) => {}
        }
    }
    failures
}
