//! Randomized property suites (seeded, deterministic): 1000 cases each.
//!
//! Covered properties: series ring axioms and division reconstruction;
//! reduction-log replay; criterion invariance under invertible scalar
//! matrices; basis-coordinate reconstruction; residue cross-checks; and the
//! lower bound on the minimal residue valuation.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saito_core::curve::{refine_branch, semigroup_of, validate_branch, Branch, RingBasis};
use saito_core::forms::{
    degree_spread, divide_by_curve, exterior_d, pair_cofactor, residue_valuation, wedge, OneForm,
};
use saito_core::invariants::gsv_indices;
use saito_core::saito::{
    candidate_forms, closed_form_basis, express_in_basis, syzygy_rows, Candidate, ClosedForm,
};
use saito_core::series::{rat, rat_int, BiSeries, TSeries};
use saito_core::stdbasis::{algorithm1, reduce_modulo, Outcome, SBContext, SBResult};

fn bmono(c: i64, i: u32, j: u32, n: usize) -> BiSeries {
    BiSeries::monomial(rat_int(c), i, j, n)
}

/// Random polynomial with `terms` terms, exponents of total degree < `deg`,
/// coefficients in [-4, 4].
fn random_poly(rng: &mut ChaCha8Rng, terms: usize, deg: u32, trunc: usize) -> BiSeries {
    let mut p = BiSeries::zero(trunc);
    for _ in 0..terms {
        let i = rng.gen_range(0..deg);
        let j = rng.gen_range(0..deg.saturating_sub(i).max(1));
        let c = rng.gen_range(-4i64..=4);
        if c != 0 {
            p = p.add(&bmono(c, i, j, trunc));
        }
    }
    p
}

pub fn series_ring_axioms_and_division_reconstruction(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let trunc = 10;
    for _ in 0..cases {
        let p = random_poly(&mut rng, 4, 6, trunc);
        let q = random_poly(&mut rng, 4, 6, trunc);
        let r = random_poly(&mut rng, 4, 6, trunc);
        // commutativity, associativity, distributivity, identity
        assert!(p.mul(&q).sub(&q.mul(&p)).is_zero_to_precision());
        assert!(p.mul(&q).mul(&r).sub(&p.mul(&q.mul(&r))).is_zero_to_precision());
        assert!(p
            .add(&q)
            .mul(&r)
            .sub(&p.mul(&r).add(&q.mul(&r)))
            .is_zero_to_precision());
        assert!(p.mul(&BiSeries::one(trunc)).sub(&p).is_zero_to_precision());
        // division by a y-general divisor reconstructs the dividend
        let n = rng.gen_range(1..4u32);
        let mut f = bmono(1, 0, n, trunc);
        for j in 0..n {
            let c = rng.gen_range(-3i64..=3);
            let e = rng.gen_range(1..3u32);
            if c != 0 {
                f = f.add(&bmono(c, e, j, trunc));
            }
        }
        let w = random_poly(&mut rng, 5, 7, trunc);
        let (quot, rem) = divide_by_curve(&w, &f).unwrap();
        // remainder has y-degree < n
        for (&(_, j), c) in rem.terms() {
            if !num_traits::Zero::is_zero(c) {
                assert!(j < n);
            }
        }
        let margin = degree_spread(&f) + 2;
        let diff = w.sub(&quot.mul(&f)).sub(&rem);
        assert!(diff.order().map_or(true, |o| o + margin >= trunc));
    }
}

/// f = y^3 - x^10 + x^8 y with its branch, plus the standard-basis result.
fn family_fixture() -> &'static (BiSeries, Branch, SBResult) {
    static FIX: OnceLock<(BiSeries, Branch, SBResult)> = OnceLock::new();
    FIX.get_or_init(|| {
        let (trunc, window) = (24usize, 60usize);
        let f = bmono(1, 0, 3, trunc)
            .sub(&bmono(1, 10, 0, trunc))
            .add(&bmono(1, 8, 1, trunc));
        let x_t = TSeries::monomial(rat_int(1), 3, window);
        let seed = TSeries::monomial(rat_int(1), 10, window)
            .add(&TSeries::monomial(rat(-1, 3), 14, window));
        let y_t = refine_branch(&f, &x_t, &seed).unwrap();
        let b = validate_branch(x_t, y_t).unwrap();
        let (sg, ring) = semigroup_of(&b, trunc).unwrap();
        let res = algorithm1(&b, &sg, &ring).unwrap();
        (f, b, res)
    })
}

fn monomial_in_reps(reps: &[BiSeries], expo: &[u32]) -> BiSeries {
    let trunc = reps[0].trunc();
    let mut m = BiSeries::one(trunc);
    for (i, &e) in expo.iter().enumerate() {
        for _ in 0..e {
            m = m.mul(&reps[i]);
        }
    }
    m
}

pub fn reduction_logs_replay_exactly(cases: usize) {
    let (f, b, res) = family_fixture();
    let ring: &RingBasis = &res.ring;
    let ctx = SBContext::new(b, &res.semigroup, ring);
    let pulls: Vec<TSeries> = res
        .elements
        .iter()
        .map(|e| e.form.pull(b))
        .collect();
    let stop = res.semigroup.conductor() + res.elements.iter().map(|e| e.value).max().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..cases {
        let form = OneForm {
            a: random_poly(&mut rng, 3, 5, f.trunc()),
            b: random_poly(&mut rng, 3, 5, f.trunc()),
        };
        let (log, remainder) = reduce_modulo(&form, &res.elements, &pulls, &ctx, stop, true).unwrap();
        // replay: subtracting the logged multiples reproduces the remainder
        let mut r = form.clone();
        for step in &log.steps {
            let m = monomial_in_reps(&ring.reps, &step.monomial).scale(&step.scalar);
            r = r.sub(&res.elements[step.element].form.mul_fn(&m));
        }
        assert!(r.sub(&remainder).is_zero());
        // the outcome is consistent with the pullback of the remainder
        let pull = remainder.pull(b);
        match log.outcome {
            Outcome::Zero => assert!(pull.order().is_none()),
            Outcome::Nonzero { value } => assert_eq!(pull.order(), Some(value)),
        }
    }
}

pub fn criterion_invariant_under_scalar_basis_changes(cases: usize) {
    let trunc = 12;
    let f = bmono(1, 0, 2, trunc).sub(&bmono(1, 3, 0, trunc));
    let basis =
        closed_form_basis(ClosedForm::QuasiHomogeneous { wx: 2, wy: 3, f: f.clone() }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut done = 0usize;
    while done < cases {
        let m: [i64; 4] = [
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
        ];
        let det = m[0] * m[3] - m[1] * m[2];
        if det == 0 {
            continue;
        }
        done += 1;
        let eta1 = basis
            .omega1
            .scale(&rat_int(m[0]))
            .add(&basis.omega2.scale(&rat_int(m[1])));
        let eta2 = basis
            .omega1
            .scale(&rat_int(m[2]))
            .add(&basis.omega2.scale(&rat_int(m[3])));
        let u = pair_cofactor(&wedge(&eta1, &eta2), &f).unwrap();
        let expected = basis.u.scale(&rat_int(det));
        assert!(u.sub(&expected.truncated(u.trunc())).is_zero_to_precision());
        assert!(u.is_unit());
    }
}

pub fn basis_coordinates_reconstruct_members(cases: usize) {
    let trunc = 12;
    let f = bmono(1, 0, 2, trunc).sub(&bmono(1, 3, 0, trunc));
    let basis =
        closed_form_basis(ClosedForm::QuasiHomogeneous { wx: 2, wy: 3, f: f.clone() }).unwrap();
    let margin = degree_spread(&f) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..cases {
        let g1 = random_poly(&mut rng, 3, 4, trunc);
        let g2 = random_poly(&mut rng, 3, 4, trunc);
        let omega = basis.omega1.mul_fn(&g1).add(&basis.omega2.mul_fn(&g2));
        if omega.is_zero() {
            continue;
        }
        let (q1, q2) = express_in_basis(&omega, &basis).unwrap();
        let lim = q1.trunc().min(q2.trunc());
        for (found, built) in [(&q1, &g1), (&q2, &g2)] {
            let diff = found.sub(&built.truncated(found.trunc()));
            assert!(diff.order().map_or(true, |o| o + margin >= lim));
        }
    }
}

pub fn candidates_reconstruct_in_selected_basis(cases: usize) {
    let (f, b, res) = family_fixture();
    let rows = syzygy_rows(res);
    let g = candidate_forms(&rows, res, f, b).unwrap();
    let basis = saito_core::saito::select_saito_pair(&g, f).unwrap();
    let margin = degree_spread(f) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..cases {
        // a random scalar combination of two candidates is still a member
        let i = rng.gen_range(0..g.forms.len());
        let j = rng.gen_range(0..g.forms.len());
        let (ci, cj): (&Candidate, &Candidate) = (&g.forms[i], &g.forms[j]);
        let (s, t) = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
        let omega = ci.form.scale(&rat_int(s)).add(&cj.form.scale(&rat_int(t)));
        if omega.is_zero() {
            continue;
        }
        let (q1, q2) = express_in_basis(&omega, &basis).unwrap();
        let back = basis.omega1.mul_fn(&q1).add(&basis.omega2.mul_fn(&q2));
        let diff = omega.sub(&back);
        let lim = q1.trunc().min(q2.trunc());
        for s in [&diff.a, &diff.b] {
            assert!(s.order().map_or(true, |o| o + margin >= lim));
        }
    }
}

pub fn residue_valuations_cross_check(cases: usize) {
    let trunc = 12;
    let f = bmono(1, 0, 2, trunc).sub(&bmono(1, 3, 0, trunc));
    let b = validate_branch(
        TSeries::monomial(rat_int(1), 2, 64),
        TSeries::monomial(rat_int(1), 3, 64),
    )
    .unwrap();
    let df = exterior_d(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for _ in 0..cases {
        // p df + f eta is always a member of the logarithmic module
        let p = random_poly(&mut rng, 3, 4, trunc);
        let eta = OneForm {
            a: random_poly(&mut rng, 2, 4, trunc),
            b: random_poly(&mut rng, 2, 4, trunc),
        };
        let omega = df.mul_fn(&p).add(&eta.mul_fn(&f));
        if omega.is_zero() {
            continue;
        }
        // the two routes nu(A) - nu(f_x) and nu(B) - nu(f_y) must agree
        match residue_valuation(&omega, &f, &b) {
            Ok(_) => {}
            Err(saito_core::forms::FormError::MembershipFailed) => {} // both vanish
            Err(e) => panic!("cross-check failed: {e}"),
        }
    }
}

pub fn minimal_residue_valuation_is_bounded(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for _ in 0..cases {
        // random irreducible quasi-homogeneous curves y^n - x^m, gcd = 1
        let (n, m) = if rng.gen_bool(0.5) {
            (2u32, 2 * rng.gen_range(1..6u32) + 1)
        } else {
            let m = [4u32, 5, 7, 8, 10, 11][rng.gen_range(0..6)];
            (3u32, m)
        };
        let trunc = (m as usize + 4).max(12);
        let f = bmono(1, 0, n, trunc).sub(&bmono(1, m, 0, trunc));
        let window = (n * m) as usize * 2 + 8;
        let b = validate_branch(
            TSeries::monomial(rat_int(1), n as usize, window),
            TSeries::monomial(rat_int(1), m as usize, window),
        )
        .unwrap();
        let basis =
            closed_form_basis(ClosedForm::QuasiHomogeneous { wx: n, wy: m, f: f.clone() }).unwrap();
        let (g1, g2) = gsv_indices(&basis, &f, &b).unwrap();
        // min over the residue value set is at most -(multiplicity) + 1
        let bound = -(n.min(m) as i64) + 1;
        assert!(g1.min(g2) <= bound, "n={n} m={m}: {} > {}", g1.min(g2), bound);
    }
}
