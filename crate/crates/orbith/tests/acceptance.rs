//! Exhaustive desk-scale verification gate. Every check is exact rational or
//! integer arithmetic; there are no tolerances anywhere. Each test prints a
//! single pass/fail line.

use orbith::calculus::Calculus;
use orbith::chevalley::{build_constants, rescaled_killing_pairing};
use orbith::driver::{
    for_each_structure, gk_run, sweep_type, DEFAULT_SWEEP, GK_TYPES, ORACLE_SWEEP,
};
use orbith::exact::{qi, CVal, SignSqrt};
use orbith::linalg::nullspace;
use orbith::orbit::{
    canonical_kahler_metric, enumerate_complex_structures, enumerate_complex_structures_bruteforce,
    is_kaehler, make_orbit, HermitianStructure, InvariantMetric,
};
use orbith::rootsys::{build_root_system, Root, RootSystemSpec};
use orbith::verify::{
    induction_replay, perturb_positive_in_nullspace, random_positive_metric, replay_rows, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

struct Gate {
    name: &'static str,
    passed: bool,
}

impl Gate {
    fn new(name: &'static str) -> Self {
        Gate {
            name,
            passed: false,
        }
    }
    fn pass(mut self, detail: String) {
        self.passed = true;
        println!("[PASS] {} ({detail})", self.name);
    }
}

impl Drop for Gate {
    fn drop(&mut self) {
        if !self.passed {
            println!("[FAIL] {}", self.name);
        }
    }
}

fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        h ^= p.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6).wrapping_add(h >> 2);
        h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    }
    h
}

#[test]
fn theorem_rank_sweep_confirms_every_structure() {
    let gate = Gate::new("rank sweep: twisted null space inside additivity null space, all types/orbits/structures");
    let mut confirmed = 0usize;
    let mut trivial = 0usize;
    for name in DEFAULT_SWEEP {
        for report in sweep_type(name, false).unwrap() {
            assert!(
                report.witness.satisfies_ddj && report.witness.satisfies_kahler,
                "witness failure: {report:?}"
            );
            match report.verdict {
                Verdict::Confirmed => {
                    assert_eq!(report.rank_ddj, report.rank_joint, "{report:?}");
                    confirmed += 1;
                }
                Verdict::Trivial => trivial += 1,
                Verdict::Refuted => panic!("refuted structure: {report:?}"),
            }
        }
    }
    gate.pass(format!("{confirmed} confirmed, {trivial} trivial"));
}

#[test]
fn closed_forms_match_exterior_derivative_oracle() {
    let gate = Gate::new(
        "oracle equivalence: closed-form d(omega) and twisted second derivative vs generic formula",
    );
    let mut triples = 0usize;
    let mut quadruples = 0usize;
    for name in ORACLE_SWEEP {
        for_each_structure(name, |ctx| {
            let orbit = ctx.calc.orbit;
            let seed = mix_seed(&[
                name.len() as u64,
                name.bytes().map(u64::from).sum(),
                ctx.orbit_mask as u64,
                ctx.sigma_index as u64,
            ]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let metric = random_positive_metric(orbit, &mut rng);
            let h = HermitianStructure {
                j: ctx.j.clone(),
                metric,
            };
            let omega = ctx.calc.two_form_to_generic(&ctx.calc.kaehler_form(&h));
            let comp = &orbit.complementary;
            for (x, &a) in comp.iter().enumerate() {
                for (y, &b) in comp.iter().enumerate().skip(x + 1) {
                    for &c in comp.iter().skip(y + 1) {
                        let closed = ctx.calc.d_omega(&h, a, b, c);
                        let oracle = ctx.calc.d_value(&omega, &[a, b, c]);
                        assert_eq!(closed, oracle, "{name} triple mismatch");
                        triples += 1;
                        if !closed.is_zero() {
                            // antisymmetry on both routes
                            for perm in [[a, c, b], [b, a, c], [c, b, a]] {
                                assert_eq!(
                                    ctx.calc.d_omega(&h, perm[0], perm[1], perm[2]),
                                    ctx.calc.d_value(&omega, &perm),
                                );
                            }
                        }
                    }
                }
            }
            let dj = ctx.calc.dj_omega(&h);
            let sys = ctx.calc.system;
            for &a in &ctx.j.sigma {
                for &b in &ctx.j.sigma {
                    let closed = ctx.calc.ddj_value(&h, a, b).to_q();
                    let oracle =
                        ctx.calc
                            .d_value(&dj, &[a, b, sys.neg_index(a), sys.neg_index(b)]);
                    assert_eq!(
                        oracle,
                        CVal::from_q(closed * qi(2)),
                        "{name} quadruple mismatch"
                    );
                    quadruples += 1;
                }
            }
        })
        .unwrap();
    }

    // negative control: one flipped sign in the Weyl table breaks agreement
    let sys = build_root_system(&RootSystemSpec::parse("A2").unwrap());
    let (sc, _) = build_constants(&sys);
    let i1 = sys.index_of(&Root { coeffs: vec![1, 0] }).unwrap();
    let i2 = sys.index_of(&Root { coeffs: vec![0, 1] }).unwrap();
    let flipped = sc.with_weyl_sign_flipped(i1, i2);
    let orbit = make_orbit(&sys, &BTreeSet::new());
    let calc = Calculus::new(&sys, &flipped, &orbit);
    let j = enumerate_complex_structures(&orbit)
        .unwrap()
        .into_iter()
        .find(|j| j.sigma.iter().all(|&i| sys.root(i).is_positive()))
        .unwrap();
    let metric = InvariantMetric::from_pairs(&orbit, &[qi(1), qi(1), qi(1)]);
    let h = HermitianStructure { j, metric };
    let omega = calc.two_form_to_generic(&calc.kaehler_form(&h));
    let comp = &orbit.complementary;
    let mut mismatch = false;
    'outer: for (x, &a) in comp.iter().enumerate() {
        for (y, &b) in comp.iter().enumerate().skip(x + 1) {
            for &c in comp.iter().skip(y + 1) {
                if calc.d_omega(&h, a, b, c) != calc.d_value(&omega, &[a, b, c]) {
                    mismatch = true;
                    break 'outer;
                }
            }
        }
    }
    assert!(mismatch, "sign flip must break oracle agreement");

    gate.pass(format!(
        "{triples} triples, {quadruples} quadruples, negative control detected"
    ));
}

#[test]
fn structure_constant_identities_hold_exactly() {
    let gate = Gate::new(
        "structure constants: Jacobi, negation antisymmetry, cyclic identity, rescaled pairing",
    );
    let mut types = 0usize;
    for name in DEFAULT_SWEEP {
        let sys = build_root_system(&RootSystemSpec::parse(name).unwrap());
        let (sc, kt) = build_constants(&sys);
        assert!(sc.jacobi_holds(), "{name}: Jacobi identity");
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                let Some(s) = sys.sum_index(i, j) else {
                    continue;
                };
                let (ni, nj) = (sys.neg_index(i), sys.neg_index(j));
                assert_eq!(sc.n(ni, nj), -sc.n(i, j), "{name}: integer table");
                assert_eq!(sc.weyl_n(ni, nj), -&sc.weyl_n(i, j), "{name}: Weyl table");
                // cyclic identity over the zero-sum triple (i, j, -s)
                let ns = sys.neg_index(s);
                assert_eq!(sc.weyl_n(i, j), sc.weyl_n(j, ns), "{name}: cyclic");
                assert_eq!(sc.weyl_n(j, ns), sc.weyl_n(ns, i), "{name}: cyclic");
            }
        }
        for i in 0..sys.len() {
            assert_eq!(
                rescaled_killing_pairing(&sc, &kt, i),
                SignSqrt::one(),
                "{name}: rescaled pairing"
            );
        }
        types += 1;
    }
    gate.pass(format!("{types} types checked"));
}

#[test]
fn kahler_condition_equivalent_to_oracle_domega_zero() {
    let gate = Gate::new("metric additivity iff the oracle derivative of omega vanishes");
    let mut checked = 0usize;
    let mut kahler_cases = 0usize;
    for name in ORACLE_SWEEP {
        for_each_structure(name, |ctx| {
            let orbit = ctx.calc.orbit;
            let seed = mix_seed(&[
                0xDA7A,
                name.bytes().map(u64::from).sum(),
                ctx.orbit_mask as u64,
                ctx.sigma_index as u64,
            ]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let witness = canonical_kahler_metric(ctx.j);
            let kah = ctx.calc.kahler_system(ctx.j);
            let ns = nullspace(&kah.rows, kah.vars.len());
            for trial in 0..100 {
                let metric = if trial % 2 == 0 {
                    random_positive_metric(orbit, &mut rng)
                } else {
                    // a positive point of the additivity null space
                    let base = witness.pair_values(orbit);
                    let vec = perturb_positive_in_nullspace(&base, &ns, &mut rng);
                    InvariantMetric::from_pairs(orbit, &vec)
                };
                let h = HermitianStructure {
                    j: ctx.j.clone(),
                    metric,
                };
                let omega = ctx.calc.two_form_to_generic(&ctx.calc.kaehler_form(&h));
                let doracle = ctx.calc.exterior_derivative(&omega).unwrap();
                let additive = is_kaehler(&h);
                assert_eq!(
                    additive,
                    doracle.is_zero(),
                    "{name} equivalence failed"
                );
                // additivity is also exactly the annihilation of the system rows
                assert_eq!(additive, kah.annihilates(&ctx.calc.metric_vector(&h)));
                checked += 1;
                if additive {
                    kahler_cases += 1;
                }
            }
        })
        .unwrap();
    }
    gate.pass(format!(
        "{checked} seeded metrics, {kahler_cases} additive among them"
    ));
}

#[test]
fn induction_replay_derives_every_additivity_equality() {
    let gate = Gate::new("height induction: every confirmed structure replays to the full additivity system");
    let mut replayed = 0usize;
    let mut steps_total = 0usize;
    for name in DEFAULT_SWEEP {
        for_each_structure(name, |ctx| {
            let orbit = ctx.calc.orbit;
            if orbit.dim_m() == 0 {
                return;
            }
            // an exact solution of the twisted system, away from the witness
            let seed = mix_seed(&[
                0x5EED,
                name.bytes().map(u64::from).sum(),
                ctx.orbit_mask as u64,
                ctx.sigma_index as u64,
            ]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ddj = ctx.calc.ddj_system(ctx.j);
            let ns = nullspace(&ddj.rows, ddj.vars.len());
            let base = canonical_kahler_metric(ctx.j).pair_values(orbit);
            let vec = perturb_positive_in_nullspace(&base, &ns, &mut rng);
            let metric = InvariantMetric::from_pairs(orbit, &vec);

            let log = induction_replay(ctx.calc, ctx.j, &metric).unwrap();
            let mut derived = replay_rows(ctx.calc, ctx.j, &log);
            derived.sort();
            derived.dedup();
            let mut target = ctx.calc.kahler_system(ctx.j).rows;
            target.sort();
            assert_eq!(derived, target, "{name}: derived equalities differ");
            steps_total += log.steps.len();
            replayed += 1;
        })
        .unwrap();
    }
    gate.pass(format!(
        "{replayed} structures replayed, {steps_total} derivation steps"
    ));
}

#[test]
fn generalized_kahler_samples_are_bikahler_with_closed_b() {
    let gate = Gate::new(
        "generalized Kahler: seeded instances satisfy the matching condition, split bi-Kahler with closed b",
    );
    let mut count = 0usize;
    for name in GK_TYPES {
        let reports = gk_run(name, 100, 2024).unwrap();
        assert_eq!(reports.len(), 100);
        for r in &reports {
            assert!(r.eq2_holds, "{name}: sampler must satisfy the condition");
            assert!(r.db_zero, "{name}: b-field must be closed: {r:?}");
            assert!(r.kahler_plus && r.kahler_minus, "{name}: both pairs Kahler");
            assert!(!r.violation);
            let g = r.gualtieri.as_ref().unwrap();
            assert!(g.squares_ok && g.commute_ok && g.skew_ok && g.posdef_ok);
            assert_eq!(g.gcan_signature.0, g.gcan_signature.1);
            count += 1;
        }
    }

    // negative control: with a non-additive metric the matching condition is
    // unsatisfiable, because d(d^J omega) stays nonzero while d(db) = 0
    for name in ["B2", "G2"] {
        let sys = build_root_system(&RootSystemSpec::parse(name).unwrap());
        let (sc, _) = build_constants(&sys);
        let orbit = make_orbit(&sys, &BTreeSet::new());
        let calc = Calculus::new(&sys, &sc, &orbit);
        let structures = enumerate_complex_structures(&orbit).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut nonkahler_seen = 0usize;
        while nonkahler_seen < 5 {
            let metric = random_positive_metric(&orbit, &mut rng);
            let h = HermitianStructure {
                j: structures[0].clone(),
                metric,
            };
            if is_kaehler(&h) {
                continue;
            }
            nonkahler_seen += 1;
            let dj = calc.dj_omega(&h);
            let ddj = calc.exterior_derivative(&dj).unwrap();
            assert!(!ddj.is_zero(), "{name}: twisted second derivative must persist");
        }
    }

    gate.pass(format!("{count} satisfying instances, unsatisfiability controls held"));
}

#[test]
fn structure_counts_match_weyl_quotients() {
    let gate = Gate::new("counting: full-flag structures number |W|, quotient counts on partial orbits");
    for (name, expected) in [("A2", 6usize), ("B2", 8), ("G2", 12)] {
        let sys = build_root_system(&RootSystemSpec::parse(name).unwrap());
        let orbit = make_orbit(&sys, &BTreeSet::new());
        let fast = enumerate_complex_structures(&orbit).unwrap();
        assert_eq!(fast.len(), expected, "{name} full flag");
        assert_eq!(fast.len() as u64, sys.spec.weyl_order());
        let brute = enumerate_complex_structures_bruteforce(&orbit);
        assert_eq!(
            fast.iter().map(|j| j.sigma.clone()).collect::<Vec<_>>(),
            brute.iter().map(|j| j.sigma.clone()).collect::<Vec<_>>(),
            "{name} brute force"
        );
    }
    // B2 with R_0 = {+-a1}: |W(B2)| / |W(A1)| = 4
    let sys = build_root_system(&RootSystemSpec::parse("B2").unwrap());
    let orbit = make_orbit(&sys, &[0].into());
    let fast = enumerate_complex_structures(&orbit).unwrap();
    assert_eq!(fast.len(), 4);
    let brute = enumerate_complex_structures_bruteforce(&orbit);
    assert_eq!(
        fast.iter().map(|j| j.sigma.clone()).collect::<Vec<_>>(),
        brute.iter().map(|j| j.sigma.clone()).collect::<Vec<_>>()
    );
    gate.pass("A2:6, B2:8, G2:12 full flag; B2/{a1}:4; brute force agrees".to_string());
}
