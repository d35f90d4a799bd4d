//! Verification layer: the rank-based theorem check with positive witness,
//! the height-induction replay of the derivation, generalized-Kahler
//! instance checks, and the pointwise construction of the commuting pair of
//! generalized complex structures.

use crate::calculus::{Calculus, GenericInvariantForm, InvariantTwoForm, LinearSystemQ};
use crate::exact::{qi, CVal, Q, QJson, SignSqrt};
use crate::linalg::{nullspace, rank_of_rows, QMat};
use crate::orbit::{
    canonical_kahler_metric, is_kaehler, rplus_heights, ComplexStructure, HermitianStructure,
    InvariantMetric,
};
use num::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Exact row rank of a linear system.
pub fn rank(m: &LinearSystemQ) -> usize {
    rank_of_rows(&m.rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Confirmed,
    Refuted,
    Trivial,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessJson {
    pub vars: Vec<Vec<i64>>,
    pub g: Vec<QJson>,
    pub satisfies_ddj: bool,
    pub satisfies_kahler: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RefutationJson {
    pub separating_vector: Vec<QJson>,
    pub refuting_metric: Vec<QJson>,
    /// Both systems in full, rows as numerator/denominator pairs.
    pub ddj_rows: Vec<Vec<QJson>>,
    pub kahler_rows: Vec<Vec<QJson>>,
}

/// Result of the rank check for one complex structure.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub orbit: OrbitId,
    pub sigma_index: usize,
    pub sigma: Vec<Vec<i64>>,
    pub dim: usize,
    pub num_vars: usize,
    pub rank_ddj: usize,
    pub rank_joint: usize,
    pub witness_ok: bool,
    pub verdict: Verdict,
    pub witness: WitnessJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<RefutationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitId {
    /// 1-based indices of the simple roots generating R_0.
    pub s: Vec<usize>,
}

/// Runs the rank-equality check for one structure. The linear-functional
/// witness metric must satisfy both systems; a strictly positive point of
/// the null space of the twisted system makes the cone implication
/// equivalent to null-space containment, hence to rank equality.
pub fn verify_theorem(calc: &Calculus<'_>, j: &ComplexStructure<'_>, sigma_index: usize) -> RankReport {
    let orbit = calc.orbit;
    let ddj = calc.ddj_system(j);
    let kah = calc.kahler_system(j);
    let witness = canonical_kahler_metric(j);
    let h = HermitianStructure {
        j: j.clone(),
        metric: witness,
    };
    let wvec = calc.metric_vector(&h);
    let sat_ddj = ddj.annihilates(&wvec);
    let sat_kah = kah.annihilates(&wvec);
    assert!(
        sat_ddj && sat_kah,
        "internal error: linear witness must satisfy both systems"
    );
    let witness_ok = sat_ddj && sat_kah;

    let rank_ddj = rank(&ddj);
    let rank_joint = rank(&ddj.stacked(&kah));
    let trivial = ddj.is_empty() && kah.is_empty();
    let verdict = if trivial {
        Verdict::Trivial
    } else if witness_ok && rank_ddj == rank_joint {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };

    let row_json = |rows: &[Vec<Q>]| -> Vec<Vec<QJson>> {
        rows.iter()
            .map(|r| r.iter().map(QJson::of).collect())
            .collect()
    };
    let refutation = if verdict == Verdict::Refuted {
        find_separating(&ddj, &kah, &wvec).map(|(sep, refuting)| RefutationJson {
            separating_vector: sep.iter().map(QJson::of).collect(),
            refuting_metric: refuting.iter().map(QJson::of).collect(),
            ddj_rows: row_json(&ddj.rows),
            kahler_rows: row_json(&kah.rows),
        })
    } else {
        None
    };

    RankReport {
        type_name: orbit.system.spec.to_string(),
        orbit: OrbitId {
            s: orbit.s_indices.iter().map(|&i| i + 1).collect(),
        },
        sigma_index,
        sigma: j.sigma.iter().map(|&i| orbit.system.root(i).coeffs.clone()).collect(),
        dim: orbit.dim_m(),
        num_vars: ddj.vars.len(),
        rank_ddj,
        rank_joint,
        witness_ok,
        verdict,
        witness: WitnessJson {
            vars: ddj
                .vars
                .iter()
                .map(|&i| orbit.system.root(i).coeffs.clone())
                .collect(),
            g: wvec.iter().map(QJson::of).collect(),
            satisfies_ddj: sat_ddj,
            satisfies_kahler: sat_kah,
        },
        refutation,
        timing_ms: None,
    }
}

/// An element of Null(ddj) outside Null(kahler), together with a strictly
/// positive refuting metric built from the witness.
pub fn find_separating(
    ddj: &LinearSystemQ,
    kah: &LinearSystemQ,
    witness: &[Q],
) -> Option<(Vec<Q>, Vec<Q>)> {
    let n = ddj.vars.len();
    for v in nullspace(&ddj.rows, n) {
        if kah.annihilates(&v) {
            continue;
        }
        // witness + t*v stays positive for small positive t
        let mut t = qi(1);
        for (w, x) in witness.iter().zip(&v) {
            if x.is_negative() {
                let bound = w / -x.clone();
                if bound < t {
                    t = bound;
                }
            }
        }
        let t = t / qi(2);
        let refuting: Vec<Q> = witness
            .iter()
            .zip(&v)
            .map(|(w, x)| w + &t * x)
            .collect();
        assert!(refuting.iter().all(|q| q.is_positive()));
        return Some((v, refuting));
    }
    None
}

// ---------------------------------------------------------------------------
// Induction replay
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase", tag = "rule")]
pub enum ReplayRule {
    /// Difference of the pair is outside the complementary roots: the
    /// vanishing row forces the equality directly.
    Direct,
    /// The equality follows after substituting a previously derived one for
    /// the cited pair.
    Substitution { cited: (Vec<i64>, Vec<i64>) },
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplayStep {
    pub pair: (Vec<i64>, Vec<i64>),
    pub target: Vec<i64>,
    pub max_height: i64,
    #[serde(flatten)]
    pub rule: ReplayRule,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplayLog {
    pub steps: Vec<ReplayStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("metric does not satisfy the twisted-derivative system")]
    MetricNotInNullspace,
    #[error("equality for pair {0:?} could not be derived")]
    Underivable(String),
}

/// Replays the height induction: processes summing pairs of Sigma by
/// increasing maximal height, deriving each additivity equality from the
/// vanishing twisted rows and previously derived equalities. The metric must
/// be an exact solution of the twisted system (positivity not required).
pub fn induction_replay(
    calc: &Calculus<'_>,
    j: &ComplexStructure<'_>,
    metric: &InvariantMetric,
) -> Result<ReplayLog, ReplayError> {
    let sys = calc.system;
    let orbit = calc.orbit;
    let h = HermitianStructure {
        j: j.clone(),
        metric: metric.clone(),
    };
    let ddj = calc.ddj_system(j);
    let vec = calc.metric_vector(&h);
    if !ddj.annihilates(&vec) {
        return Err(ReplayError::MetricNotInNullspace);
    }

    let heights = rplus_heights(j);
    let hgt = |i: usize| -> i64 { heights[&i].to_integer().to_i64().unwrap() };

    // summing pairs inside Sigma, bucketed by max height
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (k, &a) in j.sigma.iter().enumerate() {
        for &b in &j.sigma[k + 1..] {
            if let Some(s) = sys.sum_index(a, b) {
                if j.contains(s) {
                    pairs.push((a, b));
                }
            }
        }
    }
    pairs.sort_by_key(|&(a, b)| {
        (
            hgt(a).max(hgt(b)),
            sys.root(a).coeffs.clone(),
            sys.root(b).coeffs.clone(),
        )
    });

    let canon = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut derived: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut steps = Vec::new();

    for &(a, b) in &pairs {
        let s = sys.sum_index(a, b).unwrap();
        // twisted row for this pair vanishes by assumption
        debug_assert!(calc.ddj_value(&h, a, b).is_zero());
        let diff = sys.sum_index(a, sys.neg_index(b));
        let diff_complementary = diff.is_some_and(|d| orbit.is_complementary(d));
        let rule = if !diff_complementary {
            // row reduces to its first summand with a nonzero factor
            ReplayRule::Direct
        } else {
            let d = diff.unwrap();
            // orient so that gamma - delta lies in Sigma
            let (gamma, delta, d_sigma) = if j.contains(d) {
                (a, b, d)
            } else {
                (b, a, sys.neg_index(d))
            };
            debug_assert!(j.contains(d_sigma));
            let cited = canon(delta, d_sigma);
            if !derived.contains(&cited) {
                return Err(ReplayError::Underivable(format!(
                    "{:?} + {:?}",
                    sys.root(gamma),
                    sys.root(delta)
                )));
            }
            ReplayRule::Substitution {
                cited: (
                    sys.root(cited.0).coeffs.clone(),
                    sys.root(cited.1).coeffs.clone(),
                ),
            }
        };
        // the equality now holds numerically
        let lhs = metric.value(s).clone();
        let rhs = metric.value(a) + metric.value(b);
        if lhs != rhs {
            return Err(ReplayError::Underivable(format!(
                "{:?} + {:?} fails numerically",
                sys.root(a),
                sys.root(b)
            )));
        }
        derived.insert(canon(a, b));
        steps.push(ReplayStep {
            pair: (sys.root(a).coeffs.clone(), sys.root(b).coeffs.clone()),
            target: sys.root(s).coeffs.clone(),
            max_height: hgt(a).max(hgt(b)),
            rule,
        });
    }
    Ok(ReplayLog { steps })
}

/// Rebuilds additivity rows from a replay log; used to compare the derived
/// equalities with the additivity system.
pub fn replay_rows(calc: &Calculus<'_>, _j: &ComplexStructure<'_>, log: &ReplayLog) -> Vec<Vec<Q>> {
    let sys = calc.system;
    let orbit = calc.orbit;
    let vars = orbit.pair_reps();
    let pos = |i: usize| vars.binary_search(&orbit.pair_rep(i)).unwrap();
    log.steps
        .iter()
        .map(|step| {
            let a = sys.index_of(&crate::rootsys::Root { coeffs: step.pair.0.clone() }).unwrap();
            let b = sys.index_of(&crate::rootsys::Root { coeffs: step.pair.1.clone() }).unwrap();
            let s = sys.index_of(&crate::rootsys::Root { coeffs: step.target.clone() }).unwrap();
            let mut row = vec![Q::zero(); vars.len()];
            row[pos(s)] += qi(1);
            row[pos(a)] -= qi(1);
            row[pos(b)] -= qi(1);
            crate::linalg::normalize_row(&row)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Generalized Kahler instances
// ---------------------------------------------------------------------------

/// A candidate generalized Kahler datum: two structures on one orbit, a
/// shared metric and a b-field.
pub struct GKInstance<'a> {
    pub j_plus: ComplexStructure<'a>,
    pub j_minus: ComplexStructure<'a>,
    pub metric: InvariantMetric,
    pub b: InvariantTwoForm,
    pub provenance: GkProvenance,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GkProvenance {
    pub sigma_minus_source: String,
    pub metric_source: String,
    pub b_source: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GualtieriChecks {
    pub squares_ok: bool,
    pub commute_ok: bool,
    pub skew_ok: bool,
    pub posdef_ok: bool,
    pub gcan_signature: (usize, usize),
}

impl GualtieriChecks {
    pub fn all_ok(&self, dim: usize) -> bool {
        self.squares_ok
            && self.commute_ok
            && self.skew_ok
            && self.posdef_ok
            && self.gcan_signature == (dim, dim)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GkReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub orbit: OrbitId,
    pub sample: usize,
    pub provenance: GkProvenance,
    pub sigma_plus: Vec<Vec<i64>>,
    pub sigma_minus: Vec<Vec<i64>>,
    pub metric: Vec<QJson>,
    pub eq2_holds: bool,
    pub db_zero: bool,
    pub kahler_plus: bool,
    pub kahler_minus: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gualtieri: Option<GualtieriChecks>,
    pub violation: bool,
}

/// Checks the b-field matching condition db = -d^{J+}w_+ = d^{J-}w_- on all
/// basis triples, and on success asserts the conclusions: both pairs Kahler
/// and db identically zero. Instances passing the condition but failing a
/// conclusion are violations and are serialized in full.
pub fn check_gk(calc: &Calculus<'_>, inst: &GKInstance<'_>, sample: usize) -> GkReport {
    let orbit = calc.orbit;
    assert!(
        inst.b.check_invariants(orbit),
        "b-field must be skew and real on the tangent model"
    );
    let h_plus = HermitianStructure {
        j: inst.j_plus.clone(),
        metric: inst.metric.clone(),
    };
    let h_minus = HermitianStructure {
        j: inst.j_minus.clone(),
        metric: inst.metric.clone(),
    };
    let djp = calc.dj_omega(&h_plus);
    let djm = calc.dj_omega(&h_minus);
    let db = calc
        .exterior_derivative(&calc.two_form_to_generic(&inst.b))
        .expect("degree 2 input");
    let eq2 = db == djp.negated() && db == djm;
    let db_zero = db.is_zero();
    let kp = is_kaehler(&h_plus);
    let km = is_kaehler(&h_minus);
    let gualtieri = if eq2 {
        Some(gualtieri_build(calc, inst).checks())
    } else {
        None
    };
    let violation = eq2
        && !(kp
            && km
            && db_zero
            && gualtieri
                .as_ref()
                .is_some_and(|g| g.all_ok(orbit.dim_m())));
    GkReport {
        type_name: orbit.system.spec.to_string(),
        orbit: OrbitId {
            s: orbit.s_indices.iter().map(|&i| i + 1).collect(),
        },
        sample,
        provenance: inst.provenance.clone(),
        sigma_plus: inst
            .j_plus
            .sigma
            .iter()
            .map(|&i| orbit.system.root(i).coeffs.clone())
            .collect(),
        sigma_minus: inst
            .j_minus
            .sigma
            .iter()
            .map(|&i| orbit.system.root(i).coeffs.clone())
            .collect(),
        metric: calc.metric_vector(&h_plus).iter().map(QJson::of).collect(),
        eq2_holds: eq2,
        db_zero,
        kahler_plus: kp,
        kahler_minus: km,
        gualtieri,
        violation,
    }
}

/// The commuting pair of generalized complex structures on m + m*, built
/// pointwise from the graphs of b + g and b - g.
pub struct PointwiseGeneralizedPair {
    pub j1: QMat,
    pub j2: QMat,
    pub gcan: QMat,
    pub d: QMat,
    dim_m: usize,
}

impl PointwiseGeneralizedPair {
    pub fn checks(&self) -> GualtieriChecks {
        let n2 = 2 * self.dim_m;
        let minus_id = QMat::identity(n2).neg();
        let squares_ok =
            self.j1.matmul(&self.j1) == minus_id && self.j2.matmul(&self.j2) == minus_id;
        let commute_ok = self.j1.matmul(&self.j2) == self.j2.matmul(&self.j1);
        // skewness of J wrt gcan: (gcan J) antisymmetric
        let skew = |j: &QMat| {
            let gj = self.gcan.matmul(j);
            gj.transpose() == gj.neg()
        };
        let skew_ok = skew(&self.j1) && skew(&self.j2);
        // positivity of gcan(D., .) with D = -J1 J2
        let d = self.j1.matmul(&self.j2).neg();
        let gd = self.gcan.matmul(&d);
        let posdef_ok = gd.is_symmetric() && gd.is_positive_definite();
        let (p, n, z) = self.gcan.signature();
        assert_eq!(z, 0);
        GualtieriChecks {
            squares_ok,
            commute_ok,
            skew_ok,
            posdef_ok,
            gcan_signature: (p, n),
        }
    }
}

/// Builds the pair from an instance satisfying the matching condition. The
/// tangent-model basis is (A_g, B_g) per positive complementary root, with
/// the dual basis following.
pub fn gualtieri_build(calc: &Calculus<'_>, inst: &GKInstance<'_>) -> PointwiseGeneralizedPair {
    let orbit = calc.orbit;
    let reps = orbit.pair_reps();
    let n = 2 * reps.len();
    assert_eq!(n, orbit.dim_m());

    // metric, complex structures and b-field on the real basis
    let mut g = QMat::zeros(n, n);
    let mut b = QMat::zeros(n, n);
    let mut jp = QMat::zeros(n, n);
    let mut jm = QMat::zeros(n, n);
    for (k, &rep) in reps.iter().enumerate() {
        let (ia, ib) = (2 * k, 2 * k + 1);
        let gv = inst.metric.value(rep);
        g[(ia, ia)] = qi(2) * gv;
        g[(ib, ib)] = qi(2) * gv;
        // J A = eps B, J B = -eps A
        let ep = qi(inst.j_plus.epsilon(rep));
        jp[(ib, ia)] = ep.clone();
        jp[(ia, ib)] = -ep;
        let em = qi(inst.j_minus.epsilon(rep));
        jm[(ib, ia)] = em.clone();
        jm[(ia, ib)] = -em;
        // b(A_g, B_g) = 2i c_g = -2 t_g for c_g = i t_g
        let c = &inst.b.coeff[&rep];
        assert!(c.re.is_zero(), "invariant two-form values are imaginary");
        let t = c.im.to_q();
        b[(ia, ib)] = qi(-2) * &t;
        b[(ib, ia)] = qi(2) * t;
    }

    // beta_pm = b +- g as maps V -> V*; C_pm their graphs
    let beta_p = b.add(&g);
    let beta_m = b.add(&g.neg());
    // x-component of the C_+ part of (v, xi): (2g) x = xi - beta_m v
    let two_g_inv = {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            assert!(g[(i, i)].is_positive(), "metric block must be invertible");
            m[(i, i)] = qi(1) / (qi(2) * &g[(i, i)]);
        }
        m
    };

    let split = |v: &[Q], xi: &[Q]| -> (Vec<Q>, Vec<Q>) {
        let bm_v = beta_m.mul_vec(v);
        let rhs: Vec<Q> = xi.iter().zip(&bm_v).map(|(a, c)| a - c).collect();
        let x = two_g_inv.mul_vec(&rhs);
        let y: Vec<Q> = v.iter().zip(&x).map(|(a, c)| a - c).collect();
        (x, y)
    };

    let mut d = QMat::zeros(2 * n, 2 * n);
    let mut j1 = QMat::zeros(2 * n, 2 * n);
    for col in 0..2 * n {
        let mut v = vec![Q::zero(); n];
        let mut xi = vec![Q::zero(); n];
        if col < n {
            v[col] = qi(1);
        } else {
            xi[col - n] = qi(1);
        }
        let (x, y) = split(&v, &xi);
        // D = +1 on C_+, -1 on C_-
        let bx = beta_p.mul_vec(&x);
        let by = beta_m.mul_vec(&y);
        for i in 0..n {
            d[(i, col)] = &x[i] - &y[i];
            d[(n + i, col)] = &bx[i] - &by[i];
        }
        // J1 lifts J_+ on C_+ and J_- on C_-
        let jx = jp.mul_vec(&x);
        let jy = jm.mul_vec(&y);
        let bjx = beta_p.mul_vec(&jx);
        let bjy = beta_m.mul_vec(&jy);
        for i in 0..n {
            j1[(i, col)] = &jx[i] + &jy[i];
            j1[(n + i, col)] = &bjx[i] + &bjy[i];
        }
    }
    let j2 = j1.matmul(&d);

    let mut gcan = QMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        gcan[(i, n + i)] = crate::exact::qr(1, 2);
        gcan[(n + i, i)] = crate::exact::qr(1, 2);
    }

    PointwiseGeneralizedPair {
        j1,
        j2,
        gcan,
        d,
        dim_m: n,
    }
}

// ---------------------------------------------------------------------------
// Seeded samplers
// ---------------------------------------------------------------------------

/// Random strictly positive rational metric on the orbit.
pub fn random_positive_metric<R: Rng>(
    orbit: &crate::orbit::OrbitSpec<'_>,
    rng: &mut R,
) -> InvariantMetric {
    let values: Vec<Q> = orbit
        .pair_reps()
        .iter()
        .map(|_| {
            let n = rng.gen_range(1..=12i64);
            let d = rng.gen_range(1..=6i64);
            crate::exact::qr(n, d)
        })
        .collect();
    InvariantMetric::from_pairs(orbit, &values)
}

/// Perturbs a strictly positive vector inside base + span(nullspace rows),
/// shrinking the step until positivity holds.
pub fn perturb_positive_in_nullspace<R: Rng>(
    base: &[Q],
    ns: &[Vec<Q>],
    rng: &mut R,
) -> Vec<Q> {
    if ns.is_empty() || base.is_empty() {
        return base.to_vec();
    }
    let coeffs: Vec<Q> = ns
        .iter()
        .map(|_| qi(rng.gen_range(-3..=3i64)))
        .collect();
    let mut dir = vec![Q::zero(); base.len()];
    for (c, v) in coeffs.iter().zip(ns) {
        for (d, x) in dir.iter_mut().zip(v) {
            *d += c * x;
        }
    }
    let mut t = qi(1);
    for _ in 0..60 {
        let cand: Vec<Q> = base
            .iter()
            .zip(&dir)
            .map(|(b, x)| b + &t * x)
            .collect();
        if cand.iter().all(|q| q.is_positive()) {
            return cand;
        }
        t /= qi(2);
    }
    base.to_vec()
}

/// A random invariant closed two-form: c_a = i (mu, a) for a random integral
/// functional mu. Linear functionals are odd and additive over zero-sum
/// triples, so the form is exactly closed.
pub fn random_closed_two_form<R: Rng>(
    calc: &Calculus<'_>,
    rng: &mut R,
) -> (InvariantTwoForm, String) {
    let sys = calc.system;
    let mu: Vec<i64> = (0..sys.rank).map(|_| rng.gen_range(-3..=3i64)).collect();
    let mut coeff = BTreeMap::new();
    for &i in &calc.orbit.complementary {
        let mut t = Q::zero();
        for (k, &m) in mu.iter().enumerate() {
            if m != 0 {
                t += qi(m) * sys.inner(&sys.base[k], sys.root(i));
            }
        }
        coeff.insert(i, CVal::imaginary(SignSqrt::from_q(t)));
    }
    (InvariantTwoForm { coeff }, format!("linear mu={mu:?}"))
}

/// The zero two-form on the orbit.
pub fn zero_two_form(calc: &Calculus<'_>) -> InvariantTwoForm {
    let coeff = calc
        .orbit
        .complementary
        .iter()
        .map(|&i| (i, CVal::zero()))
        .collect();
    InvariantTwoForm { coeff }
}

/// Draws one instance satisfying the matching condition by construction:
/// a structure pair with a common Kahler metric (found by joint null-space
/// search with rejection, falling back to the conjugate or identical
/// partner), a joint-space metric perturbation, and a random closed b-field.
pub fn sample_gk_instance<'a, R: Rng>(
    calc: &Calculus<'a>,
    structures: &[ComplexStructure<'a>],
    rng: &mut R,
) -> GKInstance<'a> {
    let orbit = calc.orbit;
    let nvars = orbit.pair_reps().len();
    let plus_idx = rng.gen_range(0..structures.len());
    let j_plus = structures[plus_idx].clone();
    let k_plus = calc.kahler_system(&j_plus);
    let witness_plus = canonical_kahler_metric(&j_plus);
    let wvec_plus = witness_plus.pair_values(orbit);

    let mut chosen: Option<(ComplexStructure<'a>, Vec<Q>, String)> = None;
    for _ in 0..8 {
        let minus_idx = rng.gen_range(0..structures.len());
        let j_minus = structures[minus_idx].clone();
        let k_minus = calc.kahler_system(&j_minus);
        let joint = k_plus.stacked(&k_minus);
        // candidate common Kahler metrics
        if joint.annihilates(&wvec_plus) {
            chosen = Some((j_minus, wvec_plus.clone(), "independent draw".into()));
            break;
        }
        let wvec_minus = canonical_kahler_metric(&j_minus).pair_values(orbit);
        if joint.annihilates(&wvec_minus) {
            chosen = Some((j_minus, wvec_minus, "independent draw".into()));
            break;
        }
        let ns = nullspace(&joint.rows, nvars);
        let mut found = None;
        for _ in 0..32 {
            let mut cand = vec![Q::zero(); nvars];
            for v in &ns {
                let c = qi(rng.gen_range(-3..=3i64));
                for (x, y) in cand.iter_mut().zip(v) {
                    *x += &c * y;
                }
            }
            if !cand.is_empty() && cand.iter().all(|q| q.is_positive()) {
                found = Some(cand);
                break;
            }
        }
        if let Some(cand) = found {
            chosen = Some((j_minus, cand, "independent draw".into()));
            break;
        }
    }

    let (j_minus, base_metric, sigma_src) = chosen.unwrap_or_else(|| {
        // conjugate partner when admissible, else the identical structure
        let neg = j_plus.sigma_negated();
        let conj = structures.iter().find(|s| s.sigma == neg);
        match conj {
            Some(s) if rng.gen_bool(0.5) => {
                (s.clone(), wvec_plus.clone(), "conjugate of sigma_plus".into())
            }
            _ => (j_plus.clone(), wvec_plus.clone(), "equal to sigma_plus".into()),
        }
    });

    // perturb within the joint Kahler solution space, keeping positivity
    let joint = k_plus.stacked(&calc.kahler_system(&j_minus));
    let ns = nullspace(&joint.rows, nvars);
    let final_vec = perturb_positive_in_nullspace(&base_metric, &ns, rng);
    debug_assert!(joint.annihilates(&final_vec));
    let metric = InvariantMetric::from_pairs(orbit, &final_vec);

    let (b, b_source) = match rng.gen_range(0..3u8) {
        0 => (zero_two_form(calc), "zero".to_string()),
        1 => {
            let h = HermitianStructure {
                j: j_plus.clone(),
                metric: metric.clone(),
            };
            (calc.kaehler_form(&h), "omega_plus".to_string())
        }
        _ => random_closed_two_form(calc, rng),
    };

    GKInstance {
        j_plus,
        j_minus,
        metric,
        b,
        provenance: GkProvenance {
            sigma_minus_source: sigma_src,
            metric_source: "joint witness + null-space perturbation".into(),
            b_source,
        },
    }
}

impl GenericInvariantForm {
    pub fn negated(&self) -> GenericInvariantForm {
        GenericInvariantForm {
            degree: self.degree,
            values: self.values.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}
