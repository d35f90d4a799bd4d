//! Adjoint orbits at the root level: the isotropy subsystem R_0 generated by
//! a subset of simple roots, the complementary roots spanning the tangent
//! model, invariant complex structures as sets of roots, and invariant
//! metrics as positive even coefficient families.

use crate::exact::{qi, Q};
use crate::linalg::QMat;
use crate::rootsys::{Root, RootSystem, RootSubset, TypeError};
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// An orbit model: the ambient system, the simple-root subset S generating
/// the isotropy root system R_0, and the complementary roots.
pub struct OrbitSpec<'a> {
    pub system: &'a RootSystem,
    /// Indices into the simple base.
    pub s_indices: BTreeSet<usize>,
    /// Root indices of R_0 = R intersect span(S).
    pub r0: BTreeSet<usize>,
    /// Positive part of R_0 with respect to the ambient positives.
    pub r0_plus: BTreeSet<usize>,
    /// Complementary root indices, sorted.
    pub complementary: Vec<usize>,
}

impl<'a> std::fmt::Debug for OrbitSpec<'a> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "OrbitSpec({}, S={:?})",
            self.system.spec,
            self.s_indices.iter().map(|i| i + 1).collect::<Vec<_>>()
        )
    }
}

/// Builds the orbit model for a subset of simple-root indices.
pub fn make_orbit<'a>(system: &'a RootSystem, s: &BTreeSet<usize>) -> OrbitSpec<'a> {
    assert!(s.iter().all(|&i| i < system.rank), "S out of range");
    let r0: BTreeSet<usize> = (0..system.len())
        .filter(|&i| {
            system.root(i)
                .coeffs
                .iter()
                .enumerate()
                .all(|(k, &c)| c == 0 || s.contains(&k))
        })
        .collect();
    let r0_plus: BTreeSet<usize> = r0
        .iter()
        .copied()
        .filter(|&i| system.root(i).is_positive())
        .collect();
    let complementary: Vec<usize> = (0..system.len()).filter(|i| !r0.contains(i)).collect();

    let spec = OrbitSpec {
        system,
        s_indices: s.clone(),
        r0,
        r0_plus,
        complementary,
    };
    // R_0 is a full subsystem: closed and symmetric.
    debug_assert!(RootSubset::new(system, spec.r0.clone()).is_closed());
    debug_assert!(spec.r0.iter().all(|&i| spec.r0.contains(&system.neg_index(i))));
    assert!(spec.complementary.len() % 2 == 0);
    spec
}

impl<'a> OrbitSpec<'a> {
    /// Real dimension of the tangent model.
    pub fn dim_m(&self) -> usize {
        self.complementary.len()
    }

    pub fn is_complementary(&self, i: usize) -> bool {
        !self.r0.contains(&i)
    }

    /// Complementary roots that are positive for the ambient base; one
    /// representative per opposite pair, in canonical order. These index the
    /// metric unknowns.
    pub fn pair_reps(&self) -> Vec<usize> {
        self.complementary
            .iter()
            .copied()
            .filter(|&i| self.system.root(i).is_positive())
            .collect()
    }

    /// Canonical representative of the pair {a, -a}.
    pub fn pair_rep(&self, i: usize) -> usize {
        if self.system.root(i).is_positive() {
            i
        } else {
            self.system.neg_index(i)
        }
    }

    pub fn name(&self) -> String {
        let s: Vec<String> = self.s_indices.iter().map(|i| format!("a{}", i + 1)).collect();
        format!("{}/S={{{}}}", self.system.spec, s.join(","))
    }
}

/// An invariant complex structure, recorded through its set of roots.
#[derive(Clone)]
pub struct ComplexStructure<'a> {
    pub orbit: &'a OrbitSpec<'a>,
    /// Root indices with epsilon = +1; sorted.
    pub sigma: Vec<usize>,
}

impl<'a> std::fmt::Debug for ComplexStructure<'a> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set()
            .entries(self.sigma.iter().map(|&i| self.orbit.system.root(i)))
            .finish()
    }
}

impl<'a> ComplexStructure<'a> {
    pub fn new_unchecked(orbit: &'a OrbitSpec<'a>, mut sigma: Vec<usize>) -> Self {
        sigma.sort_unstable();
        ComplexStructure { orbit, sigma }
    }

    /// epsilon_a: +1 on Sigma, -1 on -Sigma, 0 off the complementary set.
    pub fn epsilon(&self, i: usize) -> i64 {
        if self.sigma.binary_search(&i).is_ok() {
            1
        } else if !self.orbit.is_complementary(i) {
            0
        } else {
            -1
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.sigma.binary_search(&i).is_ok()
    }

    /// The negated structure, when it is an admissible structure too.
    pub fn sigma_negated(&self) -> Vec<usize> {
        let sys = self.orbit.system;
        let mut v: Vec<usize> = self.sigma.iter().map(|&i| sys.neg_index(i)).collect();
        v.sort_unstable();
        v
    }

    pub fn sigma_roots(&self) -> Vec<Root> {
        self.sigma
            .iter()
            .map(|&i| self.orbit.system.root(i).clone())
            .collect()
    }
}

/// An invariant metric: positive coefficients, even under negation, one per
/// complementary root.
#[derive(Clone, Debug)]
pub struct InvariantMetric {
    /// Values per root index (both of each opposite pair present).
    pub g: BTreeMap<usize, Q>,
}

impl InvariantMetric {
    /// Builds a metric from values on the pair representatives.
    pub fn from_pairs(orbit: &OrbitSpec<'_>, values: &[Q]) -> Self {
        let reps = orbit.pair_reps();
        assert_eq!(reps.len(), values.len());
        let mut g = BTreeMap::new();
        for (&rep, val) in reps.iter().zip(values) {
            g.insert(rep, val.clone());
            g.insert(orbit.system.neg_index(rep), val.clone());
        }
        InvariantMetric { g }
    }

    pub fn value(&self, i: usize) -> &Q {
        &self.g[&i]
    }

    /// Values on the pair representatives, in canonical order.
    pub fn pair_values(&self, orbit: &OrbitSpec<'_>) -> Vec<Q> {
        orbit.pair_reps().iter().map(|r| self.g[r].clone()).collect()
    }
}

/// A Hermitian structure: a complex structure with a compatible metric.
#[derive(Clone, Debug)]
pub struct HermitianStructure<'a> {
    pub j: ComplexStructure<'a>,
    pub metric: InvariantMetric,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("sigma and its negation do not partition the complementary roots")]
    NotAPartition,
    #[error("sigma is not closed within the complementary roots")]
    NotRelativelyClosed,
    #[error("r0_plus together with sigma is not a positive system")]
    NotPositiveSystem,
    #[error("metric misses a complementary root")]
    MetricIncomplete,
    #[error("metric is not even under negation")]
    MetricNotEven,
    #[error("metric has a non-positive coefficient")]
    MetricNotPositive,
}

/// Checks the admissibility of a complex structure: partition, closedness
/// within the complementary roots, and completion of R_0^+ to a positive
/// system of the ambient system.
pub fn validate_complex_structure(j: &ComplexStructure<'_>) -> Result<(), ValidationError> {
    let orbit = j.orbit;
    let sys = orbit.system;
    let sigma: BTreeSet<usize> = j.sigma.iter().copied().collect();
    let neg: BTreeSet<usize> = sigma.iter().map(|&i| sys.neg_index(i)).collect();
    if !sigma.is_disjoint(&neg) {
        return Err(ValidationError::NotAPartition);
    }
    let comp: BTreeSet<usize> = orbit.complementary.iter().copied().collect();
    if sigma.union(&neg).copied().collect::<BTreeSet<_>>() != comp {
        return Err(ValidationError::NotAPartition);
    }
    for &a in &sigma {
        for &b in &sigma {
            if let Some(c) = sys.sum_index(a, b) {
                if orbit.is_complementary(c) && !sigma.contains(&c) {
                    return Err(ValidationError::NotRelativelyClosed);
                }
            }
        }
    }
    let mut p = orbit.r0_plus.clone();
    p.extend(sigma.iter().copied());
    if !RootSubset::new(sys, p).is_positive_system() {
        return Err(ValidationError::NotPositiveSystem);
    }
    Ok(())
}

/// Checks a metric against an orbit: completeness, evenness, positivity.
pub fn validate_metric(orbit: &OrbitSpec<'_>, m: &InvariantMetric) -> Result<(), ValidationError> {
    for &i in &orbit.complementary {
        let Some(v) = m.g.get(&i) else {
            return Err(ValidationError::MetricIncomplete);
        };
        if m.g.get(&orbit.system.neg_index(i)) != Some(v) {
            return Err(ValidationError::MetricNotEven);
        }
        if !v.is_positive() {
            return Err(ValidationError::MetricNotPositive);
        }
    }
    Ok(())
}

/// Full validation of a Hermitian structure; reports the first violation.
pub fn validate_hermitian(h: &HermitianStructure<'_>) -> Result<(), ValidationError> {
    validate_complex_structure(&h.j)?;
    validate_metric(h.j.orbit, &h.metric)
}

/// Enumerates the invariant complex structures of the orbit: the sets
/// P intersect (R minus R_0) over positive systems P containing R_0^+,
/// in canonical order.
pub fn enumerate_complex_structures<'a>(
    orbit: &'a OrbitSpec<'a>,
) -> Result<Vec<ComplexStructure<'a>>, TypeError> {
    let sys = orbit.system;
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for p in sys.positive_systems()? {
        if orbit.r0_plus.iter().all(|i| p.indices.contains(i)) {
            let sigma: Vec<usize> = p
                .indices
                .iter()
                .copied()
                .filter(|&i| orbit.is_complementary(i))
                .collect();
            out.insert(sigma);
        }
    }
    Ok(out
        .into_iter()
        .map(|sigma| ComplexStructure::new_unchecked(orbit, sigma))
        .collect())
}

/// Brute-force enumeration over all sign assignments on opposite pairs,
/// filtered by the defining conditions. Exponential; rank <= 2 oracle.
pub fn enumerate_complex_structures_bruteforce<'a>(
    orbit: &'a OrbitSpec<'a>,
) -> Vec<ComplexStructure<'a>> {
    let pairs = orbit.pair_reps();
    assert!(pairs.len() <= 20, "brute-force enumeration out of scale");
    let sys = orbit.system;
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let sigma: Vec<usize> = pairs
            .iter()
            .enumerate()
            .map(|(bit, &rep)| {
                if mask >> bit & 1 == 1 {
                    sys.neg_index(rep)
                } else {
                    rep
                }
            })
            .collect();
        let j = ComplexStructure::new_unchecked(orbit, sigma);
        if validate_complex_structure(&j).is_ok() {
            out.push(j);
        }
    }
    out.sort_by(|a, b| a.sigma.cmp(&b.sigma));
    out
}

/// Whether the Hermitian pair is Kahler: additivity of the metric over
/// summing pairs inside Sigma.
pub fn is_kaehler(h: &HermitianStructure<'_>) -> bool {
    let j = &h.j;
    let sys = j.orbit.system;
    for (k, &a) in j.sigma.iter().enumerate() {
        for &b in &j.sigma[k + 1..] {
            if let Some(c) = sys.sum_index(a, b) {
                if j.contains(c) {
                    let lhs = h.metric.value(c).clone();
                    let rhs = h.metric.value(a) + h.metric.value(b);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Heights of every root of R^+ = R_0^+ u Sigma with respect to the base of
/// R^+: the value (lambda, a) of the functional with (lambda, b) = 1 on each
/// indecomposable b of R^+. Positive integers on R^+.
pub fn rplus_heights(j: &ComplexStructure<'_>) -> BTreeMap<usize, Q> {
    let orbit = j.orbit;
    let sys = orbit.system;
    let mut rplus: BTreeSet<usize> = orbit.r0_plus.clone();
    rplus.extend(j.sigma.iter().copied());
    if rplus.is_empty() {
        return BTreeMap::new();
    }

    // base of R^+ = indecomposable elements
    let base: Vec<usize> = rplus
        .iter()
        .copied()
        .filter(|&c| {
            !rplus
                .iter()
                .any(|&a| rplus.iter().any(|&b| sys.sum_index(a, b) == Some(c)))
        })
        .collect();
    assert_eq!(base.len(), sys.rank, "positive system base has full rank");

    // solve (lambda, base_i) = 1 with lambda in the root span
    let gram = QMat::from_rows(
        base.iter()
            .map(|&i| {
                base.iter()
                    .map(|&jj| sys.inner(sys.root(i), sys.root(jj)))
                    .collect()
            })
            .collect(),
    );
    let ones = vec![qi(1); base.len()];
    let coeffs = gram.solve(&ones).expect("base Gram matrix is invertible");

    rplus
        .iter()
        .map(|&i| {
            let mut acc = Q::zero();
            for (k, &bi) in base.iter().enumerate() {
                if !coeffs[k].is_zero() {
                    acc += &coeffs[k] * sys.inner(sys.root(bi), sys.root(i));
                }
            }
            assert!(
                acc.is_positive() && acc.is_integer(),
                "heights on R^+ must be positive integers"
            );
            (i, acc)
        })
        .collect()
}

/// The canonical Kahler witness: g_a = height of a in R^+ = R_0^+ u Sigma,
/// extended evenly. Positive by dominance, additive by linearity.
pub fn canonical_kahler_metric(j: &ComplexStructure<'_>) -> InvariantMetric {
    let orbit = j.orbit;
    let sys = orbit.system;
    if orbit.dim_m() == 0 {
        return InvariantMetric { g: BTreeMap::new() };
    }
    let heights = rplus_heights(j);
    let mut g = BTreeMap::new();
    for &i in &j.sigma {
        let v = heights[&i].clone();
        g.insert(i, v.clone());
        g.insert(sys.neg_index(i), v);
    }
    InvariantMetric { g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, RootSystemSpec};

    fn sys(name: &str) -> RootSystem {
        build_root_system(&RootSystemSpec::parse(name).unwrap())
    }

    #[test]
    fn full_flag_orbit_shape() {
        let r = sys("A2");
        let orbit = make_orbit(&r, &BTreeSet::new());
        assert_eq!(orbit.dim_m(), 6);
        assert!(orbit.r0.is_empty());
    }

    #[test]
    fn b2_partial_orbit_shape() {
        let r = sys("B2");
        let orbit = make_orbit(&r, &[0].into());
        assert_eq!(orbit.r0.len(), 2);
        assert_eq!(orbit.dim_m(), 6);
    }

    #[test]
    fn degenerate_point_orbit() {
        let r = sys("A2");
        let orbit = make_orbit(&r, &[0, 1].into());
        assert_eq!(orbit.dim_m(), 0);
        let structures = enumerate_complex_structures(&orbit).unwrap();
        assert_eq!(structures.len(), 1);
        assert!(structures[0].sigma.is_empty());
    }

    #[test]
    fn full_flag_structure_counts_match_weyl_order() {
        for (name, count) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12)] {
            let r = sys(name);
            let orbit = make_orbit(&r, &BTreeSet::new());
            let structures = enumerate_complex_structures(&orbit).unwrap();
            assert_eq!(structures.len(), count, "{name}");
            for j in &structures {
                assert!(validate_complex_structure(j).is_ok());
            }
            // negation symmetry on full flags
            let sigmas: BTreeSet<Vec<usize>> =
                structures.iter().map(|j| j.sigma.clone()).collect();
            for j in &structures {
                assert!(sigmas.contains(&j.sigma_negated()), "{name}");
            }
        }
    }

    #[test]
    fn b2_partial_orbit_has_four_structures() {
        let r = sys("B2");
        let orbit = make_orbit(&r, &[0].into());
        let fast = enumerate_complex_structures(&orbit).unwrap();
        assert_eq!(fast.len(), 4);
        let brute = enumerate_complex_structures_bruteforce(&orbit);
        let fast_set: Vec<Vec<usize>> = fast.iter().map(|j| j.sigma.clone()).collect();
        let brute_set: Vec<Vec<usize>> = brute.iter().map(|j| j.sigma.clone()).collect();
        assert_eq!(fast_set, brute_set);
    }

    #[test]
    fn bruteforce_matches_scan_on_rank_two_orbits() {
        for name in ["A1", "A2", "B2", "G2", "A1xA1"] {
            let r = sys(name);
            for mask in 0u32..(1 << r.rank) {
                let s: BTreeSet<usize> = (0..r.rank).filter(|i| mask >> i & 1 == 1).collect();
                let orbit = make_orbit(&r, &s);
                let fast: Vec<Vec<usize>> = enumerate_complex_structures(&orbit)
                    .unwrap()
                    .iter()
                    .map(|j| j.sigma.clone())
                    .collect();
                let brute: Vec<Vec<usize>> = enumerate_complex_structures_bruteforce(&orbit)
                    .iter()
                    .map(|j| j.sigma.clone())
                    .collect();
                assert_eq!(fast, brute, "{name} S={s:?}");
            }
        }
    }

    #[test]
    fn structure_count_equals_weyl_index() {
        let r = sys("B3");
        for mask in 0u32..(1 << r.rank) {
            let s: BTreeSet<usize> = (0..r.rank).filter(|i| mask >> i & 1 == 1).collect();
            let orbit = make_orbit(&r, &s);
            let count = enumerate_complex_structures(&orbit).unwrap().len() as u64;
            // |W| / |W(R_0)| by counting the positive systems of R_0
            let w0 = {
                // brute: orbit of r0_plus under reflections in R_0... easier:
                // count positive systems of the sub-root-system directly
                let subsets = r.positive_systems().unwrap();
                let total = subsets.len() as u64;
                let containing = subsets
                    .iter()
                    .filter(|p| orbit.r0_plus.iter().all(|i| p.indices.contains(i)))
                    .count() as u64;
                total / containing
            };
            assert_eq!(count, r.spec.weyl_order() / w0);
        }
    }

    #[test]
    fn validation_rejects_bad_structures() {
        let r = sys("A2");
        let orbit = make_orbit(&r, &BTreeSet::new());
        let idx = |c: Vec<i64>| r.index_of(&Root { coeffs: c }).unwrap();
        // {a1, a2} misses the pair +-(a1+a2)
        let j = ComplexStructure::new_unchecked(&orbit, vec![idx(vec![1, 0]), idx(vec![0, 1])]);
        assert_eq!(
            validate_complex_structure(&j),
            Err(ValidationError::NotAPartition)
        );

        // valid structure, broken metrics
        let sigma = vec![idx(vec![1, 0]), idx(vec![0, 1]), idx(vec![1, 1])];
        let j = ComplexStructure::new_unchecked(&orbit, sigma);
        assert!(validate_complex_structure(&j).is_ok());
        let good = InvariantMetric::from_pairs(&orbit, &[qi(1), qi(1), qi(1)]);
        assert!(validate_hermitian(&HermitianStructure {
            j: j.clone(),
            metric: good
        })
        .is_ok());
        let zero = InvariantMetric::from_pairs(&orbit, &[qi(0), qi(1), qi(1)]);
        assert_eq!(
            validate_hermitian(&HermitianStructure { j, metric: zero }),
            Err(ValidationError::MetricNotPositive)
        );
    }

    #[test]
    fn kaehler_condition_is_additivity() {
        let r = sys("A2");
        let orbit = make_orbit(&r, &BTreeSet::new());
        let idx = |c: Vec<i64>| r.index_of(&Root { coeffs: c }).unwrap();
        let sigma = vec![idx(vec![1, 0]), idx(vec![0, 1]), idx(vec![1, 1])];
        let j = ComplexStructure::new_unchecked(&orbit, sigma);
        // order of pair reps is lex: [0,1], [1,0], [1,1]
        let m = |a2: i64, a1: i64, th: i64| {
            InvariantMetric::from_pairs(&orbit, &[qi(a2), qi(a1), qi(th)])
        };
        assert!(is_kaehler(&HermitianStructure {
            j: j.clone(),
            metric: m(2, 1, 3)
        }));
        assert!(!is_kaehler(&HermitianStructure {
            j: j.clone(),
            metric: m(2, 1, 4)
        }));
    }

    #[test]
    fn vacuous_kaehler_on_product_flag() {
        let r = sys("A1xA1");
        let orbit = make_orbit(&r, &BTreeSet::new());
        for j in enumerate_complex_structures(&orbit).unwrap() {
            let metric = InvariantMetric::from_pairs(&orbit, &[qi(5), qi(7)]);
            assert!(is_kaehler(&HermitianStructure { j, metric }));
        }
    }

    #[test]
    fn canonical_metric_is_kaehler_everywhere_a3() {
        let r = sys("A3");
        for mask in 0u32..(1 << r.rank) {
            let s: BTreeSet<usize> = (0..r.rank).filter(|i| mask >> i & 1 == 1).collect();
            let orbit = make_orbit(&r, &s);
            for j in enumerate_complex_structures(&orbit).unwrap() {
                let metric = canonical_kahler_metric(&j);
                let h = HermitianStructure { j, metric };
                assert!(validate_hermitian(&h).is_ok());
                assert!(is_kaehler(&h));
            }
        }
    }

    #[test]
    fn real_generator_count_matches_dimension() {
        let r = sys("B2");
        let orbit = make_orbit(&r, &[0].into());
        // one A and one B generator per opposite pair of complementary roots
        assert_eq!(2 * orbit.pair_reps().len(), orbit.dim_m());
    }
}
