//! Root systems of semisimple type: construction by reflection closure from
//! the simple-root base, the symmetrized invariant form, positive systems and
//! the Weyl group as explicit root permutations.
//!
//! Roots are integer coefficient vectors over the simple-root base; all
//! arithmetic on them stays integral. The invariant form is normalized so
//! long roots in each simple component have squared length 2.

use crate::exact::{qi, qr, Q};
use num::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// One of the Cartan-Killing families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A simple type: family plus rank, validated against the classical table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("invalid type {family:?}{rank}: {reason}")]
    InvalidRank {
        family: Family,
        rank: usize,
        reason: &'static str,
    },
    #[error("cannot parse type string {0:?}")]
    Parse(String),
    #[error("Weyl group of order {order} exceeds the materialization limit {limit}")]
    WeylTooLarge { order: u64, limit: u64 },
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self, TypeError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(TypeError::InvalidRank {
                family,
                rank,
                reason: "outside the valid Cartan-Killing range",
            })
        }
    }

    /// Number of roots of the simple system.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1_152,
            Family::G => 12,
        }
    }

    /// Pairs (i, j, value) with i <= j describing the symmetrized form on the
    /// simple roots, long roots normalized to squared length 2.
    fn gram_entries(&self) -> Vec<(usize, usize, Q)> {
        let n = self.rank;
        let mut e = Vec::new();
        let diag = |v: &mut Vec<(usize, usize, Q)>, i: usize, q: Q| v.push((i, i, q));
        let off = |v: &mut Vec<(usize, usize, Q)>, i: usize, j: usize, q: Q| {
            v.push((i.min(j), i.max(j), q))
        };
        match self.family {
            Family::A => {
                for i in 0..n {
                    diag(&mut e, i, qi(2));
                }
                for i in 0..n - 1 {
                    off(&mut e, i, i + 1, qi(-1));
                }
            }
            Family::B => {
                // last simple root short
                for i in 0..n - 1 {
                    diag(&mut e, i, qi(2));
                }
                diag(&mut e, n - 1, qi(1));
                for i in 0..n - 1 {
                    off(&mut e, i, i + 1, qi(-1));
                }
            }
            Family::C => {
                // last simple root long
                for i in 0..n - 1 {
                    diag(&mut e, i, qi(1));
                }
                diag(&mut e, n - 1, qi(2));
                for i in 0..n.saturating_sub(2) {
                    off(&mut e, i, i + 1, qr(-1, 2));
                }
                off(&mut e, n - 2, n - 1, qi(-1));
            }
            Family::D => {
                for i in 0..n {
                    diag(&mut e, i, qi(2));
                }
                for i in 0..n - 2 {
                    off(&mut e, i, i + 1, qi(-1));
                }
                off(&mut e, n - 3, n - 1, qi(-1));
            }
            Family::E => {
                for i in 0..n {
                    diag(&mut e, i, qi(2));
                }
                // Bourbaki: chain 1-3-4-5-...-n with node 2 attached to 4
                off(&mut e, 0, 2, qi(-1));
                off(&mut e, 1, 3, qi(-1));
                for i in 2..n - 1 {
                    off(&mut e, i, i + 1, qi(-1));
                }
            }
            Family::F => {
                diag(&mut e, 0, qi(2));
                diag(&mut e, 1, qi(2));
                diag(&mut e, 2, qi(1));
                diag(&mut e, 3, qi(1));
                off(&mut e, 0, 1, qi(-1));
                off(&mut e, 1, 2, qi(-1));
                off(&mut e, 2, 3, qr(-1, 2));
            }
            Family::G => {
                // first simple root short
                diag(&mut e, 0, qr(2, 3));
                diag(&mut e, 1, qi(2));
                off(&mut e, 0, 1, qi(-1));
            }
        }
        e
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// A direct sum of simple types, modeling a semisimple algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystemSpec {
    pub components: Vec<SimpleType>,
}

impl RootSystemSpec {
    pub fn new(components: Vec<SimpleType>) -> Result<Self, TypeError> {
        if components.is_empty() {
            return Err(TypeError::Parse("empty component list".into()));
        }
        Ok(RootSystemSpec { components })
    }

    /// Parses compact names like "A2", "B3" or "A1xA1xG2" (case-insensitive).
    pub fn parse(s: &str) -> Result<Self, TypeError> {
        let mut comps = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('A') => Family::A,
                Some('B') => Family::B,
                Some('C') => Family::C,
                Some('D') => Family::D,
                Some('E') => Family::E,
                Some('F') => Family::F,
                Some('G') => Family::G,
                _ => return Err(TypeError::Parse(s.into())),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| TypeError::Parse(s.into()))?;
            comps.push(SimpleType::new(fam, rank)?);
        }
        RootSystemSpec::new(comps)
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn weyl_order(&self) -> u64 {
        self.components.iter().map(|c| c.weyl_order()).product()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(|c| c.root_count()).sum()
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", names.join("x"))
    }
}

/// A root in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn neg(&self) -> Root {
        Root {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c > 0 && !first {
                write!(f, "+")?;
            }
            if c == -1 {
                write!(f, "-")?;
            } else if c != 1 {
                write!(f, "{c}")?;
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of adding two roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSum {
    /// The sum is again a root.
    Root(Root),
    /// The summands are opposite; the sum is zero, which is never a root.
    Opposite,
    /// The sum is neither zero nor a root.
    NotARoot,
}

/// Upper bound on Weyl groups we will materialize as permutation lists.
pub const WEYL_MATERIALIZE_LIMIT: u64 = 200_000;

/// A full root system with its lookup tables. Immutable after construction.
pub struct RootSystem {
    pub spec: RootSystemSpec,
    pub rank: usize,
    /// Symmetrized invariant form on the simple roots (block diagonal).
    pub gram: Vec<Vec<Q>>,
    /// All roots, sorted lexicographically by coefficient vector.
    pub roots: Vec<Root>,
    /// Simple roots (unit coefficient vectors), in base order.
    pub base: Vec<Root>,
    index: HashMap<Root, usize>,
    neg: Vec<usize>,
    /// Dense sum table: entry i*len+j is the index of roots[i]+roots[j].
    sum: Vec<Option<usize>>,
    /// Indices of the positive roots with respect to the base.
    pub positives: Vec<usize>,
    /// Component id of each simple root position.
    pub component_of_base: Vec<usize>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} roots)", self.spec, self.roots.len())
    }
}

/// Builds the root system generated from the standard base by reflection
/// closure. Positivity is read off the base coordinates.
pub fn build_root_system(spec: &RootSystemSpec) -> RootSystem {
    let rank = spec.total_rank();
    let mut gram = vec![vec![Q::zero(); rank]; rank];
    let mut component_of_base = vec![0usize; rank];
    let mut offset = 0;
    for (ci, comp) in spec.components.iter().enumerate() {
        for (i, j, q) in comp.gram_entries() {
            gram[offset + i][offset + j] = q.clone();
            gram[offset + j][offset + i] = q;
        }
        for k in 0..comp.rank {
            component_of_base[offset + k] = ci;
        }
        offset += comp.rank;
    }

    let base: Vec<Root> = (0..rank)
        .map(|i| {
            let mut coeffs = vec![0i64; rank];
            coeffs[i] = 1;
            Root { coeffs }
        })
        .collect();

    let inner_vec = |a: &[i64], b: &[i64]| -> Q {
        let mut acc = Q::zero();
        for i in 0..rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..rank {
                if b[j] == 0 {
                    continue;
                }
                acc += &gram[i][j] * qi(a[i]) * qi(b[j]);
            }
        }
        acc
    };

    // reflection closure from the base
    let mut seen: BTreeSet<Root> = base.iter().cloned().collect();
    for r in &base {
        seen.insert(r.neg());
    }
    let mut queue: VecDeque<Root> = seen.iter().cloned().collect();
    while let Some(r) = queue.pop_front() {
        for (i, simple) in base.iter().enumerate() {
            // s_i(r) = r - <r, a_i^vee> a_i
            let num = qi(2) * inner_vec(&r.coeffs, &simple.coeffs);
            let den = inner_vec(&simple.coeffs, &simple.coeffs);
            let c = num / den;
            assert!(c.is_integer(), "Cartan pairing must be integral");
            let c = c.to_integer().to_i64().expect("Cartan integer overflow");
            if c == 0 {
                continue;
            }
            let mut coeffs = r.coeffs.clone();
            coeffs[i] -= c;
            let refl = Root { coeffs };
            if seen.insert(refl.clone()) {
                queue.push_back(refl);
            }
        }
    }

    let roots: Vec<Root> = seen.into_iter().collect();
    assert_eq!(
        roots.len(),
        spec.root_count(),
        "reflection closure produced a wrong root count for {spec}"
    );

    let index: HashMap<Root, usize> = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();
    let neg: Vec<usize> = roots.iter().map(|r| index[&r.neg()]).collect();
    let positives: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_positive())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(2 * positives.len(), roots.len());

    let n = roots.len();
    let mut sum = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let coeffs: Vec<i64> = roots[i]
                .coeffs
                .iter()
                .zip(&roots[j].coeffs)
                .map(|(x, y)| x + y)
                .collect();
            sum[i * n + j] = index.get(&Root { coeffs }).copied();
        }
    }

    RootSystem {
        spec: spec.clone(),
        rank,
        gram,
        roots,
        base,
        index,
        neg,
        sum,
        positives,
        component_of_base,
    }
}

impl RootSystem {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    /// Index of the i-th simple root inside `roots`.
    pub fn base_index(&self, i: usize) -> usize {
        self.index[&self.base[i]]
    }

    /// The symmetric invariant form on arbitrary integer vectors in the root
    /// lattice. Exact rational, positive definite.
    pub fn inner(&self, a: &Root, b: &Root) -> Q {
        assert_eq!(a.coeffs.len(), self.rank, "dimension mismatch");
        assert_eq!(b.coeffs.len(), self.rank, "dimension mismatch");
        let mut acc = Q::zero();
        for i in 0..self.rank {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.coeffs[j] == 0 {
                    continue;
                }
                acc += &self.gram[i][j] * qi(a.coeffs[i]) * qi(b.coeffs[j]);
            }
        }
        acc
    }

    /// Cartan pairing <a, b^vee> = 2(a,b)/(b,b); always an integer for roots.
    pub fn cartan_int(&self, a: &Root, b: &Root) -> i64 {
        let c = qi(2) * self.inner(a, b) / self.inner(b, b);
        assert!(c.is_integer());
        c.to_integer().to_i64().expect("Cartan integer overflow")
    }

    pub fn sum_root(&self, a: &Root, b: &Root) -> RootSum {
        let coeffs: Vec<i64> = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        if coeffs.iter().all(|&c| c == 0) {
            return RootSum::Opposite;
        }
        let cand = Root { coeffs };
        if self.index.contains_key(&cand) {
            RootSum::Root(cand)
        } else {
            RootSum::NotARoot
        }
    }

    /// Index-level sum: Some(k) if roots[i] + roots[j] = roots[k].
    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        self.sum[i * self.roots.len() + j]
    }

    /// Largest k with b - k*a still a root (the "down" string length).
    pub fn string_down(&self, a: usize, b: usize) -> i64 {
        let mut k = 0i64;
        let mut cur = self.roots[b].clone();
        loop {
            let coeffs: Vec<i64> = cur
                .coeffs
                .iter()
                .zip(&self.roots[a].coeffs)
                .map(|(x, y)| x - y)
                .collect();
            if coeffs.iter().all(|&c| c == 0) {
                break;
            }
            let cand = Root { coeffs };
            if !self.index.contains_key(&cand) {
                break;
            }
            k += 1;
            cur = cand;
        }
        k
    }

    /// The reflection in root `a` as a permutation of root indices.
    pub fn reflection_perm(&self, a: usize) -> Vec<usize> {
        let ra = &self.roots[a];
        (0..self.len())
            .map(|b| {
                let c = self.cartan_int(&self.roots[b], ra);
                let coeffs: Vec<i64> = self.roots[b]
                    .coeffs
                    .iter()
                    .zip(&ra.coeffs)
                    .map(|(x, y)| x - c * y)
                    .collect();
                self.index[&Root { coeffs }]
            })
            .collect()
    }

    /// All elements of the Weyl group as permutations of the root list,
    /// generated by the simple reflections. Errors above the size limit.
    pub fn weyl_group(&self) -> Result<Vec<Vec<usize>>, TypeError> {
        let order = self.spec.weyl_order();
        if order > WEYL_MATERIALIZE_LIMIT {
            return Err(TypeError::WeylTooLarge {
                order,
                limit: WEYL_MATERIALIZE_LIMIT,
            });
        }
        let gens: Vec<Vec<usize>> = (0..self.rank)
            .map(|i| self.reflection_perm(self.base_index(i)))
            .collect();
        let identity: Vec<usize> = (0..self.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                // compose: (g . w)(r) = g[w[r]]
                let composed: Vec<usize> = w.iter().map(|&r| g[r]).collect();
                if seen.insert(composed.clone()) {
                    queue.push_back(composed);
                }
            }
        }
        assert_eq!(seen.len() as u64, order, "Weyl closure has wrong order");
        Ok(seen.into_iter().collect())
    }

    /// All positive systems, as the Weyl orbit of the standard positives.
    pub fn positive_systems(&self) -> Result<Vec<RootSubset<'_>>, TypeError> {
        let weyl = self.weyl_group()?;
        let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for w in &weyl {
            out.insert(self.positives.iter().map(|&i| w[i]).collect());
        }
        assert_eq!(out.len(), weyl.len());
        Ok(out
            .into_iter()
            .map(|indices| RootSubset {
                system: self,
                indices,
            })
            .collect())
    }
}

/// A subset of the roots of a fixed system.
#[derive(Clone)]
pub struct RootSubset<'a> {
    pub system: &'a RootSystem,
    pub indices: BTreeSet<usize>,
}

impl<'a> RootSubset<'a> {
    pub fn new(system: &'a RootSystem, indices: BTreeSet<usize>) -> Self {
        assert!(indices.iter().all(|&i| i < system.len()));
        RootSubset { system, indices }
    }

    pub fn roots(&self) -> impl Iterator<Item = &Root> + '_ {
        self.indices.iter().map(|&i| self.system.root(i))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    /// Closed in the strict sense: any pairwise sum that is a root of the
    /// ambient system again lies in the subset.
    pub fn is_closed(&self) -> bool {
        for &a in &self.indices {
            for &b in &self.indices {
                if let Some(c) = self.system.sum_index(a, b) {
                    if !self.indices.contains(&c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the positive-system axioms directly from the definition.
    pub fn is_positive_system(&self) -> bool {
        if 2 * self.indices.len() != self.system.len() {
            return false;
        }
        for &i in &self.indices {
            if self.indices.contains(&self.system.neg_index(i)) {
                return false;
            }
        }
        self.is_closed()
    }
}

impl fmt::Debug for RootSubset<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.indices.iter().map(|&i| self.system.root(i)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    fn sys(name: &str) -> RootSystem {
        build_root_system(&RootSystemSpec::parse(name).unwrap())
    }

    #[test]
    fn a1_has_two_roots() {
        let r = sys("A1");
        assert_eq!(r.len(), 2);
        assert_eq!(r.positives.len(), 1);
    }

    #[test]
    fn a2_reflection_closure() {
        let r = sys("A2");
        assert_eq!(r.len(), 6);
        let pos: BTreeSet<&Root> = r.positives.iter().map(|&i| r.root(i)).collect();
        let expected = [vec![1, 0], vec![0, 1], vec![1, 1]];
        let expected: BTreeSet<Root> = expected
            .into_iter()
            .map(|coeffs| Root { coeffs })
            .collect();
        assert_eq!(pos, expected.iter().collect());
    }

    #[test]
    fn g2_highest_root_and_count() {
        let r = sys("G2");
        assert_eq!(r.len(), 12);
        assert_eq!(r.positives.len(), 6);
        let highest = Root { coeffs: vec![3, 2] };
        assert!(r.index_of(&highest).is_some());
        // short/long length ratio 1/3
        let short = Root { coeffs: vec![1, 0] };
        let long = Root { coeffs: vec![0, 1] };
        assert_eq!(r.inner(&short, &short) / r.inner(&long, &long), qr(1, 3));
    }

    #[test]
    fn classical_counts() {
        for (name, count) in [
            ("A3", 12),
            ("B2", 8),
            ("B3", 18),
            ("C3", 18),
            ("D4", 24),
            ("F4", 48),
        ] {
            assert_eq!(sys(name).len(), count, "{name}");
        }
    }

    #[test]
    fn direct_sum_roots_have_single_component_support() {
        let r = sys("A1xG2");
        assert_eq!(r.len(), 2 + 12);
        for root in &r.roots {
            let sup_first = root.coeffs[0] != 0;
            let sup_second = root.coeffs[1..].iter().any(|&c| c != 0);
            assert!(sup_first ^ sup_second);
        }
        // roots from different components never sum to a root
        let a = Root {
            coeffs: vec![1, 0, 0],
        };
        let b = Root {
            coeffs: vec![0, 1, 0],
        };
        assert_eq!(r.sum_root(&a, &b), RootSum::NotARoot);
    }

    #[test]
    fn inner_normalization_and_symmetry() {
        let r = sys("A2");
        let a1 = Root { coeffs: vec![1, 0] };
        assert_eq!(r.inner(&a1, &a1), qi(2));
        for a in &r.roots {
            assert!(r.inner(a, a).is_positive());
            for b in &r.roots {
                assert_eq!(r.inner(a, b), r.inner(b, a));
            }
        }
    }

    #[test]
    fn sum_root_outcomes() {
        let r = sys("A2");
        let a1 = Root { coeffs: vec![1, 0] };
        let a2 = Root { coeffs: vec![0, 1] };
        assert_eq!(
            r.sum_root(&a1, &a2),
            RootSum::Root(Root { coeffs: vec![1, 1] })
        );
        assert_eq!(r.sum_root(&a1, &a1), RootSum::NotARoot);
        assert_eq!(r.sum_root(&a1, &a1.neg()), RootSum::Opposite);
    }

    #[test]
    fn reflections_permute_roots() {
        for name in ["A2", "B2", "G2", "A1xA1"] {
            let r = sys(name);
            for i in 0..r.rank {
                let perm = r.reflection_perm(r.base_index(i));
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..r.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn weyl_group_orders() {
        for (name, order) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A1xA1", 4)] {
            let r = sys(name);
            assert_eq!(r.weyl_group().unwrap().len(), order, "{name}");
        }
    }

    #[test]
    fn exceptional_series_constructs() {
        for (name, count) in [("E6", 72), ("E7", 126), ("E8", 240)] {
            let r = sys(name);
            assert_eq!(r.len(), count, "{name}");
            for i in 0..r.len() {
                assert_eq!(r.neg_index(r.neg_index(i)), i);
            }
        }
    }

    #[test]
    fn weyl_too_large_is_an_error() {
        let r = sys("E7");
        assert!(matches!(
            r.weyl_group(),
            Err(TypeError::WeylTooLarge { .. })
        ));
    }

    #[test]
    fn positive_system_counts() {
        for (name, count) in [("A1", 2), ("A2", 6), ("B2", 8)] {
            let r = sys(name);
            let systems = r.positive_systems().unwrap();
            assert_eq!(systems.len(), count, "{name}");
            for p in &systems {
                assert!(p.is_positive_system());
            }
        }
    }

    #[test]
    fn positive_systems_match_bruteforce_on_rank_two() {
        // brute force over all subsets picking one root per +- pair
        for name in ["A2", "B2", "G2"] {
            let r = sys(name);
            let pairs: Vec<(usize, usize)> = r
                .positives
                .iter()
                .map(|&i| (i, r.neg_index(i)))
                .collect();
            let mut brute = BTreeSet::new();
            for mask in 0u32..(1 << pairs.len()) {
                let mut indices = BTreeSet::new();
                for (bit, &(p, n)) in pairs.iter().enumerate() {
                    indices.insert(if mask >> bit & 1 == 1 { n } else { p });
                }
                let sub = RootSubset::new(&r, indices.clone());
                if sub.is_positive_system() {
                    brute.insert(indices);
                }
            }
            let weyl_orbit: BTreeSet<BTreeSet<usize>> = r
                .positive_systems()
                .unwrap()
                .into_iter()
                .map(|s| s.indices)
                .collect();
            assert_eq!(brute, weyl_orbit, "{name}");
        }
    }

    #[test]
    fn closed_subsets() {
        let r = sys("A2");
        let idx = |c: Vec<i64>| r.index_of(&Root { coeffs: c }).unwrap();
        let closed = RootSubset::new(
            &r,
            [idx(vec![1, 0]), idx(vec![0, 1]), idx(vec![1, 1])].into(),
        );
        assert!(closed.is_closed());
        let open = RootSubset::new(&r, [idx(vec![1, 0]), idx(vec![0, 1])].into());
        assert!(!open.is_closed());
        let empty = RootSubset::new(&r, BTreeSet::new());
        assert!(empty.is_closed());
    }

    #[test]
    fn is_closed_matches_pair_scan_exhaustively_rank_two() {
        for name in ["A2", "B2", "G2"] {
            let r = sys(name);
            exhaustive_closed_scan(&r);
        }
    }

    fn exhaustive_closed_scan(r: &RootSystem) {
        for mask in 0u32..(1 << r.len()) {
            let indices: BTreeSet<usize> = (0..r.len()).filter(|i| mask >> i & 1 == 1).collect();
            let sub = RootSubset::new(r, indices.clone());
            let mut expect = true;
            'outer: for &a in &indices {
                for &b in &indices {
                    if let Some(c) = r.sum_index(a, b) {
                        if !indices.contains(&c) {
                            expect = false;
                            break 'outer;
                        }
                    }
                }
            }
            assert_eq!(sub.is_closed(), expect);
        }
    }

    #[test]
    fn parse_type_strings() {
        assert!(RootSystemSpec::parse("a1xa1xg2").is_ok());
        assert_eq!(RootSystemSpec::parse("A2").unwrap().total_rank(), 2);
        assert!(RootSystemSpec::parse("Z9").is_err());
        assert!(RootSystemSpec::parse("C2").is_err());
        assert!(RootSystemSpec::parse("E9").is_err());
        assert!(RootSystemSpec::parse("").is_err());
    }
}
