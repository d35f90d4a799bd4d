//! Invariant differential forms at the identity coset: the Kahler two-form,
//! a generic exterior-derivative oracle over the tangent-model root vectors,
//! the closed forms for d(omega) and the twisted second derivative, and the
//! assembly of the homogeneous rational linear systems in the metric
//! coefficients.

use crate::chevalley::StructureConstants;
use crate::exact::{qi, CVal, Q, SignSqrt};
use crate::linalg::normalize_row;
use crate::orbit::{ComplexStructure, HermitianStructure, OrbitSpec};
use crate::rootsys::RootSystem;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalcError {
    #[error("exterior derivative supported up to degree 3 inputs, got {0}")]
    DegreeOverflow(usize),
}

/// Evaluation context: a root system with Weyl-normalized constants and a
/// fixed orbit. All methods are pure.
pub struct Calculus<'a> {
    pub system: &'a RootSystem,
    pub constants: &'a StructureConstants<'a>,
    pub orbit: &'a OrbitSpec<'a>,
}

/// A diagonal invariant two-form: value c_a on the pair (E_a, E_{-a}), zero
/// on every pair of root vectors whose roots do not sum to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTwoForm {
    /// c per complementary root index.
    pub coeff: BTreeMap<usize, CVal>,
}

impl InvariantTwoForm {
    /// Checks skewness c_{-a} = -c_a and reality conj(c_a) = c_{-a}.
    pub fn check_invariants(&self, orbit: &OrbitSpec<'_>) -> bool {
        orbit.complementary.iter().all(|&i| {
            let c = &self.coeff[&i];
            let cn = &self.coeff[&orbit.system.neg_index(i)];
            *cn == -c && c.conj() == *cn
        })
    }
}

/// A full antisymmetric value table of degree k on the complementary root
/// vectors, stored on strictly increasing index tuples (nonzero entries only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericInvariantForm {
    pub degree: usize,
    pub values: BTreeMap<Vec<usize>, CVal>,
}

impl GenericInvariantForm {
    pub fn zero(degree: usize) -> Self {
        GenericInvariantForm {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Evaluation on an arbitrary index tuple: sorts with the permutation
    /// sign, returns zero on repeated arguments.
    pub fn value(&self, args: &[usize]) -> CVal {
        assert_eq!(args.len(), self.degree);
        let mut v = args.to_vec();
        let mut sign = 1i64;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return CVal::zero();
        }
        match self.values.get(&v) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => -c,
            None => CVal::zero(),
        }
    }

    fn insert_nonzero(&mut self, key: Vec<usize>, val: CVal) {
        if !val.is_zero() {
            self.values.insert(key, val);
        }
    }
}

/// Homogeneous rational linear system in one unknown per opposite pair of
/// complementary roots.
#[derive(Clone, Debug)]
pub struct LinearSystemQ {
    /// Root indices of the canonical pair representatives, in order.
    pub vars: Vec<usize>,
    /// Primitive integer rows, deduplicated, in generation order.
    pub rows: Vec<Vec<Q>>,
}

impl LinearSystemQ {
    pub fn empty(vars: Vec<usize>) -> Self {
        LinearSystemQ {
            vars,
            rows: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Stacks the rows of two systems over the same unknowns.
    pub fn stacked(&self, other: &LinearSystemQ) -> LinearSystemQ {
        assert_eq!(self.vars, other.vars);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        LinearSystemQ {
            vars: self.vars.clone(),
            rows,
        }
    }

    /// Whether the vector (in var order) annihilates every row.
    pub fn annihilates(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.vars.len());
        self.rows
            .iter()
            .all(|row| crate::linalg::dot(row, v).is_zero())
    }
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl<'a> Calculus<'a> {
    pub fn new(
        system: &'a RootSystem,
        constants: &'a StructureConstants<'a>,
        orbit: &'a OrbitSpec<'a>,
    ) -> Self {
        assert!(constants.has_weyl(), "calculus needs the Weyl table");
        Calculus {
            system,
            constants,
            orbit,
        }
    }

    /// Bracket of root vectors projected to the tangent model: zero when the
    /// sum is not a root, is zero, or lands in R_0 or the Cartan part.
    pub fn bracket_m(&self, i: usize, j: usize) -> Option<(usize, SignSqrt)> {
        let s = self.system.sum_index(i, j)?;
        if self.orbit.is_complementary(s) {
            Some((s, self.constants.weyl_n(i, j)))
        } else {
            None
        }
    }

    /// The Kahler form of a Hermitian structure: c_a = -i g_a epsilon_a.
    pub fn kaehler_form(&self, h: &HermitianStructure<'_>) -> InvariantTwoForm {
        let mut coeff = BTreeMap::new();
        for &i in &self.orbit.complementary {
            let e = h.j.epsilon(i);
            let v = -(h.metric.value(i) * qi(e));
            coeff.insert(i, CVal::imaginary(SignSqrt::from_q(v)));
        }
        InvariantTwoForm { coeff }
    }

    /// Expands a diagonal two-form into a generic degree-2 table.
    pub fn two_form_to_generic(&self, f: &InvariantTwoForm) -> GenericInvariantForm {
        let mut out = GenericInvariantForm::zero(2);
        for &i in &self.orbit.complementary {
            let ni = self.system.neg_index(i);
            if i < ni {
                out.insert_nonzero(vec![i, ni], f.coeff[&i].clone());
            }
        }
        out
    }

    /// Value of the exterior derivative of `f` on a tuple of complementary
    /// root vectors, by the invariant-form formula: sum over argument pairs
    /// of signed evaluations on the projected bracket.
    pub fn d_value(&self, f: &GenericInvariantForm, args: &[usize]) -> CVal {
        assert_eq!(args.len(), f.degree + 1);
        let mut acc = CVal::zero();
        for i in 0..args.len() {
            for j in i + 1..args.len() {
                let Some((b, n)) = self.bracket_m(args[i], args[j]) else {
                    continue;
                };
                let mut rest = Vec::with_capacity(f.degree);
                rest.push(b);
                for (k, &a) in args.iter().enumerate() {
                    if k != i && k != j {
                        rest.push(a);
                    }
                }
                let v = f.value(&rest).scale_sqrt(&n);
                let signed = if (i + j) % 2 == 1 { -&v } else { v };
                acc = &acc + &signed;
            }
        }
        acc
    }

    /// Full exterior derivative table; the generic oracle.
    pub fn exterior_derivative(
        &self,
        f: &GenericInvariantForm,
    ) -> Result<GenericInvariantForm, CalcError> {
        if f.degree > 3 {
            return Err(CalcError::DegreeOverflow(f.degree));
        }
        let mut out = GenericInvariantForm::zero(f.degree + 1);
        for tuple in k_subsets(&self.orbit.complementary, f.degree + 1) {
            let v = self.d_value(f, &tuple);
            out.insert_nonzero(tuple, v);
        }
        Ok(out)
    }

    /// Closed-form d(omega) on a triple of complementary root vectors: zero
    /// unless the roots sum to zero, else -i N'(a,b) (e_a g_a + e_b g_b + e_c g_c).
    pub fn d_omega(&self, h: &HermitianStructure<'_>, a: usize, b: usize, c: usize) -> CVal {
        let sys = self.system;
        let sum: Vec<i64> = (0..sys.rank)
            .map(|k| {
                sys.root(a).coeffs[k] + sys.root(b).coeffs[k] + sys.root(c).coeffs[k]
            })
            .collect();
        if sum.iter().any(|&x| x != 0) {
            return CVal::zero();
        }
        let paren = h.metric.value(a) * qi(h.j.epsilon(a))
            + h.metric.value(b) * qi(h.j.epsilon(b))
            + h.metric.value(c) * qi(h.j.epsilon(c));
        let n = self.constants.weyl_n(a, b);
        CVal::imaginary(-&n.scale(&paren))
    }

    /// The twisted derivative d^J(omega) as a degree-3 table. Convention:
    /// (d^J w)(X,Y,Z) = -(dw)(JX, JY, JZ), which on root vectors multiplies
    /// the closed-form values by i e_a e_b e_c.
    pub fn dj_omega(&self, h: &HermitianStructure<'_>) -> GenericInvariantForm {
        let mut out = GenericInvariantForm::zero(3);
        for tuple in k_subsets(&self.orbit.complementary, 3) {
            let base = self.d_omega(h, tuple[0], tuple[1], tuple[2]);
            if base.is_zero() {
                continue;
            }
            let eee = h.j.epsilon(tuple[0]) * h.j.epsilon(tuple[1]) * h.j.epsilon(tuple[2]);
            let v = base.scale(&qi(eee)).times_i();
            out.insert_nonzero(tuple, v);
        }
        out
    }

    /// Half the value of d(d^J omega) on (E_a, E_b, E_{-a}, E_{-b}) for
    /// a, b in Sigma, in closed form:
    ///   N'(a,b)^2 (g_{a+b} - g_a - g_b)
    ///     + e N'(a,-b)^2 (e g_{a-b} - g_a + g_b)
    /// with e = 0 when a-b is not a root or lies in R_0, and e = +-1 when
    /// a-b lies in +-Sigma. Both summands drop with their bracket: the first
    /// also vanishes when a+b lands in R_0.
    pub fn ddj_value(&self, h: &HermitianStructure<'_>, a: usize, b: usize) -> SignSqrt {
        assert!(h.j.contains(a) && h.j.contains(b), "arguments must lie in Sigma");
        let sys = self.system;
        let mut total = Q::zero();
        if let Some(s) = sys.sum_index(a, b) {
            if self.orbit.is_complementary(s) {
                let nsq = self.constants.weyl_n_squared(a, b);
                total += nsq * (h.metric.value(s) - h.metric.value(a) - h.metric.value(b));
            }
        }
        if let Some(d) = sys.sum_index(a, sys.neg_index(b)) {
            if self.orbit.is_complementary(d) {
                let e = qi(h.j.epsilon(d));
                let nsq = self.constants.weyl_n_squared(a, sys.neg_index(b));
                let paren =
                    &e * h.metric.value(d) - h.metric.value(a) + h.metric.value(b);
                total += nsq * e * paren;
            }
        }
        SignSqrt::from_q(total)
    }

    fn var_pos(&self, vars: &[usize], root_idx: usize) -> usize {
        let rep = self.orbit.pair_rep(root_idx);
        vars.binary_search(&rep).expect("complementary pair variable")
    }

    /// The homogeneous system expressing the vanishing of the twisted second
    /// derivative over all Sigma pairs; rows in canonical pair order,
    /// normalized primitive and deduplicated.
    pub fn ddj_system(&self, j: &ComplexStructure<'_>) -> LinearSystemQ {
        let vars = self.orbit.pair_reps();
        let sys = self.system;
        let mut out = LinearSystemQ::empty(vars.clone());
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        for (k, &a) in j.sigma.iter().enumerate() {
            for &b in &j.sigma[k + 1..] {
                let mut row = vec![Q::zero(); vars.len()];
                if let Some(s) = sys.sum_index(a, b) {
                    if self.orbit.is_complementary(s) {
                        let nsq = self.constants.weyl_n_squared(a, b);
                        row[self.var_pos(&vars, s)] += &nsq;
                        row[self.var_pos(&vars, a)] -= &nsq;
                        row[self.var_pos(&vars, b)] -= &nsq;
                    }
                }
                if let Some(d) = sys.sum_index(a, sys.neg_index(b)) {
                    if self.orbit.is_complementary(d) {
                        let e = qi(j.epsilon(d));
                        let nsq = self.constants.weyl_n_squared(a, sys.neg_index(b));
                        row[self.var_pos(&vars, d)] += &nsq;
                        row[self.var_pos(&vars, a)] -= &nsq * &e;
                        row[self.var_pos(&vars, b)] += &nsq * &e;
                    }
                }
                if row.iter().any(|q| !q.is_zero()) {
                    let norm = normalize_row(&row);
                    if seen.insert(norm.clone()) {
                        out.rows.push(norm);
                    }
                }
            }
        }
        out
    }

    /// The additivity system: one row per Sigma pair whose sum stays in Sigma.
    pub fn kahler_system(&self, j: &ComplexStructure<'_>) -> LinearSystemQ {
        let vars = self.orbit.pair_reps();
        let sys = self.system;
        let mut out = LinearSystemQ::empty(vars.clone());
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        for (k, &a) in j.sigma.iter().enumerate() {
            for &b in &j.sigma[k + 1..] {
                let Some(s) = sys.sum_index(a, b) else { continue };
                if !j.contains(s) {
                    continue;
                }
                let mut row = vec![Q::zero(); vars.len()];
                row[self.var_pos(&vars, s)] += qi(1);
                row[self.var_pos(&vars, a)] -= qi(1);
                row[self.var_pos(&vars, b)] -= qi(1);
                let norm = normalize_row(&row);
                if seen.insert(norm.clone()) {
                    out.rows.push(norm);
                }
            }
        }
        out
    }

    /// Metric coefficients as a vector over the system unknowns.
    pub fn metric_vector(&self, h: &HermitianStructure<'_>) -> Vec<Q> {
        h.metric.pair_values(self.orbit)
    }
}
