//! Chevalley structure constants, the Killing form by adjoint traces, and
//! the rescaling to a Weyl basis with pairing 1 on opposite root vectors.
//!
//! Signs are fixed by the extraspecial-pair convention (Carter, "Simple
//! Groups of Lie Type", ch. 4): positive roots are totally ordered by height
//! then lexicographically; for each non-simple positive root the special pair
//! with the least first member gets a positive constant, and every other
//! constant is propagated through the standard bilinear relations and the
//! Jacobi identity. The result is deterministic given the base ordering.

use crate::exact::{qi, CVal, Q, SignSqrt};
use crate::linalg::QMat;
use crate::rootsys::{Root, RootSystem};
use num::{Signed, ToPrimitive};
use std::collections::HashMap;

/// Position of an element in the adjoint basis: the simple coroots first,
/// then the root vectors in canonical root order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElt {
    Cartan(usize),
    RootVec(usize),
}

/// Structure constant tables over a fixed root system.
///
/// `n_chev` holds the integer constants of the Chevalley basis; the Weyl
/// table is present after `weyl_normalize` and holds sign-times-square-root
/// values. Cartan brackets [E_a, E_{-a}] are stored as coroot coefficient
/// vectors over the simple coroots.
pub struct StructureConstants<'a> {
    pub system: &'a RootSystem,
    n_chev: Vec<i64>,
    coroot: Vec<Vec<i64>>,
    weyl: Option<Vec<SignSqrt>>,
}

/// Killing form data computed from explicit adjoint matrices.
pub struct KillingTable {
    /// kappa(E_a, E_{-a}) per root index; positive rationals.
    pub kappa: Vec<Q>,
    /// Killing form restricted to the simple coroots.
    pub kappa_h: QMat,
}

fn pair_key(len: usize, i: usize, j: usize) -> usize {
    i * len + j
}

/// Computes the integer Chevalley table for the given system.
pub fn chevalley_constants(system: &RootSystem) -> StructureConstants<'_> {
    Builder::new(system).build()
}

struct Builder<'a> {
    system: &'a RootSystem,
    /// positive root indices sorted by (height, lex); position = total order
    order: Vec<usize>,
    rank_in_order: HashMap<usize, usize>,
    n_pos: HashMap<(usize, usize), i64>,
}

impl<'a> Builder<'a> {
    fn new(system: &'a RootSystem) -> Self {
        let mut order: Vec<usize> = system.positives.clone();
        order.sort_by_key(|&i| (system.root(i).height(), system.root(i).coeffs.clone()));
        let rank_in_order = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        Builder {
            system,
            order,
            rank_in_order,
            n_pos: HashMap::new(),
        }
    }

    fn norm(&self, i: usize) -> Q {
        self.system.inner(self.system.root(i), self.system.root(i))
    }

    /// N for an arbitrary ordered pair of root indices whose sum is a root.
    /// Positive canonical pairs must already be present in the table.
    fn n_get(&self, i: usize, j: usize) -> i64 {
        let (a_pos, b_pos) = (
            self.system.root(i).is_positive(),
            self.system.root(j).is_positive(),
        );
        match (a_pos, b_pos) {
            (true, true) => {
                if self.rank_in_order[&i] < self.rank_in_order[&j] {
                    *self
                        .n_pos
                        .get(&(i, j))
                        .expect("positive pair referenced before computation")
                } else {
                    -self.n_get(j, i)
                }
            }
            (false, false) => -self.n_get(self.system.neg_index(i), self.system.neg_index(j)),
            (false, true) => -self.n_get(j, i),
            (true, false) => {
                // N(a, -d) with a, d positive and a - d a root.
                let d = self.system.neg_index(j);
                let diff = self
                    .system
                    .sum_index(i, j)
                    .expect("mixed pair without root sum");
                if self.system.root(diff).is_positive() {
                    // N(a,-d) = -((a-d,a-d)/(a,a)) * N(d, a-d)
                    let ratio = self.norm(diff) / self.norm(i);
                    let val = -ratio * qi(self.n_get(d, diff));
                    assert!(val.is_integer(), "non-integral mixed constant");
                    val.to_integer().to_i64().unwrap()
                } else {
                    // N(a,-d) = ((d-a,d-a)/(d,d)) * N(d-a, a)
                    let dminus = self.system.neg_index(diff);
                    let ratio = self.norm(dminus) / self.norm(d);
                    let val = ratio * qi(self.n_get(dminus, i));
                    assert!(val.is_integer(), "non-integral mixed constant");
                    val.to_integer().to_i64().unwrap()
                }
            }
        }
    }

    fn build(mut self) -> StructureConstants<'a> {
        let system = self.system;
        // process positive roots by increasing total order
        for pos in 0..self.order.len() {
            let gamma = self.order[pos];
            // special pairs (a, b): positive, a + b = gamma, a < b in the order
            let mut special: Vec<(usize, usize)> = Vec::new();
            for &a in &self.order {
                if self.rank_in_order[&a] >= pos {
                    break;
                }
                let b_coeffs: Vec<i64> = system
                    .root(gamma)
                    .coeffs
                    .iter()
                    .zip(&system.root(a).coeffs)
                    .map(|(g, x)| g - x)
                    .collect();
                if let Some(b) = system.index_of(&Root { coeffs: b_coeffs }) {
                    if system.root(b).is_positive()
                        && self.rank_in_order[&a] < self.rank_in_order[&b]
                    {
                        special.push((a, b));
                    }
                }
            }
            if special.is_empty() {
                continue;
            }
            special.sort_by_key(|&(a, _)| self.rank_in_order[&a]);
            let (alpha, beta) = special[0];
            let p = system.string_down(alpha, beta);
            self.n_pos.insert((alpha, beta), p + 1);

            for &(xi, eta) in &special[1..] {
                // Jacobi identity on (-xi, -eta, E_beta) against the
                // extraspecial pair, solved for N(xi, eta):
                //   N(xi,eta) * N(alpha,beta) * (alpha,alpha)/(gamma,gamma)
                //     = -[ N(-eta,beta) N(beta-eta,-xi) + N(beta,-xi) N(beta-xi,-eta) ]
                let neg_xi = system.neg_index(xi);
                let neg_eta = system.neg_index(eta);
                let mut rhs = 0i64;
                if let Some(beta_minus_eta) = system.sum_index(beta, neg_eta) {
                    rhs += self.n_get(neg_eta, beta) * self.n_get(beta_minus_eta, neg_xi);
                }
                if let Some(beta_minus_xi) = system.sum_index(beta, neg_xi) {
                    rhs += self.n_get(beta, neg_xi) * self.n_get(beta_minus_xi, neg_eta);
                }
                let n_xsp = *self.n_pos.get(&(alpha, beta)).unwrap();
                let val = -qi(rhs) * self.norm(gamma) / (self.norm(alpha) * qi(n_xsp));
                assert!(val.is_integer(), "non-integral propagated constant");
                let val = val.to_integer().to_i64().unwrap();
                let expect = system.string_down(xi, eta) + 1;
                assert_eq!(
                    val.abs(),
                    expect,
                    "propagated constant breaks the root-string bound"
                );
                self.n_pos.insert((xi, eta), val);
            }
        }

        // materialize the full table
        let len = system.len();
        let mut n_chev = vec![0i64; len * len];
        for i in 0..len {
            for j in 0..len {
                if system.sum_index(i, j).is_some() {
                    n_chev[pair_key(len, i, j)] = self.n_get(i, j);
                }
            }
        }

        // coroot coefficients of [E_a, E_{-a}] over the simple coroots:
        // a^vee = sum_k m_k (a_k,a_k)/(a,a) a_k^vee
        let coroot: Vec<Vec<i64>> = (0..len)
            .map(|i| {
                let a = system.root(i);
                let na = system.inner(a, a);
                (0..system.rank)
                    .map(|k| {
                        let sk = &system.base[k];
                        let c = qi(a.coeffs[k]) * system.inner(sk, sk) / na.clone();
                        assert!(c.is_integer(), "coroot coefficients must be integral");
                        c.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();

        let sc = StructureConstants {
            system,
            n_chev,
            coroot,
            weyl: None,
        };
        sc.assert_basic_identities();
        sc
    }
}

impl<'a> StructureConstants<'a> {
    /// Chevalley constant N(a, b); zero when a+b is not a root.
    pub fn n(&self, i: usize, j: usize) -> i64 {
        self.n_chev[pair_key(self.system.len(), i, j)]
    }

    /// Coroot coefficient vector of [E_a, E_{-a}].
    pub fn coroot_coeffs(&self, i: usize) -> &[i64] {
        &self.coroot[i]
    }

    /// Weyl-normalized constant; panics before `weyl_normalize`.
    pub fn weyl_n(&self, i: usize, j: usize) -> SignSqrt {
        self.weyl.as_ref().expect("Weyl table not yet computed")
            [pair_key(self.system.len(), i, j)]
        .clone()
    }

    pub fn has_weyl(&self) -> bool {
        self.weyl.is_some()
    }

    /// Exact square of the Weyl-normalized constant, as a rational.
    pub fn weyl_n_squared(&self, i: usize, j: usize) -> Q {
        self.weyl_n(i, j).square()
    }

    fn assert_basic_identities(&self) {
        let sys = self.system;
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                let n = self.n(i, j);
                if sys.sum_index(i, j).is_some() {
                    assert_ne!(n, 0);
                    assert_eq!(n, -self.n(j, i), "antisymmetry");
                    assert_eq!(
                        n,
                        -self.n(sys.neg_index(i), sys.neg_index(j)),
                        "sign relation on negated pairs"
                    );
                    assert_eq!(
                        n.abs(),
                        sys.string_down(i, j) + 1,
                        "|N| must be p+1 for {:?},{:?}",
                        sys.root(i),
                        sys.root(j)
                    );
                } else {
                    assert_eq!(n, 0);
                }
            }
        }
    }

    /// Adjoint basis dimension: simple coroots plus root vectors.
    pub fn dim(&self) -> usize {
        self.system.rank + self.system.len()
    }

    /// Bracket of two adjoint basis elements as a sparse integer vector over
    /// the adjoint basis (Cartan block first).
    pub fn bracket_basis(&self, u: BasisElt, v: BasisElt) -> Vec<(usize, i64)> {
        let sys = self.system;
        let rank = sys.rank;
        match (u, v) {
            (BasisElt::Cartan(_), BasisElt::Cartan(_)) => vec![],
            (BasisElt::Cartan(k), BasisElt::RootVec(b)) => {
                let c = sys.cartan_int(sys.root(b), &sys.base[k]);
                if c == 0 {
                    vec![]
                } else {
                    vec![(rank + b, c)]
                }
            }
            (BasisElt::RootVec(a), BasisElt::Cartan(k)) => {
                let c = sys.cartan_int(sys.root(a), &sys.base[k]);
                if c == 0 {
                    vec![]
                } else {
                    vec![(rank + a, -c)]
                }
            }
            (BasisElt::RootVec(a), BasisElt::RootVec(b)) => {
                if sys.neg_index(a) == b {
                    self.coroot[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (k, c))
                        .collect()
                } else if let Some(s) = sys.sum_index(a, b) {
                    vec![(rank + s, self.n(a, b))]
                } else {
                    vec![]
                }
            }
        }
    }

    fn basis_elt(&self, pos: usize) -> BasisElt {
        if pos < self.system.rank {
            BasisElt::Cartan(pos)
        } else {
            BasisElt::RootVec(pos - self.system.rank)
        }
    }

    /// Bracket of sparse integer vectors over the adjoint basis.
    pub fn bracket_sparse(
        &self,
        x: &[(usize, i64)],
        y: &[(usize, i64)],
    ) -> Vec<(usize, i64)> {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(u, cu) in x {
            for &(v, cv) in y {
                for (w, cw) in self.bracket_basis(self.basis_elt(u), self.basis_elt(v)) {
                    *acc.entry(w).or_insert(0) += cu * cv * cw;
                }
            }
        }
        let mut out: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort_unstable();
        out
    }

    /// Exhaustive Jacobi identity over the adjoint basis.
    pub fn jacobi_holds(&self) -> bool {
        let d = self.dim();
        let elt = |p: usize| vec![(p, 1i64)];
        for u in 0..d {
            for v in u + 1..d {
                let uv = self.bracket_sparse(&elt(u), &elt(v));
                for w in v + 1..d {
                    let vw = self.bracket_sparse(&elt(v), &elt(w));
                    let wu = self.bracket_sparse(&elt(w), &elt(u));
                    let mut acc: HashMap<usize, i64> = HashMap::new();
                    for (p, c) in self
                        .bracket_sparse(&uv, &elt(w))
                        .into_iter()
                        .chain(self.bracket_sparse(&vw, &elt(u)))
                        .chain(self.bracket_sparse(&wu, &elt(v)))
                    {
                        *acc.entry(p).or_insert(0) += c;
                    }
                    if acc.values().any(|&c| c != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Adjoint matrix of a basis element, integer entries, column-major
    /// action: column v holds [X, basis_v].
    pub fn ad_matrix(&self, x: BasisElt) -> Vec<Vec<i64>> {
        let d = self.dim();
        let mut m = vec![vec![0i64; d]; d];
        for v in 0..d {
            for (u, c) in self.bracket_basis(x, self.basis_elt(v)) {
                m[u][v] = c;
            }
        }
        m
    }

    /// Full Killing matrix on the adjoint basis, kappa(u, v) = tr(ad u ad v).
    pub fn killing_matrix(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        let ads: Vec<Vec<Vec<i64>>> = (0..d).map(|p| self.ad_matrix(self.basis_elt(p))).collect();
        let mut k = vec![vec![0i64; d]; d];
        for a in 0..d {
            for b in a..d {
                let mut t = 0i64;
                for u in 0..d {
                    for v in 0..d {
                        t += ads[a][u][v] * ads[b][v][u];
                    }
                }
                k[a][b] = t;
                k[b][a] = t;
            }
        }
        k
    }

    /// Flips the sign of one Weyl constant (and its transpose partner).
    /// Breaks the cyclic identity on purpose; used as a negative control.
    pub fn with_weyl_sign_flipped(&self, i: usize, j: usize) -> StructureConstants<'a> {
        let mut weyl = self
            .weyl
            .clone()
            .expect("Weyl table not yet computed");
        let len = self.system.len();
        weyl[pair_key(len, i, j)] = -&weyl[pair_key(len, i, j)];
        weyl[pair_key(len, j, i)] = -&weyl[pair_key(len, j, i)];
        StructureConstants {
            system: self.system,
            n_chev: self.n_chev.clone(),
            coroot: self.coroot.clone(),
            weyl: Some(weyl),
        }
    }
}

/// Killing form by brute-force adjoint traces. Doubles as the oracle for the
/// normalization constants used downstream.
pub fn killing_form(sc: &StructureConstants<'_>) -> KillingTable {
    let sys = sc.system;
    let full = sc.killing_matrix();
    let rank = sys.rank;
    let kappa: Vec<Q> = (0..sys.len())
        .map(|i| {
            let v = full[rank + i][rank + sys.neg_index(i)];
            let q = qi(v);
            assert!(q.is_positive(), "kappa must be positive");
            q
        })
        .collect();
    for i in 0..sys.len() {
        assert_eq!(kappa[i], kappa[sys.neg_index(i)]);
    }
    let mut kappa_h = QMat::zeros(rank, rank);
    for a in 0..rank {
        for b in 0..rank {
            kappa_h[(a, b)] = qi(full[a][b]);
        }
    }
    KillingTable { kappa, kappa_h }
}

/// Rescales the root vectors by 1/sqrt(kappa) and returns the table with the
/// Weyl part filled in: N'(a,b) = N(a,b) * sqrt(kappa(a+b)/(kappa(a)kappa(b))).
pub fn weyl_normalize<'a>(
    sc: &StructureConstants<'a>,
    kt: &KillingTable,
) -> StructureConstants<'a> {
    let sys = sc.system;
    let len = sys.len();
    let mut weyl = vec![SignSqrt::zero(); len * len];
    for i in 0..len {
        for j in 0..len {
            if let Some(s) = sys.sum_index(i, j) {
                let ratio = &kt.kappa[s] / (&kt.kappa[i] * &kt.kappa[j]);
                let root = SignSqrt::sqrt_of(&ratio);
                weyl[pair_key(len, i, j)] = root.scale(&qi(sc.n(i, j)));
            }
        }
    }
    StructureConstants {
        system: sys,
        n_chev: sc.n_chev.clone(),
        coroot: sc.coroot.clone(),
        weyl: Some(weyl),
    }
}

/// Convenience: full pipeline from a root system to Weyl-normalized tables.
pub fn build_constants(system: &RootSystem) -> (StructureConstants<'_>, KillingTable) {
    let chev = chevalley_constants(system);
    let kt = killing_form(&chev);
    let sc = weyl_normalize(&chev, &kt);
    (sc, kt)
}

/// Recomputes kappa(E'_a, E'_{-a}) from adjoint traces in the rescaled basis,
/// carrying the square roots through exactly. Must come out 1.
pub fn rescaled_killing_pairing(
    sc: &StructureConstants<'_>,
    kt: &KillingTable,
    root_idx: usize,
) -> SignSqrt {
    let sys = sc.system;
    let rank = sys.rank;
    let d = sc.dim();
    // sparse rescaled adjoint column action for E'_a
    let ad = |a: usize| -> Vec<Vec<(usize, SignSqrt)>> {
        let c_sq = qi(1) / &kt.kappa[a]; // c_a^2
        (0..d)
            .map(|v| match sc.basis_elt(v) {
                BasisElt::Cartan(k) => {
                    let c = sys.cartan_int(sys.root(a), &sys.base[k]);
                    if c == 0 {
                        vec![]
                    } else {
                        vec![(rank + a, SignSqrt::from_q(qi(-c)))]
                    }
                }
                BasisElt::RootVec(b) => {
                    if sys.neg_index(a) == b {
                        sc.coroot_coeffs(a)
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(k, &c)| (k, SignSqrt::from_q(qi(c) * &c_sq)))
                            .collect()
                    } else if let Some(s) = sys.sum_index(a, b) {
                        vec![(rank + s, sc.weyl_n(a, b))]
                    } else {
                        vec![]
                    }
                }
            })
            .collect()
    };
    let ad_a = ad(root_idx);
    let ad_b = ad(sys.neg_index(root_idx));
    // trace(ad_a . ad_b): follow each basis vector through b then a
    let mut trace = SignSqrt::zero();
    for v in 0..d {
        for (u, cb) in &ad_b[v] {
            for (w, ca) in &ad_a[*u] {
                if *w == v {
                    trace = &trace + &(ca * cb);
                }
            }
        }
    }
    trace
}

/// The compact real form seen through its antilinear conjugation and the
/// generators A_a = E_a - E_{-a}, B_a = i(E_a + E_{-a}).
pub struct RealFormBasis<'a> {
    pub system: &'a RootSystem,
}

/// Element of the complexified algebra as coefficients over the adjoint
/// basis (simple coroots, then root vectors).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GcVector {
    pub cartan: Vec<CVal>,
    pub roots: Vec<CVal>,
}

impl GcVector {
    pub fn zero(system: &RootSystem) -> Self {
        GcVector {
            cartan: vec![CVal::zero(); system.rank],
            roots: vec![CVal::zero(); system.len()],
        }
    }
}

pub fn real_form_basis<'a>(sc: &StructureConstants<'a>) -> RealFormBasis<'a> {
    RealFormBasis { system: sc.system }
}

impl<'a> RealFormBasis<'a> {
    /// A_a = E_a - E_{-a}.
    pub fn a_gen(&self, root_idx: usize) -> GcVector {
        let mut v = GcVector::zero(self.system);
        v.roots[root_idx] = CVal::from_q(qi(1));
        v.roots[self.system.neg_index(root_idx)] = CVal::from_q(qi(-1));
        v
    }

    /// B_a = i(E_a + E_{-a}).
    pub fn b_gen(&self, root_idx: usize) -> GcVector {
        let mut v = GcVector::zero(self.system);
        v.roots[root_idx] = CVal::imaginary(SignSqrt::one());
        v.roots[self.system.neg_index(root_idx)] = CVal::imaginary(SignSqrt::one());
        v
    }

    /// The antilinear conjugation of the compact form: tau(E_a) = -E_{-a}
    /// and tau = -conj on the real span of the coroots.
    pub fn tau(&self, v: &GcVector) -> GcVector {
        let mut out = GcVector::zero(self.system);
        for (k, c) in v.cartan.iter().enumerate() {
            out.cartan[k] = -&c.conj();
        }
        for (i, c) in v.roots.iter().enumerate() {
            if !c.is_zero() {
                out.roots[self.system.neg_index(i)] = -&c.conj();
            }
        }
        out
    }
}
