//! Exact linear algebra over the rationals: rank, reduced echelon form,
//! nullspace bases, linear solves, positive definiteness by pivots and
//! signatures by congruence. Deterministic pivoting: first nonzero column,
//! first row.

use crate::exact::Q;
use num::{One, Signed, Zero};

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn neg(&self) -> QMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -a.clone();
        }
        out
    }

    pub fn scale(&self, c: &Q) -> QMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Solves self * x = b; None if singular or inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let mut aug: Vec<Vec<Q>> = (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        let (_, pivots) = rref_inplace(&mut aug, self.cols + 1);
        if pivots.iter().any(|&(_, c)| c == self.cols) {
            return None; // inconsistent
        }
        if pivots.len() < self.cols {
            return None; // underdetermined; caller wants a unique solve
        }
        let mut x = vec![Q::zero(); self.cols];
        for &(r, c) in &pivots {
            x[c] = aug[r][self.cols].clone();
        }
        Some(x)
    }

    /// Positive definiteness of a symmetric matrix by symmetric elimination
    /// pivots, equivalent to the leading-principal-minor test.
    pub fn is_positive_definite(&self) -> bool {
        assert!(self.is_symmetric(), "positive definiteness needs symmetry");
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return false;
            }
            let pivot = a[k][k].clone();
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let sub = &f * &a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        true
    }

    /// Signature (positives, negatives, zeros) of a symmetric matrix by
    /// congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric());
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        for k in 0..n {
            if a[k][k].is_zero() {
                // bring a nonzero onto the diagonal congruently
                if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // row/col addition: e_k += e_j
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][k] += v;
                    }
                } else if (k + 1..n).all(|j| a[j][k].is_zero()) {
                    zero += 1;
                    continue;
                }
            }
            if a[k][k].is_zero() {
                zero += 1;
                continue;
            }
            if a[k][k].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let pivot = a[k][k].clone();
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in 0..n {
                    let sub = &f * &a[k][j];
                    a[i][j] -= sub;
                }
                // keep symmetry: same on columns
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let f = &a[k][j] / &pivot;
                for i in 0..n {
                    let sub = &f * &a[i][k];
                    a[i][j] -= sub;
                }
            }
        }
        (pos, neg, zero)
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let entries: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", entries.join(", "))?;
        }
        write!(f, "]")
    }
}

/// In-place reduced row echelon form; returns pivot (row, col) pairs.
fn rref_inplace(rows: &mut [Vec<Q>], cols: usize) -> (usize, Vec<(usize, usize)>) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for j in c..cols {
            rows[r][j] = &rows[r][j] / &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    (r, pivots)
}

/// Exact row rank of a rational matrix given as rows.
pub fn rank_of_rows(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut work: Vec<Vec<Q>> = rows.to_vec();
    rref_inplace(&mut work, cols).0
}

/// Basis of the right nullspace of the matrix with the given rows and
/// `cols` columns. Deterministic: free columns in increasing order, each
/// basis vector has a 1 in its free column.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut work: Vec<Vec<Q>> = rows.to_vec();
    let (_, pivots) = rref_inplace(&mut work, cols);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![Q::zero(); cols];
            v[fc] = Q::one();
            for &(r, c) in &pivots {
                v[c] = -work[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational row to a primitive integer vector with positive leading
/// entry; used to put linear systems in a canonical, deduplicatable form.
pub fn normalize_row(row: &[Q]) -> Vec<Q> {
    use num::BigInt;
    use num::Integer;
    let mut lcm = BigInt::one();
    for q in row {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = row
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        return vec![Q::zero(); row.len()];
    }
    let leading_neg = ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    let sign = if leading_neg { -BigInt::one() } else { BigInt::one() };
    ints.into_iter()
        .map(|v| Q::from_integer(v / &gcd * &sign))
        .collect()
}

/// Dot product of rational vectors.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{qi, qr};

    fn m(rows: Vec<Vec<i64>>) -> Vec<Vec<Q>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(qi).collect())
            .collect()
    }

    #[test]
    fn rank_basic() {
        assert_eq!(rank_of_rows(&[]), 0);
        assert_eq!(rank_of_rows(&m(vec![vec![0, 0]])), 0);
        assert_eq!(rank_of_rows(&m(vec![vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank_of_rows(&m(vec![vec![1, 2], vec![0, 1]])), 2);
        // duplicates do not increase rank
        assert_eq!(
            rank_of_rows(&m(vec![vec![1, -1, 0], vec![1, -1, 0], vec![1, -1, 0]])),
            1
        );
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = m(vec![vec![1, -1, -1], vec![0, 2, -2]]);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for row in &rows {
                assert!(dot(row, v).is_zero());
            }
        }
    }

    #[test]
    fn solve_unique_system() {
        let a = QMat::from_rows(m(vec![vec![2, 1], vec![1, 3]]));
        let x = a.solve(&[qi(5), qi(10)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(3)]);
        let singular = QMat::from_rows(m(vec![vec![1, 1], vec![2, 2]]));
        assert!(singular.solve(&[qi(1), qi(2)]).is_none());
    }

    #[test]
    fn positive_definiteness() {
        let pd = QMat::from_rows(m(vec![vec![2, -1], vec![-1, 2]]));
        assert!(pd.is_positive_definite());
        let not = QMat::from_rows(m(vec![vec![1, 2], vec![2, 1]]));
        assert!(!not.is_positive_definite());
        let semi = QMat::from_rows(m(vec![vec![1, 1], vec![1, 1]]));
        assert!(!semi.is_positive_definite());
    }

    #[test]
    fn signature_of_hyperbolic_pairing() {
        // [[0, 1/2], [1/2, 0]] has signature (1, 1)
        let g = QMat::from_rows(vec![
            vec![qi(0), qr(1, 2)],
            vec![qr(1, 2), qi(0)],
        ]);
        assert_eq!(g.signature(), (1, 1, 0));
    }

    #[test]
    fn normalize_row_is_primitive() {
        let row = vec![qr(-2, 3), qr(4, 3), qi(0)];
        assert_eq!(normalize_row(&row), vec![qi(1), qi(-2), qi(0)]);
        assert_eq!(normalize_row(&[qi(0), qi(0)]), vec![qi(0), qi(0)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Vec<Vec<Q>>> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(
                    proptest::collection::vec((-6i64..6).prop_map(qi), c),
                    r,
                )
            })
        }

        proptest! {
            #[test]
            fn rank_bounded_and_shuffle_invariant(rows in arb_matrix()) {
                let r = rank_of_rows(&rows);
                prop_assert!(r <= rows.len() && r <= rows[0].len());
                let mut reversed = rows.clone();
                reversed.reverse();
                prop_assert_eq!(rank_of_rows(&reversed), r);
            }

            #[test]
            fn nullspace_dimension_and_membership(rows in arb_matrix()) {
                let cols = rows[0].len();
                let r = rank_of_rows(&rows);
                let ns = nullspace(&rows, cols);
                prop_assert_eq!(ns.len(), cols - r);
                for v in &ns {
                    for row in &rows {
                        prop_assert!(dot(row, v).is_zero());
                    }
                }
            }
        }
    }
}
