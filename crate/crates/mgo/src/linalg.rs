//! Exact dense linear algebra over the rationals.
//!
//! Solving and rank use fraction-free (Bareiss) elimination on rows that
//! have been cleared of denominators; span bookkeeping uses a reduced
//! row-echelon basis that is grown one vector at a time.

use crate::rational::{common_denominator, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<Q>>;

fn to_integer_row(row: &[Q]) -> Vec<BigInt> {
    let d = common_denominator(row);
    row.iter()
        .map(|x| (x * Q::from_integer(d.clone())).to_integer())
        .collect()
}

/// Fraction-free elimination to row echelon form. Returns the pivot
/// columns; `rows` is overwritten with the echelon form.
fn bareiss(rows: &mut [Vec<BigInt>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        let pivot = &prow[c];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c..ncols {
                let v = if f.is_zero() {
                    &row[j] * pivot
                } else {
                    &row[j] * pivot - &f * &prow[j]
                };
                row[j] = v / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| to_integer_row(r)).collect();
    bareiss(&mut m).len()
}

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone)]
pub struct LinearSolve {
    pub rank_a: usize,
    pub rank_augmented: usize,
    /// A particular solution (free variables set to zero) when consistent.
    pub solution: Option<Vec<Q>>,
}

/// Solves `a x = b` where `a` is given by rows and has `ncols` columns.
pub fn solve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> LinearSolve {
    assert_eq!(a.len(), b.len());
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), ncols);
            let mut full = row.clone();
            full.push(rhs.clone());
            to_integer_row(&full)
        })
        .collect();
    let pivots = bareiss(&mut m);
    let rank_augmented = pivots.len();
    let inconsistent = pivots.last() == Some(&ncols);
    let rank_a = if inconsistent { rank_augmented - 1 } else { rank_augmented };
    if inconsistent {
        return LinearSolve { rank_a, rank_augmented, solution: None };
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let row = &m[r];
        let mut acc = Q::from_integer(row[ncols].clone());
        for j in (c + 1)..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Q::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Q::from_integer(row[c].clone());
    }
    LinearSolve { rank_a, rank_augmented, solution: Some(x) }
}

/// Reduced row echelon form by rational Gauss-Jordan elimination.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut space = RowSpace::new(ncols);
    for r in rows {
        space.insert(r);
    }
    let pivots = space.pivots.clone();
    (space.rows, pivots)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &[Vec<Q>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A subspace of `Q^n` kept as a reduced row-echelon basis.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub ncols: usize,
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace { ncols, rows: vec![], pivots: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its component along the current echelon basis.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &f * rj;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (rj, wj) in row.iter_mut().zip(&w) {
                if !wj.is_zero() {
                    *rj -= &f * wj;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(m: &[Vec<Q>]) -> Matrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    let inner = b.len();
    let ncols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    let mut acc = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_symmetric(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Matrix> {
    let n = m.len();
    let rows: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let (r, pivots) = rref(&rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Leading principal minors in order, stopping after the first that is not
/// positive (later minors are then irrelevant for definiteness).
pub fn leading_principal_minors(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut det = Q::one();
    for k in 0..n {
        let p = a[k][k].clone();
        det *= &p;
        minors.push(det.clone());
        if !p.is_positive() {
            break;
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    minors
}

/// Positive definiteness of a symmetric matrix via leading principal minors.
pub fn is_positive_definite(m: &[Vec<Q>]) -> bool {
    is_symmetric(m) && {
        let minors = leading_principal_minors(m);
        minors.len() == m.len() && minors.iter().all(Signed::is_positive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn qm(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&qm(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&qm(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(rank(&qm(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&qm(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]])), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        let s = solve(&a, &[q(3), q(5)], 2);
        assert_eq!(s.solution.unwrap(), vec![qf(4, 5), qf(7, 5)]);
        let a = qm(&[&[1, 1], &[2, 2]]);
        let s = solve(&a, &[q(1), q(3)], 2);
        assert!(s.solution.is_none());
        assert_eq!((s.rank_a, s.rank_augmented), (1, 2));
        let s = solve(&a, &[q(1), q(2)], 2);
        let x = s.solution.unwrap();
        assert_eq!(&x[0] + &x[1], q(1));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_and_minors() {
        let a = qm(&[&[2, -1], &[-1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(leading_principal_minors(&a), vec![q(2), q(3)]);
        assert!(is_positive_definite(&a));
        assert!(!is_positive_definite(&qm(&[&[1, 2], &[2, 1]])));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn rowspace_tracks_span() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        assert!(s.contains(&[q(2), q(0), q(-2)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
        assert_eq!(s.dim(), 2);
    }
}
