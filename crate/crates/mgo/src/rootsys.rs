//! Root systems of the simple Lie algebras, in simple-root coordinates.

use crate::linalg::{inverse, Matrix};
use crate::rational::{q, qf, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("no simple Lie algebra of type {0}{1}")]
    InvalidType(char, usize),
    #[error("{0} is not a root")]
    NotARoot(Root),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemType {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSysError> {
        let t = RootSystemType { family, rank };
        if t.is_admissible() {
            Ok(t)
        } else {
            Err(RootSysError::InvalidType(family.letter(), rank))
        }
    }

    pub fn is_admissible(&self) -> bool {
        let l = self.rank;
        match self.family {
            Family::A => l >= 1,
            Family::B => l >= 2,
            Family::C => l >= 3,
            Family::D => l >= 4,
            Family::E => (6..=8).contains(&l),
            Family::F => l == 4,
            Family::G => l == 2,
        }
    }

    /// Number of roots according to the classification.
    pub fn expected_root_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1),
            Family::B | Family::C => 2 * l * l,
            Family::D => 2 * l * (l - 1),
            Family::E => match l {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A vector in the root lattice, written over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i32) -> Root {
        Root(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Canonical order on positive roots: by height, then lexicographically.
pub fn canonical_cmp(a: &Root, b: &Root) -> std::cmp::Ordering {
    a.height().cmp(&b.height()).then_with(|| a.0.cmp(&b.0))
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub ty: RootSystemType,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    pub cartan: Vec<Vec<i32>>,
    /// `(alpha_i, alpha_j)` with long roots of squared length 2.
    pub gram: Matrix,
    /// Ratio between the Killing-dual form and `gram`.
    pub killing_scale: Q,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
}

/// Inner products of simple roots, Bourbaki numbering.
fn simple_gram(t: RootSystemType) -> Matrix {
    let l = t.rank;
    let mut g = vec![vec![Q::zero(); l]; l];
    let link = |g: &mut Matrix, i: usize, j: usize, v: Q| {
        g[i][j] = v.clone();
        g[j][i] = v;
    };
    match t.family {
        Family::A => {
            for i in 0..l {
                g[i][i] = q(2);
            }
            for i in 0..l.saturating_sub(1) {
                link(&mut g, i, i + 1, q(-1));
            }
        }
        Family::B => {
            for i in 0..l {
                g[i][i] = q(2);
            }
            g[l - 1][l - 1] = q(1);
            for i in 0..l - 1 {
                link(&mut g, i, i + 1, q(-1));
            }
        }
        Family::C => {
            for i in 0..l {
                g[i][i] = q(1);
            }
            g[l - 1][l - 1] = q(2);
            for i in 0..l - 2 {
                link(&mut g, i, i + 1, qf(-1, 2));
            }
            link(&mut g, l - 2, l - 1, q(-1));
        }
        Family::D => {
            for i in 0..l {
                g[i][i] = q(2);
            }
            for i in 0..l - 2 {
                link(&mut g, i, i + 1, q(-1));
            }
            link(&mut g, l - 3, l - 1, q(-1));
        }
        Family::E => {
            for i in 0..l {
                g[i][i] = q(2);
            }
            link(&mut g, 0, 2, q(-1));
            link(&mut g, 1, 3, q(-1));
            for i in 2..l - 1 {
                link(&mut g, i, i + 1, q(-1));
            }
        }
        Family::F => {
            g[0][0] = q(2);
            g[1][1] = q(2);
            g[2][2] = q(1);
            g[3][3] = q(1);
            link(&mut g, 0, 1, q(-1));
            link(&mut g, 1, 2, q(-1));
            link(&mut g, 2, 3, qf(-1, 2));
        }
        Family::G => {
            g[0][0] = qf(2, 3);
            g[1][1] = q(2);
            link(&mut g, 0, 1, q(-1));
        }
    }
    g
}

impl RootSystem {
    pub fn build(t: RootSystemType) -> Result<RootSystem, RootSysError> {
        if !t.is_admissible() {
            return Err(RootSysError::InvalidType(t.family.letter(), t.rank));
        }
        let l = t.rank;
        let gram = simple_gram(t);
        let cartan: Vec<Vec<i32>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let v = q(2) * &gram[i][j] / &gram[j][j];
                        assert!(v.is_integer());
                        v.to_integer().try_into().unwrap()
                    })
                    .collect()
            })
            .collect();

        // Grow positive roots height by height: beta + alpha_i is a root iff
        // q > 0, where p is read off the roots already found and
        // p - q = <beta, alpha_i^vee>.
        let mut positive: Vec<Root> = (0..l).map(|i| Root::simple(l, i)).collect();
        let mut index: HashMap<Root, usize> =
            positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut layer: Vec<Root> = positive.clone();
        while !layer.is_empty() {
            let mut next: Vec<Root> = Vec::new();
            for beta in &layer {
                for i in 0..l {
                    let a = Root::simple(l, i);
                    let mut p = 0;
                    let mut cur = beta.sub(&a);
                    while index.contains_key(&cur) {
                        p += 1;
                        cur = cur.sub(&a);
                    }
                    let pairing: i32 = (0..l).map(|j| beta.0[j] * cartan[j][i]).sum();
                    let qq = p - pairing;
                    let cand = beta.add(&a);
                    if qq > 0 && !index.contains_key(&cand) && !next.contains(&cand) {
                        next.push(cand);
                    }
                }
            }
            next.sort_by(canonical_cmp);
            for r in &next {
                index.insert(r.clone(), usize::MAX);
            }
            layer = next;
        }
        positive = index.keys().cloned().collect();
        positive.sort_by(canonical_cmp);
        let npos = positive.len();
        let mut index = HashMap::with_capacity(2 * npos);
        for (i, r) in positive.iter().enumerate() {
            index.insert(r.clone(), i);
            index.insert(r.neg(), npos + i);
        }

        let mut rs = RootSystem { ty: t, cartan, gram, killing_scale: Q::zero(), positive, index };
        rs.killing_scale = rs.killing_scale_from_root_sum(0);
        for i in 1..l {
            assert_eq!(rs.killing_scale_from_root_sum(i), rs.killing_scale);
        }
        Ok(rs)
    }

    /// With `h` the coroot of `alpha_i`, the Killing form gives
    /// `K(h,h) = sum_gamma <gamma, alpha_i^vee>^2`, and the dual pairing
    /// satisfies `(alpha_i, alpha_i)_K = 4 / K(h,h)`.
    fn killing_scale_from_root_sum(&self, i: usize) -> Q {
        let k: i64 = self
            .roots()
            .map(|g| {
                let v = self.cartan_pairing_simple(&g, i) as i64;
                v * v
            })
            .sum();
        q(4) / (&self.gram[i][i] * q(k))
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// All roots: positive ones in canonical order, then their negatives.
    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.positive
            .iter()
            .cloned()
            .chain(self.positive.iter().map(Root::neg))
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    /// Index in `roots()`, or `None` when `r` is not a root.
    pub fn root_id(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn root_by_id(&self, id: usize) -> Root {
        let n = self.positive.len();
        if id < n {
            self.positive[id].clone()
        } else {
            self.positive[id - n].neg()
        }
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    pub fn highest_root(&self) -> &Root {
        self.positive.last().unwrap()
    }

    /// `(a, b)` in the normalization where long roots have length 2.
    pub fn pair_gram(&self, a: &Root, b: &Root) -> Q {
        let l = self.rank();
        let mut acc = Q::zero();
        for i in 0..l {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..l {
                if b.0[j] != 0 {
                    acc += q((a.0[i] * b.0[j]) as i64) * &self.gram[i][j];
                }
            }
        }
        acc
    }

    /// The form dual to the Killing form, `B(h_a, h_b)`.
    pub fn pair_b(&self, a: &Root, b: &Root) -> Q {
        &self.killing_scale * self.pair_gram(a, b)
    }

    /// `<beta, alpha_i^vee>` for a simple root `alpha_i` (0-based).
    pub fn cartan_pairing_simple(&self, beta: &Root, i: usize) -> i32 {
        (0..self.rank()).map(|j| beta.0[j] * self.cartan[j][i]).sum()
    }

    /// `<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)`.
    pub fn cartan_pairing(&self, beta: &Root, alpha: &Root) -> i32 {
        let v = q(2) * self.pair_gram(beta, alpha) / self.pair_gram(alpha, alpha);
        assert!(v.is_integer(), "non-integral Cartan pairing");
        v.to_integer().try_into().unwrap()
    }

    /// Coordinates of `alpha^vee` over the simple coroots.
    pub fn coroot_coords(&self, alpha: &Root) -> Vec<i32> {
        let n = self.pair_gram(alpha, alpha);
        (0..self.rank())
            .map(|k| {
                let v = q(alpha.0[k] as i64) * &self.gram[k][k] / &n;
                assert!(v.is_integer());
                v.to_integer().try_into().unwrap()
            })
            .collect()
    }

    /// `beta(h)` for `h` given over the simple coroots.
    pub fn eval_on_coroot_coords(&self, beta: &Root, h: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (k, hk) in h.iter().enumerate() {
            if !hk.is_zero() {
                acc += hk * q(self.cartan_pairing_simple(beta, k) as i64);
            }
        }
        acc
    }

    fn check_root(&self, r: &Root) -> Result<(), RootSysError> {
        if self.is_root(r) {
            Ok(())
        } else {
            Err(RootSysError::NotARoot(r.clone()))
        }
    }

    /// The `alpha`-string through `beta`: largest `p, q` with
    /// `beta - p alpha, ..., beta + q alpha` all roots.
    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<(u32, u32), RootSysError> {
        self.check_root(alpha)?;
        self.check_root(beta)?;
        let mut p = 0;
        let mut cur = beta.sub(alpha);
        while self.is_root(&cur) {
            p += 1;
            cur = cur.sub(alpha);
        }
        let mut qq = 0;
        let mut cur = beta.add(alpha);
        while self.is_root(&cur) {
            qq += 1;
            cur = cur.add(alpha);
        }
        Ok((p, qq))
    }

    fn check_index(&self, j: usize) -> Result<usize, RootSysError> {
        if j >= 1 && j <= self.rank() {
            Ok(j - 1)
        } else {
            Err(RootSysError::IndexOutOfRange { index: j, max: self.rank() })
        }
    }

    /// The fundamental coweight `w_j` (1-based `j`) over the simple coroots:
    /// `alpha_i(w_j) = delta_ij`.
    pub fn fundamental_coweight(&self, j: usize) -> Result<Vec<Q>, RootSysError> {
        let j = self.check_index(j)?;
        let c: Matrix = self
            .cartan
            .iter()
            .map(|r| r.iter().map(|&x| q(x as i64)).collect())
            .collect();
        let inv = inverse(&c).expect("Cartan matrix is invertible");
        Ok((0..self.rank()).map(|k| inv[k][j].clone()).collect())
    }

    /// The fundamental weight `Lambda_j` over the simple roots:
    /// `2 (Lambda_j, alpha_i) / (alpha_i, alpha_i) = delta_ij`.
    pub fn fundamental_weight(&self, j: usize) -> Result<Vec<Q>, RootSysError> {
        let j = self.check_index(j)?;
        let ct: Matrix = (0..self.rank())
            .map(|i| (0..self.rank()).map(|k| q(self.cartan[k][i] as i64)).collect())
            .collect();
        let inv = inverse(&ct).expect("Cartan matrix is invertible");
        Ok((0..self.rank()).map(|k| inv[k][j].clone()).collect())
    }

    /// `B(v, w)` for rational vectors over the simple roots.
    pub fn pair_b_vec(&self, v: &[Q], w: &[Q]) -> Q {
        let l = self.rank();
        let mut acc = Q::zero();
        for i in 0..l {
            for j in 0..l {
                if !v[i].is_zero() && !w[j].is_zero() {
                    acc += &v[i] * &w[j] * &self.gram[i][j];
                }
            }
        }
        acc * &self.killing_scale
    }

    pub fn is_long(&self, r: &Root) -> bool {
        self.pair_gram(r, r) == q(2)
    }

    pub fn gram_is_positive_definite(&self) -> bool {
        crate::linalg::is_positive_definite(&self.gram)
    }

    pub fn roots_have_uniform_sign(&self) -> bool {
        self.roots().all(|r| r.is_positive() || r.neg().is_positive())
    }

    pub fn killing_scale_positive(&self) -> bool {
        self.killing_scale.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, l: usize) -> RootSystem {
        RootSystem::build(RootSystemType::new(f, l).unwrap()).unwrap()
    }

    fn all_small_types() -> Vec<RootSystemType> {
        use Family::*;
        let mut v = vec![];
        for l in 1..=5 {
            v.push(RootSystemType { family: A, rank: l });
        }
        for l in 2..=5 {
            v.push(RootSystemType { family: B, rank: l });
        }
        for l in 3..=5 {
            v.push(RootSystemType { family: C, rank: l });
        }
        for l in 4..=5 {
            v.push(RootSystemType { family: D, rank: l });
        }
        v.push(RootSystemType { family: G, rank: 2 });
        v.push(RootSystemType { family: F, rank: 4 });
        v
    }

    #[test]
    fn inadmissible_types_rejected() {
        assert!(RootSystemType::new(Family::C, 2).is_err());
        assert!(RootSystemType::new(Family::D, 3).is_err());
        assert!(RootSystemType::new(Family::E, 9).is_err());
        assert!(RootSystemType::new(Family::A, 0).is_err());
        assert!(RootSystemType::new(Family::G, 3).is_err());
    }

    #[test]
    fn a2_and_a1_roots() {
        let a2 = rs(Family::A, 2);
        assert_eq!(a2.num_roots(), 6);
        assert_eq!(a2.num_positive(), 3);
        let a1 = rs(Family::A, 1);
        let all: Vec<Root> = a1.roots().collect();
        assert_eq!(all, vec![Root(vec![1]), Root(vec![-1])]);
    }

    #[test]
    fn root_counts_match_classification() {
        for t in all_small_types() {
            assert_eq!(rs(t.family, t.rank).num_roots(), t.expected_root_count(), "{t}");
        }
        for l in 6..=8 {
            let t = RootSystemType::new(Family::E, l).unwrap();
            assert_eq!(RootSystem::build(t).unwrap().num_roots(), t.expected_root_count());
        }
    }

    #[test]
    fn root_strings() {
        let a2 = rs(Family::A, 2);
        let (a1, a2r) = (Root(vec![1, 0]), Root(vec![0, 1]));
        assert_eq!(a2.root_string(&a1, &a2r).unwrap(), (0, 1));
        let g2 = rs(Family::G, 2);
        assert!(!g2.is_long(&Root(vec![1, 0])));
        assert_eq!(g2.root_string(&Root(vec![1, 0]), &Root(vec![0, 1])).unwrap(), (0, 3));
        assert!(matches!(
            a2.root_string(&Root(vec![1, 1]), &Root(vec![2, 0])),
            Err(RootSysError::NotARoot(_))
        ));
    }

    #[test]
    fn string_length_matches_cartan_integer() {
        for t in all_small_types() {
            let r = rs(t.family, t.rank);
            let roots: Vec<Root> = r.roots().collect();
            for a in &roots {
                for b in &roots {
                    if a == b || *a == b.neg() {
                        continue;
                    }
                    let (p, qq) = r.root_string(a, b).unwrap();
                    assert_eq!(p as i32 - qq as i32, r.cartan_pairing(b, a), "{t} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn closure_and_signs() {
        for t in all_small_types() {
            let r = rs(t.family, t.rank);
            assert!(r.roots_have_uniform_sign());
            assert!(r.gram_is_positive_definite());
            for a in r.roots() {
                assert!(r.is_root(&a.neg()));
            }
        }
    }

    #[test]
    fn killing_scale_is_inverse_twice_dual_coxeter() {
        // 1 / (2 h^vee) with long roots of length 2.
        let cases = [
            (Family::A, 1, 2),
            (Family::A, 3, 4),
            (Family::B, 3, 5),
            (Family::C, 3, 4),
            (Family::D, 4, 6),
            (Family::G, 2, 4),
            (Family::F, 4, 9),
            (Family::E, 6, 12),
        ];
        for (f, l, h) in cases {
            assert_eq!(rs(f, l).killing_scale, qf(1, 2 * h), "{:?}{l}", f);
        }
    }

    #[test]
    fn pair_b_ratio_in_a2() {
        let a2 = rs(Family::A, 2);
        let (a1, a2r) = (Root(vec![1, 0]), Root(vec![0, 1]));
        assert_eq!(a2.pair_b(&a1, &a2r) / a2.pair_b(&a1, &a1), qf(-1, 2));
    }

    #[test]
    fn coweights_and_weights() {
        let a1 = rs(Family::A, 1);
        assert_eq!(a1.fundamental_coweight(1).unwrap(), vec![qf(1, 2)]);
        assert!(a1.fundamental_coweight(2).is_err());
        for t in all_small_types() {
            let r = rs(t.family, t.rank);
            let l = r.rank();
            for j in 1..=l {
                let w = r.fundamental_coweight(j).unwrap();
                let lam = r.fundamental_weight(j).unwrap();
                for i in 0..l {
                    let ai = Root::simple(l, i);
                    let delta = if i + 1 == j { q(1) } else { q(0) };
                    assert_eq!(r.eval_on_coroot_coords(&ai, &w), delta);
                    let mut e = vec![Q::zero(); l];
                    e[i] = q(1);
                    let v = q(2) * r.pair_b_vec(&lam, &e) / r.pair_b_vec(&e, &e);
                    assert_eq!(v, delta);
                }
            }
        }
    }

    #[test]
    fn positive_roots_in_canonical_order() {
        let b3 = rs(Family::B, 3);
        let p = b3.positive_roots();
        for w in p.windows(2) {
            assert_eq!(canonical_cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
        assert_eq!(b3.highest_root(), &Root(vec![1, 2, 2]));
        assert_eq!(rs(Family::G, 2).highest_root(), &Root(vec![3, 2]));
        assert_eq!(rs(Family::F, 4).highest_root(), &Root(vec![2, 3, 4, 2]));
    }
}
