//! The M-space `G/K1` attached to a flag manifold: tangent space
//! `n = s + m_1 + ... + m_s`, the isotropy algebra `k1`, and the
//! `Ad(K1)`-module structure of each summand.

use crate::chevalley::{AlgebraElement, Algebra, Generator};
use crate::flag::{FlagError, FlagManifold};
use crate::linalg::{self, is_positive_definite, Matrix, RowSpace};
use crate::rational::{q, Q};
use crate::rootsys::Root;
use num_traits::{One, Zero};
use serde::Serialize;
use std::ops::Range;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MSpaceError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("summand {0} does not satisfy the reducibility criterion")]
    NotReducible(usize),
    #[error("summand {0} satisfies the reducibility criterion but has no invariant half-dimensional splitting")]
    NoInvariantSplit(usize),
    #[error("element has components outside n")]
    OutOfSubspace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitStatus {
    Irreducible,
    Split {
        n1: Vec<AlgebraElement>,
        n2: Vec<AlgebraElement>,
        seed_low: Root,
        seed_high: Root,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandSplit {
    /// 1-based summand index.
    pub summand_index: usize,
    pub status: SplitStatus,
}

impl SummandSplit {
    pub fn is_split(&self) -> bool {
        matches!(self.status, SplitStatus::Split { .. })
    }
}

/// Real type of an irreducible module, read off its commutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    Real,
    Complex,
    Quaternionic,
    Reducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub irreducible: bool,
    pub kind: ModuleKind,
    /// Dimension of the algebra of `k1`-equivariant endomorphisms.
    pub commutant_dim: usize,
    /// Whether every basis generator of the summand generates all of it.
    pub generator_orbits_full: bool,
}

#[derive(Debug, Clone)]
pub struct MSpace {
    pub flag: FlagManifold,
    pub alg: Arc<Algebra>,
    /// Fundamental coweights of the painted nodes, over the simple coroots.
    pub s_coweights: Vec<Vec<Q>>,
    pub s_basis: Vec<AlgebraElement>,
    pub a1_basis: Vec<AlgebraElement>,
    pub k1_basis: Vec<AlgebraElement>,
    /// `a1` together with `A_phi, B_phi` for unpainted simple `phi`.
    pub k1_lie_generators: Vec<AlgebraElement>,
    pub n_basis: Vec<AlgebraElement>,
    /// Offsets in `n_basis`: `s` is `0..offsets[0]`, summand `i` (1-based)
    /// is `offsets[i-1]..offsets[i]`.
    offsets: Vec<usize>,
    n_pos: Vec<Option<usize>>,
    torus_to_s: Matrix,
    s_gram: Matrix,
    splits: Vec<SummandSplit>,
    criterion: Vec<bool>,
    n_gram: OnceLock<Matrix>,
    k1_on_n: OnceLock<Vec<Matrix>>,
}

fn zero_matrix(n: usize) -> Matrix {
    vec![vec![Q::zero(); n]; n]
}

impl MSpace {
    pub fn build(flag: &FlagManifold) -> MSpace {
        let alg = Algebra::shared(flag.diagram.algebra).expect("admissible type");
        let l = alg.rank();
        let rs = alg.rs.clone();
        let ty = alg.ty();
        let s_coweights: Vec<Vec<Q>> = flag
            .painted0
            .iter()
            .map(|&j| rs.fundamental_coweight(j + 1).unwrap())
            .collect();
        let s_basis: Vec<AlgebraElement> = s_coweights.iter().map(|w| alg.ih_element(w)).collect();
        let a1_basis: Vec<AlgebraElement> = flag
            .unpainted0
            .iter()
            .map(|&j| alg.elem(&Generator::IH(j)))
            .collect();
        let mut k1_basis = a1_basis.clone();
        for r in &flag.r_k_plus {
            k1_basis.push(alg.elem(&Generator::A(r.clone())));
            k1_basis.push(alg.elem(&Generator::B(r.clone())));
        }
        let mut k1_lie_generators = a1_basis.clone();
        for &j in &flag.unpainted0 {
            let r = Root::simple(l, j);
            k1_lie_generators.push(alg.elem(&Generator::A(r.clone())));
            k1_lie_generators.push(alg.elem(&Generator::B(r)));
        }
        let mut n_basis = s_basis.clone();
        let mut offsets = vec![n_basis.len()];
        let mut n_pos = vec![None; alg.dim()];
        for fiber in &flag.fibers {
            for r in fiber {
                for g in [Generator::A(r.clone()), Generator::B(r.clone())] {
                    let idx = alg.index_of(&g).unwrap();
                    n_pos[idx] = Some(n_basis.len());
                    n_basis.push(AlgebraElement::basis(ty, idx));
                }
            }
            offsets.push(n_basis.len());
        }

        // B restricted to the torus, and the B-orthogonal projection onto s.
        let kg = alg.killing_gram();
        let kt: Matrix = (0..l).map(|i| (0..l).map(|j| q(kg[i][j])).collect()).collect();
        let ds = s_coweights.len();
        let w: Matrix = (0..l).map(|k| (0..ds).map(|a| s_coweights[a][k].clone()).collect()).collect();
        let wt = linalg::transpose(&w);
        let s_gram = linalg::mat_mul(&linalg::mat_mul(&wt, &kt), &w);
        let s_inv = linalg::inverse(&s_gram).expect("s Gram matrix is invertible");
        let torus_to_s = linalg::mat_mul(&linalg::mat_mul(&linalg::mat_mul(&w, &s_inv), &wt), &kt);

        let mut m = MSpace {
            flag: flag.clone(),
            alg,
            s_coweights,
            s_basis,
            a1_basis,
            k1_basis,
            k1_lie_generators,
            n_basis,
            offsets,
            n_pos,
            torus_to_s,
            s_gram,
            splits: vec![],
            criterion: vec![],
            n_gram: OnceLock::new(),
            k1_on_n: OnceLock::new(),
        };
        m.criterion = (1..=m.s_count()).map(|i| m.is_reducible(i).unwrap()).collect();
        m.splits = (1..=m.s_count())
            .map(|i| match m.split_summand(i) {
                Ok(s) => s,
                Err(_) => SummandSplit { summand_index: i, status: SplitStatus::Irreducible },
            })
            .collect();
        m
    }

    pub fn s_count(&self) -> usize {
        self.flag.s_count()
    }

    pub fn dim_s(&self) -> usize {
        self.s_basis.len()
    }

    pub fn dim_n(&self) -> usize {
        self.n_basis.len()
    }

    pub fn dim_k1(&self) -> usize {
        self.k1_basis.len()
    }

    /// Gram matrix of `B` on `s_basis`.
    pub fn s_gram(&self) -> &Matrix {
        &self.s_gram
    }

    fn check_summand(&self, i: usize) -> Result<usize, MSpaceError> {
        if i >= 1 && i <= self.s_count() {
            Ok(i - 1)
        } else {
            Err(FlagError::IndexOutOfRange { index: i, max: self.s_count() }.into())
        }
    }

    /// Range of summand `i` (1-based) inside the `n` coordinates.
    pub fn summand_range(&self, i: usize) -> Range<usize> {
        self.offsets[i - 1]..self.offsets[i]
    }

    pub fn summand_dim(&self, i: usize) -> usize {
        self.summand_range(i).len()
    }

    pub fn summand_elements(&self, i: usize) -> &[AlgebraElement] {
        &self.n_basis[self.summand_range(i)]
    }

    /// The decomposition used for metrics: status of every summand.
    pub fn splits(&self) -> &[SummandSplit] {
        &self.splits
    }

    pub fn split(&self, i: usize) -> &SummandSplit {
        &self.splits[i - 1]
    }

    /// The reducibility criterion evaluated for every summand.
    pub fn criterion_flags(&self) -> &[bool] {
        &self.criterion
    }

    /// `h` in `n` coordinates of a generator, when it spans part of `m`.
    pub fn n_position(&self, idx: usize) -> Option<usize> {
        self.n_pos[idx]
    }

    /// B-orthogonal projection of `x` onto `n`.
    pub fn project_n(&self, x: &AlgebraElement) -> AlgebraElement {
        let l = self.alg.rank();
        let t: Vec<Q> = (0..l).map(|k| x.coeff(k)).collect();
        let ts = if t.iter().all(Zero::is_zero) { t } else { linalg::mat_vec(&self.torus_to_s, &t) };
        let terms = ts
            .into_iter()
            .enumerate()
            .chain(x.terms().iter().filter(|(i, _)| self.n_pos[*i].is_some()).cloned());
        AlgebraElement::from_terms(self.alg.ty(), terms)
    }

    pub fn project_k1(&self, x: &AlgebraElement) -> AlgebraElement {
        x.sub(&self.project_n(x))
    }

    pub fn in_n(&self, x: &AlgebraElement) -> bool {
        self.project_n(x) == *x
    }

    pub fn in_k1(&self, x: &AlgebraElement) -> bool {
        self.project_n(x).is_zero()
    }

    /// Coordinates of `x` over `n_basis`.
    pub fn coords_n(&self, x: &AlgebraElement) -> Result<Vec<Q>, MSpaceError> {
        if !self.in_n(x) {
            return Err(MSpaceError::OutOfSubspace);
        }
        Ok(self.coords_of_projected(x))
    }

    /// Coordinates of an element already known to lie in `n`.
    pub(crate) fn coords_of_projected(&self, x: &AlgebraElement) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim_n()];
        let l = self.alg.rank();
        let t: Vec<Q> = (0..l).map(|k| x.coeff(k)).collect();
        for (a, &j) in self.flag.painted0.iter().enumerate() {
            // alpha_j(w_b) = delta_jb
            let mut y = Q::zero();
            for (k, tk) in t.iter().enumerate() {
                if !tk.is_zero() {
                    y += tk * q(self.alg.rs.cartan[j][k] as i64);
                }
            }
            v[a] = y;
        }
        for (i, c) in x.terms() {
            if let Some(p) = self.n_pos[*i] {
                v[p] = c.clone();
            }
        }
        v
    }

    pub fn from_coords_n(&self, v: &[Q]) -> AlgebraElement {
        let l = self.alg.rank();
        let mut terms: Vec<(usize, Q)> = Vec::new();
        for (a, w) in self.s_coweights.iter().enumerate() {
            if v[a].is_zero() {
                continue;
            }
            for k in 0..l {
                if !w[k].is_zero() {
                    terms.push((k, &v[a] * &w[k]));
                }
            }
        }
        for (idx, p) in self.n_pos.iter().enumerate() {
            if let Some(p) = p {
                if !v[*p].is_zero() {
                    terms.push((idx, v[*p].clone()));
                }
            }
        }
        AlgebraElement::from_terms(self.alg.ty(), terms)
    }

    /// Matrix of `ad(x)` on `n` coordinates, for `x` preserving `n`.
    pub fn ad_matrix_on_n(&self, x: &AlgebraElement) -> Matrix {
        let d = self.dim_n();
        let mut m = zero_matrix(d);
        for (c, e) in self.n_basis.iter().enumerate() {
            let v = self.coords_n(&self.alg.br(x, e)).expect("ad(x) preserves n");
            for r in 0..d {
                m[r][c] = v[r].clone();
            }
        }
        m
    }

    /// `ad(k)` on `n` for every element of `k1_basis`.
    pub fn k1_action_on_n(&self) -> &[Matrix] {
        self.k1_on_n.get_or_init(|| self.k1_basis.iter().map(|k| self.ad_matrix_on_n(k)).collect())
    }

    /// Gram matrix of `B` on `n_basis`.
    pub fn n_gram(&self) -> &Matrix {
        self.n_gram.get_or_init(|| {
            self.n_basis
                .iter()
                .map(|x| self.n_basis.iter().map(|y| self.alg.killing_form(x, y)).collect())
                .collect()
        })
    }

    /// Structural identities of an M-space, checked exactly.
    pub fn check_invariants(&self) -> Result<(), String> {
        let alg = &self.alg;
        for (a, s) in self.s_basis.iter().enumerate() {
            for (b, k) in self.k1_basis.iter().enumerate() {
                if !alg.killing_form(s, k).is_zero() {
                    return Err(format!("s[{a}] not orthogonal to k1[{b}]"));
                }
                if !alg.br(s, k).is_zero() {
                    return Err(format!("s[{a}] does not commute with k1[{b}]"));
                }
            }
        }
        if self.dim_n() + self.dim_k1() != alg.dim() {
            return Err("dim n + dim k1 != dim g".into());
        }
        for k in &self.k1_basis {
            for x in &self.n_basis {
                if !self.in_n(&alg.br(k, x)) {
                    return Err("[k1, n] not contained in n".into());
                }
            }
        }
        Ok(())
    }

    /// `a(h)` for a root `a` and `h = i sum c_k h_k` given by coroot coordinates.
    fn eval(&self, r: &Root, h: &[Q]) -> Q {
        self.alg.rs.eval_on_coroot_coords(r, h)
    }

    fn a1_weight(&self, r: &Root) -> Vec<i32> {
        self.flag
            .unpainted0
            .iter()
            .map(|&j| self.alg.rs.cartan_pairing_simple(r, j))
            .collect()
    }

    /// The lowest/highest-root criterion: `a|a1 = -b|a1` and `a(h) = b(h)` on `s`.
    pub fn is_reducible(&self, i: usize) -> Result<bool, MSpaceError> {
        self.check_summand(i)?;
        let (lo, hi) = self.flag.lowest_highest(i)?;
        Ok(self.dual_pair(&lo, &hi))
    }

    fn dual_pair(&self, a: &Root, b: &Root) -> bool {
        let wa = self.a1_weight(a);
        let wb = self.a1_weight(b);
        let on_a1 = wa.iter().zip(&wb).all(|(x, y)| *x == -*y);
        let on_s = self.s_coweights.iter().all(|w| self.eval(a, w) == self.eval(b, w));
        on_a1 && on_s
    }

    /// Whenever the extremal pair satisfies the criterion, every root of the
    /// fiber has a partner satisfying it too.
    pub fn partner_property_holds(&self, i: usize) -> bool {
        if !self.criterion[i - 1] {
            return true;
        }
        let fiber = &self.flag.fibers[i - 1];
        fiber.iter().all(|a| fiber.iter().any(|b| self.dual_pair(a, b)))
    }

    /// A pair in `R_i` with equal `a1`-restriction and opposite values on
    /// `s` forces the extremal pair to satisfy the criterion.
    pub fn opposite_pair_property_holds(&self, i: usize) -> bool {
        let fiber = &self.flag.fibers[i - 1];
        let premise = fiber.iter().any(|a| {
            fiber.iter().any(|b| {
                let nb = b.neg();
                self.a1_weight(a) == self.a1_weight(&nb)
                    && self.s_coweights.iter().all(|w| self.eval(a, w) == -self.eval(&nb, w))
            })
        });
        !premise || self.criterion[i - 1]
    }

    fn local_index(&self, i: usize, idx: usize) -> Option<usize> {
        let p = self.n_pos[idx]?;
        self.summand_range(i).contains(&p).then(|| p - self.offsets[i - 1])
    }

    fn to_local(&self, i: usize, x: &AlgebraElement) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); self.summand_dim(i)];
        for (idx, c) in x.terms() {
            v[self.local_index(i, *idx)?] = c.clone();
        }
        Some(v)
    }

    fn from_local(&self, i: usize, v: &[Q]) -> AlgebraElement {
        let els = self.summand_elements(i);
        let terms = v
            .iter()
            .zip(els)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| (e.terms()[0].0, c.clone()));
        AlgebraElement::from_terms(self.alg.ty(), terms)
    }

    /// Matrices of `ad(k)` on summand `i` for the given elements of `k1`.
    fn action_matrices(&self, i: usize, ks: &[AlgebraElement]) -> Vec<Matrix> {
        let d = self.summand_dim(i);
        let els = self.summand_elements(i);
        ks.iter()
            .map(|k| {
                let mut m = zero_matrix(d);
                for (c, e) in els.iter().enumerate() {
                    let v = self.to_local(i, &self.alg.br(k, e)).expect("k1 preserves each summand");
                    for r in 0..d {
                        m[r][c] = v[r].clone();
                    }
                }
                m
            })
            .collect()
    }

    fn closure(mats: &[Matrix], seeds: &[Vec<Q>], d: usize) -> RowSpace {
        let mut space = RowSpace::new(d);
        let mut queue: Vec<Vec<Q>> = Vec::new();
        for s in seeds {
            if space.insert(s) {
                queue.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for m in mats {
                let w = linalg::mat_vec(m, &v);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
            if space.dim() == d {
                break;
            }
        }
        space
    }

    /// Smallest `k1`-invariant subspace of summand `i` containing `seeds`.
    pub fn invariant_span(&self, i: usize, seeds: &[AlgebraElement]) -> Vec<AlgebraElement> {
        let mats = self.action_matrices(i, &self.k1_lie_generators);
        let local: Vec<Vec<Q>> = seeds.iter().map(|s| self.to_local(i, s).expect("seed in summand")).collect();
        let space = Self::closure(&mats, &local, self.summand_dim(i));
        space.rows.iter().map(|r| self.from_local(i, r)).collect()
    }

    /// Painted nodes (1-based) with nonzero coefficient on the t-root of summand `i`.
    pub fn admissible_nodes(&self, i: usize) -> Vec<usize> {
        let xi = &self.flag.troots_plus[i - 1];
        self.flag
            .painted0
            .iter()
            .zip(&xi.0)
            .filter(|(_, c)| **c != 0)
            .map(|(j, _)| j + 1)
            .collect()
    }

    /// `i w_j` for a painted node `j` (1-based).
    pub fn s_element_for_node(&self, j: usize) -> AlgebraElement {
        let a = self.flag.painted0.iter().position(|&p| p + 1 == j).expect("painted node");
        self.s_basis[a].clone()
    }

    /// Splits summand `i` into two `k1`-invariant halves.
    pub fn split_summand(&self, i: usize) -> Result<SummandSplit, MSpaceError> {
        self.check_summand(i)?;
        if !self.is_reducible(i)? {
            return Err(MSpaceError::NotReducible(i));
        }
        let (lo, hi) = self.flag.lowest_highest(i)?;
        let d = self.summand_dim(i);
        let alg = &self.alg;
        if d == 2 {
            let split = SummandSplit {
                summand_index: i,
                status: SplitStatus::Split {
                    n1: vec![alg.a_of(&lo)],
                    n2: vec![alg.b_of(&lo)],
                    seed_low: lo,
                    seed_high: hi,
                },
            };
            return Ok(split);
        }
        let mats = self.action_matrices(i, &self.k1_lie_generators);
        let (a_lo, a_hi, b_hi) = (alg.a_of(&lo), alg.a_of(&hi), alg.b_of(&hi));
        // A_a + A_{-b} first, then sign and A/B variants of the same seed.
        let candidates = [
            (a_lo.sub(&a_hi), a_lo.add(&a_hi)),
            (a_lo.add(&a_hi), a_lo.sub(&a_hi)),
            (a_lo.add(&b_hi), a_lo.sub(&b_hi)),
            (a_lo.sub(&b_hi), a_lo.add(&b_hi)),
        ];
        let h = self.s_element_for_node(self.admissible_nodes(i)[0]);
        for (s1, s2) in candidates {
            let v1 = self.to_local(i, &s1).unwrap();
            let n1 = Self::closure(&mats, &[v1], d);
            if n1.dim() * 2 != d {
                continue;
            }
            let n1e: Vec<AlgebraElement> = n1.rows.iter().map(|r| self.from_local(i, r)).collect();
            let v2 = self.to_local(i, &s2).unwrap();
            let mut n2 = Self::closure(&mats, &[v2], d);
            let mut sum = n1.clone();
            let independent = n2.rows.iter().all(|r| sum.insert(r));
            if n2.dim() * 2 != d || !independent {
                // fall back to the image of n1 under ad(i w_j)
                n2 = RowSpace::new(d);
                for e in &n1e {
                    n2.insert(&self.to_local(i, &alg.br(&h, e)).unwrap());
                }
            }
            let n2e: Vec<AlgebraElement> = n2.rows.iter().map(|r| self.from_local(i, r)).collect();
            if self.verify_split(i, &n1e, &n2e) {
                return Ok(SummandSplit {
                    summand_index: i,
                    status: SplitStatus::Split { n1: n1e, n2: n2e, seed_low: lo, seed_high: hi },
                });
            }
        }
        Err(MSpaceError::NoInvariantSplit(i))
    }

    /// Equal halves, direct sum, B-orthogonality, `k1`-invariance under the full basis, and
    /// `ad(i w_j)` mapping `n1` onto `n2` for every admissible `j`.
    pub fn verify_split(&self, i: usize, n1: &[AlgebraElement], n2: &[AlgebraElement]) -> bool {
        let d = self.summand_dim(i);
        if n1.len() * 2 != d || n2.len() * 2 != d {
            return false;
        }
        let loc = |xs: &[AlgebraElement]| -> Option<RowSpace> {
            let mut s = RowSpace::new(d);
            for x in xs {
                s.insert(&self.to_local(i, x)?);
            }
            Some(s)
        };
        let (Some(s1), Some(s2)) = (loc(n1), loc(n2)) else {
            return false;
        };
        let mut sum = s1.clone();
        for r in &s2.rows {
            sum.insert(r);
        }
        if s1.dim() + s2.dim() != d || sum.dim() != d {
            return false;
        }
        for x in n1 {
            for y in n2 {
                if !self.alg.killing_form(x, y).is_zero() {
                    return false;
                }
            }
        }
        for k in &self.k1_basis {
            for (part, space) in [(n1, &s1), (n2, &s2)] {
                for x in part {
                    match self.to_local(i, &self.alg.br(k, x)) {
                        Some(v) if space.contains(&v) => {}
                        _ => return false,
                    }
                }
            }
        }
        for j in self.admissible_nodes(i) {
            let h = self.s_element_for_node(j);
            let mut img = RowSpace::new(d);
            for x in n1 {
                let v = self.to_local(i, &self.alg.br(&h, x)).unwrap();
                if !s2.contains(&v) {
                    return false;
                }
                img.insert(&v);
            }
            if img.dim() != s2.dim() {
                return false;
            }
        }
        true
    }

    /// Decides irreducibility of summand `i` over the reals from the algebra
    /// `E` of `k1`-equivariant endomorphisms: irreducible iff `E` is a
    /// division algebra (R, C or H).
    pub fn orbit_irreducibility_oracle(&self, i: usize) -> Result<OracleVerdict, MSpaceError> {
        self.check_summand(i)?;
        let d = self.summand_dim(i);
        let mats = self.action_matrices(i, &self.k1_lie_generators);
        let generator_orbits_full = (0..d).all(|c| {
            let mut e = vec![Q::zero(); d];
            e[c] = Q::one();
            Self::closure(&mats, &[e], d).dim() == d
        });
        let commutant = self.commutant(i, &mats);
        let e = commutant.len();
        let kind = Self::division_kind(&commutant, d);
        Ok(OracleVerdict {
            irreducible: kind != ModuleKind::Reducible,
            kind,
            commutant_dim: e,
            generator_orbits_full,
        })
    }

    /// Basis of `{T : T M = M T for all M}`; entries of `T` between root
    /// planes with a1-weights other than `+-` each other vanish automatically.
    fn commutant(&self, i: usize, mats: &[Matrix]) -> Vec<Matrix> {
        let d = self.summand_dim(i);
        let fiber = &self.flag.fibers[i - 1];
        let weights: Vec<Vec<i32>> = (0..d).map(|c| self.a1_weight(&fiber[c / 2])).collect();
        let mut var = vec![vec![None; d]; d];
        let mut nvars = 0;
        for r in 0..d {
            for c in 0..d {
                let neg: Vec<i32> = weights[c].iter().map(|x| -x).collect();
                if weights[r] == weights[c] || weights[r] == neg {
                    var[r][c] = Some(nvars);
                    nvars += 1;
                }
            }
        }
        let mut eqs = RowSpace::new(nvars);
        for m in mats {
            for r in 0..d {
                for c in 0..d {
                    // (T M - M T)[r][c]
                    let mut row = vec![Q::zero(); nvars];
                    let mut any = false;
                    for j in 0..d {
                        if let Some(v) = var[r][j] {
                            if !m[j][c].is_zero() {
                                row[v] += &m[j][c];
                                any = true;
                            }
                        }
                        if let Some(v) = var[j][c] {
                            if !m[r][j].is_zero() {
                                row[v] -= &m[r][j];
                                any = true;
                            }
                        }
                    }
                    if any {
                        eqs.insert(&row);
                    }
                }
            }
        }
        let ns = linalg::nullspace(&eqs.rows, nvars);
        ns.iter()
            .map(|sol| {
                let mut t = zero_matrix(d);
                for r in 0..d {
                    for c in 0..d {
                        if let Some(v) = var[r][c] {
                            t[r][c] = sol[v].clone();
                        }
                    }
                }
                t
            })
            .collect()
    }

    /// Classifies a commutant (always containing the identity). Pure parts
    /// of a real division algebra anticommute up to a negative definite form.
    fn division_kind(basis: &[Matrix], d: usize) -> ModuleKind {
        let e = basis.len();
        if ![1, 2, 4].contains(&e) {
            return ModuleKind::Reducible;
        }
        if e == 1 {
            return ModuleKind::Real;
        }
        let dq = q(d as i64);
        let mut pure_space = RowSpace::new(d * d);
        let mut pure: Vec<Matrix> = Vec::new();
        for t in basis {
            let tr = (0..d).fold(Q::zero(), |acc, k| acc + &t[k][k]) / &dq;
            let mut u = t.clone();
            for k in 0..d {
                u[k][k] -= &tr;
            }
            let flat: Vec<Q> = u.iter().flatten().cloned().collect();
            if pure_space.insert(&flat) {
                pure.push(u);
            }
        }
        if pure.len() != e - 1 {
            return ModuleKind::Reducible;
        }
        let mut form = zero_matrix(pure.len());
        for a in 0..pure.len() {
            for b in a..pure.len() {
                let p = linalg::mat_mul(&pure[a], &pure[b]);
                let r = linalg::mat_mul(&pure[b], &pure[a]);
                let c = (&p[0][0] + &r[0][0]) / q(2);
                for x in 0..d {
                    for y in 0..d {
                        let expect = if x == y { &c * q(2) } else { Q::zero() };
                        if &p[x][y] + &r[x][y] != expect {
                            return ModuleKind::Reducible;
                        }
                    }
                }
                form[a][b] = -c.clone();
                form[b][a] = -c;
            }
        }
        if !is_positive_definite(&form) {
            return ModuleKind::Reducible;
        }
        if e == 2 {
            ModuleKind::Complex
        } else {
            ModuleKind::Quaternionic
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::PaintedDiagram;
    use crate::rootsys::{Family, RootSystemType};

    fn mspace(f: Family, l: usize, painted: &[usize]) -> MSpace {
        let t = RootSystemType::new(f, l).unwrap();
        let d = PaintedDiagram::new(t, painted.iter().copied()).unwrap();
        MSpace::build(&FlagManifold::build(&d).unwrap())
    }

    #[test]
    fn full_flag_a2_bookkeeping() {
        let m = mspace(Family::A, 2, &[1, 2]);
        assert_eq!(m.dim_k1(), 0);
        assert_eq!(m.dim_s(), 2);
        assert_eq!(m.dim_n(), 8);
        m.check_invariants().unwrap();
        for i in 1..=3 {
            assert!(m.is_reducible(i).unwrap());
            let s = m.split(i);
            let SplitStatus::Split { n1, n2, .. } = &s.status else { panic!() };
            assert_eq!((n1.len(), n2.len()), (1, 1));
            let v = m.orbit_irreducibility_oracle(i).unwrap();
            assert!(!v.irreducible);
            assert!(!v.generator_orbits_full);
        }
    }

    #[test]
    fn cp2_bookkeeping() {
        let m = mspace(Family::A, 2, &[1]);
        assert_eq!(m.dim_s(), 1);
        assert_eq!(m.dim_k1(), 3);
        assert_eq!(m.dim_n(), 5);
        m.check_invariants().unwrap();
        for s in &m.s_basis {
            for a in &m.a1_basis {
                assert!(m.alg.killing_form(s, a).is_zero());
            }
        }
    }

    #[test]
    fn cp2_criterion_disagrees_with_commutant() {
        // SU(2) on C^2 = H: irreducible over R, of quaternionic type.
        let m = mspace(Family::A, 2, &[1]);
        assert!(m.is_reducible(1).unwrap());
        let v = m.orbit_irreducibility_oracle(1).unwrap();
        assert!(v.irreducible);
        assert_eq!(v.kind, ModuleKind::Quaternionic);
        assert_eq!(v.commutant_dim, 4);
        assert_eq!(m.split_summand(1), Err(MSpaceError::NoInvariantSplit(1)));
        assert!(!m.split(1).is_split());
    }

    #[test]
    fn a3_middle_node_splits() {
        // SU(2)xSU(2) on two copies of R^4.
        let m = mspace(Family::A, 3, &[2]);
        assert!(m.is_reducible(1).unwrap());
        let v = m.orbit_irreducibility_oracle(1).unwrap();
        assert!(!v.irreducible);
        assert!(v.generator_orbits_full);
        let s = m.split(1);
        let SplitStatus::Split { n1, n2, .. } = &s.status else { panic!("expected a split") };
        assert_eq!((n1.len(), n2.len()), (4, 4));
        for x in n1 {
            for y in n2 {
                assert!(m.alg.killing_form(x, y).is_zero());
            }
        }
    }

    #[test]
    fn projection_matches_gram_solve() {
        let m = mspace(Family::B, 3, &[1, 3]);
        let x = m.alg.ih_element(&[q(1), q(-2), q(3)]);
        let p = m.project_n(&x);
        let direct = m.alg.project_gram(&x, &m.s_basis);
        assert_eq!(p, direct);
        let c = m.coords_n(&p).unwrap();
        assert_eq!(m.from_coords_n(&c), p);
        assert!(matches!(m.coords_n(&x), Err(MSpaceError::OutOfSubspace)));
    }

    #[test]
    fn structural_props_on_several_spaces() {
        for (f, l, p) in [
            (Family::A, 3, vec![1]),
            (Family::A, 4, vec![2, 4]),
            (Family::B, 3, vec![2]),
            (Family::C, 3, vec![3]),
            (Family::G, 2, vec![1]),
        ] {
            let m = mspace(f, l, &p);
            m.check_invariants().unwrap();
            for i in 1..=m.s_count() {
                assert!(m.partner_property_holds(i));
                assert!(m.opposite_pair_property_holds(i));
            }
        }
    }
}
