//! Chevalley structure constants and the compact real form.
//!
//! The complex algebra uses a Chevalley basis `h_1..h_l, e_alpha` with
//! `[e_a, e_-a] = h_{a^vee}` and integral `N_{a,b} = +-(p+1)`. The compact
//! form is spanned by `iH_j = i h_j`, `A_a = e_a - e_-a` and
//! `B_a = i (e_a + e_-a)` for positive `a`; its structure constants are
//! integers and are tabulated once per algebra.

use crate::rational::{common_denominator, q, Q};
use num_bigint::BigInt;
use crate::rootsys::{Root, RootSystem, RootSystemType};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("elements belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(RootSystemType, RootSystemType),
    #[error("basis vectors {0} and {1} are not orthogonal")]
    NonOrthogonalBasis(usize, usize),
    #[error("basis vector {0} is zero or has non-positive norm")]
    DegenerateBasis(usize),
}

/// Table of `N_{a,b}` over all ordered pairs of roots with `a + b` a root.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    nroots: usize,
    table: Vec<i32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NEntry {
    pub alpha: Vec<i32>,
    pub beta: Vec<i32>,
    #[serde(rename = "N")]
    pub n: i32,
}

impl StructureConstants {
    /// `N_{a,b}` by root ids, zero when `a + b` is not a root.
    pub fn get_by_id(&self, a: usize, b: usize) -> i32 {
        self.table[a * self.nroots + b]
    }

    pub fn get(&self, rs: &RootSystem, a: &Root, b: &Root) -> Option<i32> {
        let (ia, ib) = (rs.root_id(a)?, rs.root_id(b)?);
        match self.get_by_id(ia, ib) {
            0 => None,
            v => Some(v),
        }
    }

    /// All nonzero entries, in root-id order.
    pub fn entries(&self, rs: &RootSystem) -> Vec<NEntry> {
        let mut out = Vec::new();
        for a in 0..self.nroots {
            for b in 0..self.nroots {
                let n = self.get_by_id(a, b);
                if n != 0 {
                    out.push(NEntry { alpha: rs.root_by_id(a).0, beta: rs.root_by_id(b).0, n });
                }
            }
        }
        out
    }
}

/// Signs come from the extraspecial pairs of the canonical positive order;
/// everything else follows from the standard identities between the `N`s.
pub fn compute_structure_constants(rs: &RootSystem) -> StructureConstants {
    let nr = rs.num_roots();
    let npos = rs.num_positive();
    let roots: Vec<Root> = rs.roots().collect();
    let norm: Vec<Q> = roots.iter().map(|r| rs.pair_gram(r, r)).collect();
    let mut t = vec![0i32; nr * nr];
    let id = |r: &Root| rs.root_id(r);

    // General N through positive-pair entries already in the table.
    fn general(t: &[i32], nr: usize, npos: usize, roots: &[Root], norm: &[Q],
               rs: &RootSystem, a: usize, b: usize) -> Q {
        let pos = |i: usize| i < npos;
        let neg = |i: usize| if i < npos { i + npos } else { i - npos };
        let Some(c) = rs.root_id(&roots[a].add(&roots[b])) else {
            return Q::zero();
        };
        match (pos(a), pos(b)) {
            (true, true) => q(t[a * nr + b] as i64),
            (false, false) => -general(t, nr, npos, roots, norm, rs, neg(a), neg(b)),
            (false, true) => -general(t, nr, npos, roots, norm, rs, b, a),
            (true, false) => {
                if pos(c) {
                    &norm[c] / &norm[a] * q(t[c * nr + neg(b)] as i64)
                } else {
                    &norm[c] / &norm[b] * q(t[neg(c) * nr + a] as i64)
                }
            }
        }
    }

    for xi in 0..npos {
        let rxi = &roots[xi];
        let pairs: Vec<(usize, usize)> = (0..xi)
            .filter_map(|a| {
                let b = id(&rxi.sub(&roots[a]))?;
                (b < npos && a < b).then_some((a, b))
            })
            .collect();
        let Some(&(a0, b0)) = pairs.first() else {
            continue;
        };
        let (p, _) = rs.root_string(&roots[a0], &roots[b0]).unwrap();
        let n0 = p as i32 + 1;
        t[a0 * nr + b0] = n0;
        t[b0 * nr + a0] = -n0;
        for &(c, d) in &pairs[1..] {
            let mut acc = Q::zero();
            let d_a = roots[d].sub(&roots[a0]);
            if let Some(ida) = id(&d_a) {
                let na = neg_id(a0, npos);
                let nb = neg_id(b0, npos);
                acc += general(&t, nr, npos, &roots, &norm, rs, d, na)
                    * general(&t, nr, npos, &roots, &norm, rs, c, nb)
                    / &norm[ida];
            }
            let c_a = roots[c].sub(&roots[a0]);
            if let Some(ica) = id(&c_a) {
                let na = neg_id(a0, npos);
                let nb = neg_id(b0, npos);
                acc += general(&t, nr, npos, &roots, &norm, rs, na, c)
                    * general(&t, nr, npos, &roots, &norm, rs, d, nb)
                    / &norm[ica];
            }
            let v = &norm[xi] / q(n0 as i64) * acc;
            assert!(v.is_integer(), "non-integral structure constant");
            let v: i32 = v.to_integer().try_into().unwrap();
            t[c * nr + d] = v;
            t[d * nr + c] = -v;
        }
    }
    let mut out = vec![0i32; nr * nr];
    for a in 0..nr {
        for b in 0..nr {
            let v = general(&t, nr, npos, &roots, &norm, rs, a, b);
            assert!(v.is_integer());
            out[a * nr + b] = v.to_integer().try_into().unwrap();
        }
    }
    StructureConstants { nroots: nr, table: out }
}

fn neg_id(i: usize, npos: usize) -> usize {
    if i < npos {
        i + npos
    } else {
        i - npos
    }
}

/// A basis vector of the compact real form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `i h_j` for the simple coroot with 0-based index `j`.
    IH(usize),
    A(Root),
    B(Root),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::IH(j) => write!(f, "iH{}", j + 1),
            Generator::A(r) => write!(f, "A{r}"),
            Generator::B(r) => write!(f, "B{r}"),
        }
    }
}

/// Sparse exact combination of generators; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub algebra: RootSystemType,
    terms: Vec<(usize, Q)>,
}

impl AlgebraElement {
    pub fn zero(algebra: RootSystemType) -> Self {
        AlgebraElement { algebra, terms: vec![] }
    }

    pub fn basis(algebra: RootSystemType, idx: usize) -> Self {
        AlgebraElement { algebra, terms: vec![(idx, Q::one())] }
    }

    pub fn from_terms(algebra: RootSystemType, terms: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut m: std::collections::BTreeMap<usize, Q> = Default::default();
        for (i, c) in terms {
            *m.entry(i).or_insert_with(Q::zero) += c;
        }
        AlgebraElement { algebra, terms: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(algebra: RootSystemType, v: &[Q]) -> Self {
        AlgebraElement {
            algebra,
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); dim];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }

    pub fn terms(&self) -> &[(usize, Q)] {
        &self.terms
    }

    pub fn coeff(&self, idx: usize) -> Q {
        match self.terms.binary_search_by_key(&idx, |(i, _)| *i) {
            Ok(p) => self.terms[p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.algebra);
        }
        AlgebraElement {
            algebra: self.algebra,
            terms: self.terms.iter().map(|(i, c)| (*i, c * k)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.algebra, o.algebra, "algebra mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let a = self.terms.get(i);
            let b = o.terms.get(j);
            match (a, b) {
                (Some((ia, ca)), Some((ib, cb))) if ia == ib => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ia, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ia, ca)), Some((ib, _))) if ia < ib => {
                    out.push((*ia, ca.clone()));
                    i += 1;
                }
                (Some((ia, ca)), None) => {
                    out.push((*ia, ca.clone()));
                    i += 1;
                }
                (_, Some((ib, cb))) => {
                    out.push((*ib, cb.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        AlgebraElement { algebra: self.algebra, terms: out }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Keeps only the coefficients whose index passes `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        AlgebraElement {
            algebra: self.algebra,
            terms: self.terms.iter().filter(|(i, _)| keep(*i)).cloned().collect(),
        }
    }
}

/// The compact real form of one simple algebra.
#[derive(Debug)]
pub struct Algebra {
    pub rs: Arc<RootSystem>,
    pub constants: StructureConstants,
    generators: Vec<Generator>,
    table: Vec<Vec<(u32, i64)>>,
    killing: OnceLock<Vec<Vec<i64>>>,
}

type Cx = (Q, Q);

fn cx_mul(a: &Cx, b: &Cx) -> Cx {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

impl Algebra {
    pub fn build(t: RootSystemType) -> Result<Algebra, crate::rootsys::RootSysError> {
        let rs = Arc::new(RootSystem::build(t)?);
        Ok(Self::from_root_system(rs))
    }

    /// Cached per type; building the tables is the expensive part.
    pub fn shared(t: RootSystemType) -> Result<Arc<Algebra>, crate::rootsys::RootSysError> {
        static CACHE: OnceLock<Mutex<HashMap<RootSystemType, Arc<Algebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(a) = cache.lock().unwrap().get(&t) {
            return Ok(a.clone());
        }
        let a = Arc::new(Self::build(t)?);
        cache.lock().unwrap().insert(t, a.clone());
        Ok(a)
    }

    pub fn from_root_system(rs: Arc<RootSystem>) -> Algebra {
        let constants = compute_structure_constants(&rs);
        let l = rs.rank();
        let npos = rs.num_positive();
        let mut generators: Vec<Generator> = (0..l).map(Generator::IH).collect();
        for r in rs.positive_roots() {
            generators.push(Generator::A(r.clone()));
            generators.push(Generator::B(r.clone()));
        }
        let dim = generators.len();
        let roots: Vec<Root> = rs.roots().collect();
        let coroots: Vec<Vec<i32>> = roots.iter().map(|r| rs.coroot_coords(r)).collect();

        // Complex basis: h_k -> k, e_root(id) -> l + id.
        let to_complex = |g: usize| -> Vec<(usize, Cx)> {
            let (o, z) = (Q::one(), Q::zero());
            if g < l {
                return vec![(g, (z, o))];
            }
            let p = (g - l) / 2;
            let (pe, ne) = (l + p, l + p + npos);
            if (g - l) % 2 == 0 {
                vec![(pe, (o.clone(), z.clone())), (ne, (-o, z))]
            } else {
                vec![(pe, (z.clone(), o.clone())), (ne, (z, o))]
            }
        };
        let complex_bracket = |x: usize, y: usize| -> Vec<(usize, i64)> {
            match (x < l, y < l) {
                (true, true) => vec![],
                (true, false) => {
                    let r = &roots[y - l];
                    vec![(y, rs.cartan_pairing_simple(r, x) as i64)]
                }
                (false, true) => {
                    let r = &roots[x - l];
                    vec![(x, -(rs.cartan_pairing_simple(r, y) as i64))]
                }
                (false, false) => {
                    let (a, b) = (x - l, y - l);
                    if roots[a].add(&roots[b]).is_zero() {
                        coroots[a]
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| **c != 0)
                            .map(|(k, c)| (k, *c as i64))
                            .collect()
                    } else {
                        match constants.get_by_id(a, b) {
                            0 => vec![],
                            n => {
                                let s = rs.root_id(&roots[a].add(&roots[b])).unwrap();
                                vec![(l + s, n as i64)]
                            }
                        }
                    }
                }
            }
        };

        let mut table = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc: HashMap<usize, Cx> = HashMap::new();
                for (xi, cx) in to_complex(i) {
                    for (yj, cy) in to_complex(j) {
                        let c = cx_mul(&cx, &cy);
                        for (k, n) in complex_bracket(xi, yj) {
                            let e = acc.entry(k).or_insert((Q::zero(), Q::zero()));
                            e.0 += &c.0 * q(n);
                            e.1 += &c.1 * q(n);
                        }
                    }
                }
                let zero = (Q::zero(), Q::zero());
                let mut out: Vec<(u32, i64)> = Vec::new();
                let as_int = |v: Q| -> i64 {
                    assert!(v.is_integer(), "non-integral real structure constant");
                    v.to_integer().try_into().unwrap()
                };
                for k in 0..l {
                    let c = acc.get(&k).unwrap_or(&zero);
                    assert!(c.0.is_zero(), "bracket left the compact form");
                    if !c.1.is_zero() {
                        out.push((k as u32, as_int(c.1.clone())));
                    }
                }
                for p in 0..npos {
                    let u = acc.get(&(l + p)).unwrap_or(&zero);
                    let v = acc.get(&(l + p + npos)).unwrap_or(&zero);
                    let two = q(2);
                    let x = (&u.0 - &v.0) / &two;
                    let xi = (&u.1 - &v.1) / &two;
                    let y = (&u.1 + &v.1) / &two;
                    let yi = -(&u.0 + &v.0) / &two;
                    assert!(xi.is_zero() && yi.is_zero(), "bracket left the compact form");
                    if !x.is_zero() {
                        out.push(((l + 2 * p) as u32, as_int(x)));
                    }
                    if !y.is_zero() {
                        out.push(((l + 2 * p + 1) as u32, as_int(y)));
                    }
                }
                table[i * dim + j] = out;
            }
        }
        let mut rows = Vec::with_capacity(dim * dim);
        rows.extend(table);
        Algebra { rs, constants, generators, table: rows, killing: OnceLock::new() }
    }

    pub fn ty(&self) -> RootSystemType {
        self.rs.ty
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.generators[idx]
    }

    pub fn index_of(&self, g: &Generator) -> Option<usize> {
        let l = self.rank();
        match g {
            Generator::IH(j) => (*j < l).then_some(*j),
            Generator::A(r) => {
                let p = self.rs.root_id(r).filter(|&p| p < self.rs.num_positive())?;
                Some(l + 2 * p)
            }
            Generator::B(r) => {
                let p = self.rs.root_id(r).filter(|&p| p < self.rs.num_positive())?;
                Some(l + 2 * p + 1)
            }
        }
    }

    /// Index of `A_a` for the positive root with id `p`.
    pub fn a_index(&self, p: usize) -> usize {
        self.rank() + 2 * p
    }

    pub fn b_index(&self, p: usize) -> usize {
        self.rank() + 2 * p + 1
    }

    pub fn is_torus_index(&self, idx: usize) -> bool {
        idx < self.rank()
    }

    /// Positive-root id carried by an `A`/`B` generator.
    pub fn root_of_index(&self, idx: usize) -> Option<usize> {
        (idx >= self.rank()).then(|| (idx - self.rank()) / 2)
    }

    pub fn elem(&self, g: &Generator) -> AlgebraElement {
        AlgebraElement::basis(self.ty(), self.index_of(g).expect("generator of this algebra"))
    }

    pub fn basis_elem(&self, idx: usize) -> AlgebraElement {
        AlgebraElement::basis(self.ty(), idx)
    }

    /// `A_r` for any root `r`, using `A_{-a} = -A_a`.
    pub fn a_of(&self, r: &Root) -> AlgebraElement {
        if r.is_positive() {
            self.elem(&Generator::A(r.clone()))
        } else {
            self.elem(&Generator::A(r.neg())).neg()
        }
    }

    /// `B_r` for any root `r`, using `B_{-a} = B_a`.
    pub fn b_of(&self, r: &Root) -> AlgebraElement {
        if r.is_positive() {
            self.elem(&Generator::B(r.clone()))
        } else {
            self.elem(&Generator::B(r.neg()))
        }
    }

    /// `i h` for `h` given over the simple coroots.
    pub fn ih_element(&self, h: &[Q]) -> AlgebraElement {
        AlgebraElement::from_terms(self.ty(), h.iter().cloned().enumerate())
    }

    pub fn bracket_generators(&self, i: usize, j: usize) -> &[(u32, i64)] {
        &self.table[i * self.dim() + j]
    }

    fn check(&self, x: &AlgebraElement) -> Result<(), ChevalleyError> {
        if x.algebra == self.ty() {
            Ok(())
        } else {
            Err(ChevalleyError::AlgebraMismatch(self.ty(), x.algebra))
        }
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, ChevalleyError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.br(x, y))
    }

    /// Bracket without the algebra check, for internal use.
    pub fn br(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.br_integral(x, y).unwrap_or_else(|| self.br_rational(x, y))
    }

    /// Clears denominators and accumulates in `i128`; `None` on overflow.
    fn br_integral(&self, x: &AlgebraElement, y: &AlgebraElement) -> Option<AlgebraElement> {
        let scaled = |e: &AlgebraElement| -> Option<(i128, Vec<(usize, i128)>)> {
            let d = i128::try_from(common_denominator(e.terms().iter().map(|(_, c)| c))).ok()?;
            let t = e
                .terms()
                .iter()
                .map(|(i, c)| Some((*i, i128::try_from(c.numer()).ok()?.checked_mul(d / i128::try_from(c.denom()).ok()?)?)))
                .collect::<Option<Vec<_>>>()?;
            Some((d, t))
        };
        let (dx, tx) = scaled(x)?;
        let (dy, ty) = scaled(y)?;
        let den = dx.checked_mul(dy)?;
        let dim = self.dim();
        let mut acc = vec![0i128; dim];
        for &(i, a) in &tx {
            for &(j, b) in &ty {
                let entries = &self.table[i * dim + j];
                if entries.is_empty() {
                    continue;
                }
                let ab = a.checked_mul(b)?;
                for &(k, n) in entries {
                    let k = k as usize;
                    acc[k] = acc[k].checked_add(ab.checked_mul(n as i128)?)?;
                }
            }
        }
        let den = BigInt::from(den);
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (k, Q::new(BigInt::from(c), den.clone())))
            .collect();
        Some(AlgebraElement { algebra: self.ty(), terms })
    }

    fn br_rational(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let dim = self.dim();
        let mut acc = vec![Q::zero(); dim];
        let mut touched = vec![false; dim];
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let entries = &self.table[i * dim + j];
                if entries.is_empty() {
                    continue;
                }
                let ab = a * b;
                for &(k, n) in entries {
                    let k = k as usize;
                    touched[k] = true;
                    if n == 1 {
                        acc[k] += &ab;
                    } else if n == -1 {
                        acc[k] -= &ab;
                    } else {
                        acc[k] += &ab * q(n);
                    }
                }
            }
        }
        AlgebraElement {
            algebra: self.ty(),
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(k, c)| touched[*k] && !c.is_zero())
                .collect(),
        }
    }

    /// Matrix of `B = -Killing` on the generator basis, `-tr(ad x ad y)`.
    pub fn killing_gram(&self) -> &Vec<Vec<i64>> {
        self.killing.get_or_init(|| {
            let dim = self.dim();
            let mut k = vec![vec![0i64; dim]; dim];
            let mut ad_i = vec![0i64; dim * dim];
            for i in 0..dim {
                ad_i.iter_mut().for_each(|v| *v = 0);
                for m in 0..dim {
                    for &(r, c) in &self.table[i * dim + m] {
                        ad_i[r as usize * dim + m] = c;
                    }
                }
                for j in i..dim {
                    let mut tr = 0i64;
                    for kk in 0..dim {
                        for &(m, c) in &self.table[j * dim + kk] {
                            let v = ad_i[kk * dim + m as usize];
                            if v != 0 {
                                tr += v * c;
                            }
                        }
                    }
                    k[i][j] = -tr;
                    k[j][i] = -tr;
                }
            }
            k
        })
    }

    pub fn killing_form(&self, x: &AlgebraElement, y: &AlgebraElement) -> Q {
        let g = self.killing_gram();
        let mut acc = Q::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let v = g[*i][*j];
                if v != 0 {
                    acc += a * b * q(v);
                }
            }
        }
        acc
    }

    /// `B(ih, ih')` from the root sum `sum_gamma gamma(h) gamma(h')`.
    pub fn killing_form_torus_root_sum(&self, h: &[Q], h2: &[Q]) -> Q {
        self.rs
            .roots()
            .map(|g| self.rs.eval_on_coroot_coords(&g, h) * self.rs.eval_on_coroot_coords(&g, h2))
            .fold(Q::zero(), |a, b| a + b)
    }

    /// B-orthogonal projection onto the span of a pairwise orthogonal basis.
    pub fn project(&self, x: &AlgebraElement, basis: &[AlgebraElement]) -> Result<AlgebraElement, ChevalleyError> {
        self.check(x)?;
        for (i, b) in basis.iter().enumerate() {
            self.check(b)?;
            for (j, c) in basis.iter().enumerate().skip(i + 1) {
                if !self.killing_form(b, c).is_zero() {
                    return Err(ChevalleyError::NonOrthogonalBasis(i, j));
                }
            }
        }
        let mut out = AlgebraElement::zero(self.ty());
        for (i, b) in basis.iter().enumerate() {
            let n = self.killing_form(b, b);
            if !n.is_positive() {
                return Err(ChevalleyError::DegenerateBasis(i));
            }
            let c = self.killing_form(x, b) / n;
            out = out.add(&b.scale(&c));
        }
        Ok(out)
    }

    /// B-orthogonal projection onto the span of an arbitrary independent set,
    /// by solving the Gram system.
    pub fn project_gram(&self, x: &AlgebraElement, basis: &[AlgebraElement]) -> AlgebraElement {
        let n = basis.len();
        let gram: Vec<Vec<Q>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| self.killing_form(a, b)).collect())
            .collect();
        let rhs: Vec<Q> = basis.iter().map(|b| self.killing_form(x, b)).collect();
        let sol = crate::linalg::solve(&gram, &rhs, n)
            .solution
            .expect("Gram system of an independent set is solvable");
        basis
            .iter()
            .zip(&sol)
            .fold(AlgebraElement::zero(self.ty()), |acc, (b, c)| acc.add(&b.scale(c)))
    }

    pub fn jacobi(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> AlgebraElement {
        let a = self.br(x, &self.br(y, z));
        let b = self.br(y, &self.br(z, x));
        let c = self.br(z, &self.br(x, y));
        a.add(&b).add(&c)
    }

    /// Jacobi identity on generator triples using the integer table only.
    pub fn jacobi_generators_vanish(&self, i: usize, j: usize, k: usize) -> bool {
        let dim = self.dim();
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for &(m, n1) in &self.table[b * dim + c] {
                for &(r, n2) in &self.table[a * dim + m as usize] {
                    *acc.entry(r).or_default() += n1 * n2;
                }
            }
        }
        acc.values().all(|v| *v == 0)
    }

    /// `B([z,x],y) + B(x,[z,y])` on generators, in integers.
    pub fn invariance_generators_vanish(&self, z: usize, x: usize, y: usize) -> bool {
        let dim = self.dim();
        let g = self.killing_gram();
        let mut s = 0i64;
        for &(m, c) in &self.table[z * dim + x] {
            s += c * g[m as usize][y];
        }
        for &(m, c) in &self.table[z * dim + y] {
            s += c * g[x][m as usize];
        }
        s == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::rootsys::Family;

    fn alg(f: Family, l: usize) -> Arc<Algebra> {
        Algebra::shared(RootSystemType::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn a2_structure_constants() {
        let a = alg(Family::A, 2);
        let (a1, a2) = (Root(vec![1, 0]), Root(vec![0, 1]));
        assert_eq!(a.constants.get(&a.rs, &a1, &a2).unwrap().abs(), 1);
        assert_eq!(
            a.constants.get(&a.rs, &a2, &a1),
            a.constants.get(&a.rs, &a1, &a2).map(|v| -v)
        );
    }

    #[test]
    fn constants_are_antisymmetric_and_chevalley_normalized() {
        for (f, l) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::G, 2), (Family::F, 4), (Family::D, 4)] {
            let a = alg(f, l);
            let rs = &a.rs;
            let roots: Vec<Root> = rs.roots().collect();
            for x in &roots {
                for y in &roots {
                    let n = a.constants.get(rs, x, y);
                    if !rs.is_root(&x.add(y)) {
                        assert!(n.is_none());
                        continue;
                    }
                    let n = n.unwrap();
                    assert_eq!(a.constants.get(rs, y, x), Some(-n));
                    assert_eq!(a.constants.get(rs, &x.neg(), &y.neg()), Some(-n));
                    let (p, _) = rs.root_string(x, y).unwrap();
                    assert_eq!(n.abs(), p as i32 + 1);
                }
            }
        }
    }

    #[test]
    fn g2_constants_bounded_by_three() {
        let a = alg(Family::G, 2);
        let e = a.constants.entries(&a.rs);
        assert!(e.iter().all(|x| (1..=3).contains(&x.n.abs())));
        assert!(e.iter().any(|x| x.n.abs() == 3));
    }

    #[test]
    fn compact_basis_brackets_on_a2() {
        let a = alg(Family::A, 2);
        let r1 = Root(vec![1, 0]);
        let x = a.br(&a.elem(&Generator::A(r1.clone())), &a.elem(&Generator::B(r1.clone())));
        // 2 iH of the coroot of alpha_1
        assert_eq!(x, a.basis_elem(0).scale(&q(2)));
        for p in 0..a.rs.num_positive() {
            let beta = a.rs.positive_roots()[p].clone();
            for j in 0..2 {
                let ih = a.basis_elem(j);
                let v = q(a.rs.cartan_pairing_simple(&beta, j) as i64);
                assert_eq!(a.br(&ih, &a.a_of(&beta)), a.b_of(&beta).scale(&v));
                assert_eq!(a.br(&ih, &a.b_of(&beta)), a.a_of(&beta).scale(&-v));
            }
        }
    }

    #[test]
    fn real_brackets_follow_complex_constants() {
        let a = alg(Family::B, 3);
        let rs = &a.rs;
        let pos = rs.positive_roots().to_vec();
        let n = |x: &Root, y: &Root| q(a.constants.get(rs, x, y).unwrap_or(0) as i64);
        for x in &pos {
            for y in &pos {
                if x == y {
                    continue;
                }
                let lhs = a.br(&a.a_of(x), &a.a_of(y));
                let mut rhs = AlgebraElement::zero(a.ty());
                if rs.is_root(&x.add(y)) {
                    rhs = rhs.add(&a.a_of(&x.add(y)).scale(&n(x, y)));
                }
                if rs.is_root(&x.sub(y)) {
                    rhs = rhs.add(&a.a_of(&x.sub(y)).scale(&n(&x.neg(), y)));
                }
                assert_eq!(lhs, rhs);
                let lhs = a.br(&a.b_of(x), &a.b_of(y));
                let mut rhs = AlgebraElement::zero(a.ty());
                if rs.is_root(&x.add(y)) {
                    rhs = rhs.add(&a.a_of(&x.add(y)).scale(&-n(x, y)));
                }
                if rs.is_root(&x.sub(y)) {
                    rhs = rhs.add(&a.a_of(&x.sub(y)).scale(&-n(x, &y.neg())));
                }
                assert_eq!(lhs, rhs);
                let lhs = a.br(&a.a_of(x), &a.b_of(y));
                let mut rhs = AlgebraElement::zero(a.ty());
                if rs.is_root(&x.add(y)) {
                    rhs = rhs.add(&a.b_of(&x.add(y)).scale(&n(x, y)));
                }
                if rs.is_root(&x.sub(y)) {
                    rhs = rhs.add(&a.b_of(&x.sub(y)).scale(&n(x, &y.neg())));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn jacobi_on_all_generator_triples_small_types() {
        for (f, l) in [(Family::A, 1), (Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::A, 3)] {
            let a = alg(f, l);
            let d = a.dim();
            for i in 0..d {
                for j in i + 1..d {
                    for k in j + 1..d {
                        assert!(a.jacobi_generators_vanish(i, j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn killing_form_properties() {
        let a = alg(Family::A, 2);
        let d = a.dim();
        let g = a.killing_gram();
        for i in 0..d {
            assert!(g[i][i] > 0);
            for j in 0..d {
                assert_eq!(g[i][j], g[j][i]);
                let both_torus = a.is_torus_index(i) && a.is_torus_index(j);
                if i != j && !both_torus {
                    assert_eq!(g[i][j], 0);
                }
            }
        }
        let h = vec![q(1), q(0)];
        let ih = a.ih_element(&h);
        assert_eq!(a.killing_form(&ih, &ih), a.killing_form_torus_root_sum(&h, &h));
        assert_eq!(a.killing_form(&ih, &ih), q(12));
    }

    #[test]
    fn killing_scale_matches_trace_form() {
        for (f, l) in [(Family::A, 3), (Family::B, 2), (Family::C, 3), (Family::G, 2), (Family::D, 4)] {
            let a = alg(f, l);
            let rs = &a.rs;
            for i in 0..l {
                let alpha = Root::simple(l, i);
                let mut h = vec![Q::zero(); l];
                h[i] = q(1);
                let ih = a.ih_element(&h);
                // dual pairing of alpha_i is 4 / K(h_i, h_i)
                assert_eq!(q(4) / a.killing_form(&ih, &ih), rs.pair_b(&alpha, &alpha));
            }
        }
    }

    #[test]
    fn projections() {
        let a = alg(Family::A, 2);
        let r = Root(vec![1, 0]);
        let all: Vec<AlgebraElement> = (0..a.dim()).map(|i| a.basis_elem(i)).collect();
        let x = a.a_of(&r).add(&a.basis_elem(0).scale(&qf(3, 2)));
        assert!(matches!(a.project(&x, &all), Err(ChevalleyError::NonOrthogonalBasis(0, 1))));
        let orth: Vec<AlgebraElement> = all[2..].to_vec();
        assert_eq!(a.project(&a.a_of(&r), &orth).unwrap(), a.a_of(&r));
        assert!(a.project(&a.a_of(&r), &[a.b_of(&r)]).unwrap().is_zero());
        assert_eq!(a.project_gram(&x, &all), x);
    }

    #[test]
    fn integral_bracket_matches_rational_path() {
        let a = alg(Family::B, 3);
        let d = a.dim();
        let x = AlgebraElement::from_dense(a.ty(), &(0..d).map(|i| qf(i as i64 - 7, 1 + (i % 5) as i64)).collect::<Vec<_>>());
        let y = AlgebraElement::from_dense(a.ty(), &(0..d).map(|i| qf(3 - (i % 4) as i64, 1 + (i % 7) as i64)).collect::<Vec<_>>());
        assert_eq!(a.br_integral(&x, &y).unwrap(), a.br_rational(&x, &y));
        // numerators beyond i128 take the rational path
        let huge = Q::new(BigInt::from(10).pow(40), BigInt::from(3));
        let z = x.scale(&huge);
        assert!(a.br_integral(&z, &z.scale(&huge)).is_none());
        assert_eq!(a.br(&z, &y), a.br_rational(&z, &y));
    }

    #[test]
    fn root_bracket_is_a_multiple_of_the_b_dual() {
        // [A_b, B_b] = 2 iH_{b^vee}; the B-dual T_b of b differs by B(iH_{b^vee}, iH_{b^vee})
        let a = alg(Family::B, 3);
        let l = a.rank();
        let gram: Vec<Vec<Q>> = (0..l)
            .map(|j| (0..l).map(|k| a.killing_form(&a.basis_elem(j), &a.basis_elem(k))).collect())
            .collect();
        let mut factors = Vec::new();
        for beta in a.rs.positive_roots().to_vec() {
            let pairing: Vec<Q> = (0..l).map(|j| q(a.rs.cartan_pairing_simple(&beta, j) as i64)).collect();
            let c = crate::linalg::solve(&gram, &pairing, l).solution.unwrap();
            let dual = a.ih_element(&c);
            let hv = a.ih_element(&a.rs.coroot_coords(&beta).iter().map(|&v| q(v as i64)).collect::<Vec<_>>());
            let factor = a.killing_form(&hv, &hv);
            assert_eq!(a.br(&a.a_of(&beta), &a.b_of(&beta)), dual.scale(&factor));
            factors.push(factor);
        }
        factors.sort();
        factors.dedup();
        // one factor per root length
        assert_eq!(factors.len(), 2);
    }
}
