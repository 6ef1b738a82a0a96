//! Exact geodesic-orbit checks on M-spaces.
//!
//! The central test: `x in n` generates a homogeneous geodesic iff some
//! `k in k1` satisfies `[k + x, Lambda x]_n = 0`. This is linear in `k`, so
//! each probe is an exact linear feasibility problem. Infeasibility comes
//! with a certificate `z in n` that is B-orthogonal to every column of the
//! system but not to its right-hand side.

use crate::chevalley::{Algebra, AlgebraElement};
use crate::linalg::{self, Matrix, RowSpace};
use crate::metric::{MetricError, MetricOperator, MetricSpec, SummandParams, SummandSpec};
use crate::mspace::{MSpace, SplitStatus};
use crate::rational::{fmt_q, q, qf, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RANDOM_PROBES: usize = 200;
pub const SAMPLING_NOTE: &str = "sampling evidence only";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeoError {
    #[error("zero vector")]
    ZeroVector,
    #[error("element has components outside n")]
    OutOfSubspace,
    #[error("element is not in k1")]
    NotInK1,
    #[error("vectors are not eigenvectors of the metric operator")]
    NotEigenvectors,
    #[error("eigenvalues are equal")]
    EqualEigenvalues,
    #[error("bad subalgebra chain: {0}")]
    BadChain(String),
    #[error("theorem not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Geodesic,
    NotGeodesic { y: AlgebraElement, value: Q },
    Feasible { witness: AlgebraElement },
    Infeasible { certificate: AlgebraElement, rank_a: usize, rank_augmented: usize },
    Refuted { counterexample: AlgebraElement, certificate: AlgebraElement, probe_index: usize },
    PassedSamples { count: usize },
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Geodesic => "GEODESIC",
            Verdict::NotGeodesic { .. } => "NOT_GEODESIC",
            Verdict::Feasible { .. } => "FEASIBLE",
            Verdict::Infeasible { .. } => "INFEASIBLE",
            Verdict::Refuted { .. } => "REFUTED",
            Verdict::PassedSamples { .. } => "PASSED_SAMPLES",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_passed(&self) -> bool {
        matches!(self, Verdict::PassedSamples { .. })
    }
}

/// `u^T G v`.
fn bilinear(g: &Matrix, u: &[Q], v: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !g[i][j].is_zero() {
                acc += ui * vj * &g[i][j];
            }
        }
    }
    acc
}

enum SpanSolve {
    Solved(Vec<Q>),
    Blocked { certificate: Vec<Q>, rank_a: usize, rank_augmented: usize },
}

/// Solves `sum_j c_j cols[j] = rhs`. On failure returns the component of
/// `rhs` that is `gram`-orthogonal to the span of the columns.
fn solve_in_span(cols: &[Vec<Q>], rhs: &[Q], gram: &Matrix) -> SpanSolve {
    let n = rhs.len();
    let a: Matrix = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let sol = linalg::solve(&a, rhs, cols.len());
    if let Some(c) = sol.solution {
        return SpanSolve::Solved(c);
    }
    let mut space = RowSpace::new(n);
    let basis: Vec<&Vec<Q>> = cols.iter().filter(|c| space.insert(c)).collect();
    let gc: Matrix = basis.iter().map(|u| basis.iter().map(|v| bilinear(gram, u, v)).collect()).collect();
    let t: Vec<Q> = basis.iter().map(|u| bilinear(gram, u, rhs)).collect();
    let mut z = rhs.to_vec();
    if !basis.is_empty() {
        let y = linalg::solve(&gc, &t, basis.len()).solution.expect("Gram matrix of a basis is invertible");
        for (yi, b) in y.iter().zip(&basis) {
            if !yi.is_zero() {
                for r in 0..n {
                    z[r] -= yi * &b[r];
                }
            }
        }
    }
    SpanSolve::Blocked { certificate: z, rank_a: sol.rank_a, rank_augmented: sol.rank_augmented }
}

fn combine(basis: &[AlgebraElement], coeffs: &[Q], alg: &Algebra) -> AlgebraElement {
    let mut out = AlgebraElement::zero(alg.ty());
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out = out.add(&b.scale(c));
        }
    }
    out
}

/// The linear system of the geodesic-orbit criterion at `x`, in `n`
/// coordinates: columns `[k_j, Lambda x]`, right-hand side `-[x, Lambda x]_n`.
struct GoSystem {
    cols: Vec<Vec<Q>>,
    rhs: Vec<Q>,
}

fn go_system(op: &MetricOperator, x: &AlgebraElement) -> Result<GoSystem, GeoError> {
    let m = &op.mspace;
    if x.is_zero() {
        return Err(GeoError::ZeroVector);
    }
    let y = op.apply(x).map_err(|_| GeoError::OutOfSubspace)?;
    let rhs: Vec<Q> = m
        .coords_n(&m.project_n(&m.alg.br(x, &y)))
        .expect("projection lies in n")
        .into_iter()
        .map(|c| -c)
        .collect();
    let cols = m
        .k1_basis
        .iter()
        .map(|k| m.coords_n(&m.alg.br(k, &y)).expect("k1 preserves n"))
        .collect();
    Ok(GoSystem { cols, rhs })
}

/// Finds `k in k1` with `[k + x, Lambda x]_n = 0`.
pub fn go_feasibility(op: &MetricOperator, x: &AlgebraElement) -> Result<Verdict, GeoError> {
    let m = &op.mspace;
    let sys = go_system(op, x)?;
    if sys.rhs.iter().all(Zero::is_zero) {
        return Ok(Verdict::Feasible { witness: AlgebraElement::zero(m.alg.ty()) });
    }
    Ok(match solve_in_span(&sys.cols, &sys.rhs, m.n_gram()) {
        SpanSolve::Solved(c) => Verdict::Feasible { witness: combine(&m.k1_basis, &c, &m.alg) },
        SpanSolve::Blocked { certificate, rank_a, rank_augmented } => Verdict::Infeasible {
            certificate: m.from_coords_n(&certificate),
            rank_a,
            rank_augmented,
        },
    })
}

/// `k` lies in `k1` and `[k + x, Lambda x]_n = 0` exactly.
pub fn replay_witness(op: &MetricOperator, x: &AlgebraElement, k: &AlgebraElement) -> bool {
    let m = &op.mspace;
    let Ok(y) = op.apply(x) else { return false };
    m.in_k1(k) && m.project_n(&m.alg.br(&k.add(x), &y)).is_zero()
}

/// `z` is B-orthogonal to `[k, Lambda x]` for all `k in k1` but not to
/// `[x, Lambda x]_n`, so no `k` can exist. Also compares ranks.
pub fn replay_certificate(op: &MetricOperator, x: &AlgebraElement, z: &AlgebraElement) -> bool {
    let m = &op.mspace;
    let Ok(sys) = go_system(op, x) else { return false };
    let Ok(zc) = m.coords_n(z) else { return false };
    let g = m.n_gram();
    let orthogonal = sys.cols.iter().all(|c| bilinear(g, &zc, c).is_zero());
    let blocked = !bilinear(g, &zc, &sys.rhs).is_zero();
    let n = sys.rhs.len();
    let a: Matrix = (0..n).map(|r| sys.cols.iter().map(|c| c[r].clone()).collect()).collect();
    let ranks = linalg::solve(&a, &sys.rhs, sys.cols.len());
    orthogonal && blocked && ranks.rank_augmented > ranks.rank_a
}

/// `X in g` is a geodesic vector iff `B([X, Y]_n, Lambda X_n) = 0` for all `Y in n`.
pub fn is_geodesic_vector(op: &MetricOperator, x: &AlgebraElement) -> Result<Verdict, GeoError> {
    if x.is_zero() {
        return Err(GeoError::ZeroVector);
    }
    let m = &op.mspace;
    let lx = op.apply(&m.project_n(x))?;
    for y in &m.n_basis {
        let value = m.alg.killing_form(&m.project_n(&m.alg.br(x, y)), &lx);
        if !value.is_zero() {
            return Ok(Verdict::NotGeodesic { y: y.clone(), value });
        }
    }
    Ok(Verdict::Geodesic)
}

/// Outcome of the three equivalent geodesic conditions for `(a, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct P2Outcome {
    /// `[a + x, Lambda x]_n = 0`.
    pub bracket_in_k: bool,
    /// `<[a, x], y> = <x, [x, y]_n>` for all `y in n`.
    pub pairing_identity: bool,
    /// `<[a + x, y]_n, x> = 0` for all `y in n`.
    pub orthogonality: bool,
}

impl P2Outcome {
    pub fn agree(&self) -> bool {
        self.bracket_in_k == self.pairing_identity && self.pairing_identity == self.orthogonality
    }
}

pub fn prop_p2_conditions(op: &MetricOperator, a: &AlgebraElement, x: &AlgebraElement) -> Result<P2Outcome, GeoError> {
    let m = &op.mspace;
    if !m.in_k1(a) {
        return Err(GeoError::NotInK1);
    }
    let alg = &m.alg;
    let coords = |e: &AlgebraElement| m.coords_n(e).map_err(|_| GeoError::OutOfSubspace);
    let g = op.gram();
    let lx = op.apply(x).map_err(|_| GeoError::OutOfSubspace)?;
    let ax = a.add(x);
    let bracket_in_k = m.project_n(&alg.br(&ax, &lx)).is_zero();
    // <u, x> = u . gx and <[a, x], y_j> = g_ax[j]
    let gx = linalg::mat_vec(g, &coords(x)?);
    let g_ax = linalg::mat_vec(g, &m.coords_of_projected(&m.project_n(&alg.br(a, x))));
    let mut pairing_identity = true;
    let mut orthogonality = true;
    for (j, y) in m.n_basis.iter().enumerate() {
        if pairing_identity {
            let xy = m.coords_of_projected(&m.project_n(&alg.br(x, y)));
            if g_ax[j] != linalg::dot(&xy, &gx) {
                pairing_identity = false;
            }
        }
        if orthogonality {
            let ay = m.coords_of_projected(&m.project_n(&alg.br(&ax, y)));
            if !linalg::dot(&ay, &gx).is_zero() {
                orthogonality = false;
            }
        }
        if !pairing_identity && !orthogonality {
            break;
        }
    }
    Ok(P2Outcome { bracket_in_k, pairing_identity, orthogonality })
}

/// True iff the three conditions agree (all hold or all fail).
pub fn prop_p2_crosscheck(op: &MetricOperator, a: &AlgebraElement, x: &AlgebraElement) -> Result<bool, GeoError> {
    Ok(prop_p2_conditions(op, a, x)?.agree())
}

fn dense(x: &AlgebraElement, dim: usize) -> Vec<Q> {
    x.to_dense(dim)
}

fn killing_gram_q(alg: &Algebra) -> Matrix {
    alg.killing_gram().iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

/// For eigenvectors `X, Y` with eigenvalues `l != u`, solves
/// `[X, Y] = l/(l-u) [h, X] + u/(l-u) [h, Y]` for `h in k1`.
pub fn prop_p3_necessary(op: &MetricOperator, x: &AlgebraElement, y: &AlgebraElement) -> Result<Verdict, GeoError> {
    let m = &op.mspace;
    if x.is_zero() || y.is_zero() {
        return Err(GeoError::ZeroVector);
    }
    let eigen = |v: &AlgebraElement| -> Result<Q, GeoError> {
        let lv = op.apply(v).map_err(|_| GeoError::OutOfSubspace)?;
        let (idx, c) = &v.terms()[0];
        let l = lv.coeff(*idx) / c;
        if lv == v.scale(&l) {
            Ok(l)
        } else {
            Err(GeoError::NotEigenvectors)
        }
    };
    let (l, u) = (eigen(x)?, eigen(y)?);
    if l == u {
        return Err(GeoError::EqualEigenvalues);
    }
    let alg = &m.alg;
    let d = alg.dim();
    let (cx, cy) = (&l / (&l - &u), &u / (&l - &u));
    let rhs = dense(&alg.br(x, y), d);
    let cols: Vec<Vec<Q>> = m
        .k1_basis
        .iter()
        .map(|k| dense(&alg.br(k, x).scale(&cx).add(&alg.br(k, y).scale(&cy)), d))
        .collect();
    if rhs.iter().all(Zero::is_zero) {
        return Ok(Verdict::Feasible { witness: AlgebraElement::zero(alg.ty()) });
    }
    Ok(match solve_in_span(&cols, &rhs, &killing_gram_q(alg)) {
        SpanSolve::Solved(c) => Verdict::Feasible { witness: combine(&m.k1_basis, &c, alg) },
        SpanSolve::Blocked { certificate, rank_a, rank_augmented } => Verdict::Infeasible {
            certificate: AlgebraElement::from_dense(alg.ty(), &certificate),
            rank_a,
            rank_augmented,
        },
    })
}

/// Eigenvector pairs with distinct eigenvalues and nonzero bracket, at most
/// `per_pair` for each pair of eigenspaces.
pub fn eigenpairs(op: &MetricOperator, per_pair: usize) -> Vec<(AlgebraElement, AlgebraElement)> {
    let spaces = op.eigenspaces();
    let alg = &op.mspace.alg;
    let mut out = Vec::new();
    for (i, (l, xs)) in spaces.iter().enumerate() {
        for (u, ys) in &spaces[i + 1..] {
            if l == u {
                continue;
            }
            let mut found = 0;
            'outer: for x in xs {
                for y in ys {
                    if !alg.br(x, y).is_zero() {
                        out.push((x.clone(), y.clone()));
                        found += 1;
                        if found == per_pair {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    out
}

/// A chain `k1 < h < g` with `h = k1 + M_F` and `n = M_F + M_C`.
#[derive(Debug, Clone)]
pub struct Chain {
    pub k1: Vec<AlgebraElement>,
    pub h: Vec<AlgebraElement>,
    pub m_f: Vec<AlgebraElement>,
    pub m_c: Vec<AlgebraElement>,
}

fn span_of(xs: &[AlgebraElement], dim: usize) -> RowSpace {
    let mut s = RowSpace::new(dim);
    for x in xs {
        s.insert(&x.to_dense(dim));
    }
    s
}

impl Chain {
    /// `k1 < k = s + k1 < g`, fiber `s`, base `m`.
    pub fn standard(m: &MSpace) -> Chain {
        let mut h = m.s_basis.clone();
        h.extend(m.k1_basis.iter().cloned());
        Chain {
            k1: m.k1_basis.clone(),
            h,
            m_f: m.s_basis.clone(),
            m_c: m.n_basis[m.dim_s()..].to_vec(),
        }
    }

    pub fn validate(&self, alg: &Algebra) -> Result<(), GeoError> {
        let d = alg.dim();
        let h = span_of(&self.h, d);
        let bad = |s: &str| Err(GeoError::BadChain(s.to_string()));
        if self.k1.iter().chain(&self.m_f).any(|x| !h.contains(&x.to_dense(d))) {
            return bad("h does not contain k1 and M_F");
        }
        for a in &self.h {
            for b in &self.h {
                if !h.contains(&alg.br(a, b).to_dense(d)) {
                    return bad("h is not a subalgebra");
                }
            }
        }
        let mf = span_of(&self.m_f, d);
        let mc = span_of(&self.m_c, d);
        for k in &self.k1 {
            if self.m_f.iter().any(|v| !mf.contains(&alg.br(k, v).to_dense(d))) {
                return bad("[k1, M_F] leaves M_F");
            }
        }
        for a in &self.h {
            if self.m_c.iter().any(|v| !mc.contains(&alg.br(a, v).to_dense(d))) {
                return bad("[h, M_C] leaves M_C");
            }
        }
        Ok(())
    }
}

/// Finds `X in k1` with `[X, v_F] = 0` and `[X + v_F, v_C] = 0`.
pub fn prop_p5_check(
    m: &MSpace,
    chain: &Chain,
    v_f: &AlgebraElement,
    v_c: &AlgebraElement,
) -> Result<Verdict, GeoError> {
    let alg = &m.alg;
    chain.validate(alg)?;
    let d = alg.dim();
    if !span_of(&chain.m_f, d).contains(&v_f.to_dense(d)) {
        return Err(GeoError::BadChain("v_F is not in M_F".into()));
    }
    if !span_of(&chain.m_c, d).contains(&v_c.to_dense(d)) {
        return Err(GeoError::BadChain("v_C is not in M_C".into()));
    }
    // Stage 1: centralizer of v_F inside k1.
    let a: Matrix = {
        let cols: Vec<Vec<Q>> = chain.k1.iter().map(|k| alg.br(k, v_f).to_dense(d)).collect();
        (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    };
    let null = linalg::nullspace(&a, chain.k1.len());
    let centralizer: Vec<AlgebraElement> = null.iter().map(|c| combine(&chain.k1, c, alg)).collect();
    // Stage 2: [X, v_C] = -[v_F, v_C] over the centralizer.
    let rhs = alg.br(v_f, v_c).neg().to_dense(d);
    if rhs.iter().all(Zero::is_zero) {
        return Ok(Verdict::Feasible { witness: AlgebraElement::zero(alg.ty()) });
    }
    let cols: Vec<Vec<Q>> = centralizer.iter().map(|x| alg.br(x, v_c).to_dense(d)).collect();
    Ok(match solve_in_span(&cols, &rhs, &killing_gram_q(alg)) {
        SpanSolve::Solved(c) => Verdict::Feasible { witness: combine(&centralizer, &c, alg) },
        SpanSolve::Blocked { certificate, rank_a, rank_augmented } => Verdict::Infeasible {
            certificate: AlgebraElement::from_dense(alg.ty(), &certificate),
            rank_a,
            rank_augmented,
        },
    })
}

/// Probe vectors for sampling the geodesic-orbit property.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub structured: Vec<AlgebraElement>,
    pub random_count: usize,
    pub seed: u64,
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Dense random coordinate vector, redrawn while zero.
fn random_coords(rng: &mut ChaCha8Rng, len: usize) -> Vec<Q> {
    loop {
        let v: Vec<Q> = (0..len).map(|_| random_q(rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

impl ProbeSet {
    pub fn new(m: &MSpace, random_count: usize, seed: u64) -> ProbeSet {
        ProbeSet { structured: structured_probes(m), random_count, seed }
    }

    pub fn random(&self, m: &MSpace) -> Vec<AlgebraElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.random_count).map(|_| m.from_coords_n(&random_coords(&mut rng, m.dim_n()))).collect()
    }

    /// Structured probes, then probes built from the metric's eigenvectors,
    /// then the random ones.
    pub fn all(&self, op: &MetricOperator) -> Vec<AlgebraElement> {
        let mut out = self.structured.clone();
        for (x, y) in eigenpairs(op, 4) {
            out.push(x.add(&y));
            out.push(x.add(&y.scale(&q(2))));
        }
        out.extend(self.random(&op.mspace));
        out
    }
}

/// Basis vectors, sums across summands with a nonzero bracket, `s` plus a
/// summand vector, and the vectors `A_a + A_{-b}`, `B_a - B_{-b}` of dual
/// pairs in reducible summands.
pub fn structured_probes(m: &MSpace) -> Vec<AlgebraElement> {
    let alg = &m.alg;
    let mut out: Vec<AlgebraElement> = m.n_basis.clone();
    let fibers = &m.flag.fibers;
    for i in 0..fibers.len() {
        for j in i + 1..fibers.len() {
            for a in &fibers[i] {
                for b in &fibers[j] {
                    if alg.rs.is_root(&a.add(b)) || alg.rs.is_root(&a.sub(b)) {
                        out.push(alg.a_of(a).add(&alg.a_of(b)));
                    }
                }
            }
        }
    }
    for s in &m.s_basis {
        for i in 1..=m.s_count() {
            out.push(s.add(&m.summand_elements(i)[0]));
            if let SplitStatus::Split { n1, .. } = &m.split(i).status {
                out.push(s.add(&n1[0]));
            }
        }
    }
    for i in 1..=m.s_count() {
        if !m.criterion_flags()[i - 1] {
            continue;
        }
        let (lo, hi) = m.flag.lowest_highest(i).expect("summand index");
        let (nlo, nhi) = (lo.neg(), hi.neg());
        out.push(alg.a_of(&lo).add(&alg.a_of(&nhi)));
        out.push(alg.b_of(&lo).sub(&alg.b_of(&nhi)));
        out.push(alg.a_of(&hi).add(&alg.a_of(&nlo)));
    }
    out.retain(|x| !x.is_zero());
    out
}

/// Random pairs `(a, x)` with `a in k1` and `x in n`.
pub fn random_pairs(m: &MSpace, count: usize, seed: u64) -> Vec<(AlgebraElement, AlgebraElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = if m.dim_k1() == 0 {
                AlgebraElement::zero(m.alg.ty())
            } else {
                combine(&m.k1_basis, &random_coords(&mut rng, m.dim_k1()), &m.alg)
            };
            let x = m.from_coords_n(&random_coords(&mut rng, m.dim_n()));
            (a, x)
        })
        .collect()
}

/// Runs the feasibility test on every probe; stops at the first failure.
pub fn check_go_metric(op: &MetricOperator, probes: &ProbeSet) -> Verdict {
    check_probes(op, &probes.all(op))
}

pub fn check_probes(op: &MetricOperator, probes: &[AlgebraElement]) -> Verdict {
    for (idx, x) in probes.iter().enumerate() {
        match go_feasibility(op, x) {
            Ok(Verdict::Infeasible { certificate, .. }) => {
                return Verdict::Refuted { counterexample: x.clone(), certificate, probe_index: idx };
            }
            Ok(_) | Err(GeoError::ZeroVector) => {}
            Err(e) => panic!("probe outside n: {e}"),
        }
    }
    Verdict::PassedSamples { count: probes.len() }
}

/// Searches the probes for a vector that is not geodesic for any `k`.
pub fn find_counterexample(op: &MetricOperator, probes: &ProbeSet) -> Option<AlgebraElement> {
    match check_go_metric(op, probes) {
        Verdict::Refuted { counterexample, .. } => Some(counterexample),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    T1,
    T2_1,
    T2_2,
    T2_3,
    T3_2,
    CC1,
    C2,
}

impl Theorem {
    pub const ALL: [Theorem; 7] =
        [Theorem::T1, Theorem::CC1, Theorem::T2_1, Theorem::T2_2, Theorem::T2_3, Theorem::T3_2, Theorem::C2];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T1 => "T1",
            Theorem::T2_1 => "T2_1",
            Theorem::T2_2 => "T2_2",
            Theorem::T2_3 => "T2_3",
            Theorem::T3_2 => "T3_2",
            Theorem::CC1 => "CC1",
            Theorem::C2 => "C2",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem {s:?}, expected one of T1, T2_1, T2_2, T2_3, T3_2, CC1, C2"))
    }
}

/// What a grid metric is expected to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// Must be refuted, with a certificate that replays.
    Refuted,
    /// Must pass every probe.
    Passes,
    /// Two criteria must agree on every probe.
    CriteriaAgree,
    /// Sampled and reported; nothing is claimed.
    ReportOnly,
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub label: String,
    pub metric: MetricSpec,
    pub expectation: Expectation,
    pub verdict: Verdict,
    /// Probes on which two criteria were compared and how many agreed.
    pub agreement: Option<(usize, usize)>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub space: String,
    pub cases: Vec<CaseResult>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn consistent(&self) -> bool {
        self.cases.iter().all(|c| c.ok)
    }
}

/// Candidate inner products on `s`: the Killing one, the identity, a
/// non-scalar diagonal one and one with an off-diagonal entry.
fn s_options(m: &MSpace) -> Vec<(String, Matrix)> {
    let ds = m.dim_s();
    let mut out: Vec<(String, Matrix)> = vec![("B".into(), m.s_gram().clone()), ("Id".into(), linalg::identity(ds))];
    let mut diag = linalg::identity(ds);
    for (a, row) in diag.iter_mut().enumerate() {
        row[a] = q(1 + (a % 2 == 1) as i64);
    }
    if ds == 1 {
        diag[0][0] = q(2);
    }
    out.push(("diag(1,2)".into(), diag));
    if ds >= 2 {
        let mut off = linalg::identity(ds);
        off[0][1] = qf(1, 2);
        off[1][0] = qf(1, 2);
        out.push(("offdiag(1/2)".into(), off));
    }
    let mut seen: Vec<Matrix> = Vec::new();
    out.retain(|(_, mat)| {
        if seen.contains(mat) {
            false
        } else {
            seen.push(mat.clone());
            true
        }
    });
    out
}

fn lambda_values() -> [Q; 4] {
    [q(1), q(2), q(3), qf(1, 2)]
}

fn scale(mat: &Matrix, c: &Q) -> Matrix {
    mat.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn label_of(spec: &MetricSpec, s_label: &str) -> String {
    let parts: Vec<String> = spec
        .summands
        .iter()
        .map(|s| match &s.params {
            SummandParams::Scalar { lambda } => fmt_q(lambda),
            SummandParams::Split { mu1, mu2, coupling } => {
                format!("({},{};c={})", fmt_q(mu1), fmt_q(mu2), fmt_q(coupling))
            }
        })
        .collect();
    format!("s={s_label} m=[{}]", parts.join(","))
}

struct Grid {
    cases: Vec<(String, MetricSpec, Expectation)>,
}

impl Grid {
    fn push(&mut self, s_label: &str, spec: MetricSpec, e: Expectation) {
        if self.cases.iter().any(|(_, s, _)| *s == spec) {
            return;
        }
        self.cases.push((label_of(&spec, s_label), spec, e));
    }
}

fn with_split(base: &MetricSpec, id: usize, mu1: Q, mu2: Q, coupling: Q) -> MetricSpec {
    let mut spec = base.clone();
    for s in spec.summands.iter_mut() {
        if s.id == id {
            s.params = SummandParams::Split { mu1: mu1.clone(), mu2: mu2.clone(), coupling: coupling.clone() };
        }
    }
    spec
}

/// Metrics that differ from the standard one only on a split summand.
fn split_variants(m: &MSpace, grid: &mut Grid) {
    let base = MetricSpec::standard(m);
    for i in 1..=m.s_count() {
        if !m.split(i).is_split() {
            continue;
        }
        for (mu1, mu2, c) in [(q(1), q(2), q(0)), (q(2), q(1), q(0)), (q(1), q(1), qf(1, 8)), (q(2), q(3), qf(1, 8))] {
            grid.push("B", with_split(&base, i, mu1, mu2, c), Expectation::Refuted);
        }
    }
}

/// Diagonal metrics with at least two distinct summand values.
fn unequal_lambdas(s: usize) -> Vec<Vec<Q>> {
    let vals = lambda_values();
    let mut out = Vec::new();
    for i in 0..s {
        for v in &vals[1..] {
            let mut l = vec![q(1); s];
            l[i] = v.clone();
            out.push(l);
        }
    }
    out.push((0..s).map(|i| vals[i % 4].clone()).collect());
    out.push((0..s).map(|i| vals[(i + 1) % 4].clone()).collect());
    out
}

fn t1_grid(m: &MSpace, only_standard: bool) -> Grid {
    let mut grid = Grid { cases: vec![] };
    let s = m.s_count();
    for l in lambda_values() {
        grid.push("B", MetricSpec::scaled_standard(m, &l), Expectation::Passes);
    }
    let opts = s_options(m);
    for (label, mat) in &opts[1..] {
        let e = if only_standard { Expectation::Refuted } else { Expectation::ReportOnly };
        grid.push(label, MetricSpec::diagonal(mat.clone(), &vec![q(1); s]), e);
    }
    if only_standard {
        for l in &lambda_values()[1..] {
            grid.push("B", MetricSpec::diagonal(scale(m.s_gram(), l), &vec![q(1); s]), Expectation::Refuted);
        }
    }
    let patterns = unequal_lambdas(s);
    for l in &patterns {
        grid.push("B", MetricSpec::diagonal(m.s_gram().clone(), l), Expectation::Refuted);
    }
    for (label, mat) in &opts[1..] {
        for l in &patterns[patterns.len() - 2..] {
            grid.push(label, MetricSpec::diagonal(mat.clone(), l), Expectation::Refuted);
        }
    }
    split_variants(m, &mut grid);
    grid
}

/// Every metric other than a multiple of the standard one is refuted.
fn only_standard_grid(m: &MSpace) -> Grid {
    let mut grid = Grid { cases: vec![] };
    let s = m.s_count();
    for l in lambda_values() {
        grid.push("B", MetricSpec::scaled_standard(m, &l), Expectation::Passes);
    }
    for (label, mat) in &s_options(m)[1..] {
        grid.push(label, MetricSpec::diagonal(mat.clone(), &vec![q(1); s]), Expectation::Refuted);
    }
    for l in &lambda_values()[1..] {
        grid.push("B", MetricSpec::diagonal(scale(m.s_gram(), l), &vec![q(1); s]), Expectation::Refuted);
    }
    for l in unequal_lambdas(s) {
        grid.push("B", MetricSpec::diagonal(m.s_gram().clone(), &l), Expectation::Refuted);
    }
    split_variants(m, &mut grid);
    grid
}

/// Summand ids `(m1, m2)` for `s = 2` with `[m1, m1] in k + m2`.
fn two_summand_order(m: &MSpace) -> Result<(usize, usize), GeoError> {
    if m.s_count() != 2 {
        return Err(GeoError::NotApplicable(format!("needs s = 2, found s = {}", m.s_count())));
    }
    let t = &m.flag.troots_plus;
    let doubled = |a: usize, b: usize| t[b].0.iter().zip(&t[a].0).all(|(y, x)| *y == 2 * x);
    let (m1, m2) = if doubled(0, 1) {
        (1, 2)
    } else if doubled(1, 0) {
        (2, 1)
    } else {
        return Err(GeoError::NotApplicable("no ordering with [m1, m1] in k + m2".into()));
    };
    let range1 = m.summand_range(m1);
    for x in m.summand_elements(m1) {
        for y in m.summand_elements(m1) {
            let c = m.coords_n(&m.project_n(&m.alg.br(x, y))).expect("in n");
            if c[range1.clone()].iter().any(|v| !v.is_zero()) {
                return Err(GeoError::NotApplicable("[m1, m1] has a component in m1".into()));
            }
        }
    }
    Ok((m1, m2))
}

fn split_count(m: &MSpace) -> usize {
    m.splits().iter().filter(|s| s.is_split()).count()
}

/// Checks whether the theorem's hypotheses hold on `m`.
pub fn theorem_applies(m: &MSpace, which: Theorem) -> Result<(), GeoError> {
    let na = |s: String| Err(GeoError::NotApplicable(s));
    let s = m.s_count();
    match which {
        Theorem::T1 if s < 3 => na(format!("needs s >= 3, found s = {s}")),
        Theorem::CC1 if s < 3 || m.dim_s() != 1 || split_count(m) == 0 => {
            na("needs s >= 3, dim s = 1 and a reducible summand".into())
        }
        Theorem::T2_1 | Theorem::T2_2 | Theorem::T2_3 | Theorem::C2 => {
            two_summand_order(m)?;
            let k = split_count(m);
            match which {
                Theorem::T2_1 if k != 0 => na("needs both summands irreducible".into()),
                Theorem::T2_2 if k != 1 => na("needs exactly one reducible summand".into()),
                Theorem::T2_3 if k != 2 => na("needs both summands reducible".into()),
                Theorem::C2 => {
                    let (_, m2) = two_summand_order(m)?;
                    if m.summand_dim(m2) == 2 {
                        Ok(())
                    } else {
                        na("needs dim m2 = 2".into())
                    }
                }
                _ => Ok(()),
            }
        }
        Theorem::T3_2 if s != 1 || split_count(m) != 1 => na("needs s = 1 with m reducible".into()),
        _ => Ok(()),
    }
}

type Sparse = Vec<(usize, Q)>;

/// Whether `rhs` lies in the span of `cols`, all given as sparse vectors.
fn feasible_sparse(cols: &[Sparse], rhs: &Sparse) -> bool {
    if rhs.iter().all(|(_, c)| c.is_zero()) {
        return true;
    }
    let mut rows: Vec<usize> = rhs.iter().map(|(i, _)| *i).collect();
    for c in cols {
        rows.extend(c.iter().map(|(i, _)| *i));
    }
    rows.sort_unstable();
    rows.dedup();
    let at = |v: &Sparse, r: usize| -> Q {
        v.iter().filter(|(i, _)| *i == r).fold(Q::zero(), |acc, (_, c)| acc + c)
    };
    let a: Matrix = rows.iter().map(|&r| cols.iter().map(|c| at(c, r)).collect()).collect();
    let b: Vec<Q> = rows.iter().map(|&r| at(rhs, r)).collect();
    linalg::solve(&a, &b, cols.len()).solution.is_some()
}

/// Splits `x in n` into its `s`, `m1` and `m2` parts.
fn parts(m: &MSpace, x: &AlgebraElement, m1: usize, m2: usize) -> (AlgebraElement, AlgebraElement, AlgebraElement) {
    let c = m.coords_n(x).expect("probe in n");
    let keep = |r: std::ops::Range<usize>| -> AlgebraElement {
        let v: Vec<Q> = (0..c.len()).map(|i| if r.contains(&i) { c[i].clone() } else { Q::zero() }).collect();
        m.from_coords_n(&v)
    };
    (keep(0..m.dim_s()), keep(m.summand_range(m1)), keep(m.summand_range(m2)))
}

/// Two equations in `g` stacked into one sparse vector.
fn stack(a: &AlgebraElement, b: &AlgebraElement, d: usize) -> Sparse {
    let mut t: Sparse = a.terms().to_vec();
    t.extend(b.terms().iter().map(|(i, c)| (i + d, c.clone())));
    t
}

/// `[mu1 k + (mu1-mu) V + (mu1-mu2) X2, X1] = 0` and `[mu2 k + (mu2-mu) V, X2] = 0`
/// for some `k in k1`.
fn two_irreducible_system(m: &MSpace, x: &AlgebraElement, ids: (usize, usize), mu: &Q, mu1: &Q, mu2: &Q) -> bool {
    let alg = &m.alg;
    let d = alg.dim();
    let (v, x1, x2) = parts(m, x, ids.0, ids.1);
    let cols: Vec<Sparse> = m
        .k1_basis
        .iter()
        .map(|k| stack(&alg.br(k, &x1).scale(mu1), &alg.br(k, &x2).scale(mu2), d))
        .collect();
    let r1 = alg.br(&v.scale(&(mu1 - mu)).add(&x2.scale(&(mu1 - mu2))), &x1).neg();
    let r2 = alg.br(&v.scale(&(mu2 - mu)), &x2).neg();
    feasible_sparse(&cols, &stack(&r1, &r2, d))
}

/// `[k + V + X2, X1] = 0` for some `k in k1`.
fn c2_system(m: &MSpace, x: &AlgebraElement, ids: (usize, usize)) -> bool {
    let alg = &m.alg;
    let (v, x1, x2) = parts(m, x, ids.0, ids.1);
    let cols: Vec<Sparse> = m.k1_basis.iter().map(|k| alg.br(k, &x1).terms().to_vec()).collect();
    let rhs = alg.br(&v.add(&x2), &x1).neg().terms().to_vec();
    feasible_sparse(&cols, &rhs)
}

/// `mu B` on `s` and summand `j`, `mu_i B` on the rest.
fn s_and_summand_metric(m: &MSpace, j: usize, mu: &Q, mu_i: &Q) -> MetricSpec {
    let summands = (1..=m.s_count())
        .map(|id| SummandSpec {
            id,
            params: SummandParams::Scalar { lambda: if id == j { mu.clone() } else { mu_i.clone() } },
        })
        .collect();
    MetricSpec { s_block: scale(m.s_gram(), mu), summands }
}

fn run_case(
    m: &Arc<MSpace>,
    label: String,
    spec: MetricSpec,
    expectation: Expectation,
    probes: &ProbeSet,
    compare: Option<&dyn Fn(&MetricOperator, &AlgebraElement) -> bool>,
) -> Result<CaseResult, MetricError> {
    let op = MetricOperator::validate(&spec, m.clone())?;
    let all = probes.all(&op);
    let (verdict, agreement) = match compare {
        None => (check_probes(&op, &all), None),
        Some(f) => {
            let mut agree = 0;
            let mut first: Option<Verdict> = None;
            for (idx, x) in all.iter().enumerate() {
                let v = go_feasibility(&op, x).expect("probe in n");
                if first.is_none() {
                    if let Verdict::Infeasible { certificate, .. } = &v {
                        first = Some(Verdict::Refuted {
                            counterexample: x.clone(),
                            certificate: certificate.clone(),
                            probe_index: idx,
                        });
                    }
                }
                if v.is_feasible() == f(&op, x) {
                    agree += 1;
                }
            }
            (first.unwrap_or(Verdict::PassedSamples { count: all.len() }), Some((agree, all.len())))
        }
    };
    let ok = match expectation {
        Expectation::Refuted => match &verdict {
            Verdict::Refuted { counterexample, certificate, .. } => replay_certificate(&op, counterexample, certificate),
            _ => false,
        },
        Expectation::Passes => verdict.is_passed(),
        Expectation::CriteriaAgree => agreement.map(|(a, n)| a == n).unwrap_or(false),
        Expectation::ReportOnly => true,
    };
    Ok(CaseResult { label, metric: spec, expectation, verdict, agreement, ok })
}

/// Instance-level check of a theorem on one M-space over a metric grid.
pub fn verify_theorem(m: &Arc<MSpace>, which: Theorem, probes: &ProbeSet) -> Result<TheoremReport, GeoError> {
    theorem_applies(m, which)?;
    let mut notes = Vec::new();
    let mut grid = Grid { cases: vec![] };
    type Cmp = Box<dyn Fn(&MetricOperator, &AlgebraElement) -> bool>;
    let mut cmp_cases: Vec<(String, MetricSpec, Cmp)> = Vec::new();
    match which {
        Theorem::T1 => grid = t1_grid(m, false),
        Theorem::CC1 => grid = t1_grid(m, true),
        Theorem::T2_3 | Theorem::T3_2 => grid = only_standard_grid(m),
        Theorem::T2_2 => {
            let j = (1..=2).find(|&i| m.split(i).is_split()).expect("one split summand");
            for l in lambda_values() {
                grid.push("B", MetricSpec::scaled_standard(m, &l), Expectation::Passes);
            }
            for mu_i in &lambda_values()[1..] {
                grid.push("B", s_and_summand_metric(m, j, &q(1), mu_i), Expectation::ReportOnly);
            }
            for l in &lambda_values()[1..] {
                let mut spec = MetricSpec::standard(m);
                spec.summands[j - 1].params = SummandParams::Scalar { lambda: l.clone() };
                grid.push("B", spec, Expectation::Refuted);
            }
            for (label, mat) in &s_options(m)[1..] {
                grid.push(label, MetricSpec::diagonal(mat.clone(), &[q(1), q(1)]), Expectation::Refuted);
            }
            split_variants(m, &mut grid);
            notes.push("metrics equal to mu B on s and one summand are only a necessary form; their cases are sampled, not asserted".into());
        }
        Theorem::T2_1 => {
            let ids = two_summand_order(m)?;
            let vals = [q(1), q(2), qf(1, 2)];
            for mu in &vals {
                for mu1 in &vals {
                    for mu2 in &vals {
                        let mut spec = MetricSpec::diagonal(scale(m.s_gram(), mu), &[q(1), q(1)]);
                        spec.summands[ids.0 - 1].params = SummandParams::Scalar { lambda: mu1.clone() };
                        spec.summands[ids.1 - 1].params = SummandParams::Scalar { lambda: mu2.clone() };
                        let (mu, mu1, mu2) = (mu.clone(), mu1.clone(), mu2.clone());
                        let mm = m.clone();
                        let f: Cmp = Box::new(move |_, x| two_irreducible_system(&mm, x, ids, &mu, &mu1, &mu2));
                        cmp_cases.push((label_of(&spec, "mu*B"), spec, f));
                    }
                }
            }
        }
        Theorem::C2 => {
            let ids = two_summand_order(m)?;
            let vals = lambda_values();
            for mu in &vals {
                for mu1 in &vals {
                    if mu == mu1 {
                        continue;
                    }
                    let spec = s_and_summand_metric(m, ids.1, mu, mu1);
                    let mm = m.clone();
                    let f: Cmp = Box::new(move |_, x| c2_system(&mm, x, ids));
                    cmp_cases.push((label_of(&spec, "mu*B"), spec, f));
                }
            }
        }
    }
    let mut cases = Vec::new();
    for (label, spec, e) in grid.cases {
        match run_case(m, label.clone(), spec, e, probes, None) {
            Ok(c) => cases.push(c),
            Err(err) => notes.push(format!("{label}: skipped, {err}")),
        }
    }
    for (label, spec, f) in cmp_cases {
        match run_case(m, label.clone(), spec, Expectation::CriteriaAgree, probes, Some(&*f)) {
            Ok(c) => cases.push(c),
            Err(err) => notes.push(format!("{label}: skipped, {err}")),
        }
    }
    if which == Theorem::C2 {
        let all_pass = cases.iter().all(|c| c.verdict.is_passed());
        notes.push(format!(
            "every sampled metric mu B on s and one summand, mu1 B on the other, with mu != mu1 {}",
            if all_pass { "passed" } else { "was refuted at least once" }
        ));
    }
    Ok(TheoremReport { theorem: which, space: m.flag.diagram.to_string(), cases, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{FlagManifold, PaintedDiagram};
    use crate::rootsys::{Family, Root, RootSystemType};

    fn mspace(f: Family, l: usize, painted: &[usize]) -> Arc<MSpace> {
        let t = RootSystemType::new(f, l).unwrap();
        let d = PaintedDiagram::new(t, painted.iter().copied()).unwrap();
        Arc::new(MSpace::build(&FlagManifold::build(&d).unwrap()))
    }

    fn a2_unequal() -> (Arc<MSpace>, MetricOperator) {
        let m = mspace(Family::A, 2, &[1, 2]);
        // lambda = 2 on the summand of alpha2, 1 elsewhere
        let j = m.flag.summand_of(&Root(vec![0, 1])).unwrap();
        let lambdas: Vec<Q> = (1..=3).map(|i| if i == j { q(2) } else { q(1) }).collect();
        let spec = MetricSpec::diagonal(m.s_gram().clone(), &lambdas);
        let op = MetricOperator::validate(&spec, m.clone()).unwrap();
        (m, op)
    }

    #[test]
    fn standard_metric_every_vector_feasible_with_zero() {
        let m = mspace(Family::B, 3, &[2]);
        let op = MetricOperator::standard(m.clone());
        for x in ProbeSet::new(&m, 5, DEFAULT_SEED).all(&op) {
            assert_eq!(go_feasibility(&op, &x).unwrap(), Verdict::Feasible { witness: AlgebraElement::zero(m.alg.ty()) });
            assert_eq!(is_geodesic_vector(&op, &x).unwrap(), Verdict::Geodesic);
        }
        assert!(check_go_metric(&op, &ProbeSet::new(&m, 20, DEFAULT_SEED)).is_passed());
    }

    #[test]
    fn full_flag_a2_adjacent_unequal_is_infeasible() {
        let (m, op) = a2_unequal();
        let x = m.alg.a_of(&Root(vec![1, 0])).add(&m.alg.a_of(&Root(vec![0, 1])));
        let v = go_feasibility(&op, &x).unwrap();
        let Verdict::Infeasible { certificate, rank_a, rank_augmented } = &v else { panic!("{v:?}") };
        assert!(rank_augmented > rank_a);
        assert!(replay_certificate(&op, &x, certificate));
        assert!(matches!(is_geodesic_vector(&op, &x).unwrap(), Verdict::NotGeodesic { .. }));
        assert!(check_go_metric(&op, &ProbeSet::new(&m, 0, DEFAULT_SEED)).is_refuted());
    }

    #[test]
    fn p3_refutes_adjacent_eigenvectors() {
        let (m, op) = a2_unequal();
        let x = m.alg.a_of(&Root(vec![1, 0]));
        let y = m.alg.a_of(&Root(vec![0, 1]));
        assert!(matches!(prop_p3_necessary(&op, &x, &y).unwrap(), Verdict::Infeasible { .. }));
        let y2 = m.alg.a_of(&Root(vec![1, 1]));
        assert_eq!(prop_p3_necessary(&op, &x, &y2).unwrap_err(), GeoError::EqualEigenvalues);
        let mixed = x.add(&y);
        assert_eq!(prop_p3_necessary(&op, &mixed, &y).unwrap_err(), GeoError::NotEigenvectors);
        // commuting eigenvectors: h = 0
        let op2 = MetricOperator::validate(
            &MetricSpec::diagonal(scale(m.s_gram(), &q(2)), &[q(1), q(1), q(1)]),
            m.clone(),
        )
        .unwrap();
        // [i w_2, A_alpha1] = 0, so h = 0 works
        let w2 = m.s_basis[1].clone();
        assert!(m.alg.br(&w2, &x).is_zero());
        assert_eq!(
            prop_p3_necessary(&op2, &w2, &x).unwrap(),
            Verdict::Feasible { witness: AlgebraElement::zero(m.alg.ty()) }
        );
        // V in s against a root vector it moves
        let w1 = m.s_basis[0].clone();
        assert!(matches!(prop_p3_necessary(&op2, &w1, &x).unwrap(), Verdict::Infeasible { .. }));
    }

    #[test]
    fn p2_conditions_agree_and_track_feasibility() {
        let (m, op) = a2_unequal();
        let zero = AlgebraElement::zero(m.alg.ty());
        for x in &m.n_basis {
            let std = MetricOperator::standard(m.clone());
            let o = prop_p2_conditions(&std, &zero, x).unwrap();
            assert!(o.bracket_in_k && o.pairing_identity && o.orthogonality);
        }
        let x = m.alg.a_of(&Root(vec![1, 0])).add(&m.alg.a_of(&Root(vec![0, 1])));
        let o = prop_p2_conditions(&op, &zero, &x).unwrap();
        assert!(!o.bracket_in_k && !o.pairing_identity && !o.orthogonality);
        let m3 = mspace(Family::B, 3, &[1]);
        let spec = MetricSpec::diagonal(scale(m3.s_gram(), &q(3)), &[q(1)]);
        let op3 = MetricOperator::validate(&spec, m3.clone()).unwrap();
        for (a, x) in random_pairs(&m3, 10, 7) {
            assert!(prop_p2_crosscheck(&op3, &a, &x).unwrap());
            if let Verdict::Feasible { witness } = go_feasibility(&op3, &x).unwrap() {
                assert!(replay_witness(&op3, &x, &witness));
                assert!(prop_p2_conditions(&op3, &witness, &x).unwrap().bracket_in_k);
                assert_eq!(is_geodesic_vector(&op3, &witness.add(&x)).unwrap(), Verdict::Geodesic);
            }
        }
        assert_eq!(prop_p2_crosscheck(&op3, &m3.n_basis[0], &m3.n_basis[1]), Err(GeoError::NotInK1));
    }

    #[test]
    fn p5_chain_checks() {
        let m = mspace(Family::A, 2, &[1, 2]);
        let chain = Chain::standard(&m);
        let zero = AlgebraElement::zero(m.alg.ty());
        let vc = m.alg.a_of(&Root(vec![1, 0]));
        assert!(prop_p5_check(&m, &chain, &zero, &vc).unwrap().is_feasible());
        // trivial K1: X = 0, so feasible iff [v_F, v_C] = 0
        let vf = m.s_basis[0].clone();
        assert!(matches!(prop_p5_check(&m, &chain, &vf, &vc).unwrap(), Verdict::Infeasible { .. }));
        let vc3 = m.alg.a_of(&Root(vec![0, 1]));
        assert!(prop_p5_check(&m, &chain, &m.s_basis[1], &vc).unwrap().is_feasible());
        assert_eq!(prop_p5_check(&m, &chain, &vc3, &vc), Err(GeoError::BadChain("v_F is not in M_F".into())));
        let mut bad = chain.clone();
        bad.h.truncate(1);
        assert!(matches!(prop_p5_check(&m, &bad, &zero, &vc), Err(GeoError::BadChain(_))));
    }

    #[test]
    fn t1_on_full_flag_a2() {
        let m = mspace(Family::A, 2, &[1, 2]);
        let r = verify_theorem(&m, Theorem::T1, &ProbeSet::new(&m, 20, DEFAULT_SEED)).unwrap();
        assert!(r.consistent(), "{:#?}", r.cases.iter().filter(|c| !c.ok).collect::<Vec<_>>());
        assert!(r.cases.iter().any(|c| c.expectation == Expectation::Refuted));
        assert!(matches!(verify_theorem(&m, Theorem::T3_2, &ProbeSet::new(&m, 1, 1)), Err(GeoError::NotApplicable(_))));
    }

    #[test]
    fn theorem_names_parse() {
        for t in Theorem::ALL {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
        assert!("T9".parse::<Theorem>().is_err());
    }
}
