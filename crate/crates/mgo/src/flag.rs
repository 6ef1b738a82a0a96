//! Painted Dynkin diagrams, t-roots and the isotropy summands of `G/K`.

use crate::chevalley::Generator;
use crate::rootsys::{canonical_cmp, Root, RootSysError, RootSystem, RootSystemType};
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("no painted nodes")]
    EmptyPainted,
    #[error("painted node {index} outside 1..={rank}")]
    PaintedOutOfRange { index: usize, rank: usize },
    #[error("summand index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{0} is not a t-root")]
    NotATRoot(TRoot),
    #[error(transparent)]
    RootSystem(#[from] RootSysError),
}

/// Painted nodes are 1-based simple-root indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaintedDiagram {
    pub algebra: RootSystemType,
    pub painted: BTreeSet<usize>,
}

impl PaintedDiagram {
    pub fn new(algebra: RootSystemType, painted: impl IntoIterator<Item = usize>) -> Result<Self, FlagError> {
        if !algebra.is_admissible() {
            return Err(RootSysError::InvalidType(algebra.family.letter(), algebra.rank).into());
        }
        let painted: BTreeSet<usize> = painted.into_iter().collect();
        if painted.is_empty() {
            return Err(FlagError::EmptyPainted);
        }
        if let Some(&bad) = painted.iter().find(|&&j| j == 0 || j > algebra.rank) {
            return Err(FlagError::PaintedOutOfRange { index: bad, rank: algebra.rank });
        }
        Ok(PaintedDiagram { algebra, painted })
    }

    pub fn is_painted(&self, j: usize) -> bool {
        self.painted.contains(&j)
    }
}

impl fmt::Display for PaintedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.painted.iter().map(|j| j.to_string()).collect();
        write!(f, "{}{{{}}}", self.algebra, p.join(","))
    }
}

/// Restriction of a root to the painted coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TRoot(pub Vec<i32>);

impl TRoot {
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> TRoot {
        TRoot(self.0.iter().map(|c| -c).collect())
    }

    fn add(&self, o: &TRoot) -> TRoot {
        TRoot(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, o: &TRoot) -> TRoot {
        TRoot(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// `Some((num, den))` with `self = num/den * other`, when proportional.
    pub fn ratio_to(&self, other: &TRoot) -> Option<(i32, i32)> {
        let k = other.0.iter().position(|&c| c != 0)?;
        let (num, den) = (self.0[k], other.0[k]);
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| a * den == b * num)
            .then_some((num, den))
    }
}

impl fmt::Display for TRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Root(self.0.clone()).fmt(f)
    }
}

#[derive(Debug, Clone)]
pub struct FlagManifold {
    pub diagram: PaintedDiagram,
    pub rs: Arc<RootSystem>,
    /// 0-based painted and unpainted simple-root indices.
    pub painted0: Vec<usize>,
    pub unpainted0: Vec<usize>,
    pub r_k_plus: Vec<Root>,
    pub r_m_plus: Vec<Root>,
    /// Positive t-roots `xi_1..xi_s` by height, then lexicographically.
    pub troots_plus: Vec<TRoot>,
    /// `fibers[i]` lists the positive roots restricting to `troots_plus[i]`.
    pub fibers: Vec<Vec<Root>>,
}

/// Adjacency graph of all t-roots (positive ones first, then negatives).
#[derive(Debug, Clone, Serialize)]
pub struct TRootGraph {
    pub nodes: Vec<TRoot>,
    pub edges: Vec<(usize, usize)>,
    /// Node indices of each component, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

impl TRootGraph {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Undirected DOT graph, labels are coordinate tuples.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph troots {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{n}\"];\n"));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  n{a} -- n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

impl FlagManifold {
    pub fn build(d: &PaintedDiagram) -> Result<FlagManifold, FlagError> {
        let rs = Arc::new(RootSystem::build(d.algebra)?);
        Ok(Self::with_root_system(d, rs))
    }

    pub fn with_root_system(d: &PaintedDiagram, rs: Arc<RootSystem>) -> FlagManifold {
        let l = rs.rank();
        let painted0: Vec<usize> = d.painted.iter().map(|j| j - 1).collect();
        let unpainted0: Vec<usize> = (0..l).filter(|i| !painted0.contains(i)).collect();
        let in_k = |r: &Root| painted0.iter().all(|&j| r.0[j] == 0);
        let r_k_plus: Vec<Root> = rs.positive_roots().iter().filter(|r| in_k(r)).cloned().collect();
        let r_m_plus: Vec<Root> = rs.positive_roots().iter().filter(|r| !in_k(r)).cloned().collect();
        let kappa = |r: &Root| TRoot(painted0.iter().map(|&j| r.0[j]).collect());
        let mut troots_plus: Vec<TRoot> = r_m_plus
            .iter()
            .map(kappa)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        troots_plus.sort_by(|a, b| canonical_cmp(&Root(a.0.clone()), &Root(b.0.clone())));
        let fibers = troots_plus
            .iter()
            .map(|xi| r_m_plus.iter().filter(|r| &kappa(r) == xi).cloned().collect())
            .collect();
        FlagManifold { diagram: d.clone(), rs, painted0, unpainted0, r_k_plus, r_m_plus, troots_plus, fibers }
    }

    pub fn s_count(&self) -> usize {
        self.troots_plus.len()
    }

    pub fn kappa(&self, r: &Root) -> TRoot {
        TRoot(self.painted0.iter().map(|&j| r.0[j]).collect())
    }

    pub fn is_in_k(&self, r: &Root) -> bool {
        self.painted0.iter().all(|&j| r.0[j] == 0)
    }

    pub fn r_k(&self) -> Vec<Root> {
        self.r_k_plus.iter().cloned().chain(self.r_k_plus.iter().map(Root::neg)).collect()
    }

    pub fn r_m(&self) -> Vec<Root> {
        self.r_m_plus.iter().cloned().chain(self.r_m_plus.iter().map(Root::neg)).collect()
    }

    /// All t-roots: positive ones, then their negatives.
    pub fn troots(&self) -> Vec<TRoot> {
        self.troots_plus
            .iter()
            .cloned()
            .chain(self.troots_plus.iter().map(TRoot::neg))
            .collect()
    }

    pub fn is_troot(&self, t: &TRoot) -> bool {
        self.troots_plus.contains(t) || self.troots_plus.contains(&t.neg())
    }

    fn check_summand(&self, i: usize) -> Result<usize, FlagError> {
        if i >= 1 && i <= self.s_count() {
            Ok(i - 1)
        } else {
            Err(FlagError::IndexOutOfRange { index: i, max: self.s_count() })
        }
    }

    /// The fiber `R_i^+` over the `i`-th positive t-root (1-based).
    pub fn fiber(&self, i: usize) -> Result<&[Root], FlagError> {
        Ok(&self.fibers[self.check_summand(i)?])
    }

    /// Summand index (1-based) of a complementary root, either sign.
    pub fn summand_of(&self, r: &Root) -> Option<usize> {
        let t = self.kappa(r);
        let t = if t.is_positive() { t } else { t.neg() };
        self.troots_plus.iter().position(|x| *x == t).map(|p| p + 1)
    }

    pub fn adjacency(&self, xi: &TRoot, eta: &TRoot) -> Result<bool, FlagError> {
        for t in [xi, eta] {
            if !self.is_troot(t) {
                return Err(FlagError::NotATRoot(t.clone()));
            }
        }
        if let Some((n, d)) = eta.ratio_to(xi) {
            let doubled = (n == 2 * d) || (n == -2 * d) || (2 * n == d) || (2 * n == -d);
            return Ok(!doubled);
        }
        Ok(self.is_troot(&xi.add(eta)) || self.is_troot(&xi.sub(eta)))
    }

    pub fn connected_components(&self) -> TRootGraph {
        let nodes = self.troots();
        let n = nodes.len();
        let mut uf = UnionFind::<usize>::new(n);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.adjacency(&nodes[a], &nodes[b]).unwrap() {
                    edges.push((a, b));
                    uf.union(a, b);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for i in 0..n {
            match seen.iter().position(|&l| l == labels[i]) {
                Some(c) => components[c].push(i),
                None => {
                    seen.push(labels[i]);
                    components.push(vec![i]);
                }
            }
        }
        TRootGraph { nodes, edges, components }
    }

    /// `{A_a, B_a : a in R_i^+}`.
    pub fn summand_basis(&self, i: usize) -> Result<Vec<Generator>, FlagError> {
        Ok(self
            .fiber(i)?
            .iter()
            .flat_map(|r| [Generator::A(r.clone()), Generator::B(r.clone())])
            .collect())
    }

    /// Roots of `R_i^+` with `a - g` (resp. `a + g`) never a root for `g` in `R_K^+`.
    pub fn extremal_candidates(&self, i: usize) -> Result<(Vec<Root>, Vec<Root>), FlagError> {
        let fiber = self.fiber(i)?;
        let low = fiber
            .iter()
            .filter(|a| self.r_k_plus.iter().all(|g| !self.rs.is_root(&a.sub(g))))
            .cloned()
            .collect();
        let high = fiber
            .iter()
            .filter(|a| self.r_k_plus.iter().all(|g| !self.rs.is_root(&a.add(g))))
            .cloned()
            .collect();
        Ok((low, high))
    }

    /// Lowest and highest root of `R_i^+`, the first in canonical order if
    /// several qualify (see `extremal_candidates`).
    pub fn lowest_highest(&self, i: usize) -> Result<(Root, Root), FlagError> {
        let (low, high) = self.extremal_candidates(i)?;
        Ok((low[0].clone(), high[0].clone()))
    }

    pub fn extremal_roots_unique(&self) -> bool {
        (1..=self.s_count()).all(|i| {
            let (l, h) = self.extremal_candidates(i).unwrap();
            l.len() == 1 && h.len() == 1
        })
    }

    /// The three axioms of an invariant ordering for `R_M^+ = R^+ \ R_K^+`.
    pub fn invariant_ordering_holds(&self) -> bool {
        let rm: HashSet<&Root> = self.r_m_plus.iter().collect();
        let rk: HashSet<Root> = self.r_k().into_iter().collect();
        let disjoint = self.rs.roots().all(|r| {
            let a = rk.contains(&r);
            let b = rm.contains(&r);
            let c = rm.contains(&r.neg());
            [a, b, c].iter().filter(|x| **x).count() == 1
        });
        let sums = self.r_m_plus.iter().all(|a| {
            self.r_m_plus.iter().all(|b| {
                let s = a.add(b);
                !self.rs.is_root(&s) || self.is_in_k(&s) || rm.contains(&s)
            })
        });
        let k_action = self.r_m_plus.iter().all(|a| {
            self.r_k_plus.iter().all(|b| {
                let s = a.add(b);
                !self.rs.is_root(&s) || rm.contains(&s)
            })
        });
        disjoint && sums && k_action
    }

    pub fn fibers_partition_complement(&self) -> bool {
        let mut all: Vec<&Root> = self.fibers.iter().flatten().collect();
        let n = all.len();
        all.sort();
        all.dedup();
        all.len() == n && n == self.r_m_plus.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn flag(f: Family, l: usize, painted: &[usize]) -> FlagManifold {
        let t = RootSystemType::new(f, l).unwrap();
        FlagManifold::build(&PaintedDiagram::new(t, painted.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn diagram_validation() {
        let t = RootSystemType::new(Family::A, 2).unwrap();
        assert_eq!(PaintedDiagram::new(t, []), Err(FlagError::EmptyPainted));
        assert!(matches!(PaintedDiagram::new(t, [3]), Err(FlagError::PaintedOutOfRange { .. })));
    }

    #[test]
    fn full_flag_a2() {
        let f = flag(Family::A, 2, &[1, 2]);
        assert!(f.r_k_plus.is_empty());
        assert_eq!(f.s_count(), 3);
        assert!(f.fibers.iter().all(|x| x.len() == 1));
        let (x1, x2) = (TRoot(vec![1, 0]), TRoot(vec![0, 1]));
        assert!(f.adjacency(&x1, &x2).unwrap());
        assert!(f.connected_components().is_connected());
        for i in 1..=3 {
            let (lo, hi) = f.lowest_highest(i).unwrap();
            assert_eq!(lo, hi);
        }
    }

    #[test]
    fn cp2() {
        let f = flag(Family::A, 2, &[1]);
        assert_eq!(f.s_count(), 1);
        assert_eq!(f.fibers[0], vec![Root(vec![1, 0]), Root(vec![1, 1])]);
        assert_eq!(f.summand_basis(1).unwrap().len(), 4);
        assert_eq!(f.lowest_highest(1).unwrap(), (Root(vec![1, 0]), Root(vec![1, 1])));
        let g = f.connected_components();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert!(g.is_connected());
        assert!(f.summand_basis(2).is_err());
    }

    #[test]
    fn a3_examples() {
        let f = flag(Family::A, 3, &[2]);
        assert_eq!(f.s_count(), 1);
        let f = flag(Family::A, 3, &[1, 2]);
        assert_eq!(f.s_count(), 3);
        assert!(f.fibers_partition_complement());
        assert!(f.invariant_ordering_holds());
    }

    #[test]
    fn doubled_troots_not_adjacent() {
        // B2 painted at the short node: t-roots xi and 2 xi only.
        let f = flag(Family::B, 2, &[2]);
        assert_eq!(f.troots_plus, vec![TRoot(vec![1]), TRoot(vec![2])]);
        assert!(!f.adjacency(&TRoot(vec![1]), &TRoot(vec![2])).unwrap());
        assert!(!f.adjacency(&TRoot(vec![2]), &TRoot(vec![-1])).unwrap());
        assert!(f.adjacency(&TRoot(vec![1]), &TRoot(vec![-1])).unwrap());
        assert!(!f.connected_components().is_connected());
        assert!(matches!(f.adjacency(&TRoot(vec![3]), &TRoot(vec![1])), Err(FlagError::NotATRoot(_))));
    }

    #[test]
    fn dot_output_is_stable() {
        let f = flag(Family::A, 2, &[1]);
        let dot = f.connected_components().to_dot();
        assert_eq!(dot, "graph troots {\n  n0 [label=\"(1)\"];\n  n1 [label=\"(-1)\"];\n  n0 -- n1;\n}\n");
    }
}
