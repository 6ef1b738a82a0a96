//! `Ad(K1)`-invariant metrics on `n`, stored as their associated operator
//! `Lambda` with `<x, y> = B(Lambda x, y)`.

use crate::chevalley::AlgebraElement;
use crate::linalg::{self, Matrix};
use crate::mspace::{MSpace, SplitStatus};
use crate::rational::{fmt_q, is_positive, q, serde_q, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("metric is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("metric is not Ad(K1)-equivariant: [{k}, Lambda {x}] != Lambda [{k}, {x}]")]
    NotEquivariant { k: String, x: String },
    #[error("metric is not symmetric: B(Lambda {x}, {y}) != B({x}, Lambda {y})")]
    NotSelfAdjoint { x: String, y: String },
    #[error("metric does not match the decomposition: {0}")]
    ShapeMismatch(String),
    #[error("element has components outside n")]
    OutOfSubspace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SummandParams {
    Scalar {
        #[serde(with = "serde_q")]
        lambda: Q,
    },
    Split {
        #[serde(with = "serde_q")]
        mu1: Q,
        #[serde(with = "serde_q")]
        mu2: Q,
        #[serde(with = "serde_q")]
        coupling: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandSpec {
    /// 1-based summand index.
    pub id: usize,
    #[serde(flatten)]
    pub params: SummandParams,
}

/// Block description of a metric. `s_block` is the Gram matrix of the
/// inner product on `s_basis`, so the standard metric has `s_block` equal
/// to the Killing Gram matrix of `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSpec {
    #[serde(with = "serde_q::matrix")]
    pub s_block: Matrix,
    pub summands: Vec<SummandSpec>,
}

impl MetricSpec {
    /// `lambda * B` on all of `n`.
    pub fn scaled_standard(m: &MSpace, lambda: &Q) -> MetricSpec {
        let s_block = m.s_gram().iter().map(|r| r.iter().map(|x| x * lambda).collect()).collect();
        let summands = (1..=m.s_count())
            .map(|id| SummandSpec { id, params: SummandParams::Scalar { lambda: lambda.clone() } })
            .collect();
        MetricSpec { s_block, summands }
    }

    pub fn standard(m: &MSpace) -> MetricSpec {
        Self::scaled_standard(m, &Q::one())
    }

    /// `s_block` on `s` and the scalar `lambdas[i]` on summand `i+1`.
    pub fn diagonal(s_block: Matrix, lambdas: &[Q]) -> MetricSpec {
        let summands = lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| SummandSpec { id: i + 1, params: SummandParams::Scalar { lambda: l.clone() } })
            .collect();
        MetricSpec { s_block, summands }
    }

    pub fn params(&self, id: usize) -> Option<&SummandParams> {
        self.summands.iter().find(|s| s.id == id).map(|s| &s.params)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metric spec serializes")
    }

    pub fn from_json(s: &str) -> Result<MetricSpec, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A validated metric operator on `n`.
#[derive(Debug, Clone)]
pub struct MetricOperator {
    pub mspace: Arc<MSpace>,
    pub spec: MetricSpec,
    /// `Lambda` on `n` coordinates: column `c` holds `Lambda(n_basis[c])`.
    matrix: Matrix,
    /// Gram matrix of `<,>` on `n_basis`.
    gram: Matrix,
}

fn block_positive(x: &Q, what: &str) -> Result<(), MetricError> {
    if is_positive(x) {
        Ok(())
    } else {
        Err(MetricError::NotPositiveDefinite(format!("{what} = {} is not positive", fmt_q(x))))
    }
}

impl MetricOperator {
    pub fn standard(m: Arc<MSpace>) -> MetricOperator {
        let spec = MetricSpec::standard(&m);
        let d = m.dim_n();
        let gram = m.n_gram().clone();
        MetricOperator { mspace: m, spec, matrix: linalg::identity(d), gram }
    }

    pub fn validate(spec: &MetricSpec, m: Arc<MSpace>) -> Result<MetricOperator, MetricError> {
        let matrix = Self::compile(spec, &m)?;
        let gram = linalg::mat_mul(&linalg::transpose(&matrix), m.n_gram());
        let op = MetricOperator { mspace: m, spec: spec.clone(), matrix, gram };
        op.check_self_adjoint()?;
        op.check_positive()?;
        op.check_equivariant()?;
        Ok(op)
    }

    fn compile(spec: &MetricSpec, m: &MSpace) -> Result<Matrix, MetricError> {
        let ds = m.dim_s();
        let shape = |msg: String| MetricError::ShapeMismatch(msg);
        if spec.s_block.len() != ds || spec.s_block.iter().any(|r| r.len() != ds) {
            return Err(shape(format!("s_block must be {ds}x{ds}")));
        }
        if !linalg::is_symmetric(&spec.s_block) {
            return Err(shape("s_block is not symmetric".into()));
        }
        let mut ids: Vec<usize> = spec.summands.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        if ids != (1..=m.s_count()).collect::<Vec<_>>() {
            return Err(shape(format!("expected one entry for each summand 1..={}", m.s_count())));
        }

        let d = m.dim_n();
        let mut l = vec![vec![Q::zero(); d]; d];
        let g_inv = linalg::inverse(m.s_gram()).expect("s Gram matrix is invertible");
        let s_op = linalg::mat_mul(&g_inv, &spec.s_block);
        for a in 0..ds {
            for b in 0..ds {
                l[a][b] = s_op[a][b].clone();
            }
        }
        for i in 1..=m.s_count() {
            let range = m.summand_range(i);
            let local = match (spec.params(i).unwrap(), &m.split(i).status) {
                (SummandParams::Scalar { lambda }, _) => {
                    block_positive(lambda, &format!("lambda of summand {i}"))?;
                    let mut b = linalg::identity(range.len());
                    b.iter_mut().flatten().for_each(|x| *x *= lambda);
                    b
                }
                (SummandParams::Split { .. }, SplitStatus::Irreducible) => {
                    return Err(shape(format!("summand {i} has no splitting, a coupling block is not allowed")));
                }
                (SummandParams::Split { mu1, mu2, coupling }, SplitStatus::Split { n1, n2, .. }) => {
                    block_positive(mu1, &format!("mu1 of summand {i}"))?;
                    block_positive(mu2, &format!("mu2 of summand {i}"))?;
                    split_block(m, i, n1, n2, mu1, mu2, coupling)
                }
            };
            for (r, row) in local.into_iter().enumerate() {
                for (c, x) in row.into_iter().enumerate() {
                    l[range.start + r][range.start + c] = x;
                }
            }
        }
        Ok(l)
    }

    /// Gram matrix of `<,>` on `n_basis`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    fn check_self_adjoint(&self) -> Result<(), MetricError> {
        let g = &self.gram;
        let d = g.len();
        for x in 0..d {
            for y in x + 1..d {
                if g[x][y] != g[y][x] {
                    return Err(MetricError::NotSelfAdjoint { x: self.basis_name(x), y: self.basis_name(y) });
                }
            }
        }
        Ok(())
    }

    fn check_positive(&self) -> Result<(), MetricError> {
        let g = &self.gram;
        let minors = linalg::leading_principal_minors(g);
        if minors.len() == g.len() && minors.iter().all(is_positive) {
            Ok(())
        } else {
            Err(MetricError::NotPositiveDefinite(format!(
                "leading principal minor {} is not positive",
                minors.len()
            )))
        }
    }

    fn check_equivariant(&self) -> Result<(), MetricError> {
        let m = &self.mspace;
        for (kn, ad) in m.k1_action_on_n().iter().enumerate() {
            let lhs = linalg::mat_mul(ad, &self.matrix);
            let rhs = linalg::mat_mul(&self.matrix, ad);
            for c in 0..m.dim_n() {
                if (0..m.dim_n()).any(|r| lhs[r][c] != rhs[r][c]) {
                    return Err(MetricError::NotEquivariant {
                        k: format!("{:?}", m.k1_basis[kn].terms()),
                        x: self.basis_name(c),
                    });
                }
            }
        }
        Ok(())
    }

    fn basis_name(&self, c: usize) -> String {
        let m = &self.mspace;
        if c < m.dim_s() {
            format!("s{}", c + 1)
        } else {
            let idx = m.n_basis[c].terms()[0].0;
            m.alg.generator(idx).to_string()
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply_coords(&self, v: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.matrix, v)
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement, MetricError> {
        let v = self.mspace.coords_n(x).map_err(|_| MetricError::OutOfSubspace)?;
        Ok(self.mspace.from_coords_n(&self.apply_coords(&v)))
    }

    /// `<x, y> = B(Lambda x, y)`.
    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Q, MetricError> {
        Ok(self.mspace.alg.killing_form(&self.apply(x)?, y))
    }

    pub fn is_scaled_standard(&self) -> bool {
        let l = &self.matrix[0][0];
        (0..self.matrix.len()).all(|r| {
            (0..self.matrix.len()).all(|c| if r == c { &self.matrix[r][c] == l } else { self.matrix[r][c].is_zero() })
        })
    }

    /// Eigenspaces of `Lambda` that are visible from the block structure:
    /// scalar blocks, `s` when `Lambda|s` is scalar, and the halves of an
    /// uncoupled split summand.
    pub fn eigenspaces(&self) -> Vec<(Q, Vec<AlgebraElement>)> {
        let m = &self.mspace;
        let mut out = Vec::new();
        let ds = m.dim_s();
        let mu = self.matrix[0][0].clone();
        let s_scalar =
            (0..ds).all(|a| (0..ds).all(|b| if a == b { self.matrix[a][b] == mu } else { self.matrix[a][b].is_zero() }));
        if s_scalar {
            out.push((mu, m.s_basis.clone()));
        }
        for i in 1..=m.s_count() {
            match (self.spec.params(i).unwrap(), &m.split(i).status) {
                (SummandParams::Scalar { lambda }, _) => out.push((lambda.clone(), m.summand_elements(i).to_vec())),
                (SummandParams::Split { mu1, mu2, coupling }, SplitStatus::Split { n1, n2, .. }) if coupling.is_zero() => {
                    out.push((mu1.clone(), n1.clone()));
                    out.push((mu2.clone(), n2.clone()));
                }
                _ => {}
            }
        }
        out
    }
}

/// `Lambda x1 = mu1 x1 + c [h, x1]`, `Lambda x2 = mu2 x2 - c [h, x2]` on the
/// halves of a split summand, with `h = i w_j` for the smallest admissible `j`.
fn split_block(
    m: &MSpace,
    i: usize,
    n1: &[AlgebraElement],
    n2: &[AlgebraElement],
    mu1: &Q,
    mu2: &Q,
    coupling: &Q,
) -> Matrix {
    let range = m.summand_range(i);
    let d = range.len();
    let local = |x: &AlgebraElement| -> Vec<Q> {
        let v = m.coords_n(x).expect("summand element");
        v[range.clone()].to_vec()
    };
    let h = m.s_element_for_node(m.admissible_nodes(i)[0]);
    // Columns: images of the adapted basis n1, n2.
    let mut basis_cols: Vec<Vec<Q>> = Vec::new();
    let mut image_cols: Vec<Vec<Q>> = Vec::new();
    for (part, mu, sign) in [(n1, mu1, q(1)), (n2, mu2, q(-1))] {
        for x in part {
            let hx = m.alg.br(&h, x);
            let img = x.scale(mu).add(&hx.scale(&(coupling * &sign)));
            basis_cols.push(local(x));
            image_cols.push(local(&img));
        }
    }
    let p = linalg::transpose(&basis_cols);
    let img = linalg::transpose(&image_cols);
    let p_inv = linalg::inverse(&p).expect("n1 + n2 spans the summand");
    let out = linalg::mat_mul(&img, &p_inv);
    debug_assert_eq!(out.len(), d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{FlagManifold, PaintedDiagram};
    use crate::rational::qf;
    use crate::rootsys::{Family, RootSystemType};

    fn mspace(f: Family, l: usize, painted: &[usize]) -> Arc<MSpace> {
        let t = RootSystemType::new(f, l).unwrap();
        let d = PaintedDiagram::new(t, painted.iter().copied()).unwrap();
        Arc::new(MSpace::build(&FlagManifold::build(&d).unwrap()))
    }

    #[test]
    fn standard_is_identity_and_validates() {
        let m = mspace(Family::A, 2, &[1, 2]);
        let std = MetricOperator::standard(m.clone());
        for x in &m.n_basis {
            assert_eq!(std.apply(x).unwrap(), *x);
        }
        let v = MetricOperator::validate(&MetricSpec::standard(&m), m.clone()).unwrap();
        assert_eq!(v.matrix(), std.matrix());
        assert!(v.is_scaled_standard());
    }

    #[test]
    fn case_a_diagonal_acts_by_scalars() {
        let m = mspace(Family::A, 3, &[1, 2, 3]);
        let lambdas: Vec<Q> = (1..=m.s_count()).map(|i| q(i as i64)).collect();
        let spec = MetricSpec::diagonal(linalg::identity(3), &lambdas);
        let op = MetricOperator::validate(&spec, m.clone()).unwrap();
        for i in 1..=m.s_count() {
            for x in m.summand_elements(i) {
                assert_eq!(op.apply(x).unwrap(), x.scale(&lambdas[i - 1]));
            }
        }
        assert_eq!(op.apply(&AlgebraElement::zero(m.alg.ty())).unwrap().is_zero(), true);
    }

    #[test]
    fn s_block_is_the_gram_matrix_on_s() {
        let m = mspace(Family::A, 2, &[1, 2]);
        let s_block = vec![vec![q(2), qf(1, 2)], vec![qf(1, 2), q(1)]];
        let spec = MetricSpec::diagonal(s_block.clone(), &[q(1), q(1), q(1)]);
        let op = MetricOperator::validate(&spec, m.clone()).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(op.inner(&m.s_basis[a], &m.s_basis[b]).unwrap(), s_block[a][b]);
            }
        }
    }

    #[test]
    fn rejections() {
        let m = mspace(Family::A, 2, &[1, 2]);
        let bad = MetricSpec::diagonal(linalg::identity(2), &[q(-1), q(1), q(1)]);
        assert!(matches!(MetricOperator::validate(&bad, m.clone()), Err(MetricError::NotPositiveDefinite(_))));
        let bad = MetricSpec::diagonal(linalg::identity(3), &[q(1), q(1), q(1)]);
        assert!(matches!(MetricOperator::validate(&bad, m.clone()), Err(MetricError::ShapeMismatch(_))));
        let bad = MetricSpec::diagonal(linalg::identity(2), &[q(1), q(1)]);
        assert!(matches!(MetricOperator::validate(&bad, m.clone()), Err(MetricError::ShapeMismatch(_))));
        let bad = MetricSpec::diagonal(vec![vec![q(1), q(2)], vec![q(2), q(1)]], &[q(1), q(1), q(1)]);
        assert!(matches!(MetricOperator::validate(&bad, m.clone()), Err(MetricError::NotPositiveDefinite(_))));

        // CP^2 has no splitting, so a coupling is a shape error.
        let cp2 = mspace(Family::A, 2, &[1]);
        let spec = MetricSpec {
            s_block: vec![vec![q(1)]],
            summands: vec![SummandSpec {
                id: 1,
                params: SummandParams::Split { mu1: q(1), mu2: q(1), coupling: q(0) },
            }],
        };
        assert!(matches!(MetricOperator::validate(&spec, cp2), Err(MetricError::ShapeMismatch(_))));
    }

    #[test]
    fn split_summand_with_coupling() {
        let m = mspace(Family::A, 3, &[2]);
        let c = qf(1, 3);
        let spec = MetricSpec {
            s_block: m.s_gram().clone(),
            summands: vec![SummandSpec {
                id: 1,
                params: SummandParams::Split { mu1: q(2), mu2: q(3), coupling: c.clone() },
            }],
        };
        let op = MetricOperator::validate(&spec, m.clone()).unwrap();
        let SplitStatus::Split { n1, n2, .. } = &m.split(1).status else { panic!() };
        let h = m.s_element_for_node(2);
        for x in n1 {
            let expect = x.scale(&q(2)).add(&m.alg.br(&h, x).scale(&c));
            assert_eq!(op.apply(x).unwrap(), expect);
        }
        for x in n2 {
            let expect = x.scale(&q(3)).sub(&m.alg.br(&h, x).scale(&c));
            assert_eq!(op.apply(x).unwrap(), expect);
        }
        // A large coupling destroys positivity.
        let spec = MetricSpec {
            s_block: m.s_gram().clone(),
            summands: vec![SummandSpec {
                id: 1,
                params: SummandParams::Split { mu1: q(1), mu2: q(1), coupling: q(5) },
            }],
        };
        assert!(matches!(MetricOperator::validate(&spec, m), Err(MetricError::NotPositiveDefinite(_))));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let text = r#"{"s_block":[["1","0"],["0","1"]],"summands":[{"id":1,"kind":"scalar","lambda":"3/2"},{"id":2,"kind":"split","mu1":"1","mu2":"2","coupling":"0"}]}"#;
        let spec = MetricSpec::from_json(text).unwrap();
        assert_eq!(spec.to_json(), text);
        assert_eq!(spec.params(1), Some(&SummandParams::Scalar { lambda: qf(3, 2) }));
        assert!(MetricSpec::from_json(r#"{"s_block":[["x"]],"summands":[]}"#).is_err());
    }
}
