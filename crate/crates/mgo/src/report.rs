//! Serializable reports. Rationals are written as `"p"` or `"p/q"` strings
//! and algebra elements as ordered `[generator, coefficient]` pairs.

use crate::chevalley::{Algebra, AlgebraElement};
use crate::flag::FlagManifold;
use crate::geocheck::{CaseResult, Expectation, TheoremReport, Verdict, SAMPLING_NOTE};
use crate::metric::MetricSpec;
use crate::mspace::{MSpace, ModuleKind, SplitStatus};
use crate::rational::fmt_q;
use serde::Serialize;

pub type ElementJson = Vec<[String; 2]>;

pub fn element_json(x: &AlgebraElement) -> ElementJson {
    let alg = Algebra::shared(x.algebra).expect("element of a valid algebra");
    x.terms().iter().map(|(i, c)| [alg.generator(*i).to_string(), fmt_q(c)]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ElementJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ElementJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ElementJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_augmented: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<ElementJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Number of probes evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes_run: Option<usize>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let mut out = VerdictJson {
            status: v.status(),
            witness: None,
            counterexample: None,
            certificate: None,
            rank_a: None,
            rank_augmented: None,
            probe_index: None,
            y: None,
            value: None,
            probes_run: None,
        };
        match v {
            Verdict::Geodesic => {}
            Verdict::NotGeodesic { y, value } => {
                out.y = Some(element_json(y));
                out.value = Some(fmt_q(value));
            }
            Verdict::Feasible { witness } => out.witness = Some(element_json(witness)),
            Verdict::Infeasible { certificate, rank_a, rank_augmented } => {
                out.certificate = Some(element_json(certificate));
                out.rank_a = Some(*rank_a);
                out.rank_augmented = Some(*rank_augmented);
            }
            Verdict::Refuted { counterexample, certificate, probe_index } => {
                out.counterexample = Some(element_json(counterexample));
                out.certificate = Some(element_json(certificate));
                out.probe_index = Some(*probe_index);
                out.probes_run = Some(probe_index + 1);
            }
            Verdict::PassedSamples { count } => out.probes_run = Some(*count),
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GoReport {
    pub space: String,
    #[serde(flatten)]
    pub verdict: VerdictJson,
    pub seed: u64,
    pub note: &'static str,
}

impl GoReport {
    pub fn new(m: &MSpace, v: &Verdict, seed: u64) -> Self {
        GoReport { space: m.flag.diagram.to_string(), verdict: v.into(), seed, note: SAMPLING_NOTE }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandJson {
    pub id: usize,
    pub troot: Vec<i32>,
    pub dim: usize,
    pub criterion_reducible: bool,
    pub split: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescribeReport {
    pub algebra: String,
    pub painted: Vec<usize>,
    pub dim_g: usize,
    pub dim_k: usize,
    pub dim_k1: usize,
    pub dim_n: usize,
    pub dim_s: usize,
    pub r_k_plus: usize,
    pub r_m_plus: usize,
    pub s: usize,
    pub k1: String,
    pub s_gram: Vec<Vec<String>>,
    pub summands: Vec<SummandJson>,
    /// Basis of `n` in coordinate order: `s` first, then each summand.
    pub n_basis: Vec<ElementJson>,
}

fn matrix_json(m: &[Vec<crate::rational::Q>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}

impl DescribeReport {
    pub fn new(m: &MSpace) -> Self {
        let f = &m.flag;
        let unpainted: Vec<String> = f.unpainted0.iter().map(|j| (j + 1).to_string()).collect();
        let k1 = if unpainted.is_empty() {
            "trivial".to_string()
        } else {
            format!("semisimple, simple roots {{{}}}, dim {}", unpainted.join(","), m.dim_k1())
        };
        DescribeReport {
            algebra: f.diagram.algebra.to_string(),
            painted: f.diagram.painted.iter().copied().collect(),
            dim_g: m.alg.dim(),
            dim_k: m.dim_k1() + m.dim_s(),
            dim_k1: m.dim_k1(),
            dim_n: m.dim_n(),
            dim_s: m.dim_s(),
            r_k_plus: f.r_k_plus.len(),
            r_m_plus: f.r_m_plus.len(),
            s: m.s_count(),
            k1,
            s_gram: matrix_json(m.s_gram()),
            summands: (1..=m.s_count())
                .map(|i| SummandJson {
                    id: i,
                    troot: f.troots_plus[i - 1].0.clone(),
                    dim: m.summand_dim(i),
                    criterion_reducible: m.criterion_flags()[i - 1],
                    split: m.split(i).is_split(),
                })
                .collect(),
            n_basis: m.n_basis.iter().map(element_json).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberJson {
    pub troot: Vec<i32>,
    pub roots: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TRootsReport {
    pub space: String,
    pub s: usize,
    pub fibers: Vec<FiberJson>,
    /// All t-roots, positive ones first; `edges` index into this list.
    pub troots: Vec<Vec<i32>>,
    pub edges: Vec<[usize; 2]>,
    pub components: usize,
    pub connected: bool,
}

impl TRootsReport {
    pub fn new(f: &FlagManifold) -> Self {
        let g = f.connected_components();
        TRootsReport {
            space: f.diagram.to_string(),
            s: f.s_count(),
            fibers: f
                .troots_plus
                .iter()
                .zip(&f.fibers)
                .map(|(t, rs)| FiberJson { troot: t.0.clone(), roots: rs.iter().map(|r| r.to_string()).collect() })
                .collect(),
            troots: g.nodes.iter().map(|t| t.0.clone()).collect(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            components: g.component_count(),
            connected: g.is_connected(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleJson {
    pub irreducible: bool,
    pub kind: ModuleKind,
    pub commutant_dim: usize,
    pub generator_orbits_full: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitJson {
    pub seed_low: String,
    pub seed_high: String,
    pub n1: Vec<ElementJson>,
    pub n2: Vec<ElementJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandDecomposition {
    pub id: usize,
    pub troot: Vec<i32>,
    pub dim: usize,
    pub roots: Vec<String>,
    pub lowest: String,
    pub highest: String,
    /// A verified invariant splitting exists.
    pub reducible: bool,
    pub criterion_reducible: bool,
    pub oracle: OracleJson,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_dims: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_roots: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub space: String,
    pub summands: Vec<SummandDecomposition>,
}

impl DecomposeReport {
    pub fn new(m: &MSpace) -> Self {
        let f = &m.flag;
        let summands = (1..=m.s_count())
            .map(|i| {
                let (lo, hi) = f.lowest_highest(i).expect("summand index");
                let o = m.orbit_irreducibility_oracle(i).expect("summand index");
                let crit = m.criterion_flags()[i - 1];
                let split = match &m.split(i).status {
                    SplitStatus::Irreducible => None,
                    SplitStatus::Split { n1, n2, seed_low, seed_high } => Some(SplitJson {
                        seed_low: seed_low.to_string(),
                        seed_high: seed_high.to_string(),
                        n1: n1.iter().map(element_json).collect(),
                        n2: n2.iter().map(element_json).collect(),
                    }),
                };
                let split_dims = split.as_ref().map(|sp| [sp.n1.len(), sp.n2.len()]);
                let seed_roots = split.as_ref().map(|sp| [sp.seed_low.clone(), sp.seed_high.clone()]);
                SummandDecomposition {
                    id: i,
                    troot: f.troots_plus[i - 1].0.clone(),
                    dim: m.summand_dim(i),
                    roots: f.fibers[i - 1].iter().map(|r| r.to_string()).collect(),
                    lowest: lo.to_string(),
                    highest: hi.to_string(),
                    reducible: split.is_some(),
                    criterion_reducible: crit,
                    split_dims,
                    seed_roots,
                    agree: crit != o.irreducible,
                    oracle: OracleJson {
                        irreducible: o.irreducible,
                        kind: o.kind,
                        commutant_dim: o.commutant_dim,
                        generator_orbits_full: o.generator_orbits_full,
                    },
                    split,
                }
            })
            .collect();
        DecomposeReport { space: f.diagram.to_string(), summands }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseJson {
    pub label: String,
    pub expectation: &'static str,
    pub metric: MetricSpec,
    pub verdict: VerdictJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<[usize; 2]>,
    pub ok: bool,
}

impl From<&CaseResult> for CaseJson {
    fn from(c: &CaseResult) -> Self {
        CaseJson {
            label: c.label.clone(),
            expectation: match c.expectation {
                Expectation::Refuted => "refuted",
                Expectation::Passes => "passes",
                Expectation::CriteriaAgree => "criteria_agree",
                Expectation::ReportOnly => "report_only",
            },
            metric: c.metric.clone(),
            verdict: (&c.verdict).into(),
            agreement: c.agreement.map(|(a, n)| [a, n]),
            ok: c.ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremJson {
    pub theorem: String,
    pub space: String,
    pub consistent: bool,
    pub cases: Vec<CaseJson>,
    pub notes: Vec<String>,
    pub note: &'static str,
}

impl From<&TheoremReport> for TheoremJson {
    fn from(r: &TheoremReport) -> Self {
        TheoremJson {
            theorem: r.theorem.to_string(),
            space: r.space.clone(),
            consistent: r.consistent(),
            cases: r.cases.iter().map(CaseJson::from).collect(),
            notes: r.notes.clone(),
            note: SAMPLING_NOTE,
        }
    }
}
