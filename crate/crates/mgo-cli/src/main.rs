//! `mgo`: flag manifolds, M-spaces and geodesic-orbit checks from the
//! command line. Reports go to stdout as JSON (or DOT for `graph --dot`).
//!
//! Exit codes: 0 consistent, 1 a finding (an inconsistency), 2 usage error.

use clap::{Args, Parser, Subcommand};
use mgo::chevalley::AlgebraElement;
use mgo::flag::{FlagManifold, PaintedDiagram};
use mgo::geocheck::{
    check_go_metric, go_feasibility, replay_certificate, replay_witness, verify_theorem, ProbeSet, Theorem, Verdict,
    DEFAULT_RANDOM_PROBES, DEFAULT_SEED, SAMPLING_NOTE,
};
use mgo::metric::{MetricOperator, MetricSpec};
use mgo::mspace::MSpace;
use mgo::rational::{parse_q, Q};
use mgo::report::{element_json, DecomposeReport, DescribeReport, GoReport, TRootsReport, TheoremJson, VerdictJson};
use mgo::rootsys::{Family, RootSystemType};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "mgo", version, about = "Exact checks of geodesic-orbit metrics on M-spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Algebra descriptor file ({"family":"A","rank":3}) or a type name like A3.
    #[arg(long)]
    algebra: String,
    /// Painted simple roots, 1-based and comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    painted: Vec<usize>,
}

#[derive(Args, Clone)]
struct ProbeArgs {
    /// Number of random probes, on top of the structured ones.
    #[arg(long, default_value_t = DEFAULT_RANDOM_PROBES)]
    probes: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions, root counts, summands and the k1 factor.
    Describe(SpaceArgs),
    /// Positive t-roots, their fibers and the adjacency components.
    Troots(SpaceArgs),
    /// Per-summand reducibility: criterion, orbit oracle and splitting.
    Decompose(SpaceArgs),
    /// Samples the geodesic-orbit property of a metric (standard if omitted).
    CheckGo {
        #[command(flatten)]
        space: SpaceArgs,
        /// Metric JSON file.
        #[arg(long)]
        metric: Option<PathBuf>,
        #[command(flatten)]
        probes: ProbeArgs,
    },
    /// Solves for `a in k1` making `a + x` a geodesic vector.
    FindGeodesic {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Coordinates of `x` on the `n` basis listed by `describe`, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        vector: Vec<String>,
    },
    /// Runs a theorem's metric grid on one space.
    Refute {
        #[command(flatten)]
        space: SpaceArgs,
        /// One of T1, T2_1, T2_2, T2_3, T3_2, CC1, C2.
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        probes: ProbeArgs,
    },
    /// The t-root adjacency graph.
    Graph {
        #[command(flatten)]
        space: SpaceArgs,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Deserialize)]
struct AlgebraDescriptor {
    family: String,
    rank: usize,
}

fn parse_family(s: &str) -> Result<Family, UsageError> {
    Ok(match s.to_ascii_uppercase().as_str() {
        "A" => Family::A,
        "B" => Family::B,
        "C" => Family::C,
        "D" => Family::D,
        "E" => Family::E,
        "F" => Family::F,
        "G" => Family::G,
        _ => return Err(UsageError(format!("unknown family {s:?}"))),
    })
}

fn parse_algebra(arg: &str) -> Result<RootSystemType, UsageError> {
    let path = Path::new(arg);
    let desc = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{arg}: {e}")))?;
        serde_json::from_str::<AlgebraDescriptor>(&text).map_err(|e| UsageError(format!("{arg}: {e}")))?
    } else {
        let (f, r) = arg.split_at(arg.chars().next().map_or(0, char::len_utf8));
        let rank = r.parse().map_err(|_| UsageError(format!("{arg:?} is neither a descriptor file nor a type like A3")))?;
        AlgebraDescriptor { family: f.into(), rank }
    };
    Ok(RootSystemType::new(parse_family(&desc.family)?, desc.rank)?)
}

fn flag(space: &SpaceArgs) -> Result<FlagManifold, UsageError> {
    let d = PaintedDiagram::new(parse_algebra(&space.algebra)?, space.painted.iter().copied())?;
    Ok(FlagManifold::build(&d)?)
}

fn mspace(space: &SpaceArgs) -> Result<Arc<MSpace>, UsageError> {
    Ok(Arc::new(MSpace::build(&flag(space)?)))
}

fn metric(m: &Arc<MSpace>, path: Option<&Path>) -> Result<MetricOperator, UsageError> {
    let Some(path) = path else {
        return Ok(MetricOperator::standard(m.clone()));
    };
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let spec = MetricSpec::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(MetricOperator::validate(&spec, m.clone())?)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

#[derive(Serialize)]
struct FindReport {
    space: String,
    x: Vec<[String; 2]>,
    #[serde(flatten)]
    verdict: VerdictJson,
    /// `a + x` when feasible.
    #[serde(skip_serializing_if = "Option::is_none")]
    geodesic_vector: Option<Vec<[String; 2]>>,
}

/// A description of the inconsistency found, if any.
type Finding = Option<String>;

fn finding_if(cond: bool, msg: impl FnOnce() -> String) -> Finding {
    cond.then(msg)
}

fn run(cmd: Cmd) -> Result<Finding, UsageError> {
    match cmd {
        Cmd::Describe(space) => {
            emit(&DescribeReport::new(&*mspace(&space)?));
            Ok(None)
        }
        Cmd::Troots(space) => {
            let f = flag(&space)?;
            let r = TRootsReport::new(&f);
            emit(&r);
            Ok(finding_if(r.s >= 3 && !r.connected, || {
                format!("{} has {} t-root components with s = {}", r.space, r.components, r.s)
            }))
        }
        Cmd::Decompose(space) => {
            let r = DecomposeReport::new(&*mspace(&space)?);
            emit(&r);
            let unequal: Vec<usize> =
                r.summands.iter().filter(|s| s.split_dims.is_some_and(|[a, b]| a != b)).map(|s| s.id).collect();
            let disagree: Vec<usize> = r.summands.iter().filter(|s| !s.agree).map(|s| s.id).collect();
            Ok(finding_if(!unequal.is_empty() || !disagree.is_empty(), || {
                format!(
                    "reducibility criterion disagrees with the orbit oracle on summands {disagree:?}, unequal splits on {unequal:?}"
                )
            }))
        }
        Cmd::CheckGo { space, metric: path, probes } => {
            let m = mspace(&space)?;
            let op = metric(&m, path.as_deref())?;
            let v = check_go_metric(&op, &ProbeSet::new(&m, probes.probes, probes.seed));
            emit(&GoReport::new(&m, &v, probes.seed));
            let bad_certificate = match &v {
                Verdict::Refuted { counterexample, certificate, .. } => {
                    !replay_certificate(&op, counterexample, certificate)
                }
                _ => false,
            };
            if bad_certificate {
                return Ok(Some("refutation certificate does not replay".into()));
            }
            Ok(finding_if(op.is_scaled_standard() && v.is_refuted(), || {
                "a multiple of the standard metric was refuted".into()
            }))
        }
        Cmd::FindGeodesic { space, metric: path, vector } => {
            let m = mspace(&space)?;
            let op = metric(&m, path.as_deref())?;
            if vector.len() != m.dim_n() {
                return Err(UsageError(format!("--vector needs {} coordinates, got {}", m.dim_n(), vector.len())));
            }
            let coords: Vec<Q> = vector.iter().map(|c| parse_q(c.trim())).collect::<Result<_, _>>()?;
            let x = m
                .n_basis
                .iter()
                .zip(&coords)
                .fold(AlgebraElement::zero(m.alg.ty()), |acc, (b, c)| acc.add(&b.scale(c)));
            let v = go_feasibility(&op, &x)?;
            let (geodesic_vector, replays) = match &v {
                Verdict::Feasible { witness } => (Some(element_json(&witness.add(&x))), replay_witness(&op, &x, witness)),
                Verdict::Infeasible { certificate, .. } => (None, replay_certificate(&op, &x, certificate)),
                _ => (None, true),
            };
            emit(&FindReport {
                space: m.flag.diagram.to_string(),
                x: element_json(&x),
                verdict: (&v).into(),
                geodesic_vector,
            });
            Ok(finding_if(!replays, || format!("{} verdict does not replay", v.status())))
        }
        Cmd::Refute { space, theorem, probes } => {
            let which: Theorem = theorem.parse().map_err(UsageError)?;
            let m = mspace(&space)?;
            let r = verify_theorem(&m, which, &ProbeSet::new(&m, probes.probes, probes.seed))?;
            emit(&TheoremJson::from(&r));
            Ok(finding_if(!r.consistent(), || {
                let bad: Vec<&str> = r.cases.iter().filter(|c| !c.ok).map(|c| c.label.as_str()).collect();
                format!("{} grid on {} is inconsistent in cases {bad:?} ({SAMPLING_NOTE})", r.theorem, r.space)
            }))
        }
        Cmd::Graph { space, dot } => {
            let f = flag(&space)?;
            if dot {
                print!("{}", f.connected_components().to_dot());
            } else {
                emit(&TRootsReport::new(&f));
            }
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("finding: {msg}");
            ExitCode::from(1)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
