//! Catalog-wide acceptance criteria. Each check returns an [`Outcome`] with a
//! JSON report; [`suite`] runs criteria 1 to 9 and serializes the reports.

use mgo::catalog::{catalog_diagrams, catalog_types, ty};
use mgo::chevalley::{Algebra, AlgebraElement};
use mgo::flag::{FlagManifold, PaintedDiagram};
use mgo::geocheck::{
    check_go_metric, eigenpairs, go_feasibility, prop_p2_conditions, prop_p3_necessary, random_pairs,
    replay_certificate, theorem_applies, verify_theorem, ProbeSet, Theorem, Verdict, DEFAULT_RANDOM_PROBES,
};
use mgo::metric::{MetricOperator, MetricSpec};
use mgo::mspace::{MSpace, SplitStatus};
use mgo::rational::{q, qf, Q};
use mgo::report::{DecomposeReport, GoReport, TRootsReport, TheoremJson};
use mgo::rootsys::{Family, RootSystem, RootSystemType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Random probes per metric in the theorem grids.
const GRID_RANDOM_PROBES: usize = 20;
const P2_PAIRS: usize = 1000;
const F4_RANDOM_TRIPLES: usize = 1000;

pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub report: Value,
}

pub fn outcome(id: usize, name: &'static str, pass: bool, detail: String, report: Value) -> Outcome {
    Outcome { id, name, pass, detail, report }
}

struct Catalog {
    spaces: Vec<Arc<MSpace>>,
}

impl Catalog {
    fn build() -> Catalog {
        let spaces = catalog_diagrams()
            .iter()
            .map(|d| Arc::new(MSpace::build(&FlagManifold::build(d).expect("catalog diagram builds"))))
            .collect();
        Catalog { spaces }
    }

    fn find(&self, t: RootSystemType, painted: &[usize]) -> Arc<MSpace> {
        let d = PaintedDiagram::new(t, painted.iter().copied()).expect("valid painted set");
        self.spaces.iter().find(|m| m.flag.diagram == d).cloned().expect("diagram is in the catalog")
    }
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let v: Vec<Q> = (0..alg.dim()).map(|_| random_q(rng)).collect();
    AlgebraElement::from_dense(alg.ty(), &v)
}

fn lie_soundness(seed: u64) -> Outcome {
    let mut bad = Vec::new();
    let mut triples = 0usize;
    for t in catalog_types() {
        if t.family == Family::F {
            continue;
        }
        let alg = Algebra::shared(t).expect("catalog type");
        let d = alg.dim();
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    triples += 1;
                    if !alg.jacobi_generators_vanish(i, j, k) {
                        bad.push(format!("{t} jacobi ({i},{j},{k})"));
                    }
                }
            }
        }
        for z in 0..d {
            for x in 0..d {
                for y in x..d {
                    if !alg.invariance_generators_vanish(z, x, y) {
                        bad.push(format!("{t} invariance ({z},{x},{y})"));
                    }
                }
            }
        }
    }
    let f4 = Algebra::shared(ty(Family::F, 4)).expect("F4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..F4_RANDOM_TRIPLES {
        let (x, y, z) = (random_element(&f4, &mut rng), random_element(&f4, &mut rng), random_element(&f4, &mut rng));
        if !f4.jacobi(&x, &y, &z).is_zero() {
            bad.push(format!("F4 random jacobi #{n}"));
        }
        let inv = f4.killing_form(&f4.br(&z, &x), &y) + f4.killing_form(&x, &f4.br(&z, &y));
        if inv != q(0) {
            bad.push(format!("F4 random invariance #{n}"));
        }
    }
    let detail = format!("{triples} basis triples, {F4_RANDOM_TRIPLES} random F4 triples, {} failures", bad.len());
    outcome(1, "Lie-algebra soundness", bad.is_empty(), detail, json!({ "failures": bad }))
}

fn classification_count(t: RootSystemType) -> usize {
    let l = t.rank;
    match t.family {
        Family::A => l * (l + 1),
        Family::B | Family::C => 2 * l * l,
        Family::D => 2 * l * (l - 1),
        Family::E => [72, 126, 240][l - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

fn root_counts() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for t in catalog_types() {
        let rs = RootSystem::build(t).expect("catalog type");
        let want = classification_count(t);
        let pass = rs.num_roots() == want && rs.num_positive() * 2 == want && t.expected_root_count() == want;
        ok &= pass;
        rows.push(json!({ "type": t.to_string(), "roots": rs.num_roots(), "expected": want, "ok": pass }));
    }
    let detail = format!("{} types", rows.len());
    outcome(2, "root-system counts", ok, detail, Value::Array(rows))
}

fn troot_connectedness(cat: &Catalog) -> Outcome {
    let mut reports = Vec::new();
    let mut broken = Vec::new();
    for m in cat.spaces.iter().filter(|m| m.s_count() >= 3) {
        let r = TRootsReport::new(&m.flag);
        if !r.connected {
            broken.push(r.space.clone());
        }
        reports.push(r);
    }
    let detail = format!("{} diagrams with s >= 3, disconnected: {:?}", reports.len(), broken);
    outcome(3, "t-root connectedness", broken.is_empty(), detail, json!(reports))
}

fn reducibility_oracle(cat: &Catalog) -> Outcome {
    let mut total = 0;
    let mut disagree = Vec::new();
    let mut unequal = Vec::new();
    let mut reports = Vec::new();
    for m in &cat.spaces {
        let r = DecomposeReport::new(m);
        for s in &r.summands {
            total += 1;
            if !s.agree {
                disagree.push(format!("{} m{} ({:?})", r.space, s.id, s.oracle.kind));
            }
        }
        for sp in m.splits() {
            if let SplitStatus::Split { n1, n2, .. } = &sp.status {
                if n1.len() != n2.len() || 2 * n1.len() != m.summand_dim(sp.summand_index) {
                    unequal.push(format!("{} m{}", r.space, sp.summand_index));
                }
            }
        }
        reports.push(r);
    }
    let pass = disagree.is_empty() && unequal.is_empty();
    let mut detail = format!(
        "{} of {total} summands agree, unequal splits: {}",
        total - disagree.len(),
        unequal.len()
    );
    if !disagree.is_empty() {
        let shown: Vec<_> = disagree.iter().take(4).cloned().collect();
        detail.push_str(&format!(", first disagreements: {}", shown.join("; ")));
    }
    outcome(4, "reducibility criterion vs oracle", pass, detail, json!(reports))
}

fn standard_control(cat: &Catalog, seed: u64) -> Outcome {
    let mut failed = Vec::new();
    let mut min_probes = usize::MAX;
    let mut reports = Vec::new();
    for m in &cat.spaces {
        let op = MetricOperator::standard(m.clone());
        let v = check_go_metric(&op, &ProbeSet::new(m, DEFAULT_RANDOM_PROBES, seed));
        match &v {
            Verdict::PassedSamples { count } => min_probes = min_probes.min(*count),
            _ => failed.push(m.flag.diagram.to_string()),
        }
        reports.push(GoReport::new(m, &v, seed));
    }
    let pass = failed.is_empty() && min_probes >= DEFAULT_RANDOM_PROBES;
    let detail = format!("{} spaces, fewest probes {min_probes}, failed: {failed:?}", cat.spaces.len());
    outcome(5, "standard metric passes samples", pass, detail, json!(reports))
}

/// Runs the theorem grid on `m` and additionally replays every refutation.
fn run_theorem(m: &Arc<MSpace>, which: Theorem, seed: u64) -> (bool, TheoremJson) {
    let report = verify_theorem(m, which, &ProbeSet::new(m, GRID_RANDOM_PROBES, seed)).expect("theorem applies");
    let mut ok = report.consistent() && !report.cases.is_empty();
    for c in &report.cases {
        if let Verdict::Refuted { counterexample, certificate, .. } = &c.verdict {
            let op = MetricOperator::validate(&c.metric, m.clone()).expect("grid metric is valid");
            ok &= replay_certificate(&op, counterexample, certificate);
        }
    }
    (ok, TheoremJson::from(&report))
}

fn t1_instances(cat: &Catalog, seed: u64) -> Outcome {
    let a2 = ty(Family::A, 2);
    let picks = [
        cat.find(a2, &[1, 2]),
        cat.find(ty(Family::A, 3), &[1, 2]),
        cat.find(ty(Family::A, 3), &[1, 2, 3]),
        cat.find(ty(Family::B, 2), &[1, 2]),
    ];
    let mut ok = true;
    let mut reports = Vec::new();
    let mut labels = Vec::new();
    for m in &picks {
        if theorem_applies(m, Theorem::T1).is_err() {
            continue;
        }
        let (pass, r) = run_theorem(m, Theorem::T1, seed);
        ok &= pass;
        labels.push(format!("{}:{}", r.space, if pass { "ok" } else { "bad" }));
        reports.push(r);
    }
    ok &= labels.len() >= 3 && reports[0].space == "A2{1,2}";
    outcome(6, "T1 instance refutation", ok, labels.join(" "), json!(reports))
}

fn structural_instances(cat: &Catalog, seed: u64) -> Outcome {
    let mut ok = true;
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for which in [Theorem::CC1, Theorem::T2_3, Theorem::T3_2] {
        let mut n = 0;
        for m in &cat.spaces {
            if theorem_applies(m, which).is_err() {
                continue;
            }
            let (pass, r) = run_theorem(m, which, seed);
            ok &= pass;
            n += 1;
            reports.push(r);
        }
        ok &= n > 0;
        summary.push(format!("{which}: {n} spaces"));
    }
    outcome(7, "CC1 / T2_3 / T3_2 instances", ok, summary.join(", "), json!(reports))
}

/// A non-standard diagonal metric: Killing on `s`, summand `i` scaled by
/// `1 + (i mod 3)`.
fn stepped_metric(m: &Arc<MSpace>) -> MetricOperator {
    let lambdas: Vec<Q> = (0..m.s_count()).map(|i| q(1 + (i % 3) as i64)).collect();
    MetricOperator::validate(&MetricSpec::diagonal(m.s_gram().clone(), &lambdas), m.clone()).expect("valid metric")
}

fn p2_consistency(cat: &Catalog, seed: u64) -> Outcome {
    let mut checked = 0usize;
    let mut holding = 0usize;
    let mut bad = Vec::new();
    for m in &cat.spaces {
        let op = stepped_metric(m);
        for (n, (a, x)) in random_pairs(m, P2_PAIRS, seed).iter().enumerate() {
            checked += 1;
            if !prop_p2_conditions(&op, a, x).expect("valid pair").agree() {
                bad.push(format!("{} pair {n}", m.flag.diagram));
            }
        }
        // pairs on which the conditions hold: feasible basis vectors and their witnesses
        for x in &m.n_basis {
            if let Ok(Verdict::Feasible { witness }) = go_feasibility(&op, x) {
                let out = prop_p2_conditions(&op, &witness, x).expect("valid pair");
                checked += 1;
                holding += out.bracket_in_k as usize;
                if !out.agree() || !out.bracket_in_k {
                    bad.push(format!("{} witness pair for {:?}", m.flag.diagram, x.terms()));
                }
            }
        }
    }
    let detail = format!("{checked} pairs, {holding} with all conditions true, {} disagreements", bad.len());
    outcome(8, "P2 internal consistency", bad.is_empty() && holding > 0, detail, json!({ "disagreements": bad }))
}

fn p3_linkage(cat: &Catalog, seed: u64) -> Outcome {
    let mut infeasible = 0usize;
    let mut unlinked = Vec::new();
    let mut rows = Vec::new();
    for m in cat.spaces.iter().filter(|m| m.s_count() >= 2) {
        let op = stepped_metric(m);
        let mut n_inf = 0;
        for (x, y) in eigenpairs(&op, 4) {
            if let Ok(Verdict::Infeasible { .. }) = prop_p3_necessary(&op, &x, &y) {
                n_inf += 1;
            }
        }
        if n_inf == 0 {
            continue;
        }
        infeasible += n_inf;
        let v = check_go_metric(&op, &ProbeSet::new(m, GRID_RANDOM_PROBES, seed));
        if !v.is_refuted() {
            unlinked.push(m.flag.diagram.to_string());
        }
        rows.push(json!({ "space": m.flag.diagram.to_string(), "p3_infeasible": n_inf, "go": v.status() }));
    }
    let detail = format!("{infeasible} infeasible eigenpairs on {} metrics, unlinked: {unlinked:?}", rows.len());
    outcome(9, "P3 necessity linkage", unlinked.is_empty() && infeasible > 0, detail, Value::Array(rows))
}

/// Criteria 1 to 9 with their JSON reports. With `timed`, budgets are
/// enforced and elapsed times appended to the details.
pub fn suite(seed: u64, timed: bool) -> (Vec<Outcome>, String) {
    let mut out = Vec::new();
    let timed_run = |o: &mut Vec<Outcome>, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let mut r = f();
        let el = t.elapsed();
        if timed {
            if let Some(b) = budget {
                if el >= b {
                    r.pass = false;
                }
                r.detail.push_str(&format!(", {:.1}s (budget {}s)", el.as_secs_f64(), b.as_secs()));
            } else {
                r.detail.push_str(&format!(", {:.1}s", el.as_secs_f64()));
            }
        }
        o.push(r);
    };
    timed_run(&mut out, Some(Duration::from_secs(60)), &mut || lie_soundness(seed));
    timed_run(&mut out, None, &mut root_counts);
    let cat = Catalog::build();
    timed_run(&mut out, None, &mut || troot_connectedness(&cat));
    timed_run(&mut out, None, &mut || reducibility_oracle(&cat));
    timed_run(&mut out, Some(Duration::from_secs(120)), &mut || standard_control(&cat, seed));
    timed_run(&mut out, None, &mut || t1_instances(&cat, seed));
    timed_run(&mut out, None, &mut || structural_instances(&cat, seed));
    timed_run(&mut out, None, &mut || p2_consistency(&cat, seed));
    timed_run(&mut out, None, &mut || p3_linkage(&cat, seed));
    let doc: Vec<Value> = out
        .iter()
        .map(|o| json!({ "criterion": o.id, "name": o.name, "pass": o.pass, "report": o.report }))
        .collect();
    let text = serde_json::to_string(&json!({ "seed": seed, "criteria": doc })).expect("report serializes");
    (out, text)
}

