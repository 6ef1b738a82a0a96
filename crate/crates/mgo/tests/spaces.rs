//! Hand-derived dimensions and graph shapes for small painted diagrams.

use mgo::catalog::{catalog_diagrams, ty};
use mgo::flag::{FlagManifold, PaintedDiagram};
use mgo::geocheck::{check_go_metric, go_feasibility, replay_certificate, ProbeSet, Verdict};
use mgo::metric::{MetricOperator, MetricSpec};
use mgo::mspace::MSpace;
use mgo::rational::q;
use mgo::rootsys::{Family, Root};
use std::sync::Arc;

fn space(f: Family, l: usize, painted: &[usize]) -> Arc<MSpace> {
    let d = PaintedDiagram::new(ty(f, l), painted.iter().copied()).unwrap();
    Arc::new(MSpace::build(&FlagManifold::build(&d).unwrap()))
}

fn summand_dims(m: &MSpace) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=m.s_count()).map(|i| m.summand_dim(i)).collect();
    v.sort_unstable();
    v
}

#[test]
fn full_flag_a2() {
    let m = space(Family::A, 2, &[1, 2]);
    assert_eq!(m.s_count(), 3);
    assert_eq!(m.dim_s(), 2);
    assert_eq!(m.dim_k1(), 0);
    assert_eq!(m.dim_n(), 8);
    assert_eq!(summand_dims(&m), vec![2, 2, 2]);
    let g = m.flag.connected_components();
    assert_eq!(g.nodes.len(), 6);
    assert!(g.is_connected());
}

#[test]
fn complex_projective_plane() {
    let m = space(Family::A, 2, &[1]);
    assert_eq!(m.s_count(), 1);
    assert_eq!(m.summand_dim(1), 4);
    assert_eq!((m.dim_s(), m.dim_k1(), m.dim_n()), (1, 3, 5));
    let g = m.flag.connected_components();
    assert_eq!(g.nodes.len(), 2);
    assert_eq!(g.edges.len(), 1);
}

#[test]
fn a3_middle_node() {
    // roots with a2 = 1: a2, a1+a2, a2+a3, a1+a2+a3
    let m = space(Family::A, 3, &[2]);
    assert_eq!(m.s_count(), 1);
    assert_eq!(m.summand_dim(1), 8);
    assert_eq!((m.dim_s(), m.dim_k1()), (1, 6));
    assert!(m.split(1).is_split());
}

#[test]
fn full_flag_b2() {
    let m = space(Family::B, 2, &[1, 2]);
    assert_eq!(m.s_count(), 4);
    assert_eq!(summand_dims(&m), vec![2, 2, 2, 2]);
    assert_eq!((m.dim_s(), m.dim_n()), (2, 10));
}

#[test]
fn g2_short_node() {
    // a1-coefficients of the positive roots: 1, 0, 1, 2, 3, 3
    let m = space(Family::G, 2, &[1]);
    assert_eq!(m.s_count(), 3);
    assert_eq!(summand_dims(&m), vec![2, 4, 4]);
    assert_eq!((m.dim_s(), m.dim_k1()), (1, 3));
    let f = &m.flag;
    assert_eq!(f.summand_of(&Root(vec![2, 1])), Some(2));
}

#[test]
fn catalog_shape() {
    let all = catalog_diagrams();
    // 2^l - 1 diagrams per type over A1..A4, B2..B4, C3, C4, D4, G2, plus five F4 sets
    let full: usize = [1, 2, 3, 4, 2, 3, 4, 3, 4, 4, 2].iter().map(|l| (1usize << l) - 1).sum();
    assert_eq!(all.len(), full + 5);
    let mut names: Vec<String> = all.iter().map(|d| d.to_string()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), all.len());
}

#[test]
fn unequal_lambdas_on_full_flag_a2_are_refuted() {
    let m = space(Family::A, 2, &[1, 2]);
    let spec = MetricSpec::diagonal(m.s_gram().clone(), &[q(1), q(2), q(3)]);
    let op = MetricOperator::validate(&spec, m.clone()).unwrap();
    match check_go_metric(&op, &ProbeSet::new(&m, 20, 7)) {
        Verdict::Refuted { counterexample, certificate, .. } => {
            assert!(replay_certificate(&op, &counterexample, &certificate));
            assert!(!go_feasibility(&op, &counterexample).unwrap().is_feasible());
        }
        v => panic!("expected a refutation, got {}", v.status()),
    }
}

#[test]
fn scaled_standard_passes() {
    let m = space(Family::B, 3, &[2]);
    let op = MetricOperator::validate(&MetricSpec::scaled_standard(&m, &q(3)), m.clone()).unwrap();
    assert!(op.is_scaled_standard());
    assert!(check_go_metric(&op, &ProbeSet::new(&m, 30, 1)).is_passed());
}
