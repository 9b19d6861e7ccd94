//! The worked example, checked against the brute-force oracle and against
//! the published (truncated) figures.

mod common;

use common::oracle;
use mardl::{
    fixture, label_point, resemblance_maxsum, resemblance_nir, resemblance_nnir, Method, PruningPolicy,
    RepresentativeModel,
};

fn model() -> RepresentativeModel {
    RepresentativeModel::build(&fixture::example_clustering(), PruningPolicy::None).unwrap()
}

// Frozen from the oracle in tests/common/oracle.rs.
const MAXSUM_C1: f64 = 0.138625;
const MAXSUM_C2: f64 = 0.049209;
const NNIR_C1: f64 = 0.027725;
const NNIR_C2: f64 = 0.009842;

#[test]
fn oracle_reproduces_frozen_values() {
    let c = common::example_clusters();
    let p = common::bfb();
    assert!((oracle::maxsum_resemblance(&c, 0, &p) - MAXSUM_C1).abs() < 1e-6);
    assert!((oracle::maxsum_resemblance(&c, 1, &p) - MAXSUM_C2).abs() < 1e-6);
    assert!((oracle::nnir_resemblance(&c, 0, &p) - NNIR_C1).abs() < 1e-6);
    assert!((oracle::nnir_resemblance(&c, 1, &p) - NNIR_C2).abs() < 1e-6);
    assert_eq!(oracle::set_partitions(3).len(), 5);
    assert_eq!(oracle::set_partitions(8).len(), 4140);
}

#[test]
fn library_matches_oracle_on_every_unlabeled_point() {
    let m = model();
    let c = common::example_clusters();
    for point in fixture::example_unlabeled() {
        let raw: Vec<String> = point.values().to_vec();
        for i in 0..3 {
            let nnir = resemblance_nnir(&point, i, &m).unwrap().value;
            let maxsum = resemblance_maxsum(&point, i, &m).unwrap().value;
            let nir = resemblance_nir(&point, i, &m).unwrap().value;
            assert!((nnir - oracle::nnir_resemblance(&c, i, &raw)).abs() < 1e-12);
            assert!((maxsum - oracle::maxsum_resemblance(&c, i, &raw)).abs() < 1e-12);
            assert!((nir - oracle::nir_resemblance(&c, i, &raw)).abs() < 1e-12);
        }
    }
}

#[test]
fn published_scores_within_tolerance() {
    let m = model();
    let p = fixture::bfb();
    assert!((resemblance_nnir(&p, 0, &m).unwrap().value - 0.0277).abs() < 1e-3);
    assert!((resemblance_nnir(&p, 1, &m).unwrap().value - 0.00984).abs() < 1e-4);
    assert!((resemblance_nir(&p, 0, &m).unwrap().value - 0.0257).abs() < 1e-3);
    assert!((resemblance_maxsum(&p, 0, &m).unwrap().value - 0.1386).abs() < 1e-3);
    assert!((resemblance_maxsum(&p, 1, &m).unwrap().value - 0.0492).abs() < 1e-3);
}

#[test]
fn the_three_rules_on_bfb() {
    let m = model();
    let p = fixture::bfb();
    let nir = label_point(&p, &m, Method::NirSum).unwrap();
    let nnir = label_point(&p, &m, Method::NnirProduct).unwrap();
    let maxsum = label_point(&p, &m, Method::MaxSum).unwrap();
    assert_eq!(nir.cluster, Some(1));
    assert_eq!(nnir.cluster, Some(0));
    assert_eq!(maxsum.cluster, Some(0));
    assert!(!nir.tie && !nnir.tie && !maxsum.tie);
}
