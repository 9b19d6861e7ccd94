//! Shared inputs for the benchmarks.

use mardl::synthetic::{generate, SyntheticSpec};
use mardl::{kmodes::kmodes_cluster, DataPoint, PruningPolicy, RepresentativeModel};

pub struct Workload {
    pub model: RepresentativeModel,
    pub points: Vec<DataPoint>,
}

/// A model built from `train` synthetic rows over `q` attributes and `k`
/// clusters, plus `probe` further rows from the same generator.
pub fn workload(q: usize, k: usize, train: usize, probe: usize, pruning: PruningPolicy) -> Workload {
    let (schema, mut points) = generate(&SyntheticSpec {
        rows: train + probe,
        attributes: q,
        clusters: k,
        seed: 11,
        ..Default::default()
    });
    let probes = points.split_off(train);
    let clustering = kmodes_cluster(&schema, &points, k, 11).expect("synthetic data clusters");
    Workload {
        model: RepresentativeModel::build(&clustering, pruning).expect("model builds"),
        points: probes,
    }
}
