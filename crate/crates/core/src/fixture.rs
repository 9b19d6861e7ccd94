//! The three-cluster, three-attribute example dataset with its unlabeled rows.
//!
//! Clusters are indexed 0, 1, 2 (written c_1, c_2, c_3 in reports).

use crate::model::{AttributeSchema, Clustering, DataPoint};

const CLUSTERS: [[[&str; 3]; 5]; 3] = [
    [
        ["a", "m", "c"],
        ["b", "m", "b"],
        ["c", "f", "c"],
        ["a", "m", "a"],
        ["a", "m", "c"],
    ],
    [
        ["c", "f", "a"],
        ["c", "m", "a"],
        ["c", "f", "a"],
        ["a", "f", "b"],
        ["b", "m", "a"],
    ],
    [
        ["c", "m", "c"],
        ["c", "f", "b"],
        ["c", "m", "b"],
        ["b", "m", "c"],
        ["a", "f", "a"],
    ],
];

// The source table trails off after four complete rows.
const UNLABELED: [[&str; 3]; 4] = [["a", "m", "c"], ["c", "m", "a"], ["b", "f", "b"], ["a", "f", "c"]];

pub fn example_schema() -> AttributeSchema {
    AttributeSchema::new(["A1", "A2", "A3"]).expect("static schema")
}

pub fn example_unlabeled() -> Vec<DataPoint> {
    UNLABELED
        .iter()
        .enumerate()
        .map(|(id, row)| DataPoint::new(row).expect("static row").with_id(id))
        .collect()
}

/// Clustered rows get ids 0..15 in cluster order.
pub fn example_clustering() -> Clustering {
    let clusters = CLUSTERS
        .iter()
        .enumerate()
        .map(|(i, rows)| {
            rows.iter()
                .enumerate()
                .map(|(j, row)| DataPoint::new(row).expect("static row").with_id(i * 5 + j))
                .collect()
        })
        .collect();
    Clustering::new(example_schema(), clusters)
        .and_then(|c| c.with_unlabeled(example_unlabeled()))
        .expect("static clustering")
}

/// The unlabeled point (b, f, b), third row of the unlabeled set.
pub fn bfb() -> DataPoint {
    example_unlabeled().swap_remove(2)
}
