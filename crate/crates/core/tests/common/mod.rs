#![allow(dead_code)]

pub mod oracle;

use oracle::Row;

/// The three example clusters and the four complete unlabeled rows.
pub fn example_clusters() -> Vec<Vec<Row>> {
    vec![
        oracle::rows(&[
            ["a", "m", "c"],
            ["b", "m", "b"],
            ["c", "f", "c"],
            ["a", "m", "a"],
            ["a", "m", "c"],
        ]),
        oracle::rows(&[
            ["c", "f", "a"],
            ["c", "m", "a"],
            ["c", "f", "a"],
            ["a", "f", "b"],
            ["b", "m", "a"],
        ]),
        oracle::rows(&[
            ["c", "m", "c"],
            ["c", "f", "b"],
            ["c", "m", "b"],
            ["b", "m", "c"],
            ["a", "f", "a"],
        ]),
    ]
}

pub fn bfb() -> Row {
    oracle::rows(&[["b", "f", "b"]]).remove(0)
}
