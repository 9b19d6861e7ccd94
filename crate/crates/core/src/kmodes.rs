//! k-modes clustering with simple-matching dissimilarity.
//!
//! Initial modes are `k` distinct points drawn with the seeded generator.
//! Assignment ties go to the lowest mode index, mode ties to the
//! lexicographically smallest value. An emptied cluster takes the point of
//! the largest cluster that is farthest from that cluster's mode.

use std::collections::HashMap;

use rand::seq::SliceRandom;

use crate::error::PipelineError;
use crate::model::{AttributeSchema, Clustering, DataPoint};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KModes {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KModesResult {
    pub clustering: Clustering,
    pub modes: Vec<Vec<String>>,
    /// Cluster index of each input point, in input order.
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

fn mismatches(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl KModes {
    pub fn new(k: usize, seed: u64) -> Self {
        Self { k, seed, max_iter: 100 }
    }

    pub fn fit(&self, schema: &AttributeSchema, points: &[DataPoint]) -> Result<KModesResult, PipelineError> {
        if self.k == 0 {
            return Err(PipelineError::InvalidK);
        }
        if points.is_empty() {
            return Err(PipelineError::EmptyDataset);
        }
        for p in points {
            schema.check(p)?;
        }
        let q = schema.len();

        // encode values as ids per attribute, ids ordered like the strings
        let mut domains: Vec<Vec<&str>> = vec![Vec::new(); q];
        for p in points {
            for (a, v) in p.values().iter().enumerate() {
                domains[a].push(v.as_str());
            }
        }
        for d in &mut domains {
            d.sort_unstable();
            d.dedup();
        }
        let encoded: Vec<Vec<u32>> = points
            .iter()
            .map(|p| {
                p.values()
                    .iter()
                    .enumerate()
                    .map(|(a, v)| domains[a].binary_search(&v.as_str()).expect("value in domain") as u32)
                    .collect()
            })
            .collect();

        let mut seen = HashMap::new();
        let distinct: Vec<usize> = (0..encoded.len())
            .filter(|&i| seen.insert(&encoded[i], ()).is_none())
            .collect();
        if distinct.len() < self.k {
            return Err(PipelineError::TooFewPoints {
                k: self.k,
                distinct: distinct.len(),
            });
        }
        let mut pool = distinct;
        pool.shuffle(&mut sampling::rng(self.seed));
        let mut modes: Vec<Vec<u32>> = pool[..self.k].iter().map(|&i| encoded[i].clone()).collect();

        let mut labels = vec![usize::MAX; encoded.len()];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            iterations += 1;
            let next: Vec<usize> = encoded
                .iter()
                .map(|x| {
                    let mut best = 0;
                    let mut best_d = usize::MAX;
                    for (j, mode) in modes.iter().enumerate() {
                        let d = mismatches(x, mode);
                        if d < best_d {
                            best = j;
                            best_d = d;
                        }
                    }
                    best
                })
                .collect();
            let mut next = next;
            self.repair_empty(&encoded, &mut modes, &mut next);
            if next == labels {
                converged = true;
                break;
            }
            labels = next;
            modes = self.update_modes(&encoded, &labels, &domains, &modes);
        }

        let mut clusters: Vec<Vec<DataPoint>> = vec![Vec::new(); self.k];
        for (p, &l) in points.iter().zip(&labels) {
            clusters[l].push(p.clone());
        }
        let clustering = Clustering::new(schema.clone(), clusters)?;
        let modes = modes
            .iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(a, &id)| domains[a][id as usize].to_string())
                    .collect()
            })
            .collect();
        Ok(KModesResult {
            clustering,
            modes,
            labels,
            iterations,
            converged,
        })
    }

    fn repair_empty(&self, encoded: &[Vec<u32>], modes: &mut [Vec<u32>], labels: &mut [usize]) {
        loop {
            let mut sizes = vec![0usize; self.k];
            for &l in labels.iter() {
                sizes[l] += 1;
            }
            let Some(empty) = sizes.iter().position(|&s| s == 0) else {
                return;
            };
            let largest_size = *sizes.iter().max().expect("k >= 1");
            let largest = sizes.iter().position(|&s| s == largest_size).expect("max exists");
            let mut far = None;
            let mut far_d = 0;
            for (i, x) in encoded.iter().enumerate() {
                if labels[i] == largest {
                    let d = mismatches(x, &modes[largest]);
                    if far.is_none() || d > far_d {
                        far = Some(i);
                        far_d = d;
                    }
                }
            }
            let moved = far.expect("largest cluster is non-empty");
            labels[moved] = empty;
            modes[empty] = encoded[moved].clone();
        }
    }

    fn update_modes(
        &self,
        encoded: &[Vec<u32>],
        labels: &[usize],
        domains: &[Vec<&str>],
        previous: &[Vec<u32>],
    ) -> Vec<Vec<u32>> {
        let q = domains.len();
        let mut freq: Vec<Vec<Vec<usize>>> = (0..self.k)
            .map(|_| domains.iter().map(|d| vec![0; d.len()]).collect())
            .collect();
        for (x, &l) in encoded.iter().zip(labels) {
            for a in 0..q {
                freq[l][a][x[a] as usize] += 1;
            }
        }
        freq.iter()
            .enumerate()
            .map(|(j, per_attr)| {
                (0..q)
                    .map(|a| {
                        let counts = &per_attr[a];
                        let max = *counts.iter().max().unwrap_or(&0);
                        if max == 0 {
                            previous[j][a]
                        } else {
                            // ids follow string order, so the first maximum is the smallest value
                            counts.iter().position(|&c| c == max).expect("max exists") as u32
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Clusters `points` into `k` non-empty clusters.
pub fn kmodes_cluster(
    schema: &AttributeSchema,
    points: &[DataPoint],
    k: usize,
    seed: u64,
) -> Result<Clustering, PipelineError> {
    KModes::new(k, seed).fit(schema, points).map(|r| r.clustering)
}
