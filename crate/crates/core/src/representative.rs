//! Node importance: per-cluster counts, cluster shares, the entropy
//! weighting `f` and the importance `w = (count_i / m_i) * f`.
//!
//! `f` is one minus the cross-cluster entropy of a nodeset's occurrence
//! distribution normalized by `ln k`. It is 1 for a nodeset seen in a single
//! cluster and 0 for one spread uniformly over all `k` clusters. With `k = 1`
//! the normalizer vanishes and `f` is defined as 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::RepresentativeError;
use crate::lattice::NnirLattice;
use crate::model::{AttributeSchema, Clustering, Node, Nodeset};

/// Counts and derived weights of one nodeset across all clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct NodesetStats {
    counts: Vec<u64>,
    shares: Vec<f64>,
    weight: f64,
    importance: Vec<f64>,
}

impl NodesetStats {
    /// `counts[i]` is the frequency in cluster `i`, `sizes[i]` is `m_i`.
    pub fn from_counts(counts: Vec<u64>, sizes: &[u64]) -> Result<Self, RepresentativeError> {
        debug_assert_eq!(counts.len(), sizes.len());
        let shares = cluster_share(&counts)?;
        let weight = weighting_f(&shares);
        let importance = counts
            .iter()
            .zip(sizes)
            .map(|(&c, &m)| if c == 0 { 0.0 } else { c as f64 / m as f64 * weight })
            .collect();
        Ok(Self {
            counts,
            shares,
            weight,
            importance,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, cluster: usize) -> u64 {
        self.counts[cluster]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Cluster shares `p_y`.
    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    /// Entropy weighting `f`.
    pub fn f(&self) -> f64 {
        self.weight
    }

    /// Importance `w` in `cluster`.
    pub fn w(&self, cluster: usize) -> f64 {
        self.importance[cluster]
    }

    pub fn importance(&self) -> &[f64] {
        &self.importance
    }

    pub fn max_importance(&self) -> f64 {
        self.importance.iter().copied().fold(0.0, f64::max)
    }
}

/// `p_y = count_y / sum_z count_z`.
pub fn cluster_share(counts: &[u64]) -> Result<Vec<f64>, RepresentativeError> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(RepresentativeError::ZeroTotalCount);
    }
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

/// `f = 1 - E(p) / ln k` with `0 ln 0 = 0`; `k` is `shares.len()`.
///
/// Exclusive occurrence yields exactly 1 and uniform shares exactly 0, so
/// both boundary cases survive floating point. The result is clamped to
/// `[0, 1]`.
pub fn weighting_f(shares: &[f64]) -> f64 {
    let k = shares.len();
    if k <= 1 {
        return 1.0;
    }
    let nonzero = shares.iter().filter(|&&p| p > 0.0).count();
    if nonzero <= 1 {
        return 1.0;
    }
    if nonzero == k && shares.iter().all(|&p| p == shares[0]) {
        return 0.0;
    }
    // summed in sorted order so f does not depend on cluster order
    let mut present: Vec<f64> = shares.iter().copied().filter(|&p| p > 0.0).collect();
    present.sort_by(f64::total_cmp);
    let entropy: f64 = present.iter().map(|&p| -p * p.ln()).sum();
    (1.0 - entropy / (k as f64).ln()).clamp(0.0, 1.0)
}

fn check_cluster(clustering: &Clustering, index: usize) -> Result<(), RepresentativeError> {
    if index >= clustering.k() {
        return Err(RepresentativeError::ClusterIndexOutOfRange {
            index,
            k: clustering.k(),
        });
    }
    Ok(())
}

fn check_nodeset(schema: &AttributeSchema, nodeset: &Nodeset) -> Result<(), RepresentativeError> {
    let q = schema.len();
    if let Some(attr) = nodeset.attrs().find(|&a| a >= q) {
        return Err(crate::error::ModelError::IndexOutOfRange { attr, q }.into());
    }
    Ok(())
}

/// Number of points in cluster `i` containing every node of `nodeset`.
pub fn nodeset_frequency(clustering: &Clustering, i: usize, nodeset: &Nodeset) -> Result<u64, RepresentativeError> {
    check_cluster(clustering, i)?;
    check_nodeset(clustering.schema(), nodeset)?;
    Ok(clustering.clusters()[i]
        .iter()
        .filter(|p| nodeset.is_contained_in(p))
        .count() as u64)
}

/// Stats of one nodeset computed directly from the clustering.
pub fn nodeset_stats(clustering: &Clustering, nodeset: &Nodeset) -> Result<NodesetStats, RepresentativeError> {
    check_nodeset(clustering.schema(), nodeset)?;
    let counts = (0..clustering.k())
        .map(|i| nodeset_frequency(clustering, i, nodeset))
        .collect::<Result<Vec<_>, _>>()?;
    NodesetStats::from_counts(counts, &clustering.sizes())
}

/// `w(c_i, nodeset) = (count_i / m_i) * f`.
pub fn importance_w(clustering: &Clustering, i: usize, nodeset: &Nodeset) -> Result<f64, RepresentativeError> {
    check_cluster(clustering, i)?;
    Ok(nodeset_stats(clustering, nodeset)?.w(i))
}

/// Single-node importance table shared by all clusters.
///
/// Holds every node that occurs in at least one cluster; a cluster's own
/// table is the subset with a positive count there.
#[derive(Debug, Clone, PartialEq)]
pub struct NirTable {
    sizes: Vec<u64>,
    entries: BTreeMap<Node, NodesetStats>,
}

impl NirTable {
    pub(crate) fn from_entries(sizes: Vec<u64>, entries: BTreeMap<Node, NodesetStats>) -> Self {
        Self { sizes, entries }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn get(&self, node: &Node) -> Option<&NodesetStats> {
        self.entries.get(node)
    }

    /// `w(c_i, node)`, zero for nodes never seen.
    pub fn weight(&self, cluster: usize, node: &Node) -> f64 {
        self.entries.get(node).map_or(0.0, |s| s.w(cluster))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Node, &NodesetStats)> {
        self.entries.iter()
    }

    /// Nodes with a positive count in `cluster`.
    pub fn cluster_entries(&self, cluster: usize) -> impl Iterator<Item = (&Node, &NodesetStats)> {
        self.entries.iter().filter(move |(_, s)| s.count(cluster) > 0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_nir(clustering: &Clustering) -> NirTable {
    let k = clustering.k();
    let sizes = clustering.sizes();
    let mut counts: BTreeMap<Node, Vec<u64>> = BTreeMap::new();
    for (i, cluster) in clustering.clusters().iter().enumerate() {
        for point in cluster {
            for node in point.nodes() {
                counts.entry(node).or_insert_with(|| vec![0; k])[i] += 1;
            }
        }
    }
    let entries = counts
        .into_iter()
        .map(|(node, c)| {
            let stats = NodesetStats::from_counts(c, &sizes).expect("observed node has positive count");
            (node, stats)
        })
        .collect();
    NirTable::from_entries(sizes, entries)
}

/// How the NNIR lattice is thinned after construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PruningPolicy {
    #[default]
    None,
    /// Drop multi-node nodesets whose largest importance over all clusters
    /// is below `theta`.
    Threshold { theta: f64 },
}

impl PruningPolicy {
    pub fn threshold(theta: f64) -> Result<Self, RepresentativeError> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(RepresentativeError::InvalidThreshold(theta));
        }
        Ok(Self::Threshold { theta })
    }

    pub fn theta(&self) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Threshold { theta } => *theta,
        }
    }
}

/// The per-cluster NIR table and pruned NNIR lattice of a clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeModel {
    schema: AttributeSchema,
    nir: NirTable,
    nnir: NnirLattice,
}

impl RepresentativeModel {
    pub fn build(clustering: &Clustering, policy: PruningPolicy) -> Result<Self, RepresentativeError> {
        let nir = build_nir(clustering);
        let nnir = crate::lattice::build_nnir(clustering, policy)?;
        Ok(Self {
            schema: clustering.schema().clone(),
            nir,
            nnir,
        })
    }

    pub(crate) fn from_parts(schema: AttributeSchema, nir: NirTable, nnir: NnirLattice) -> Self {
        Self { schema, nir, nnir }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn k(&self) -> usize {
        self.nnir.k()
    }

    pub fn sizes(&self) -> &[u64] {
        self.nnir.sizes()
    }

    pub fn nir(&self) -> &NirTable {
        &self.nir
    }

    pub fn nnir(&self) -> &NnirLattice {
        &self.nnir
    }

    pub fn policy(&self) -> PruningPolicy {
        self.nnir.policy()
    }

    /// Largest cluster, lowest index on ties.
    pub fn largest_cluster(&self) -> usize {
        let sizes = self.sizes();
        let max = sizes.iter().copied().max().unwrap_or(0);
        sizes.iter().position(|&m| m == max).unwrap_or(0)
    }
}
