//! The NNIR lattice: every nodeset that occurs in at least one cluster,
//! with its per-cluster stats, optionally thinned by threshold pruning.
//!
//! Entries are kept in canonical order (by size, then by nodes). A prefix
//! tree over interned values sits beside them so that all nodesets contained
//! in a point can be found without building any keys.

use std::collections::HashMap;

use crate::error::RepresentativeError;
use crate::model::{Clustering, DataPoint, Node, Nodeset};
use crate::representative::{NodesetStats, PruningPolicy};

/// Largest `q` for which lattices are built and partitions enumerated.
pub const MAX_ATTRIBUTES: usize = 16;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct NnirLattice {
    q: usize,
    sizes: Vec<u64>,
    policy: PruningPolicy,
    entries: Vec<(Nodeset, NodesetStats)>,
    index: PrefixIndex,
}

impl NnirLattice {
    /// Entries must already be in canonical order.
    pub(crate) fn from_entries(
        q: usize,
        sizes: Vec<u64>,
        policy: PruningPolicy,
        entries: Vec<(Nodeset, NodesetStats)>,
    ) -> Self {
        debug_assert!(entries.windows(2).all(|w| canonical_lt(&w[0].0, &w[1].0)));
        let index = PrefixIndex::build(q, &entries);
        Self {
            q,
            sizes,
            policy,
            entries,
            index,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Cluster sizes `m_i`.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn policy(&self) -> PruningPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Nodeset, NodesetStats)] {
        &self.entries
    }

    pub fn get(&self, nodeset: &Nodeset) -> Option<&NodesetStats> {
        self.index.find(nodeset).map(|e| &self.entries[e].1)
    }

    /// True if `nodeset` is retained and occurs in `cluster`.
    pub fn contains(&self, cluster: usize, nodeset: &Nodeset) -> bool {
        self.get(nodeset).is_some_and(|s| s.count(cluster) > 0)
    }

    /// The lattice of one cluster: retained nodesets with a positive count there.
    pub fn cluster_entries(&self, cluster: usize) -> impl Iterator<Item = &(Nodeset, NodesetStats)> {
        self.entries.iter().filter(move |(_, s)| s.count(cluster) > 0)
    }

    /// Entry positions of every retained nodeset contained in `point`,
    /// indexed by attribute bitmask (bit `a` set for attribute `a`).
    /// Absent masks hold `None`.
    pub fn subsets_of(&self, point: &DataPoint) -> Vec<Option<usize>> {
        let mut slots = vec![None; 1 << self.q];
        self.index.visit_subsets(point, |mask, entry| {
            slots[mask as usize] = Some(entry);
        });
        slots
    }
}

fn canonical_lt(a: &Nodeset, b: &Nodeset) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Prefix tree over (attribute, interned value) edges, attributes ascending.
#[derive(Debug, Clone, PartialEq, Default)]
struct PrefixIndex {
    dictionary: Vec<HashMap<String, u32>>,
    edges: HashMap<(u32, u32, u32), u32>,
    entry_at: Vec<u32>,
}

impl PrefixIndex {
    fn build(q: usize, entries: &[(Nodeset, NodesetStats)]) -> Self {
        let mut index = Self {
            dictionary: vec![HashMap::new(); q],
            edges: HashMap::new(),
            entry_at: vec![NONE],
        };
        for (pos, (nodeset, _)) in entries.iter().enumerate() {
            let mut at = 0u32;
            for node in nodeset.nodes() {
                let dict = &mut index.dictionary[node.attr];
                let next_id = dict.len() as u32;
                let value = *dict.entry(node.value.clone()).or_insert(next_id);
                let fresh = index.entry_at.len() as u32;
                at = *index.edges.entry((at, node.attr as u32, value)).or_insert(fresh);
                if at == fresh {
                    index.entry_at.push(NONE);
                }
            }
            index.entry_at[at as usize] = pos as u32;
        }
        index
    }

    fn find(&self, nodeset: &Nodeset) -> Option<usize> {
        let mut at = 0u32;
        for node in nodeset.nodes() {
            let value = *self.dictionary.get(node.attr)?.get(&node.value)?;
            at = *self.edges.get(&(at, node.attr as u32, value))?;
        }
        match self.entry_at[at as usize] {
            NONE => None,
            e => Some(e as usize),
        }
    }

    fn visit_subsets(&self, point: &DataPoint, mut visit: impl FnMut(u32, usize)) {
        let ids: Vec<Option<u32>> = self
            .dictionary
            .iter()
            .enumerate()
            .map(|(attr, d)| point.value(attr).and_then(|v| d.get(v).copied()))
            .collect();
        let mut stack = vec![(0u32, 0u32, 0usize)];
        while let Some((at, mask, start)) = stack.pop() {
            for (attr, id) in ids.iter().enumerate().skip(start) {
                let Some(id) = *id else { continue };
                if let Some(&child) = self.edges.get(&(at, attr as u32, id)) {
                    let mask = mask | (1 << attr);
                    if self.entry_at[child as usize] != NONE {
                        visit(mask, self.entry_at[child as usize] as usize);
                    }
                    stack.push((child, mask, attr + 1));
                }
            }
        }
    }
}

/// Builds the lattice of all nodesets occurring in the clustering, then
/// applies `policy`.
///
/// Counting is level-wise: the size-`n` nodesets of a point are generated
/// by extending its size-`(n-1)` nodesets with a higher attribute, so a
/// nodeset is only counted once all of its subsets have been.
pub fn build_nnir(clustering: &Clustering, policy: PruningPolicy) -> Result<NnirLattice, RepresentativeError> {
    let q = clustering.schema().len();
    if q > MAX_ATTRIBUTES {
        return Err(RepresentativeError::TooManyAttributes { q, max: MAX_ATTRIBUTES });
    }
    if let PruningPolicy::Threshold { theta } = policy {
        if !(0.0..=1.0).contains(&theta) {
            return Err(RepresentativeError::InvalidThreshold(theta));
        }
    }
    let k = clustering.k();
    let sizes = clustering.sizes();

    // intern values so keys are fixed-width id vectors
    let mut dictionary: Vec<HashMap<&str, u32>> = vec![HashMap::new(); q];
    let mut values: Vec<Vec<&str>> = vec![Vec::new(); q];
    let encoded: Vec<Vec<Vec<u32>>> = clustering
        .clusters()
        .iter()
        .map(|cluster| {
            cluster
                .iter()
                .map(|p| {
                    p.values()
                        .iter()
                        .enumerate()
                        .map(|(attr, v)| {
                            *dictionary[attr].entry(v.as_str()).or_insert_with(|| {
                                values[attr].push(v.as_str());
                                values[attr].len() as u32 - 1
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut counts: HashMap<Box<[u32]>, Vec<u64>> = HashMap::new();
    let mut key = vec![NONE; q];
    for (i, cluster) in encoded.iter().enumerate() {
        for ids in cluster {
            let mut level: Vec<u32> = (0..q).map(|a| 1u32 << a).collect();
            while !level.is_empty() {
                let mut next = Vec::new();
                for &mask in &level {
                    for attr in 0..q {
                        key[attr] = if mask & (1 << attr) != 0 { ids[attr] } else { NONE };
                    }
                    debug_assert!(subsets_counted(&counts, &key, i));
                    match counts.get_mut(key.as_slice()) {
                        Some(c) => c[i] += 1,
                        None => {
                            let mut c = vec![0; k];
                            c[i] = 1;
                            counts.insert(key.clone().into_boxed_slice(), c);
                        }
                    }
                    let top = 31 - mask.leading_zeros() as usize;
                    next.extend((top + 1..q).map(|a| mask | (1 << a)));
                }
                level = next;
            }
        }
    }

    let mut entries: Vec<(Nodeset, NodesetStats)> = counts
        .into_iter()
        .map(|(key, c)| {
            let nodes = key
                .iter()
                .enumerate()
                .filter(|(_, &id)| id != NONE)
                .map(|(attr, &id)| Node::new(attr, values[attr][id as usize]));
            let nodeset = Nodeset::new(nodes).expect("distinct attributes by construction");
            let stats = NodesetStats::from_counts(c, &sizes).expect("observed nodeset");
            (nodeset, stats)
        })
        .collect();
    entries.sort_unstable_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));

    let lattice = NnirLattice::from_entries(q, sizes, PruningPolicy::None, entries);
    match policy {
        PruningPolicy::None => Ok(lattice),
        PruningPolicy::Threshold { theta } => prune_threshold(&lattice, theta),
    }
}

// Every immediate subset of `key` was already counted in cluster `i`.
fn subsets_counted(counts: &HashMap<Box<[u32]>, Vec<u64>>, key: &[u32], i: usize) -> bool {
    let present: Vec<usize> = (0..key.len()).filter(|&a| key[a] != NONE).collect();
    if present.len() < 2 {
        return true;
    }
    present.iter().all(|&drop| {
        let mut sub = key.to_vec();
        sub[drop] = NONE;
        counts.get(sub.as_slice()).is_some_and(|c| c[i] > 0)
    })
}

/// Removes every multi-node nodeset whose largest importance over all
/// clusters is below `theta`. Single nodes are always kept.
pub fn prune_threshold(lattice: &NnirLattice, theta: f64) -> Result<NnirLattice, RepresentativeError> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(RepresentativeError::InvalidThreshold(theta));
    }
    let entries = lattice
        .entries
        .iter()
        .filter(|(ns, s)| ns.len() == 1 || s.max_importance() >= theta)
        .cloned()
        .collect();
    let theta = theta.max(lattice.policy.theta());
    Ok(NnirLattice::from_entries(
        lattice.q,
        lattice.sizes.clone(),
        PruningPolicy::Threshold { theta },
        entries,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::model::project_point;

    fn ns(pairs: &[(usize, &str)]) -> Nodeset {
        Nodeset::new(pairs.iter().map(|&(a, v)| Node::new(a, v))).unwrap()
    }

    #[test]
    fn example_lattice_entries() {
        let lattice = build_nnir(&fixture::example_clustering(), PruningPolicy::None).unwrap();
        let bb = lattice.get(&ns(&[(0, "b"), (2, "b")])).unwrap();
        assert_eq!(bb.counts(), &[1, 0, 0]);
        assert_eq!(bb.f(), 1.0);
        let fb = lattice.get(&ns(&[(1, "f"), (2, "b")])).unwrap();
        assert_eq!(fb.counts(), &[0, 1, 1]);
        assert!((fb.f() - 0.3690).abs() < 1e-3);
        assert!(lattice.contains(1, &ns(&[(1, "f"), (2, "b")])));
        assert!(!lattice.contains(0, &ns(&[(1, "f"), (2, "b")])));
        assert!(lattice.get(&ns(&[(0, "b"), (1, "f"), (2, "b")])).is_none());
        // 15 points, each contributing up to 7 nodesets
        assert!(lattice.len() <= 15 * 7);
        assert_eq!(lattice.entries()[0].0.len(), 1);
    }

    #[test]
    fn subset_slots_match_lookup() {
        let lattice = build_nnir(&fixture::example_clustering(), PruningPolicy::None).unwrap();
        for point in fixture::example_unlabeled() {
            let slots = lattice.subsets_of(&point);
            for mask in 1u32..8 {
                let attrs: Vec<usize> = (0..3).filter(|a| mask & (1 << a) != 0).collect();
                let nodeset = project_point(&point, &attrs).unwrap();
                let expected = lattice.index.find(&nodeset);
                assert_eq!(slots[mask as usize], expected, "{point} {nodeset}");
            }
        }
    }

    #[test]
    fn zero_threshold_is_identity() {
        let lattice = build_nnir(&fixture::example_clustering(), PruningPolicy::None).unwrap();
        let pruned = prune_threshold(&lattice, 0.0).unwrap();
        assert_eq!(pruned.entries(), lattice.entries());
    }

    #[test]
    fn threshold_keeps_boundary_and_singletons() {
        let lattice = build_nnir(&fixture::example_clustering(), PruningPolicy::None).unwrap();
        let pruned = prune_threshold(&lattice, 0.2).unwrap();
        assert!(pruned.contains(0, &ns(&[(0, "b"), (2, "b")])));
        let singles = lattice.entries().iter().filter(|(n, _)| n.len() == 1).count();
        assert_eq!(pruned.entries().iter().filter(|(n, _)| n.len() == 1).count(), singles);
        assert!(pruned
            .entries()
            .iter()
            .all(|(n, s)| n.len() == 1 || s.max_importance() >= 0.2));

        let max_multi = lattice
            .entries()
            .iter()
            .filter(|(n, _)| n.len() > 1)
            .map(|(_, s)| s.max_importance())
            .fold(0.0, f64::max);
        let above = prune_threshold(&lattice, max_multi + 1e-9).unwrap();
        assert_eq!(above.len(), singles);
        assert_eq!(
            above.policy(),
            PruningPolicy::Threshold {
                theta: max_multi + 1e-9
            }
        );
    }

    #[test]
    fn full_threshold_keeps_only_complete_exclusive_nodesets() {
        let lattice = build_nnir(&fixture::example_clustering(), PruningPolicy::threshold(1.0).unwrap()).unwrap();
        for (n, s) in lattice.entries() {
            if n.len() > 1 {
                let owners: Vec<usize> = (0..3).filter(|&i| s.count(i) > 0).collect();
                assert_eq!(owners.len(), 1);
                assert_eq!(s.count(owners[0]), lattice.sizes()[owners[0]]);
            }
        }
        assert!(prune_threshold(&lattice, 1.5).is_err());
    }

    #[test]
    fn too_many_attributes() {
        let names: Vec<String> = (0..17).map(|i| format!("A{i}")).collect();
        let schema = crate::model::AttributeSchema::new(names).unwrap();
        let point = DataPoint::new(vec!["x"; 17]).unwrap();
        let c = Clustering::new(schema, vec![vec![point]]).unwrap();
        assert_eq!(
            build_nnir(&c, PruningPolicy::None).unwrap_err(),
            RepresentativeError::TooManyAttributes { q: 17, max: 16 }
        );
    }
}
