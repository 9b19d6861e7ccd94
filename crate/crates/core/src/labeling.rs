//! Resemblance between an unlabeled point and each cluster, and
//! maximal-resemblance labeling.
//!
//! Three scoring rules are available:
//!
//! * [`Method::NirSum`]: the sum of single-node importances `w(c_i, node)`
//!   over the point's nodes.
//! * [`Method::NnirProduct`]: over every nodeset combination of the point
//!   found in the cluster's lattice, the product of block frequencies
//!   `count_i / m_i` times the expected block weighting `f`; the best
//!   combination wins.
//! * [`Method::MaxSum`]: over the same combinations, the expected block
//!   importance `w`; the best combination wins.
//!
//! Expectations over the blocks of a combination weight each block by
//! `n_u / q`, its share of the point's attributes.
//!
//! A combination is a set partition of the point's attributes where every
//! block, projected onto the point, is a retained lattice entry with a
//! positive count in the cluster. The requirement that blocks "do not form
//! larger nodesets" is not applied: the all-singletons combination stays
//! valid even when a two-node block covering the same attributes exists.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::LabelingError;
use crate::lattice::MAX_ATTRIBUTES;
use crate::model::{DataPoint, Nodeset, NodesetCombination};
use crate::representative::RepresentativeModel;

/// Scores closer than this to the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NirSum,
    NnirProduct,
    MaxSum,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::NirSum, Method::NnirProduct, Method::MaxSum];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::NirSum => "nir-sum",
            Method::NnirProduct => "nnir-product",
            Method::MaxSum => "max-sum",
        }
    }

    fn uses_combinations(&self) -> bool {
        !matches!(self, Method::NirSum)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected nir-sum, nnir-product or max-sum)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResemblanceScore {
    pub cluster: usize,
    pub method: Method,
    pub value: f64,
    /// Best combination, for combination-based methods that found one.
    pub combination: Option<NodesetCombination>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelStatus {
    Assigned,
    Unassigned,
    /// Every score was zero and the fallback cluster was used.
    Fallback,
}

impl LabelStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LabelStatus::Assigned => "assigned",
            LabelStatus::Unassigned => "unassigned",
            LabelStatus::Fallback => "fallback",
        }
    }
}

/// What to do with points whose scores are all zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FallbackPolicy {
    #[default]
    None,
    LargestCluster,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelAssignment {
    pub point_id: Option<usize>,
    pub method: Method,
    pub cluster: Option<usize>,
    pub scores: Vec<ResemblanceScore>,
    /// Two or more clusters share the maximal score (within [`TIE_TOLERANCE`]).
    pub tie: bool,
    pub status: LabelStatus,
}

impl LabelAssignment {
    pub fn score(&self) -> f64 {
        self.cluster.map_or(0.0, |c| self.scores[c].value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.value).collect()
    }

    /// Applies `policy` to an unassigned label.
    pub fn with_fallback(mut self, policy: FallbackPolicy, model: &RepresentativeModel) -> Self {
        if self.status == LabelStatus::Unassigned && policy == FallbackPolicy::LargestCluster {
            self.cluster = Some(model.largest_cluster());
            self.status = LabelStatus::Fallback;
        }
        self
    }
}

/// Cached lattice positions of every nodeset contained in one point.
struct PointView<'m> {
    model: &'m RepresentativeModel,
    point: &'m DataPoint,
    slots: Vec<Option<usize>>,
    q: usize,
}

struct Leaf<'b> {
    blocks: &'b [u32],
    product: f64,
    expected_f: f64,
    expected_w: f64,
}

impl<'m> PointView<'m> {
    fn new(model: &'m RepresentativeModel, point: &'m DataPoint, cap: usize) -> Result<Self, LabelingError> {
        model.schema().check(point)?;
        let q = point.len();
        if q > cap.min(MAX_ATTRIBUTES) {
            return Err(LabelingError::TooManyAttributes {
                q,
                cap: cap.min(MAX_ATTRIBUTES),
            });
        }
        Ok(Self {
            model,
            point,
            slots: model.nnir().subsets_of(point),
            q,
        })
    }

    fn check_cluster(&self, cluster: usize) -> Result<(), LabelingError> {
        if cluster >= self.model.k() {
            return Err(LabelingError::ClusterIndexOutOfRange {
                index: cluster,
                k: self.model.k(),
            });
        }
        Ok(())
    }

    /// Calls `leaf` once per valid combination in cluster `cluster`.
    fn for_each_combination(&self, cluster: usize, mut leaf: impl FnMut(Leaf<'_>)) {
        let full = if self.q == 32 { u32::MAX } else { (1u32 << self.q) - 1 };
        let mut blocks = Vec::with_capacity(self.q);
        self.descend(cluster, full, 1.0, 0.0, 0.0, &mut blocks, &mut leaf);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        cluster: usize,
        remaining: u32,
        product: f64,
        expected_f: f64,
        expected_w: f64,
        blocks: &mut Vec<u32>,
        leaf: &mut impl FnMut(Leaf<'_>),
    ) {
        if remaining == 0 {
            leaf(Leaf {
                blocks,
                product,
                expected_f,
                expected_w,
            });
            return;
        }
        let lowest = remaining & remaining.wrapping_neg();
        let rest = remaining ^ lowest;
        let m = self.model.sizes()[cluster] as f64;
        // every subset of `rest`, each joined with the lowest attribute
        let mut sub = rest;
        loop {
            let block = sub | lowest;
            if let Some(entry) = self.slots[block as usize] {
                let stats = &self.model.nnir().entries()[entry].1;
                let count = stats.count(cluster);
                if count > 0 {
                    let share = block.count_ones() as f64 / self.q as f64;
                    blocks.push(block);
                    self.descend(
                        cluster,
                        remaining ^ block,
                        product * (count as f64 / m),
                        expected_f + share * stats.f(),
                        expected_w + share * stats.w(cluster),
                        blocks,
                        leaf,
                    );
                    blocks.pop();
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    fn combination(&self, blocks: &[u32]) -> NodesetCombination {
        let nodesets = blocks
            .iter()
            .map(|&mask| {
                let attrs = mask_attrs(mask);
                crate::model::project_point(self.point, &attrs).expect("attributes within q")
            })
            .collect();
        NodesetCombination::new(nodesets, self.q).expect("blocks partition the point")
    }

    fn best(&self, cluster: usize, method: Method) -> ResemblanceScore {
        let mut best_value = 0.0f64;
        let mut best_blocks: Option<Vec<u32>> = None;
        self.for_each_combination(cluster, |leaf| {
            let value = match method {
                Method::NnirProduct => leaf.product * leaf.expected_f,
                Method::MaxSum => leaf.expected_w,
                Method::NirSum => unreachable!("not combination based"),
            };
            let better = match &best_blocks {
                None => true,
                Some(current) => {
                    value > best_value || (value == best_value && order_blocks(leaf.blocks, current) == Ordering::Less)
                }
            };
            if better {
                best_value = value;
                best_blocks = Some(leaf.blocks.to_vec());
            }
        });
        ResemblanceScore {
            cluster,
            method,
            value: best_value,
            combination: best_blocks.map(|b| self.combination(&b)),
        }
    }

    fn nir(&self, cluster: usize) -> ResemblanceScore {
        let nir = self.model.nir();
        let value = self.point.nodes().map(|node| nir.weight(cluster, &node)).sum();
        ResemblanceScore {
            cluster,
            method: Method::NirSum,
            value,
            combination: None,
        }
    }

    fn score(&self, cluster: usize, method: Method) -> ResemblanceScore {
        if method.uses_combinations() {
            self.best(cluster, method)
        } else {
            self.nir(cluster)
        }
    }

    fn label(&self, method: Method) -> LabelAssignment {
        let scores: Vec<ResemblanceScore> = (0..self.model.k()).map(|i| self.score(i, method)).collect();
        decide(self.point.id(), method, scores)
    }
}

fn mask_attrs(mask: u32) -> Vec<usize> {
    (0..32).filter(|a| mask & (1 << a) != 0).collect()
}

/// Larger blocks first, then lexicographic over the blocks' attribute lists.
fn order_blocks(a: &[u32], b: &[u32]) -> Ordering {
    let widest = |blocks: &[u32]| blocks.iter().map(|m| m.count_ones()).max().unwrap_or(0);
    widest(b).cmp(&widest(a)).then_with(|| {
        let attrs = |blocks: &[u32]| blocks.iter().map(|&m| mask_attrs(m)).collect::<Vec<_>>();
        attrs(a).cmp(&attrs(b))
    })
}

fn decide(point_id: Option<usize>, method: Method, scores: Vec<ResemblanceScore>) -> LabelAssignment {
    let max = scores.iter().map(|s| s.value).fold(0.0, f64::max);
    if max <= 0.0 {
        return LabelAssignment {
            point_id,
            method,
            cluster: None,
            scores,
            tie: false,
            status: LabelStatus::Unassigned,
        };
    }
    let mut at_max = scores
        .iter()
        .filter(|s| max - s.value <= TIE_TOLERANCE)
        .map(|s| s.cluster);
    let chosen = at_max.next();
    let tie = at_max.next().is_some();
    LabelAssignment {
        point_id,
        method,
        cluster: chosen,
        scores,
        tie,
        status: LabelStatus::Assigned,
    }
}

/// All nodeset combinations of `point` present in cluster `cluster`,
/// widest block first, then lexicographic.
pub fn enumerate_combinations(
    point: &DataPoint,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<Vec<NodesetCombination>, LabelingError> {
    let view = PointView::new(model, point, MAX_ATTRIBUTES)?;
    view.check_cluster(cluster)?;
    let mut found: Vec<Vec<u32>> = Vec::new();
    view.for_each_combination(cluster, |leaf| found.push(leaf.blocks.to_vec()));
    found.sort_by(|a, b| order_blocks(a, b));
    Ok(found.iter().map(|b| view.combination(b)).collect())
}

/// `sum_u (n_u / q) * f(block_u)` over the blocks of `combination`.
pub fn expected_combination_weight(
    combination: &NodesetCombination,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<f64, LabelingError> {
    block_stats(combination, cluster, model).map(|blocks| blocks.iter().map(|(share, stats)| share * stats.f()).sum())
}

/// `sum_u (n_u / q) * w(c_i, block_u)` over the blocks of `combination`.
pub fn expected_combination_importance(
    combination: &NodesetCombination,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<f64, LabelingError> {
    block_stats(combination, cluster, model)
        .map(|blocks| blocks.iter().map(|(share, stats)| share * stats.w(cluster)).sum())
}

/// `prod_u count_i(block_u) / m_i` over the blocks of `combination`.
pub fn combination_frequency(
    combination: &NodesetCombination,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<f64, LabelingError> {
    let m = model.sizes()[cluster] as f64;
    block_stats(combination, cluster, model).map(|blocks| {
        blocks
            .iter()
            .map(|(_, stats)| stats.count(cluster) as f64 / m)
            .product()
    })
}

fn block_stats<'m>(
    combination: &NodesetCombination,
    cluster: usize,
    model: &'m RepresentativeModel,
) -> Result<Vec<(f64, &'m crate::representative::NodesetStats)>, LabelingError> {
    if cluster >= model.k() {
        return Err(LabelingError::ClusterIndexOutOfRange {
            index: cluster,
            k: model.k(),
        });
    }
    let q = combination.attribute_count() as f64;
    combination
        .blocks()
        .iter()
        .map(|block: &Nodeset| match model.nnir().get(block) {
            Some(stats) if stats.count(cluster) > 0 => Ok((block.len() as f64 / q, stats)),
            _ => Err(LabelingError::MissingBlock(block.to_string())),
        })
        .collect()
}

/// Best-combination score of the product rule.
pub fn resemblance_nnir(
    point: &DataPoint,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<ResemblanceScore, LabelingError> {
    resemblance(point, cluster, model, Method::NnirProduct)
}

/// Sum of single-node importances.
pub fn resemblance_nir(
    point: &DataPoint,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<ResemblanceScore, LabelingError> {
    resemblance(point, cluster, model, Method::NirSum)
}

/// Best-combination expected importance.
pub fn resemblance_maxsum(
    point: &DataPoint,
    cluster: usize,
    model: &RepresentativeModel,
) -> Result<ResemblanceScore, LabelingError> {
    resemblance(point, cluster, model, Method::MaxSum)
}

pub fn resemblance(
    point: &DataPoint,
    cluster: usize,
    model: &RepresentativeModel,
    method: Method,
) -> Result<ResemblanceScore, LabelingError> {
    let view = PointView::new(model, point, MAX_ATTRIBUTES)?;
    view.check_cluster(cluster)?;
    Ok(view.score(cluster, method))
}

/// Labeling knobs beyond the method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelOptions {
    /// Points with more attributes than this are rejected instead of
    /// enumerated. Never above [`MAX_ATTRIBUTES`].
    pub partition_cap: usize,
    pub fallback: FallbackPolicy,
}

impl Default for LabelOptions {
    fn default() -> Self {
        Self {
            partition_cap: MAX_ATTRIBUTES,
            fallback: FallbackPolicy::None,
        }
    }
}

/// The cluster of maximal resemblance under `method`.
pub fn label_point(
    point: &DataPoint,
    model: &RepresentativeModel,
    method: Method,
) -> Result<LabelAssignment, LabelingError> {
    label_point_with(point, model, method, LabelOptions::default())
}

pub fn label_point_with(
    point: &DataPoint,
    model: &RepresentativeModel,
    method: Method,
    options: LabelOptions,
) -> Result<LabelAssignment, LabelingError> {
    let view = PointView::new(model, point, options.partition_cap)?;
    Ok(view.label(method).with_fallback(options.fallback, model))
}

/// Labels every point; output order follows input order.
pub fn label_dataset(
    points: &[DataPoint],
    model: &RepresentativeModel,
    method: Method,
) -> Result<Vec<LabelAssignment>, LabelingError> {
    label_dataset_with(points, model, method, LabelOptions::default())
}

pub fn label_dataset_with(
    points: &[DataPoint],
    model: &RepresentativeModel,
    method: Method,
    options: LabelOptions,
) -> Result<Vec<LabelAssignment>, LabelingError> {
    points
        .par_iter()
        .map(|p| label_point_with(p, model, method, options))
        .collect()
}

/// Labels of one point under several methods, sharing the subset lookup.
pub fn label_point_methods(
    point: &DataPoint,
    model: &RepresentativeModel,
    methods: &[Method],
) -> Result<Vec<LabelAssignment>, LabelingError> {
    let view = PointView::new(model, point, MAX_ATTRIBUTES)?;
    Ok(methods.iter().map(|&m| view.label(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::model::project_point;
    use crate::representative::PruningPolicy;

    fn model() -> RepresentativeModel {
        RepresentativeModel::build(&fixture::example_clustering(), PruningPolicy::None).unwrap()
    }

    fn combo(blocks: &[&[usize]]) -> NodesetCombination {
        let p = fixture::bfb();
        NodesetCombination::new(blocks.iter().map(|b| project_point(&p, b).unwrap()).collect(), 3).unwrap()
    }

    #[test]
    fn combinations_per_cluster() {
        let m = model();
        let p = fixture::bfb();
        assert_eq!(
            enumerate_combinations(&p, 0, &m).unwrap(),
            vec![combo(&[&[0, 2], &[1]]), combo(&[&[0], &[1], &[2]])]
        );
        assert_eq!(
            enumerate_combinations(&p, 1, &m).unwrap(),
            vec![combo(&[&[0], &[1, 2]]), combo(&[&[0], &[1], &[2]])]
        );
    }

    #[test]
    fn combinations_of_first_unlabeled_point() {
        let m = model();
        let p = fixture::example_unlabeled().remove(0);
        // (a,m,c) occurs verbatim in cluster 0, so all five partitions are present
        assert_eq!(enumerate_combinations(&p, 0, &m).unwrap().len(), 5);
        for i in 0..3 {
            let combos = enumerate_combinations(&p, i, &m).unwrap();
            assert!(combos.len() <= 5);
            for c in &combos {
                assert_eq!(c.attribute_count(), 3);
            }
        }
    }

    #[test]
    fn expected_weights() {
        let m = model();
        let e1 = expected_combination_weight(&combo(&[&[0, 2], &[1]]), 0, &m).unwrap();
        let f_a2 = m.nir().get(&crate::Node::new(1, "f")).unwrap().f();
        assert!((e1 - (2.0 + f_a2) / 3.0).abs() < 1e-12);
        let e2 = expected_combination_weight(&combo(&[&[0], &[1, 2]]), 1, &m).unwrap();
        assert!((e2 - 0.2460).abs() < 1e-3);
        let whole = fixture::example_unlabeled().remove(0);
        let single = NodesetCombination::new(vec![project_point(&whole, &[0, 1, 2]).unwrap()], 3).unwrap();
        let f = m.nnir().get(&single.blocks()[0]).unwrap().f();
        assert_eq!(expected_combination_weight(&single, 0, &m).unwrap(), f);
        assert!(matches!(
            expected_combination_weight(&combo(&[&[0, 2], &[1]]), 1, &m),
            Err(LabelingError::MissingBlock(_))
        ));
    }

    #[test]
    fn example_scores() {
        let m = model();
        let p = fixture::bfb();
        let r0 = resemblance_nnir(&p, 0, &m).unwrap();
        assert!((r0.value - 0.0277).abs() < 1e-3);
        assert_eq!(r0.combination, Some(combo(&[&[0, 2], &[1]])));
        assert!((resemblance_nnir(&p, 1, &m).unwrap().value - 0.00984).abs() < 1e-4);
        assert!((resemblance_nir(&p, 0, &m).unwrap().value - 0.0257).abs() < 1e-3);
        assert!((resemblance_maxsum(&p, 0, &m).unwrap().value - 0.138625).abs() < 1e-6);
        assert!((resemblance_maxsum(&p, 1, &m).unwrap().value - 0.049209).abs() < 1e-6);
    }

    #[test]
    fn unseen_point_scores_zero() {
        let m = model();
        let p = DataPoint::new(["x", "y", "z"]).unwrap();
        for method in Method::ALL {
            for i in 0..3 {
                let s = resemblance(&p, i, &m, method).unwrap();
                assert_eq!(s.value, 0.0);
                assert!(s.combination.is_none());
            }
            let label = label_point(&p, &m, method).unwrap();
            assert_eq!(label.status, LabelStatus::Unassigned);
            assert_eq!(label.cluster, None);
            let fb = label.with_fallback(FallbackPolicy::LargestCluster, &m);
            assert_eq!((fb.cluster, fb.status), (Some(0), LabelStatus::Fallback));
        }
        assert!(enumerate_combinations(&p, 0, &m).unwrap().is_empty());
    }

    #[test]
    fn labels_disagree_on_bfb() {
        let m = model();
        let p = fixture::bfb();
        assert_eq!(label_point(&p, &m, Method::NnirProduct).unwrap().cluster, Some(0));
        assert_eq!(label_point(&p, &m, Method::NirSum).unwrap().cluster, Some(1));
        assert_eq!(label_point(&p, &m, Method::MaxSum).unwrap().cluster, Some(0));
    }

    #[test]
    fn exact_ties_pick_lowest_index() {
        let m = model();
        let scores = vec![
            ResemblanceScore {
                cluster: 0,
                method: Method::MaxSum,
                value: 0.1,
                combination: None,
            },
            ResemblanceScore {
                cluster: 1,
                method: Method::MaxSum,
                value: 0.3,
                combination: None,
            },
            ResemblanceScore {
                cluster: 2,
                method: Method::MaxSum,
                value: 0.3,
                combination: None,
            },
        ];
        let label = decide(Some(4), Method::MaxSum, scores);
        assert_eq!(label.cluster, Some(1));
        assert!(label.tie);
        assert!(!label_point(&fixture::bfb(), &m, Method::MaxSum).unwrap().tie);
    }

    #[test]
    fn dataset_matches_pointwise() {
        let m = model();
        let u = fixture::example_unlabeled();
        let all = label_dataset(&u, &m, Method::NnirProduct).unwrap();
        assert_eq!(all.len(), 4);
        for (p, a) in u.iter().zip(&all) {
            assert_eq!(&label_point(p, &m, Method::NnirProduct).unwrap(), a);
        }
        assert_eq!(all[2].cluster, Some(0));
        assert!(label_dataset(&[], &m, Method::MaxSum).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let m = model();
        let short = DataPoint::new(["a", "b"]).unwrap();
        assert!(matches!(
            label_point(&short, &m, Method::MaxSum),
            Err(LabelingError::Model(_))
        ));
        assert!(matches!(
            resemblance_nnir(&fixture::bfb(), 3, &m),
            Err(LabelingError::ClusterIndexOutOfRange { index: 3, k: 3 })
        ));
        let capped = LabelOptions {
            partition_cap: 2,
            ..Default::default()
        };
        assert_eq!(
            label_point_with(&fixture::bfb(), &m, Method::MaxSum, capped).unwrap_err(),
            LabelingError::TooManyAttributes { q: 3, cap: 2 }
        );
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("nir".parse::<Method>().is_err());
    }
}
