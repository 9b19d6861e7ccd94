//! Domain types: schemas, points, clusterings, nodes and nodesets.
//!
//! A [`Node`] is an (attribute, value) pair. Attribute identity is the
//! positional index into the [`AttributeSchema`], so `height=60-69` and
//! `weight=60-69` are different nodes even though the values coincide.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Ordered attribute names. Names are unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttributeSchema {
    names: Vec<String>,
}

impl AttributeSchema {
    pub fn new<I, S>(names: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(|s| s.into().trim().to_string()).collect();
        if names.is_empty() {
            return Err(ModelError::EmptySchema);
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateAttributeName(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// Number of attributes, `q`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, attr: usize) -> Option<&str> {
        self.names.get(attr).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Checks that `point` has exactly one value per attribute.
    pub fn check(&self, point: &DataPoint) -> Result<(), ModelError> {
        if point.len() != self.len() {
            return Err(ModelError::ArityMismatch {
                expected: self.len(),
                found: point.len(),
            });
        }
        Ok(())
    }
}

/// One categorical value per attribute, plus an optional source row id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DataPoint {
    values: Vec<String>,
    id: Option<usize>,
}

impl DataPoint {
    /// Values are trimmed; empty values are rejected.
    pub fn new<I, S>(values: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let values: Vec<String> = values.into_iter().map(|v| v.as_ref().trim().to_string()).collect();
        if let Some(attr) = values.iter().position(String::is_empty) {
            return Err(ModelError::MissingValue { attr });
        }
        Ok(Self { values, id: None })
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = Some(id);
        self
    }

    pub fn id(&self) -> Option<usize> {
        self.id
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn value(&self, attr: usize) -> Option<&str> {
        self.values.get(attr).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Nodes of this point, one per attribute.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(attr, v)| Node::new(attr, v.clone()))
    }
}

impl fmt::Display for DataPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.values.join(","))
    }
}

/// `k` clusters over one schema, plus the unlabeled set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    schema: AttributeSchema,
    clusters: Vec<Vec<DataPoint>>,
    unlabeled: Vec<DataPoint>,
}

impl Clustering {
    pub fn new(schema: AttributeSchema, clusters: Vec<Vec<DataPoint>>) -> Result<Self, ModelError> {
        if clusters.is_empty() {
            return Err(ModelError::NoClusters);
        }
        let mut ids = HashSet::new();
        for (i, cluster) in clusters.iter().enumerate() {
            if cluster.is_empty() {
                return Err(ModelError::EmptyCluster(i));
            }
            for point in cluster {
                schema.check(point)?;
                if let Some(id) = point.id() {
                    if !ids.insert(id) {
                        return Err(ModelError::PointInTwoClusters(id));
                    }
                }
            }
        }
        Ok(Self {
            schema,
            clusters,
            unlabeled: Vec::new(),
        })
    }

    pub fn with_unlabeled(mut self, unlabeled: Vec<DataPoint>) -> Result<Self, ModelError> {
        for point in &unlabeled {
            self.schema.check(point)?;
        }
        self.unlabeled = unlabeled;
        Ok(self)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    /// Number of clusters, `k`.
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Vec<DataPoint>] {
        &self.clusters
    }

    pub fn cluster(&self, i: usize) -> Option<&[DataPoint]> {
        self.clusters.get(i).map(Vec::as_slice)
    }

    /// Cluster sizes `m_i`.
    pub fn sizes(&self) -> Vec<u64> {
        self.clusters.iter().map(|c| c.len() as u64).collect()
    }

    pub fn unlabeled(&self) -> &[DataPoint] {
        &self.unlabeled
    }

    /// Distinct values observed per attribute, sorted.
    pub fn value_domains(&self) -> Vec<Vec<String>> {
        let mut domains = vec![std::collections::BTreeSet::new(); self.schema.len()];
        for point in self.clusters.iter().flatten() {
            for (attr, v) in point.values().iter().enumerate() {
                domains[attr].insert(v.clone());
            }
        }
        domains.into_iter().map(|d| d.into_iter().collect()).collect()
    }
}

/// An (attribute index, value) pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub attr: usize,
    pub value: String,
}

impl Node {
    pub fn new(attr: usize, value: impl Into<String>) -> Self {
        Self {
            attr,
            value: value.into(),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[A{}={}]", self.attr + 1, self.value)
    }
}

/// Nodes over pairwise distinct attributes, kept sorted by attribute index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Nodeset {
    nodes: Vec<Node>,
}

impl Nodeset {
    /// Validates and canonicalizes a set of nodes.
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Result<Self, ModelError> {
        let mut nodes: Vec<Node> = nodes.into_iter().collect();
        if nodes.is_empty() {
            return Err(ModelError::EmptyNodeset);
        }
        nodes.sort();
        nodes.dedup();
        for pair in nodes.windows(2) {
            if pair[0].attr == pair[1].attr {
                return Err(ModelError::DuplicateAttribute(pair[0].attr));
            }
        }
        Ok(Self { nodes })
    }

    pub fn singleton(node: Node) -> Self {
        Self { nodes: vec![node] }
    }

    /// `n`, the number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn attrs(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|n| n.attr)
    }

    /// True if every node of `self` is a value of `point`.
    pub fn is_contained_in(&self, point: &DataPoint) -> bool {
        self.nodes.iter().all(|n| point.value(n.attr) == Some(n.value.as_str()))
    }

    /// `attrName=value` pairs in attribute order.
    pub fn labels(&self, schema: &AttributeSchema) -> Vec<String> {
        self.nodes
            .iter()
            .map(|n| format!("{}={}", schema.name(n.attr).unwrap_or("?"), n.value))
            .collect()
    }
}

impl fmt::Display for Nodeset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{node}")?;
        }
        f.write_str("}")
    }
}

/// Attribute-disjoint nodesets whose union is a whole point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodesetCombination {
    blocks: Vec<Nodeset>,
}

impl NodesetCombination {
    /// Blocks are reordered by their lowest attribute index.
    pub fn new(mut blocks: Vec<Nodeset>, q: usize) -> Result<Self, ModelError> {
        let mut seen = vec![false; q];
        for block in &blocks {
            for attr in block.attrs() {
                match seen.get_mut(attr) {
                    None => return Err(ModelError::IndexOutOfRange { attr, q }),
                    Some(true) => return Err(ModelError::DuplicateAttribute(attr)),
                    Some(slot) => *slot = true,
                }
            }
        }
        if let Some(attr) = seen.iter().position(|s| !s) {
            return Err(ModelError::UncoveredAttribute(attr));
        }
        blocks.sort_by_key(|b| b.nodes()[0].attr);
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Nodeset] {
        &self.blocks
    }

    /// Block sizes `n_u`.
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Nodeset::len).collect()
    }

    pub fn attribute_count(&self) -> usize {
        self.blocks.iter().map(Nodeset::len).sum()
    }

    /// Attribute-index lists per block, in block order.
    pub fn attr_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.attrs().collect()).collect()
    }
}

impl fmt::Display for NodesetCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{block}")?;
        }
        Ok(())
    }
}

/// Builds a canonical nodeset from arbitrary nodes.
pub fn validate_nodeset(nodes: impl IntoIterator<Item = Node>) -> Result<Nodeset, ModelError> {
    Nodeset::new(nodes)
}

/// The nodeset pairing each attribute in `attrs` with the point's value there.
pub fn project_point(point: &DataPoint, attrs: &[usize]) -> Result<Nodeset, ModelError> {
    let q = point.len();
    let mut nodes = Vec::with_capacity(attrs.len());
    for &attr in attrs {
        let value = point.value(attr).ok_or(ModelError::IndexOutOfRange { attr, q })?;
        nodes.push(Node::new(attr, value));
    }
    Nodeset::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(vals: &[&str]) -> DataPoint {
        DataPoint::new(vals.iter().copied()).unwrap()
    }

    #[test]
    fn one_and_two_nodesets() {
        let one = validate_nodeset([Node::new(0, "a")]).unwrap();
        assert_eq!(one.len(), 1);
        let two = validate_nodeset([Node::new(2, "c"), Node::new(1, "b")]).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two.nodes()[0], Node::new(1, "b"));
    }

    #[test]
    fn same_attribute_twice_is_rejected() {
        let err = validate_nodeset([Node::new(0, "a"), Node::new(0, "b")]).unwrap_err();
        assert_eq!(err, ModelError::DuplicateAttribute(0));
        assert_eq!(validate_nodeset([]).unwrap_err(), ModelError::EmptyNodeset);
    }

    #[test]
    fn equal_values_on_different_attributes_differ() {
        assert_ne!(Node::new(0, "60-69"), Node::new(1, "60-69"));
    }

    #[test]
    fn projection() {
        let p = point(&["b", "f", "b"]);
        let ns = project_point(&p, &[0, 2]).unwrap();
        assert_eq!(ns.nodes(), &[Node::new(0, "b"), Node::new(2, "b")]);
        assert_eq!(project_point(&p, &[0, 1, 2]).unwrap().len(), 3);
        let single = project_point(&point(&["a", "m", "c"]), &[1]).unwrap();
        assert_eq!(single.nodes(), &[Node::new(1, "m")]);
        assert_eq!(
            project_point(&p, &[3]).unwrap_err(),
            ModelError::IndexOutOfRange { attr: 3, q: 3 }
        );
    }

    #[test]
    fn schema_rejects_duplicates_and_empties() {
        assert!(matches!(
            AttributeSchema::new(["A", "B", "A"]),
            Err(ModelError::DuplicateAttributeName(_))
        ));
        assert_eq!(
            AttributeSchema::new(Vec::<String>::new()).unwrap_err(),
            ModelError::EmptySchema
        );
    }

    #[test]
    fn values_are_trimmed_and_missing_rejected() {
        assert_eq!(point(&[" a ", "b"]).values(), &["a", "b"]);
        assert_eq!(
            DataPoint::new(["a", "  "]).unwrap_err(),
            ModelError::MissingValue { attr: 1 }
        );
    }

    #[test]
    fn clustering_invariants() {
        let schema = AttributeSchema::new(["A1", "A2"]).unwrap();
        assert_eq!(
            Clustering::new(schema.clone(), vec![]).unwrap_err(),
            ModelError::NoClusters
        );
        assert_eq!(
            Clustering::new(schema.clone(), vec![vec![point(&["a", "b"])], vec![]]).unwrap_err(),
            ModelError::EmptyCluster(1)
        );
        assert!(matches!(
            Clustering::new(schema.clone(), vec![vec![point(&["a"])]]),
            Err(ModelError::ArityMismatch { .. })
        ));
        let dup = vec![vec![point(&["a", "b"]).with_id(7)], vec![point(&["a", "c"]).with_id(7)]];
        assert_eq!(
            Clustering::new(schema, dup).unwrap_err(),
            ModelError::PointInTwoClusters(7)
        );
    }

    #[test]
    fn combination_must_cover_point() {
        let a = project_point(&point(&["b", "f", "b"]), &[0, 2]).unwrap();
        let b = project_point(&point(&["b", "f", "b"]), &[1]).unwrap();
        let comb = NodesetCombination::new(vec![b.clone(), a.clone()], 3).unwrap();
        assert_eq!(comb.sizes(), vec![2, 1]);
        assert_eq!(comb.to_string(), "{[A1=b],[A3=b]}+{[A2=f]}");
        assert_eq!(
            NodesetCombination::new(vec![a.clone()], 3).unwrap_err(),
            ModelError::UncoveredAttribute(1)
        );
        assert_eq!(
            NodesetCombination::new(vec![a.clone(), a, b], 3).unwrap_err(),
            ModelError::DuplicateAttribute(0)
        );
    }
}
