//! Versioned JSON document for a [`RepresentativeModel`].
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "attributes": ["A1", "A2", "A3"],
//!   "k": 3,
//!   "cluster_sizes": [5, 5, 5],
//!   "pruning": { "kind": "none" },
//!   "nir":  [ { "nodeset": ["A2=f"], "counts": [1, 3, 2], "p": [...], "f": 0.0794, "w": [...] } ],
//!   "nnir": [ { "nodeset": ["A2=f", "A3=b"], ... } ]
//! }
//! ```
//!
//! Nodesets are `attrName=value` strings in attribute order. Entries are in
//! canonical order: by size, then by nodes. Reals are written in their
//! shortest exact round-trip form. Counts are authoritative: on load the
//! derived reals are recomputed and must agree with the stored ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::lattice::NnirLattice;
use crate::model::{AttributeSchema, Node, Nodeset};
use crate::representative::{NirTable, NodesetStats, PruningPolicy, RepresentativeModel};

pub const FORMAT_VERSION: u32 = 1;

/// Largest tolerated gap between stored and recomputed reals.
const RECOMPUTE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format_version: u32,
    pub attributes: Vec<String>,
    pub k: usize,
    pub cluster_sizes: Vec<u64>,
    pub pruning: PruningPolicy,
    pub nir: Vec<EntryDocument>,
    pub nnir: Vec<EntryDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDocument {
    pub nodeset: Vec<String>,
    pub counts: Vec<u64>,
    pub p: Vec<f64>,
    pub f: f64,
    pub w: Vec<f64>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

fn entry(schema: &AttributeSchema, nodeset: &Nodeset, stats: &NodesetStats) -> EntryDocument {
    EntryDocument {
        nodeset: nodeset.labels(schema),
        counts: stats.counts().to_vec(),
        p: stats.shares().to_vec(),
        f: stats.f(),
        w: stats.importance().to_vec(),
    }
}

impl ModelDocument {
    pub fn from_model(model: &RepresentativeModel) -> Self {
        let schema = model.schema();
        Self {
            format_version: FORMAT_VERSION,
            attributes: schema.names().to_vec(),
            k: model.k(),
            cluster_sizes: model.sizes().to_vec(),
            pruning: model.policy(),
            nir: model
                .nir()
                .entries()
                .map(|(node, s)| entry(schema, &Nodeset::singleton(node.clone()), s))
                .collect(),
            nnir: model
                .nnir()
                .entries()
                .iter()
                .map(|(ns, s)| entry(schema, ns, s))
                .collect(),
        }
    }

    pub fn into_model(self) -> Result<RepresentativeModel, IoError> {
        let malformed = |msg: String| IoError::MalformedDocument(msg);
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::VersionMismatch {
                found: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        let schema = AttributeSchema::new(self.attributes.clone()).map_err(|e| malformed(e.to_string()))?;
        if self.k == 0 || self.cluster_sizes.len() != self.k {
            return Err(malformed(format!(
                "k = {} but {} cluster sizes",
                self.k,
                self.cluster_sizes.len()
            )));
        }
        if self.cluster_sizes.contains(&0) {
            return Err(malformed("empty cluster".into()));
        }
        if let PruningPolicy::Threshold { theta } = self.pruning {
            PruningPolicy::threshold(theta).map_err(|e| malformed(e.to_string()))?;
        }
        let sizes = self.cluster_sizes;

        let mut nir = BTreeMap::new();
        for e in &self.nir {
            let (nodeset, stats) = decode_entry(&schema, &sizes, e)?;
            if nodeset.len() != 1 {
                return Err(malformed(format!("nir entry {:?} is not a single node", e.nodeset)));
            }
            let node: Node = nodeset.nodes()[0].clone();
            if nir.insert(node, stats).is_some() {
                return Err(malformed(format!("duplicate nir entry {:?}", e.nodeset)));
            }
        }
        let mut nnir = Vec::with_capacity(self.nnir.len());
        for e in &self.nnir {
            nnir.push(decode_entry(&schema, &sizes, e)?);
        }
        nnir.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        if nnir.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(malformed("duplicate nnir entry".into()));
        }
        let lattice = NnirLattice::from_entries(schema.len(), sizes.clone(), self.pruning, nnir);
        Ok(RepresentativeModel::from_parts(
            schema,
            NirTable::from_entries(sizes, nir),
            lattice,
        ))
    }
}

fn decode_nodeset(schema: &AttributeSchema, labels: &[String]) -> Result<Nodeset, IoError> {
    let mut nodes = Vec::with_capacity(labels.len());
    for label in labels {
        // longest attribute name followed by '=' wins
        let found = schema
            .names()
            .iter()
            .enumerate()
            .filter(|(_, name)| {
                label.len() > name.len() && label.starts_with(name.as_str()) && label.as_bytes()[name.len()] == b'='
            })
            .max_by_key(|(_, name)| name.len());
        let (attr, name) =
            found.ok_or_else(|| IoError::MalformedDocument(format!("`{label}` names no known attribute")))?;
        nodes.push(Node::new(attr, &label[name.len() + 1..]));
    }
    Nodeset::new(nodes).map_err(|e| IoError::MalformedDocument(e.to_string()))
}

fn decode_entry(
    schema: &AttributeSchema,
    sizes: &[u64],
    e: &EntryDocument,
) -> Result<(Nodeset, NodesetStats), IoError> {
    let nodeset = decode_nodeset(schema, &e.nodeset)?;
    let bad = |what: &str| IoError::MalformedDocument(format!("{what} of {:?}", e.nodeset));
    if e.counts.len() != sizes.len() || e.p.len() != sizes.len() || e.w.len() != sizes.len() {
        return Err(bad("vector length"));
    }
    if e.counts.iter().zip(sizes).any(|(c, m)| c > m) {
        return Err(bad("count exceeds cluster size"));
    }
    let stats = NodesetStats::from_counts(e.counts.clone(), sizes).map_err(|_| bad("zero total count"))?;
    let close = |a: f64, b: f64| (a - b).abs() <= RECOMPUTE_TOLERANCE;
    if !close(stats.f(), e.f)
        || !stats.shares().iter().zip(&e.p).all(|(a, b)| close(*a, *b))
        || !stats.importance().iter().zip(&e.w).all(|(a, b)| close(*a, *b))
    {
        return Err(bad("stored weights disagree with counts"));
    }
    Ok((nodeset, stats))
}

pub fn serialize_model(model: &RepresentativeModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelDocument::from_model(model)).expect("document serializes");
    s.push('\n');
    s
}

pub fn deserialize_model(text: &str) -> Result<RepresentativeModel, IoError> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(|e| IoError::MalformedDocument(e.to_string()))?;
    if probe.format_version != FORMAT_VERSION {
        return Err(IoError::VersionMismatch {
            found: probe.format_version,
            expected: FORMAT_VERSION,
        });
    }
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| IoError::MalformedDocument(e.to_string()))?;
    doc.into_model()
}
