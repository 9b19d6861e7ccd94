//! CSV tables: header row of attribute names, one point per row, and an
//! optional `__cluster` column of 0-based cluster labels.
//!
//! Input may use LF or CRLF line endings; output always uses LF.

use std::collections::HashSet;

use crate::error::IoError;
use crate::labeling::LabelAssignment;
use crate::model::{AttributeSchema, Clustering, DataPoint};

pub const CLUSTER_COLUMN: &str = "__cluster";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: AttributeSchema,
    /// Point ids are 0-based data row numbers.
    pub points: Vec<DataPoint>,
    pub clusters: Option<Vec<usize>>,
}

impl Table {
    /// Groups the rows by their `__cluster` label.
    pub fn into_clustering(self) -> Result<Clustering, IoError> {
        let labels = self.clusters.ok_or(IoError::MissingClusterColumn)?;
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut clusters = vec![Vec::new(); k];
        for (p, l) in self.points.into_iter().zip(labels) {
            clusters[l].push(p);
        }
        Ok(Clustering::new(self.schema, clusters)?)
    }
}

pub fn parse_table(text: &str) -> Result<Table, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut seen = HashSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(IoError::DuplicateHeader(h.clone()));
        }
    }
    let cluster_col = header.iter().position(|h| h == CLUSTER_COLUMN);
    let schema = AttributeSchema::new(
        header
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != cluster_col)
            .map(|(_, h)| h.clone()),
    )?;

    let mut points = Vec::new();
    let mut clusters = cluster_col.map(|_| Vec::new());
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(IoError::RaggedRow {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        let mut values = Vec::with_capacity(schema.len());
        for (i, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(IoError::MissingValue {
                    line,
                    column: header[i].clone(),
                });
            }
            if Some(i) == cluster_col {
                let label = cell.parse::<usize>().map_err(|_| IoError::BadClusterLabel {
                    line,
                    value: cell.to_string(),
                })?;
                if let Some(c) = clusters.as_mut() {
                    c.push(label);
                }
            } else {
                values.push(cell);
            }
        }
        let id = points.len();
        points.push(DataPoint::new(values)?.with_id(id));
    }
    Ok(Table {
        schema,
        points,
        clusters,
    })
}

pub fn read_table(path: &std::path::Path) -> Result<Table, IoError> {
    parse_table(&std::fs::read_to_string(path)?)
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, IoError> {
    let bytes = w.into_inner().map_err(|e| IoError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output of utf-8 input"))
}

/// Writes points, with a trailing `__cluster` column when labels are given.
pub fn write_table(
    schema: &AttributeSchema,
    points: &[DataPoint],
    clusters: Option<&[usize]>,
) -> Result<String, IoError> {
    let mut w = writer();
    let mut header: Vec<&str> = schema.names().iter().map(String::as_str).collect();
    if clusters.is_some() {
        header.push(CLUSTER_COLUMN);
    }
    w.write_record(&header)?;
    for (i, p) in points.iter().enumerate() {
        let mut row: Vec<String> = p.values().to_vec();
        if let Some(labels) = clusters {
            row.push(labels[i].to_string());
        }
        w.write_record(&row)?;
    }
    finish(w)
}

/// Writes a clustering's points with their labels, in row-id order.
pub fn write_clustering(clustering: &Clustering) -> Result<String, IoError> {
    let mut rows: Vec<(&DataPoint, usize)> = clustering
        .clusters()
        .iter()
        .enumerate()
        .flat_map(|(c, cluster)| cluster.iter().map(move |p| (p, c)))
        .collect();
    // input order when ids are known
    rows.sort_by_key(|(p, _)| p.id().unwrap_or(usize::MAX));
    let points: Vec<DataPoint> = rows.iter().map(|(p, _)| (*p).clone()).collect();
    let labels: Vec<usize> = rows.iter().map(|(_, c)| *c).collect();
    write_table(clustering.schema(), &points, Some(&labels))
}

/// Columns `row_id, cluster, score, tie, status`; `cluster` is empty for
/// unassigned points.
pub fn write_assignments(assignments: &[LabelAssignment]) -> Result<String, IoError> {
    let mut w = writer();
    w.write_record(["row_id", "cluster", "score", "tie", "status"])?;
    for (i, a) in assignments.iter().enumerate() {
        w.write_record([
            a.point_id.unwrap_or(i).to_string(),
            a.cluster.map(|c| c.to_string()).unwrap_or_default(),
            a.score().to_string(),
            a.tie.to_string(),
            a.status.as_str().to_string(),
        ])?;
    }
    finish(w)
}
