//! Side-by-side labeling of the same points under several resemblance rules.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabelingError, PipelineError};
use crate::labeling::{label_point_methods, LabelAssignment, Method};
use crate::model::DataPoint;
use crate::representative::RepresentativeModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointComparison {
    pub point_id: Option<usize>,
    /// Position of the point in the compared list.
    pub position: usize,
    /// Chosen cluster per method, `None` when unassigned.
    pub labels: Vec<Option<usize>>,
    /// Score of every cluster, per method.
    pub scores: Vec<Vec<f64>>,
    pub ties: Vec<bool>,
}

impl PointComparison {
    fn from_assignments(position: usize, assignments: &[LabelAssignment]) -> Self {
        Self {
            point_id: assignments.first().and_then(|a| a.point_id),
            position,
            labels: assignments.iter().map(|a| a.cluster).collect(),
            scores: assignments.iter().map(LabelAssignment::values).collect(),
            ties: assignments.iter().map(|a| a.tie).collect(),
        }
    }

    pub fn is_discordant(&self) -> bool {
        self.labels.windows(2).any(|w| w[0] != w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub points: usize,
    /// Assigned points per method.
    pub assigned: Vec<usize>,
    pub discordant: usize,
    pub discordance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub methods: Vec<Method>,
    pub points: Vec<PointComparison>,
    /// `agreement[a][b]`: points both methods assign to the same cluster.
    /// The diagonal counts assigned points.
    pub agreement: Vec<Vec<usize>>,
    /// Points whose labels differ between methods, ordered by point id.
    pub discordant: Vec<PointComparison>,
    pub summary: ReportSummary,
}

impl ComparisonReport {
    pub fn from_assignments(methods: &[Method], per_point: &[Vec<LabelAssignment>]) -> Self {
        let m = methods.len();
        let points: Vec<PointComparison> = per_point
            .iter()
            .enumerate()
            .map(|(pos, a)| PointComparison::from_assignments(pos, a))
            .collect();
        let mut agreement = vec![vec![0usize; m]; m];
        for p in &points {
            for (row, la) in agreement.iter_mut().zip(&p.labels) {
                for (cell, lb) in row.iter_mut().zip(&p.labels) {
                    if la.is_some() && la == lb {
                        *cell += 1;
                    }
                }
            }
        }
        let mut discordant: Vec<PointComparison> = points.iter().filter(|p| p.is_discordant()).cloned().collect();
        discordant.sort_by_key(|p| (p.point_id.is_none(), p.point_id, p.position));
        let assigned = (0..m).map(|a| agreement[a][a]).collect();
        let discordance_rate = if points.is_empty() {
            0.0
        } else {
            discordant.len() as f64 / points.len() as f64
        };
        let summary = ReportSummary {
            points: points.len(),
            assigned,
            discordant: discordant.len(),
            discordance_rate,
        };
        Self {
            methods: methods.to_vec(),
            points,
            agreement,
            discordant,
            summary,
        }
    }

    pub fn method_index(&self, method: Method) -> Option<usize> {
        self.methods.iter().position(|&m| m == method)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Labels every point under every method and tabulates agreement.
pub fn compare_methods(
    points: &[DataPoint],
    model: &RepresentativeModel,
    methods: &[Method],
) -> Result<ComparisonReport, PipelineError> {
    if methods.is_empty() {
        return Err(PipelineError::NoMethods);
    }
    let per_point = points
        .par_iter()
        .map(|p| label_point_methods(p, model, methods))
        .collect::<Result<Vec<_>, LabelingError>>()?;
    Ok(ComparisonReport::from_assignments(methods, &per_point))
}
