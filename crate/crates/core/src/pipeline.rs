//! Sample, cluster the sample, build representatives, label the rest.

use rayon::prelude::*;

use crate::error::{LabelingError, PipelineError};
use crate::kmodes::kmodes_cluster;
use crate::labeling::{label_point_methods, FallbackPolicy, LabelAssignment, Method};
use crate::model::{AttributeSchema, Clustering, DataPoint};
use crate::report::ComparisonReport;
use crate::representative::{PruningPolicy, RepresentativeModel};
use crate::sampling::sample_split;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Share of the input that is clustered, in `(0, 1]`.
    pub fraction: f64,
    pub k: usize,
    pub seed: u64,
    pub pruning: PruningPolicy,
    /// The first method produces the assignments; all of them are compared.
    pub methods: Vec<Method>,
    pub fallback: FallbackPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            fraction: 0.5,
            k: 3,
            seed: 0,
            pruning: PruningPolicy::None,
            methods: Method::ALL.to_vec(),
            fallback: FallbackPolicy::None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(PipelineError::InvalidFraction(self.fraction));
        }
        if self.k == 0 {
            return Err(PipelineError::InvalidK);
        }
        if self.methods.is_empty() {
            return Err(PipelineError::NoMethods);
        }
        if let PruningPolicy::Threshold { theta } = self.pruning {
            PruningPolicy::threshold(theta)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum PipelineInput {
    /// Unclustered rows; they are sampled and clustered with k-modes.
    Raw {
        schema: AttributeSchema,
        points: Vec<DataPoint>,
    },
    /// Clusters given up front; their unlabeled set is labeled.
    Clustered(Clustering),
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Includes the held-out points as its unlabeled set.
    pub clustering: Clustering,
    pub model: RepresentativeModel,
    pub assignments: Vec<LabelAssignment>,
    pub report: ComparisonReport,
}

pub fn run_pipeline(input: PipelineInput, config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    config.validate()?;
    let clustering = match input {
        PipelineInput::Clustered(c) => c,
        PipelineInput::Raw { schema, points } => {
            let (sample, held_out) = sample_split(&points, config.fraction, config.seed)?;
            kmodes_cluster(&schema, &sample, config.k, config.seed)?.with_unlabeled(held_out)?
        }
    };
    let model = RepresentativeModel::build(&clustering, config.pruning)?;
    let per_point = clustering
        .unlabeled()
        .par_iter()
        .map(|p| label_point_methods(p, &model, &config.methods))
        .collect::<Result<Vec<_>, LabelingError>>()?;
    let report = ComparisonReport::from_assignments(&config.methods, &per_point);
    let assignments = per_point
        .into_iter()
        .map(|mut labels| labels.swap_remove(0).with_fallback(config.fallback, &model))
        .collect();
    Ok(PipelineOutput {
        clustering,
        model,
        assignments,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn preclustered_example() {
        let config = PipelineConfig {
            methods: vec![Method::NnirProduct],
            ..Default::default()
        };
        let out = run_pipeline(PipelineInput::Clustered(fixture::example_clustering()), &config).unwrap();
        assert_eq!(out.assignments.len(), 4);
        assert_eq!(out.assignments[2].cluster, Some(0));
    }

    #[test]
    fn full_fraction_leaves_nothing_to_label() {
        let points: Vec<DataPoint> = fixture::example_clustering()
            .clusters()
            .iter()
            .flatten()
            .cloned()
            .collect();
        let config = PipelineConfig {
            fraction: 1.0,
            ..Default::default()
        };
        let out = run_pipeline(
            PipelineInput::Raw {
                schema: fixture::example_schema(),
                points,
            },
            &config,
        )
        .unwrap();
        assert!(out.assignments.is_empty());
        assert_eq!(out.report.summary.points, 0);
        assert_eq!(out.clustering.sizes().iter().sum::<u64>(), 15);
    }

    #[test]
    fn config_validation() {
        let bad = PipelineConfig {
            fraction: 0.0,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(PipelineError::InvalidFraction(_))));
        let bad = PipelineConfig {
            methods: vec![],
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(PipelineError::NoMethods));
        let bad = PipelineConfig {
            pruning: PruningPolicy::Threshold { theta: 2.0 },
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
