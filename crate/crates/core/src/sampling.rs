//! Seeded random splitting of a dataset into a clustered sample and a
//! held-out remainder.
//!
//! All randomness in the crate comes from ChaCha8 seeded with a `u64`
//! through `SeedableRng::seed_from_u64`, so splits are stable across
//! platforms and runs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::PipelineError;
use crate::model::DataPoint;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of points drawn for the sample: `ceil(fraction * n)`.
pub fn sample_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).min(n)
}

/// Splits `points` into `(sample, held_out)`. Both keep input order.
pub fn sample_split(
    points: &[DataPoint],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<DataPoint>, Vec<DataPoint>), PipelineError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(PipelineError::InvalidFraction(fraction));
    }
    if points.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    let mut chosen = vec![false; n];
    for &i in &order[..sample_size(n, fraction)] {
        chosen[i] = true;
    }
    let (sample, held_out): (Vec<_>, Vec<_>) = points.iter().zip(chosen).partition(|(_, keep)| *keep);
    Ok((
        sample.into_iter().map(|(p, _)| p.clone()).collect(),
        held_out.into_iter().map(|(p, _)| p.clone()).collect(),
    ))
}
