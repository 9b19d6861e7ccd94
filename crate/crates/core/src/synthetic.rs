//! Seeded synthetic categorical data with planted cluster structure.

use rand::Rng as _;

use crate::model::{AttributeSchema, DataPoint};
use crate::sampling;

/// Recipe for [`generate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub rows: usize,
    pub attributes: usize,
    pub clusters: usize,
    /// Distinct values per attribute.
    pub domain: usize,
    /// Chance that a value is redrawn uniformly instead of copied from the
    /// row's prototype.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            rows: 1000,
            attributes: 8,
            clusters: 5,
            domain: 6,
            noise: 0.3,
            seed: 0,
        }
    }
}

/// Rows drawn around `clusters` random prototypes. Attributes are named
/// `A1..Aq`, values `v0..v{domain-1}`; row ids are row numbers.
pub fn generate(spec: &SyntheticSpec) -> (AttributeSchema, Vec<DataPoint>) {
    let q = spec.attributes.max(1);
    let domain = spec.domain.max(1);
    let mut rng = sampling::rng(spec.seed);
    let schema = AttributeSchema::new((1..=q).map(|a| format!("A{a}"))).expect("generated names are unique");
    let prototypes: Vec<Vec<usize>> = (0..spec.clusters.max(1))
        .map(|_| (0..q).map(|_| rng.gen_range(0..domain)).collect())
        .collect();
    let points = (0..spec.rows)
        .map(|row| {
            let proto = &prototypes[rng.gen_range(0..prototypes.len())];
            let values: Vec<String> = proto
                .iter()
                .map(|&v| {
                    let v = if rng.gen_bool(spec.noise) {
                        rng.gen_range(0..domain)
                    } else {
                        v
                    };
                    format!("v{v}")
                })
                .collect();
            DataPoint::new(values)
                .expect("generated values are non-empty")
                .with_id(row)
        })
        .collect();
    (schema, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let spec = SyntheticSpec {
            rows: 50,
            attributes: 4,
            ..Default::default()
        };
        let (schema, a) = generate(&spec);
        let (_, b) = generate(&spec);
        assert_eq!(schema.len(), 4);
        assert_eq!(a.len(), 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.len() == 4));
    }
}
