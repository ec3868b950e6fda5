use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rng::{stream_rng, Stream};
use crate::model::{NetworkModel, NodeId};

pub type ObjectId = usize;

/// Objects `0..len`, each with a single fixed content source, plus demand parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectCatalog {
    sources: Vec<NodeId>,
    pub zipf_exponent: f64,
    /// Requests per second at every requesting node.
    pub arrival_rate: f64,
}

impl ObjectCatalog {
    pub fn new(sources: Vec<NodeId>, zipf_exponent: f64, arrival_rate: f64) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        if !(zipf_exponent >= 0.0 && zipf_exponent.is_finite()) {
            return Err(Error::param("zipf_exponent", "must be a finite value >= 0"));
        }
        if !(arrival_rate >= 0.0 && arrival_rate.is_finite()) {
            return Err(Error::param("arrival_rate", "must be a finite value >= 0"));
        }
        Ok(Self {
            sources,
            zipf_exponent,
            arrival_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn source(&self, object: ObjectId) -> NodeId {
        self.sources[object]
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn popularity(&self) -> Vec<f64> {
        zipf_pmf(self.len(), self.zipf_exponent).expect("catalog invariants hold")
    }
}

/// Draws each object's source uniformly over the nodes, independently per object.
pub fn assign_sources(model: &NetworkModel, num_objects: usize, seed: u64) -> Result<Vec<NodeId>> {
    let n = model.node_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    if num_objects == 0 {
        return Err(Error::EmptyCatalog);
    }
    let mut rng = stream_rng(seed, Stream::Sources);
    Ok((0..num_objects).map(|_| rng.random_range(0..n)).collect())
}

/// Zipf probabilities `p(k) ∝ k^-exponent` over ranks `1..=num_objects` (index 0 is rank 1).
pub fn zipf_pmf(num_objects: usize, exponent: f64) -> Result<Vec<f64>> {
    if num_objects == 0 {
        return Err(Error::EmptyCatalog);
    }
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(Error::param("exponent", "must be a finite value >= 0"));
    }
    let weights: Vec<f64> = (1..=num_objects)
        .map(|k| (k as f64).powf(-exponent))
        .collect();
    // Smallest terms first.
    let total: f64 = weights.iter().rev().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}
