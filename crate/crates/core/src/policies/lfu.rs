use crate::data_plane::{CacheAction, NodeCache};
use crate::model::{NetworkModel, NodeId, ObjectId};
use crate::policies::cascade::cost_aware_admission;
use crate::policies::forward::{lrt_forward, RttTable};
use crate::policies::{Policy, RequestVisit};

/// Cost-aware admission driven by network-wide request counts, with LRT forwarding.
pub struct LfuPolicy<'a> {
    model: &'a NetworkModel,
    omega: f64,
    frequency: Vec<u64>,
}

impl<'a> LfuPolicy<'a> {
    pub fn new(model: &'a NetworkModel, objects: usize, omega: f64) -> Self {
        Self {
            model,
            omega,
            frequency: vec![0; objects],
        }
    }

    pub fn frequency(&self, object: ObjectId) -> u64 {
        self.frequency[object]
    }
}

impl Policy for LfuPolicy<'_> {
    fn name(&self) -> &'static str {
        "lfu"
    }

    fn on_request(&mut self, visit: &RequestVisit) {
        if visit.at_origin {
            self.frequency[visit.object] += 1;
        }
    }

    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, _now: f64) -> Vec<CacheAction> {
        let freq = &self.frequency;
        cost_aware_admission(cache, object, self.omega, |k| freq[k] as f64)
    }

    fn forward_choice(&mut self, node: NodeId, _object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        lrt_forward(self.model, node, candidates, rtt)
    }
}
