//! Baselines that admit every new arrival and ignore rates and costs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data_plane::{CacheAction, NodeCache};
use crate::model::rng::{stream_rng, Stream};
use crate::model::{NetworkModel, NodeId, ObjectId};
use crate::policies::cascade::chain_actions;
use crate::policies::forward::{lrt_forward, RttTable};
use crate::policies::{Policy, RequestVisit};

/// Per-(node, object) stamps from a logical clock.
#[derive(Clone, Debug)]
struct Stamps {
    objects: usize,
    values: Vec<u64>,
    tick: u64,
}

impl Stamps {
    fn new(nodes: usize, objects: usize) -> Self {
        Self {
            objects,
            values: vec![0; nodes * objects],
            tick: 0,
        }
    }

    fn get(&self, node: NodeId, object: ObjectId) -> u64 {
        self.values[node * self.objects + object]
    }

    fn touch(&mut self, node: NodeId, object: ObjectId) {
        self.tick += 1;
        self.values[node * self.objects + object] = self.tick;
    }

    /// Resident of tier `j` with the smallest stamp.
    fn oldest(&self, cache: &NodeCache, j: usize) -> Option<ObjectId> {
        let node = cache.node();
        cache
            .tier(j)
            .entries()
            .iter()
            .map(|e| e.object)
            .min_by_key(|&k| (self.get(node, k), k))
    }
}

/// First tier of positive capacity at or after `from`.
fn next_tier(cache: &NodeCache, from: usize) -> Option<usize> {
    (from..cache.tier_count()).find(|&j| cache.tier(j).spec.capacity > 0)
}

/// Admit to the first tier; a displaced resident moves one tier down when that tier
/// has room or `demote` accepts it over the lower tier's victim, and otherwise leaves.
fn downward_chain(
    cache: &NodeCache,
    object: ObjectId,
    victim: impl Fn(usize) -> ObjectId,
    demote: impl Fn(ObjectId, ObjectId) -> bool,
) -> Vec<CacheAction> {
    let Some(first) = next_tier(cache, 0) else {
        return Vec::new();
    };
    let mut placements = vec![(object, first)];
    let mut tier = first;
    let mut dropped = None;
    while cache.tier(tier).is_full() {
        let displaced = victim(tier);
        match next_tier(cache, tier + 1) {
            Some(lower) if !cache.tier(lower).is_full() || demote(displaced, victim(lower)) => {
                placements.push((displaced, lower));
                tier = lower;
            }
            _ => {
                dropped = Some(displaced);
                break;
            }
        }
    }
    chain_actions(&placements, dropped)
}

/// LRU in every tier, admitting to the first; recency moves on hits and admissions.
pub struct LruPolicy<'a> {
    model: &'a NetworkModel,
    recency: Stamps,
}

impl<'a> LruPolicy<'a> {
    pub fn new(model: &'a NetworkModel, objects: usize) -> Self {
        Self {
            model,
            recency: Stamps::new(model.node_count(), objects),
        }
    }
}

impl Policy for LruPolicy<'_> {
    fn name(&self) -> &'static str {
        "lru"
    }

    fn on_request(&mut self, visit: &RequestVisit) {
        if visit.hit.is_some() {
            self.recency.touch(visit.node, visit.object);
        }
    }

    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, _now: f64) -> Vec<CacheAction> {
        let node = cache.node();
        let r = &self.recency;
        let actions = downward_chain(
            cache,
            object,
            |j| r.oldest(cache, j).expect("full tier"),
            |displaced, lower| r.get(node, lower) < r.get(node, displaced),
        );
        if !actions.is_empty() {
            self.recency.touch(node, object);
        }
        actions
    }

    fn forward_choice(&mut self, node: NodeId, _object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        lrt_forward(self.model, node, candidates, rtt)
    }
}

/// All tiers chained into one FIFO queue.
pub struct FifoPolicy<'a> {
    model: &'a NetworkModel,
    inserted: Stamps,
}

impl<'a> FifoPolicy<'a> {
    pub fn new(model: &'a NetworkModel, objects: usize) -> Self {
        Self {
            model,
            inserted: Stamps::new(model.node_count(), objects),
        }
    }
}

impl Policy for FifoPolicy<'_> {
    fn name(&self) -> &'static str {
        "fifo"
    }

    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, _now: f64) -> Vec<CacheAction> {
        let s = &self.inserted;
        let actions = downward_chain(cache, object, |j| s.oldest(cache, j).expect("full tier"), |_, _| true);
        let node = cache.node();
        // Tail insertion order: the deepest move happened first.
        for a in &actions {
            if let CacheAction::Admit { object, .. } = *a {
                self.inserted.touch(node, object);
            }
        }
        actions
    }

    fn forward_choice(&mut self, node: NodeId, _object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        lrt_forward(self.model, node, candidates, rtt)
    }
}

/// Uniformly random tier; a full tier loses a uniformly random resident.
pub struct RandPolicy<'a> {
    model: &'a NetworkModel,
    rng: ChaCha8Rng,
}

impl<'a> RandPolicy<'a> {
    pub fn new(model: &'a NetworkModel, seed: u64) -> Self {
        Self {
            model,
            rng: stream_rng(seed, Stream::RandPolicy),
        }
    }
}

impl Policy for RandPolicy<'_> {
    fn name(&self) -> &'static str {
        "rand"
    }

    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, _now: f64) -> Vec<CacheAction> {
        let usable: Vec<usize> = (0..cache.tier_count())
            .filter(|&j| cache.tier(j).spec.capacity > 0)
            .collect();
        if usable.is_empty() {
            return Vec::new();
        }
        let j = usable[self.rng.random_range(0..usable.len())];
        let tier = cache.tier(j);
        let dropped = tier
            .is_full()
            .then(|| tier.entries()[self.rng.random_range(0..tier.len())].object);
        chain_actions(&[(object, j)], dropped)
    }

    fn forward_choice(&mut self, node: NodeId, _object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        lrt_forward(self.model, node, candidates, rtt)
    }
}

/// Never caches; forwards by LRT. Used as the delay normalizer.
pub struct NoCachePolicy<'a> {
    model: &'a NetworkModel,
}

impl<'a> NoCachePolicy<'a> {
    pub fn new(model: &'a NetworkModel) -> Self {
        Self { model }
    }
}

impl Policy for NoCachePolicy<'_> {
    fn name(&self) -> &'static str {
        "none"
    }

    fn on_data_arrival(&mut self, _cache: &NodeCache, _object: ObjectId, _now: f64) -> Vec<CacheAction> {
        Vec::new()
    }

    fn forward_choice(&mut self, node: NodeId, _object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        lrt_forward(self.model, node, candidates, rtt)
    }
}
