use crate::data_plane::{CacheAction, NodeCache, SlidingWindowStats, SlotFlow};
use crate::error::Result;
use crate::model::{NetworkModel, NodeCacheConfig, NodeId, ObjectId, RoutingTable};
use crate::policies::cascade::cost_aware_admission;
use crate::policies::forward::RttTable;
use crate::policies::Policy;
use crate::virtual_plane::{ArrivalRecord, PolicyParams, VirtualPlane};

/// Data-plane policy driven by the virtual plane.
///
/// Caching uses windowed averages of VIPs received (cache scores) in the cost-aware
/// cascade; forwarding follows the link with the largest windowed VIP outflow.
pub struct VipPolicy<'a> {
    model: &'a NetworkModel,
    plane: VirtualPlane<'a>,
    stats: SlidingWindowStats,
    omega: f64,
}

impl<'a> VipPolicy<'a> {
    pub fn new(
        model: &'a NetworkModel,
        routing: &'a RoutingTable,
        caches: &'a [NodeCacheConfig],
        params: PolicyParams,
        window: usize,
    ) -> Result<Self> {
        let stats = SlidingWindowStats::new(
            window,
            model.node_count(),
            model.links().len(),
            routing.object_count(),
        );
        Ok(Self {
            model,
            plane: VirtualPlane::new(model, routing, caches, params)?,
            stats,
            omega: params.omega,
        })
    }

    pub fn plane(&self) -> &VirtualPlane<'a> {
        &self.plane
    }

    pub fn stats(&self) -> &SlidingWindowStats {
        &self.stats
    }
}

impl Policy for VipPolicy<'_> {
    fn name(&self) -> &'static str {
        "vip"
    }

    fn uses_slots(&self) -> bool {
        true
    }

    fn on_slot_end(&mut self, arrivals: &ArrivalRecord) -> Result<()> {
        let outcome = self.plane.step(arrivals)?;
        let flows = outcome
            .allocation
            .flows
            .iter()
            .enumerate()
            .filter_map(|(link, f)| {
                f.filter(|f| f.sent > 0.0).map(|f| SlotFlow {
                    link,
                    object: f.object,
                    vips: f.sent,
                })
            })
            .collect();
        self.stats.push_slot(self.model, flows);
        Ok(())
    }

    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, _now: f64) -> Vec<CacheAction> {
        let node = cache.node();
        let stats = &self.stats;
        cost_aware_admission(cache, object, self.omega, |k| stats.cache_score(node, k))
    }

    fn forward_choice(&mut self, node: NodeId, object: ObjectId, candidates: &[NodeId], rtt: &RttTable) -> Option<NodeId> {
        let key = |b: NodeId| {
            let link = self.model.link_id(node, b).expect("candidate is a neighbor");
            (self.stats.sent_average(link, object), rtt.key(link))
        };
        candidates.iter().copied().min_by(|&a, &b| {
            let (va, ra) = key(a);
            let (vb, rb) = key(b);
            vb.total_cmp(&va).then(ra.total_cmp(&rb)).then(a.cmp(&b))
        })
    }
}
