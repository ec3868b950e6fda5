//! Caching and forwarding policies behind one decision interface.

pub mod cascade;
pub mod forward;
mod lfu;
mod naive;
mod vip;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data_plane::{CacheAction, NodeCache};
use crate::error::{Error, Result};
use crate::model::{NetworkModel, NodeCacheConfig, NodeId, ObjectId, RoutingTable};
use crate::virtual_plane::{ArrivalRecord, PolicyParams};

pub use cascade::{cache_benefit, cost_aware_admission};
pub use forward::{lrt_forward, RttTable};
pub use lfu::LfuPolicy;
pub use naive::{FifoPolicy, LruPolicy, NoCachePolicy, RandPolicy};
pub use vip::VipPolicy;

/// A request seen at one node on its way toward a copy of the object.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RequestVisit {
    pub node: NodeId,
    pub object: ObjectId,
    /// True at the node where the request entered the network.
    pub at_origin: bool,
    /// Tier serving the request here, if any.
    pub hit: Option<usize>,
}

/// Decision hooks called by the data-plane engine.
///
/// Hooks never touch simulator state; caching decisions come back as actions.
pub trait Policy {
    fn name(&self) -> &'static str;

    fn on_request(&mut self, _visit: &RequestVisit) {}

    /// Actions for `object` arriving at a node that does not hold it.
    fn on_data_arrival(&mut self, cache: &NodeCache, object: ObjectId, now: f64) -> Vec<CacheAction>;

    /// Next hop among the permitted `candidates`.
    fn forward_choice(
        &mut self,
        node: NodeId,
        object: ObjectId,
        candidates: &[NodeId],
        rtt: &RttTable,
    ) -> Option<NodeId>;

    /// Whether the engine should call [`Policy::on_slot_end`] at slot boundaries.
    fn uses_slots(&self) -> bool {
        false
    }

    /// Requests that entered the network during the slot just ended.
    fn on_slot_end(&mut self, _arrivals: &ArrivalRecord) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Vip,
    Lfu,
    Lru,
    Fifo,
    Rand,
    None,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [Self::Vip, Self::Lfu, Self::Lru, Self::Fifo, Self::Rand, Self::None];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Vip => "vip",
            Self::Lfu => "lfu",
            Self::Lru => "lru",
            Self::Fifo => "fifo",
            Self::Rand => "rand",
            Self::None => "none",
        }
    }

    pub fn is_naive(self) -> bool {
        matches!(self, Self::Lru | Self::Fifo | Self::Rand)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "policy",
                name: s.to_string(),
            })
    }
}

/// Builds a policy instance for one run.
pub fn build_policy<'a>(
    kind: PolicyKind,
    model: &'a NetworkModel,
    routing: &'a RoutingTable,
    caches: &'a [NodeCacheConfig],
    params: PolicyParams,
    window: usize,
    seed: u64,
) -> Result<Box<dyn Policy + 'a>> {
    let objects = routing.object_count();
    Ok(match kind {
        PolicyKind::Vip => Box::new(VipPolicy::new(model, routing, caches, params, window)?),
        PolicyKind::Lfu => Box::new(LfuPolicy::new(model, objects, params.omega)),
        PolicyKind::Lru => Box::new(LruPolicy::new(model, objects)),
        PolicyKind::Fifo => Box::new(FifoPolicy::new(model, objects)),
        PolicyKind::Rand => Box::new(RandPolicy::new(model, seed)),
        PolicyKind::None => Box::new(NoCachePolicy::new(model)),
    })
}
