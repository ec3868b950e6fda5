//! Network, catalog, cache hierarchy, and routing constraints shared by both planes.

mod catalog;
mod routing;
pub mod rng;
mod tiers;
mod topology;

pub use catalog::{assign_sources, zipf_pmf, ObjectCatalog, ObjectId};
pub use routing::{build_routing, RoutingTable};
pub use tiers::{NodeCacheConfig, TierSpec};
pub use topology::{EdgeEntry, Link, LinkId, NetworkModel, NodeId, TopologyFile, TopologySpec};
