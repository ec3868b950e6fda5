//! Continuous-time request and data delivery over the network.

mod cache;
mod clock;
mod engine;
mod window;
pub mod workload;

pub use cache::{Applied, CacheAction, CachedEntry, DeviceModel, NodeCache, TierRuntime};
pub use clock::SimClock;
pub use engine::{
    simulate, ActionRecord, DataPlaneConfig, Request, RunMetrics, RunOutput, ServedBy,
};
pub use window::{SlidingWindowStats, SlotFlow};
pub use workload::{generate_workload, RequestSpec};
