//! Slotted VIP control plane: counts, cache states, backpressure and penalties.

mod engine;
mod ops;
mod state;

pub use engine::{run_virtual, SlotOutcome, SlotRow, VirtualPlane, VirtualScenario, VirtualSeries};
pub use ops::{
    backpressure_forwarding, compute_benefits, compute_penalties, decide_caching,
    decide_caching_where, evolve_queues, retain_zero_benefit, settle_transmissions,
};
pub use state::{
    ArrivalRecord, ForwardingAllocation, LinkFlow, PenaltyEntry, PenaltyLedger, PolicyParams,
    VirtualPlaneState,
};
