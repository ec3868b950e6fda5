use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LinkId, NodeId, ObjectId};
use crate::rap::TierPlacement;

/// VIP counts and cache states of every node.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualPlaneState {
    /// Index of the slot about to be executed, starting at 1.
    pub slot: u64,
    objects: usize,
    /// `counts[n * objects + k]`.
    counts: Vec<f64>,
    /// Cache states chosen in the previous slot, per node.
    pub placement: Vec<TierPlacement>,
}

impl VirtualPlaneState {
    pub fn new(nodes: usize, objects: usize) -> Self {
        Self {
            slot: 1,
            objects,
            counts: vec![0.0; nodes * objects],
            placement: vec![TierPlacement::empty(objects); nodes],
        }
    }

    pub fn nodes(&self) -> usize {
        self.placement.len()
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn count(&self, node: NodeId, object: ObjectId) -> f64 {
        self.counts[node * self.objects + object]
    }

    pub fn set_count(&mut self, node: NodeId, object: ObjectId, value: f64) {
        debug_assert!(value >= 0.0);
        self.counts[node * self.objects + object] = value;
    }

    pub fn node_counts(&self, node: NodeId) -> &[f64] {
        &self.counts[node * self.objects..(node + 1) * self.objects]
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [f64] {
        &mut self.counts
    }

    pub fn total_backlog(&self) -> f64 {
        self.counts.iter().sum()
    }
}

/// Requests entering the network per (node, object) during one slot.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalRecord {
    objects: usize,
    counts: Vec<u32>,
}

impl ArrivalRecord {
    pub fn new(nodes: usize, objects: usize) -> Self {
        Self {
            objects,
            counts: vec![0; nodes * objects],
        }
    }

    pub fn record(&mut self, node: NodeId, object: ObjectId) {
        self.counts[node * self.objects + object] += 1;
    }

    pub fn get(&self, node: NodeId, object: ObjectId) -> u32 {
        self.counts[node * self.objects + object]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn clear(&mut self) {
        self.counts.fill(0);
    }
}

/// Allocation on one link for the single object that won it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkFlow {
    pub object: ObjectId,
    /// Allocated rate, equal to the reverse-link capacity.
    pub allocated: f64,
    /// Backlog differential that won the link.
    pub differential: f64,
    /// VIPs actually moved; never above `allocated`.
    pub sent: f64,
}

/// Per-link forwarding decision of one slot, indexed by [`LinkId`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForwardingAllocation {
    pub flows: Vec<Option<LinkFlow>>,
}

impl ForwardingAllocation {
    pub fn flow(&self, link: LinkId) -> Option<&LinkFlow> {
        self.flows.get(link).and_then(Option::as_ref)
    }

    /// Allocated rate for `object` on `link`.
    pub fn allocated(&self, link: LinkId, object: ObjectId) -> f64 {
        match self.flow(link) {
            Some(f) if f.object == object => f.allocated,
            _ => 0.0,
        }
    }

    pub fn sent(&self, link: LinkId, object: ObjectId) -> f64 {
        match self.flow(link) {
            Some(f) if f.object == object => f.sent,
            _ => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyEntry {
    pub node: NodeId,
    pub object: ObjectId,
    pub tier: usize,
    pub amount: f64,
}

/// Penalties of the latest slot plus running averages of penalty and backlog.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PenaltyLedger {
    pub entries: Vec<PenaltyEntry>,
    pub slot_total: f64,
    pub slots: u64,
    pub cumulative_penalty: f64,
    pub cumulative_backlog: f64,
}

impl PenaltyLedger {
    pub fn average_penalty(&self) -> f64 {
        if self.slots == 0 {
            0.0
        } else {
            self.cumulative_penalty / self.slots as f64
        }
    }

    pub fn average_backlog(&self) -> f64 {
        if self.slots == 0 {
            0.0
        } else {
            self.cumulative_backlog / self.slots as f64
        }
    }

    pub(crate) fn close_slot(&mut self, entries: Vec<PenaltyEntry>, backlog: f64) {
        self.slot_total = entries.iter().map(|e| e.amount).sum();
        self.entries = entries;
        self.slots += 1;
        self.cumulative_penalty += self.slot_total;
        self.cumulative_backlog += backlog;
    }
}

/// Importance weight of the penalty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub omega: f64,
}

impl PolicyParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::param("omega", "must be a finite value >= 0"));
        }
        Ok(Self { omega })
    }
}
