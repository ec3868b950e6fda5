use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{NodeCacheConfig, NodeId, ObjectId, TierSpec};

/// How a tier's reads and writes share the storage device.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceModel {
    /// One FIFO controller serves reads and writes in arrival order, so a read
    /// queued behind a pending write finishes after it and admitted objects serve
    /// hits at once.
    #[default]
    Shared,
    /// Independent read and write servers; pending writes never delay reads and an
    /// object serves hits only once its write completes.
    Split,
}

/// A change to one node's cache, emitted by a policy and applied by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CacheAction {
    /// Move a resident object out of `tier` into the migration buffer.
    Evict { object: ObjectId, tier: usize },
    /// Store the arriving object, or the buffered one, into `tier`.
    Admit { object: ObjectId, tier: usize },
    /// Discard the buffered object.
    Drop { object: ObjectId },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CachedEntry {
    pub object: ObjectId,
    /// Time from which the entry serves hits.
    pub ready_at: f64,
}

/// One storage tier at runtime: its residents plus device timelines.
#[derive(Clone, Debug)]
pub struct TierRuntime {
    pub spec: TierSpec,
    entries: Vec<CachedEntry>,
    read_free_at: f64,
    write_free_at: f64,
}

impl TierRuntime {
    fn new(spec: TierSpec) -> Self {
        Self {
            spec,
            entries: Vec::with_capacity(spec.capacity),
            read_free_at: 0.0,
            write_free_at: 0.0,
        }
    }

    pub fn entries(&self) -> &[CachedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.spec.capacity
    }

    /// Queues a read at `now`; returns its completion time.
    pub fn read(&mut self, now: f64, device: DeviceModel) -> f64 {
        let service = 1.0 / self.spec.readout_rate;
        match device {
            DeviceModel::Shared => {
                let done = now.max(self.read_free_at.max(self.write_free_at)) + service;
                self.read_free_at = done;
                self.write_free_at = done;
                done
            }
            DeviceModel::Split => {
                let done = now.max(self.read_free_at) + service;
                self.read_free_at = done;
                done
            }
        }
    }

    /// Queues a write at `now`; returns its completion time.
    pub fn write(&mut self, now: f64, device: DeviceModel) -> f64 {
        let service = 1.0 / self.spec.write_rate;
        match device {
            DeviceModel::Shared => {
                let done = now.max(self.read_free_at.max(self.write_free_at)) + service;
                self.read_free_at = done;
                self.write_free_at = done;
                done
            }
            DeviceModel::Split => {
                let done = now.max(self.write_free_at) + service;
                self.write_free_at = done;
                done
            }
        }
    }
}

/// All tiers of one node plus its single-object migration buffer.
#[derive(Clone, Debug)]
pub struct NodeCache {
    node: NodeId,
    tiers: Vec<TierRuntime>,
    /// Tier holding each object, if any.
    location: Vec<Option<u8>>,
    buffer: Option<ObjectId>,
}

/// Outcome of applying one action, for penalty accounting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Applied {
    pub action: CacheAction,
    pub cost: f64,
    /// Object discarded implicitly because the buffer was needed again.
    pub displaced: Option<ObjectId>,
}

impl NodeCache {
    pub fn new(node: NodeId, config: &NodeCacheConfig, objects: usize) -> Self {
        assert!(config.len() <= u8::MAX as usize);
        Self {
            node,
            tiers: config.tiers().iter().copied().map(TierRuntime::new).collect(),
            location: vec![None; objects],
            buffer: None,
        }
    }

    pub fn node(&self) -> NodeId {
        self.node
    }

    pub fn tiers(&self) -> &[TierRuntime] {
        &self.tiers
    }

    pub fn tier(&self, j: usize) -> &TierRuntime {
        &self.tiers[j]
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }

    pub fn location(&self, object: ObjectId) -> Option<usize> {
        self.location[object].map(usize::from)
    }

    pub fn contains(&self, object: ObjectId) -> bool {
        self.location[object].is_some()
    }

    pub fn buffer(&self) -> Option<ObjectId> {
        self.buffer
    }

    /// Tier from which `object` can be read at `now`.
    pub fn hit_tier(&self, object: ObjectId, now: f64) -> Option<usize> {
        let j = self.location(object)?;
        let e = self.tiers[j].entries.iter().find(|e| e.object == object)?;
        (e.ready_at <= now).then_some(j)
    }

    pub fn read(&mut self, tier: usize, now: f64, device: DeviceModel) -> f64 {
        self.tiers[tier].read(now, device)
    }

    pub fn cached_count(&self) -> usize {
        self.tiers.iter().map(TierRuntime::len).sum()
    }

    fn reject(&self, reason: String) -> Error {
        Error::CacheAction {
            node: self.node,
            reason,
        }
    }

    /// Applies one action for a data arrival of `arriving` at `now`.
    pub fn apply(
        &mut self,
        action: CacheAction,
        arriving: ObjectId,
        now: f64,
        device: DeviceModel,
    ) -> Result<Applied> {
        let mut displaced = None;
        let cost = match action {
            CacheAction::Evict { object, tier } => {
                if self.location(object) != Some(tier) {
                    return Err(self.reject(format!("evict {object}: not in tier {tier}")));
                }
                let entries = &mut self.tiers[tier].entries;
                let i = entries.iter().position(|e| e.object == object).expect("located");
                entries.swap_remove(i);
                self.location[object] = None;
                displaced = self.buffer.replace(object);
                self.tiers[tier].spec.eviction_cost
            }
            CacheAction::Admit { object, tier } => {
                if tier >= self.tiers.len() {
                    return Err(self.reject(format!("admit {object}: no tier {tier}")));
                }
                if self.contains(object) {
                    return Err(self.reject(format!("admit {object}: already cached")));
                }
                if self.tiers[tier].is_full() {
                    return Err(self.reject(format!("admit {object}: tier {tier} full")));
                }
                if self.buffer == Some(object) {
                    self.buffer = None;
                } else if object != arriving {
                    return Err(self.reject(format!("admit {object}: object not present")));
                }
                let t = &mut self.tiers[tier];
                let done = t.write(now, device);
                let ready_at = if device == DeviceModel::Shared { now } else { done };
                t.entries.push(CachedEntry { object, ready_at });
                self.location[object] = Some(tier as u8);
                t.spec.admission_cost
            }
            CacheAction::Drop { object } => {
                if self.buffer != Some(object) {
                    return Err(self.reject(format!("drop {object}: not buffered")));
                }
                self.buffer = None;
                0.0
            }
        };
        Ok(Applied {
            action,
            cost,
            displaced,
        })
    }

    /// Empties the migration buffer at the end of an arrival's action list.
    pub fn flush_buffer(&mut self) -> Option<ObjectId> {
        self.buffer.take()
    }
}
