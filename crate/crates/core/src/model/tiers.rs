use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One storage device at a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TierSpec {
    /// Objects.
    pub capacity: usize,
    /// Copies per object per slot in the virtual plane; objects/s in the data plane.
    pub readout_rate: f64,
    /// Objects/s.
    pub write_rate: f64,
    pub admission_cost: f64,
    pub eviction_cost: f64,
}

impl TierSpec {
    pub fn validate(&self) -> Result<()> {
        if self.capacity < 1 {
            return Err(Error::Tiers("capacity must be at least 1".into()));
        }
        if !(self.readout_rate > 0.0 && self.readout_rate.is_finite()) {
            return Err(Error::Tiers("readout rate must be positive".into()));
        }
        if !(self.write_rate > 0.0) {
            return Err(Error::Tiers("write rate must be positive".into()));
        }
        if !(self.admission_cost >= 0.0 && self.eviction_cost >= 0.0) {
            return Err(Error::Tiers("costs must be non-negative".into()));
        }
        Ok(())
    }
}

/// Ordered cache tiers of a node, fastest readout first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeCacheConfig {
    tiers: Vec<TierSpec>,
}

impl NodeCacheConfig {
    pub fn new(tiers: Vec<TierSpec>) -> Result<Self> {
        let cfg = Self { tiers };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks per-tier bounds and the descending readout-rate ordering.
    pub fn validate(&self) -> Result<()> {
        for t in &self.tiers {
            t.validate()?;
        }
        if let Some(w) = self
            .tiers
            .windows(2)
            .find(|w| w[0].readout_rate < w[1].readout_rate)
        {
            return Err(Error::Tiers(format!(
                "tiers must be in descending readout order, found {} before {}",
                w[0].readout_rate, w[1].readout_rate
            )));
        }
        Ok(())
    }

    pub fn tiers(&self) -> &[TierSpec] {
        &self.tiers
    }

    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn capacities(&self) -> Vec<usize> {
        self.tiers.iter().map(|t| t.capacity).collect()
    }

    pub fn total_slots(&self) -> usize {
        self.tiers.iter().map(|t| t.capacity).sum()
    }
}
