//! Exact per-node tier placement.
//!
//! The placement problem (maximize total benefit subject to per-tier capacities and
//! at most one tier per object) becomes a rectangular assignment problem once each
//! tier `j` is expanded into `capacity_j` identical slots. The assignment is solved
//! with every slot filled, using zero-benefit placeholder objects for slots that
//! stay empty, and pairs with negative benefit are dropped afterwards.

pub mod lsap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Benefits indexed by (object, tier), with the tier capacities they compete for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenefitMatrix {
    objects: usize,
    values: Vec<f64>,
    capacities: Vec<usize>,
}

impl BenefitMatrix {
    pub fn new(objects: usize, values: Vec<f64>, capacities: Vec<usize>) -> Result<Self> {
        if values.len() != objects * capacities.len() {
            return Err(Error::param(
                "values",
                format!(
                    "expected {} entries for {objects} objects x {} tiers, got {}",
                    objects * capacities.len(),
                    capacities.len(),
                    values.len()
                ),
            ));
        }
        if capacities.contains(&0) {
            return Err(Error::Tiers("capacities must be at least 1".into()));
        }
        Ok(Self {
            objects,
            values,
            capacities,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], capacities: Vec<usize>) -> Result<Self> {
        let values = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), values, capacities)
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn tiers(&self) -> usize {
        self.capacities.len()
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn get(&self, object: usize, tier: usize) -> f64 {
        self.values[object * self.tiers() + tier]
    }

    pub fn total_slots(&self) -> usize {
        self.capacities.iter().sum()
    }

    /// Objective of a placement; `None` entries contribute nothing.
    pub fn objective(&self, placement: &TierPlacement) -> f64 {
        placement
            .tiers
            .iter()
            .enumerate()
            .filter_map(|(k, t)| t.map(|j| self.get(k, j)))
            .sum()
    }
}

/// Benefits indexed by (object, slot); slots of tier `j` form a contiguous block.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotExpandedMatrix {
    rows: usize,
    values: Vec<f64>,
    slot_tier: Vec<usize>,
}

impl SlotExpandedMatrix {
    /// A general matrix whose every column is its own tier of capacity one.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::param("rows", "ragged matrix"));
        }
        Ok(Self {
            rows: rows.len(),
            values: rows.iter().flatten().copied().collect(),
            slot_tier: (0..cols).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.slot_tier.len()
    }

    pub fn get(&self, object: usize, slot: usize) -> f64 {
        self.values[object * self.cols() + slot]
    }

    /// Tier owning each slot.
    pub fn slot_map(&self) -> &[usize] {
        &self.slot_tier
    }

    pub fn row(&self, object: usize) -> &[f64] {
        let c = self.cols();
        &self.values[object * c..(object + 1) * c]
    }
}

/// Sparse (object, slot) pairs with their total benefit.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub objective: f64,
}

/// Tier chosen for each object, or `None` when uncached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TierPlacement {
    pub tiers: Vec<Option<usize>>,
}

impl TierPlacement {
    pub fn empty(objects: usize) -> Self {
        Self {
            tiers: vec![None; objects],
        }
    }

    pub fn is_cached(&self, object: usize, tier: usize) -> bool {
        self.tiers[object] == Some(tier)
    }

    pub fn count_in(&self, tier: usize) -> usize {
        self.tiers.iter().filter(|&&t| t == Some(tier)).count()
    }

    /// Capacity check; exclusivity and binariness hold by representation.
    pub fn respects(&self, capacities: &[usize]) -> bool {
        let mut used = vec![0usize; capacities.len()];
        for t in self.tiers.iter().flatten() {
            match used.get_mut(*t) {
                Some(u) => *u += 1,
                None => return false,
            }
        }
        used.iter().zip(capacities).all(|(u, c)| u <= c)
    }
}

/// Replicates each tier's benefit column once per slot of that tier.
pub fn expand(benefits: &BenefitMatrix) -> SlotExpandedMatrix {
    let slot_tier: Vec<usize> = benefits
        .capacities
        .iter()
        .enumerate()
        .flat_map(|(j, &cap)| std::iter::repeat_n(j, cap))
        .collect();
    let cols = slot_tier.len();
    let mut values = Vec::with_capacity(benefits.objects * cols);
    for k in 0..benefits.objects {
        values.extend(slot_tier.iter().map(|&j| benefits.get(k, j)));
    }
    SlotExpandedMatrix {
        rows: benefits.objects,
        values,
        slot_tier,
    }
}

/// Maximum-benefit assignment of objects to slots (each used at most once on both sides).
pub fn solve(matrix: &SlotExpandedMatrix) -> Result<Assignment> {
    let objects = matrix.rows();
    let slots = matrix.cols();
    if let Some(pos) = matrix.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos / slots.max(1),
            col: pos % slots.max(1),
        });
    }
    if objects == 0 || slots == 0 {
        return Ok(Assignment::default());
    }

    // Slots are the rows of the minimization; columns are the real objects followed
    // by one zero-benefit placeholder per slot, so every slot is filled.
    let cols = objects + slots;
    let mut cost = vec![0.0; slots * cols];
    for k in 0..objects {
        for (i, &b) in matrix.row(k).iter().enumerate() {
            cost[i * cols + k] = -b;
        }
    }
    let obj4slot = lsap::minimize(&cost, slots, cols);

    let mut pairs: Vec<(usize, usize)> = obj4slot
        .into_iter()
        .enumerate()
        .filter(|&(i, k)| k < objects && matrix.get(k, i) >= 0.0)
        .map(|(i, k)| (k, i))
        .collect();
    pairs.sort_unstable();
    let objective = pairs.iter().map(|&(k, i)| matrix.get(k, i)).sum();
    Ok(Assignment { pairs, objective })
}

/// Maps assigned slots back to tiers.
pub fn collapse(assignment: &Assignment, slot_map: &[usize], objects: usize) -> TierPlacement {
    let mut placement = TierPlacement::empty(objects);
    for &(k, i) in &assignment.pairs {
        debug_assert!(placement.tiers[k].is_none(), "object assigned twice");
        placement.tiers[k] = Some(slot_map[i]);
    }
    placement
}

/// Exhaustive optimum over all placements; limited to 8 objects and 8 slots.
pub fn brute_force(benefits: &BenefitMatrix) -> Result<Assignment> {
    let objects = benefits.objects();
    let slots = benefits.total_slots();
    if objects > 8 || slots > 8 {
        return Err(Error::BruteForceGuard { objects, slots });
    }

    fn search(
        b: &BenefitMatrix,
        k: usize,
        free: &mut [usize],
        current: &mut Vec<Option<usize>>,
        value: f64,
        best: &mut (f64, Vec<Option<usize>>),
    ) {
        if k == b.objects() {
            if value > best.0 {
                *best = (value, current.clone());
            }
            return;
        }
        current.push(None);
        search(b, k + 1, free, current, value, best);
        current.pop();
        for j in 0..b.tiers() {
            if free[j] > 0 {
                free[j] -= 1;
                current.push(Some(j));
                search(b, k + 1, free, current, value + b.get(k, j), best);
                current.pop();
                free[j] += 1;
            }
        }
    }

    let mut free = benefits.capacities.clone();
    let mut best = (0.0, vec![None; objects]);
    search(benefits, 0, &mut free, &mut Vec::new(), 0.0, &mut best);

    let offsets: Vec<usize> = benefits
        .capacities
        .iter()
        .scan(0, |acc, &c| {
            let start = *acc;
            *acc += c;
            Some(start)
        })
        .collect();
    let mut used = vec![0usize; benefits.tiers()];
    let mut pairs = Vec::new();
    for (k, t) in best.1.iter().enumerate() {
        if let Some(j) = *t {
            pairs.push((k, offsets[j] + used[j]));
            used[j] += 1;
        }
    }
    Ok(Assignment {
        pairs,
        objective: best.0,
    })
}
