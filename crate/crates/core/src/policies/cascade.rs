//! Cost-aware admission shared by the VIP data-plane policy and adapted LFU.

use crate::data_plane::{CacheAction, NodeCache};
use crate::model::{ObjectId, TierSpec};

/// Gain of placing an object with score `score` into `tier`.
///
/// When the tier is full the placement replaces the resident with the lowest score,
/// `score_min`, and pays both the admission and the eviction cost.
pub fn cache_benefit(score: f64, score_min: f64, tier: &TierSpec, full: bool, omega: f64) -> f64 {
    if full {
        tier.readout_rate * (score - score_min) - omega * (tier.admission_cost + tier.eviction_cost)
    } else {
        tier.readout_rate * score - omega * tier.admission_cost
    }
}

/// Lowest-scoring resident of tier `j`; ties go to the lowest object id.
pub fn weakest_resident(
    cache: &NodeCache,
    j: usize,
    score: &impl Fn(ObjectId) -> f64,
) -> Option<(ObjectId, f64)> {
    cache.tier(j).entries().iter().fold(None, |best, e| {
        let s = score(e.object);
        match best {
            Some((b, bs)) if bs < s || (bs == s && b < e.object) => best,
            _ => Some((e.object, s)),
        }
    })
}

/// Turns a placement chain into a buffer-safe action list.
///
/// `placements[0]` is the arriving object; each later entry is the resident displaced
/// from the previous entry's tier. `dropped` is displaced from the last tier and leaves.
/// Evictions are emitted deepest-first so the buffer never holds two objects.
pub fn chain_actions(placements: &[(ObjectId, usize)], dropped: Option<ObjectId>) -> Vec<CacheAction> {
    let mut out = Vec::with_capacity(2 * placements.len() + 2);
    if let (Some(x), Some(&(_, tier))) = (dropped, placements.last()) {
        out.push(CacheAction::Evict { object: x, tier });
        out.push(CacheAction::Drop { object: x });
    }
    for i in (0..placements.len()).rev() {
        let (object, tier) = placements[i];
        if i > 0 {
            out.push(CacheAction::Evict {
                object,
                tier: placements[i - 1].1,
            });
        }
        out.push(CacheAction::Admit { object, tier });
    }
    out
}

/// Admission with replacement cascade for an object arriving at `cache`.
///
/// The object goes to the tier with the largest positive benefit. A displaced
/// resident then tries the tiers not yet used by this arrival, and so on; the first
/// object with no positive benefit leaves the node. Each tier admits at most once,
/// so the cascade has at most one step per tier.
pub fn cost_aware_admission(
    cache: &NodeCache,
    object: ObjectId,
    omega: f64,
    score: impl Fn(ObjectId) -> f64,
) -> Vec<CacheAction> {
    let tiers = cache.tier_count();
    let mut used = vec![false; tiers];
    let mut placements = Vec::new();
    let mut current = object;
    let mut dropped = None;
    loop {
        let s = score(current);
        let mut best: Option<(usize, f64, Option<ObjectId>)> = None;
        for (j, t) in cache.tiers().iter().enumerate() {
            if used[j] || t.spec.capacity == 0 {
                continue;
            }
            let full = t.is_full();
            let (victim, min) = if full {
                let (v, m) = weakest_resident(cache, j, &score).expect("full tier has residents");
                (Some(v), m)
            } else {
                (None, 0.0)
            };
            let cb = cache_benefit(s, min, &t.spec, full, omega);
            if cb > 0.0 && best.is_none_or(|(_, b, _)| cb > b) {
                best = Some((j, cb, victim));
            }
        }
        let Some((j, _, victim)) = best else {
            if !placements.is_empty() {
                dropped = Some(current);
            }
            break;
        };
        used[j] = true;
        placements.push((current, j));
        match victim {
            Some(v) => current = v,
            None => break,
        }
    }
    chain_actions(&placements, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_plane::DeviceModel;
    use crate::model::NodeCacheConfig;

    fn tier(capacity: usize, rate: f64, ca: f64, ce: f64) -> TierSpec {
        TierSpec {
            capacity,
            readout_rate: rate,
            write_rate: rate,
            admission_cost: ca,
            eviction_cost: ce,
        }
    }

    #[test]
    fn benefit_full_and_free() {
        assert_eq!(cache_benefit(5.0, 3.0, &tier(1, 20.0, 4.0, 2.0), true, 1.0), 34.0);
        assert_eq!(cache_benefit(0.5, 0.0, &tier(1, 10.0, 2.0, 1.0), false, 0.0), 5.0);
        assert!(cache_benefit(2.0, 2.0, &tier(1, 10.0, 2.0, 1.0), true, 0.1) < 0.0);
    }

    #[test]
    fn chain_orders_evictions_deepest_first() {
        let a = chain_actions(&[(9, 0), (4, 1)], Some(7));
        assert_eq!(
            a,
            vec![
                CacheAction::Evict { object: 7, tier: 1 },
                CacheAction::Drop { object: 7 },
                CacheAction::Evict { object: 4, tier: 0 },
                CacheAction::Admit { object: 4, tier: 1 },
                CacheAction::Admit { object: 9, tier: 0 },
            ]
        );
    }

    fn cache(caps: (usize, usize)) -> NodeCache {
        let cfg = NodeCacheConfig::new(vec![tier(caps.0, 20.0, 4.0, 2.0), tier(caps.1, 10.0, 2.0, 1.0)])
            .unwrap();
        NodeCache::new(0, &cfg, 10)
    }

    #[test]
    fn non_positive_benefit_admits_nothing() {
        let c = cache((1, 1));
        assert!(cost_aware_admission(&c, 3, 1.0, |_| 0.0).is_empty());
    }

    #[test]
    fn free_tier_takes_best_benefit() {
        let c = cache((1, 1));
        let a = cost_aware_admission(&c, 3, 0.0, |_| 1.0);
        assert_eq!(a, vec![CacheAction::Admit { object: 3, tier: 0 }]);
    }

    #[test]
    fn displaced_resident_cascades_to_second_tier() {
        let mut c = cache((1, 1));
        c.apply(CacheAction::Admit { object: 1, tier: 0 }, 1, 0.0, DeviceModel::Shared)
            .unwrap();
        let score = |k: ObjectId| if k == 2 { 5.0 } else { 1.0 };
        let a = cost_aware_admission(&c, 2, 0.0, score);
        assert_eq!(
            a,
            vec![
                CacheAction::Evict { object: 1, tier: 0 },
                CacheAction::Admit { object: 1, tier: 1 },
                CacheAction::Admit { object: 2, tier: 0 },
            ]
        );
        let mut penalty = 0.0;
        for act in a {
            penalty += c.apply(act, 2, 1.0, DeviceModel::Shared).unwrap().cost;
        }
        assert_eq!(penalty, 4.0 + 2.0 + 2.0);
    }
}
