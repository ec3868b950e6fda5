//! The per-slot operations of the virtual control plane.

use crate::error::Result;
use crate::model::{NetworkModel, NodeCacheConfig, NodeId, ObjectId, RoutingTable};
use crate::rap::{collapse, expand, solve, BenefitMatrix, TierPlacement};
use crate::virtual_plane::state::{
    ArrivalRecord, ForwardingAllocation, LinkFlow, PenaltyEntry, PolicyParams, VirtualPlaneState,
};

/// Caching benefit of every (object, tier) pair at `node`, given the previous slot's states.
pub fn compute_benefits(
    state: &VirtualPlaneState,
    node: NodeId,
    params: PolicyParams,
    tiers: &NodeCacheConfig,
) -> BenefitMatrix {
    let counts = state.node_counts(node);
    let prev = &state.placement[node];
    let specs = tiers.tiers();
    let mut values = Vec::with_capacity(counts.len() * specs.len());
    for (k, &v) in counts.iter().enumerate() {
        for (j, t) in specs.iter().enumerate() {
            let b = if prev.is_cached(k, j) {
                t.readout_rate * v + params.omega * t.eviction_cost
            } else {
                t.readout_rate * v - params.omega * t.admission_cost
            };
            values.push(b);
        }
    }
    BenefitMatrix::new(counts.len(), values, tiers.capacities()).expect("shape matches tiers")
}

/// Optimal placement for one node's benefit matrix.
pub fn decide_caching(benefits: &BenefitMatrix) -> Result<TierPlacement> {
    decide_caching_where(benefits, |_| true)
}

/// Optimal placement restricted to objects for which `eligible` holds.
///
/// Before the assignment is solved, the instance is reduced without changing its
/// optimum: objects whose benefits are all non-positive are dropped, and when more
/// candidates remain than slots, only the union of the top-`slots` objects of each
/// tier column is kept.
pub fn decide_caching_where(
    benefits: &BenefitMatrix,
    eligible: impl Fn(ObjectId) -> bool,
) -> Result<TierPlacement> {
    let tiers = benefits.tiers();
    let slots = benefits.total_slots();
    let mut candidates: Vec<ObjectId> = (0..benefits.objects())
        .filter(|&k| eligible(k) && (0..tiers).any(|j| benefits.get(k, j) > 0.0))
        .collect();

    if candidates.len() > slots {
        let mut keep = vec![false; benefits.objects()];
        let mut column = candidates.clone();
        for j in 0..tiers {
            column.select_nth_unstable_by(slots - 1, |&a, &b| {
                benefits
                    .get(b, j)
                    .total_cmp(&benefits.get(a, j))
                    .then(a.cmp(&b))
            });
            for &k in &column[..slots] {
                keep[k] = true;
            }
        }
        candidates.retain(|&k| keep[k]);
    }

    let mut placement = TierPlacement::empty(benefits.objects());
    if candidates.is_empty() {
        return Ok(placement);
    }
    let values = candidates
        .iter()
        .flat_map(|&k| (0..tiers).map(move |j| benefits.get(k, j)))
        .collect();
    let reduced = BenefitMatrix::new(candidates.len(), values, benefits.capacities().to_vec())?;
    let expanded = expand(&reduced);
    let assignment = solve(&expanded)?;
    let local = collapse(&assignment, expanded.slot_map(), candidates.len());
    for (i, tier) in local.tiers.into_iter().enumerate() {
        placement.tiers[candidates[i]] = tier;
    }
    Ok(placement)
}

/// Keeps previously cached objects whose benefit in their old tier is exactly zero,
/// as long as that tier still has room. The objective is unchanged.
pub fn retain_zero_benefit(
    benefits: &BenefitMatrix,
    prev: &TierPlacement,
    placement: &mut TierPlacement,
) {
    let mut free: Vec<usize> = benefits
        .capacities()
        .iter()
        .enumerate()
        .map(|(j, &c)| c.saturating_sub(placement.count_in(j)))
        .collect();
    for (k, &before) in prev.tiers.iter().enumerate() {
        if let Some(j) = before {
            if placement.tiers[k].is_none() && free[j] > 0 && benefits.get(k, j) == 0.0 {
                placement.tiers[k] = Some(j);
                free[j] -= 1;
            }
        }
    }
}

/// Admission and eviction penalties for the transition `prev -> new` at one node.
pub fn compute_penalties(
    node: NodeId,
    prev: &TierPlacement,
    new: &TierPlacement,
    tiers: &NodeCacheConfig,
) -> Vec<PenaltyEntry> {
    let specs = tiers.tiers();
    let mut entries = Vec::new();
    for (k, (&before, &after)) in prev.tiers.iter().zip(&new.tiers).enumerate() {
        if before == after {
            continue;
        }
        if let Some(j) = before {
            entries.push(PenaltyEntry {
                node,
                object: k,
                tier: j,
                amount: specs[j].eviction_cost,
            });
        }
        if let Some(j) = after {
            entries.push(PenaltyEntry {
                node,
                object: k,
                tier: j,
                amount: specs[j].admission_cost,
            });
        }
    }
    entries
}

/// Backpressure allocation: each link goes to its largest positive differential.
///
/// Ties go to the lowest object id.
pub fn backpressure_forwarding(
    state: &VirtualPlaneState,
    routing: &RoutingTable,
    model: &NetworkModel,
) -> ForwardingAllocation {
    let flows = model
        .links()
        .iter()
        .enumerate()
        .map(|(id, link)| {
            let from = state.node_counts(link.from);
            let to = state.node_counts(link.to);
            let mut best: Option<(ObjectId, f64)> = None;
            for &k in routing.objects_on_link(id) {
                let w = from[k] - to[k];
                if best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((k, w));
                }
            }
            let (object, differential) = best?;
            (differential > 0.0).then(|| LinkFlow {
                object,
                allocated: model.link(model.reverse(id)).capacity,
                differential,
                sent: 0.0,
            })
        })
        .collect();
    ForwardingAllocation { flows }
}

/// Fills in the VIPs actually sent on each allocated link.
///
/// For each (node, object), links are drained in descending differential and then
/// ascending receiver id, each taking as much of the remaining backlog as allowed.
pub fn settle_transmissions(
    state: &VirtualPlaneState,
    allocation: &mut ForwardingAllocation,
    model: &NetworkModel,
) {
    let mut order: Vec<(NodeId, ObjectId, f64, NodeId, usize)> = allocation
        .flows
        .iter()
        .enumerate()
        .filter_map(|(id, f)| {
            f.map(|f| {
                let l = model.link(id);
                (l.from, f.object, f.differential, l.to, id)
            })
        })
        .collect();
    order.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then(b.2.total_cmp(&a.2))
            .then(a.3.cmp(&b.3))
    });
    let mut current = None;
    let mut remaining = 0.0;
    for (node, object, _, _, id) in order {
        if current != Some((node, object)) {
            current = Some((node, object));
            remaining = state.count(node, object);
        }
        let flow = allocation.flows[id].as_mut().expect("listed flows exist");
        flow.sent = flow.allocated.min(remaining);
        remaining -= flow.sent;
    }
}

/// Next-slot VIP counts, using actual incoming transmissions; source counts stay zero.
pub fn evolve_queues(
    state: &VirtualPlaneState,
    allocation: &ForwardingAllocation,
    arrivals: &ArrivalRecord,
    new_placement: &[TierPlacement],
    caches: &[NodeCacheConfig],
    routing: &RoutingTable,
    model: &NetworkModel,
) -> VirtualPlaneState {
    let objects = state.objects();
    let nodes = state.nodes();
    let mut out_allocated = vec![0.0; nodes * objects];
    let mut in_sent = vec![0.0; nodes * objects];
    for (id, flow) in allocation.flows.iter().enumerate() {
        if let Some(f) = flow {
            let l = model.link(id);
            out_allocated[l.from * objects + f.object] += f.allocated;
            in_sent[l.to * objects + f.object] += f.sent;
        }
    }

    let mut next = VirtualPlaneState::new(nodes, objects);
    next.slot = state.slot + 1;
    next.placement = new_placement.to_vec();
    let counts = next.counts_mut();
    for n in 0..nodes {
        let specs = caches[n].tiers();
        let placement = &new_placement[n];
        for k in 0..objects {
            let i = n * objects + k;
            if routing.source(k) == n {
                counts[i] = 0.0;
                continue;
            }
            let drain = placement.tiers[k].map_or(0.0, |j| specs[j].readout_rate);
            let left = (state.count(n, k) - out_allocated[i]).max(0.0);
            counts[i] = (left + arrivals.get(n, k) as f64 + in_sent[i] - drain).max(0.0);
        }
    }
    next
}
