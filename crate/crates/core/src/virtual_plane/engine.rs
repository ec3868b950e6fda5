use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data_plane::workload::generate_workload;
use crate::error::{Error, Result};
use crate::model::{NetworkModel, NodeCacheConfig, ObjectCatalog, RoutingTable};
use crate::rap::TierPlacement;
use crate::virtual_plane::ops::{
    backpressure_forwarding, compute_benefits, compute_penalties, decide_caching_where,
    evolve_queues, retain_zero_benefit, settle_transmissions,
};
use crate::virtual_plane::state::{
    ArrivalRecord, ForwardingAllocation, PenaltyLedger, PolicyParams, VirtualPlaneState,
};

/// Result of executing one slot.
#[derive(Clone, Debug)]
pub struct SlotOutcome {
    pub slot: u64,
    pub allocation: ForwardingAllocation,
    /// Total penalty of the slot.
    pub penalty: f64,
    /// Total VIP backlog at the end of the slot.
    pub backlog: f64,
}

/// Slotted virtual control plane over a fixed network.
///
/// Each slot runs caching, forwarding, settlement, penalty accounting and queue
/// evolution in that order, all decisions reading the counts observed at slot start.
pub struct VirtualPlane<'a> {
    model: &'a NetworkModel,
    routing: &'a RoutingTable,
    caches: &'a [NodeCacheConfig],
    params: PolicyParams,
    state: VirtualPlaneState,
    ledger: PenaltyLedger,
}

impl<'a> VirtualPlane<'a> {
    pub fn new(
        model: &'a NetworkModel,
        routing: &'a RoutingTable,
        caches: &'a [NodeCacheConfig],
        params: PolicyParams,
    ) -> Result<Self> {
        if caches.len() != model.node_count() {
            return Err(Error::Tiers(format!(
                "{} cache configs for {} nodes",
                caches.len(),
                model.node_count()
            )));
        }
        Ok(Self {
            model,
            routing,
            caches,
            params,
            state: VirtualPlaneState::new(model.node_count(), routing.object_count()),
            ledger: PenaltyLedger::default(),
        })
    }

    pub fn state(&self) -> &VirtualPlaneState {
        &self.state
    }

    pub fn ledger(&self) -> &PenaltyLedger {
        &self.ledger
    }

    pub fn params(&self) -> PolicyParams {
        self.params
    }

    /// Executes the current slot with `arrivals` entering during it.
    pub fn step(&mut self, arrivals: &ArrivalRecord) -> Result<SlotOutcome> {
        let nodes = self.model.node_count();
        let mut placement = Vec::with_capacity(nodes);
        for n in 0..nodes {
            if self.caches[n].total_slots() == 0 {
                placement.push(TierPlacement::empty(self.state.objects()));
                continue;
            }
            let benefits = compute_benefits(&self.state, n, self.params, &self.caches[n]);
            let routing = self.routing;
            let mut p = decide_caching_where(&benefits, |k| routing.source(k) != n)?;
            retain_zero_benefit(&benefits, &self.state.placement[n], &mut p);
            placement.push(p);
        }

        let mut allocation = backpressure_forwarding(&self.state, self.routing, self.model);
        settle_transmissions(&self.state, &mut allocation, self.model);

        let entries = (0..nodes)
            .flat_map(|n| {
                compute_penalties(n, &self.state.placement[n], &placement[n], &self.caches[n])
            })
            .collect();

        let next = evolve_queues(
            &self.state,
            &allocation,
            arrivals,
            &placement,
            self.caches,
            self.routing,
            self.model,
        );
        let backlog = next.total_backlog();
        self.ledger.close_slot(entries, backlog);
        let slot = self.state.slot;
        self.state = next;
        Ok(SlotOutcome {
            slot,
            allocation,
            penalty: self.ledger.slot_total,
            backlog,
        })
    }
}

/// One row of the per-slot series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotRow {
    pub slot: u64,
    pub total_backlog: f64,
    pub total_penalty: f64,
    pub cumavg_backlog: f64,
    pub cumavg_penalty: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VirtualSeries {
    pub rows: Vec<SlotRow>,
}

impl VirtualSeries {
    pub fn final_averages(&self) -> (f64, f64) {
        self.rows
            .last()
            .map_or((0.0, 0.0), |r| (r.cumavg_backlog, r.cumavg_penalty))
    }

    /// CSV with header `slot,total_backlog,total_penalty,cumavg_backlog,cumavg_penalty`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Everything needed to run the virtual plane on its own.
pub struct VirtualScenario<'a> {
    pub model: &'a NetworkModel,
    pub catalog: &'a ObjectCatalog,
    pub routing: &'a RoutingTable,
    pub caches: &'a [NodeCacheConfig],
    pub params: PolicyParams,
    /// Slot length in seconds of workload time.
    pub slot_length: f64,
    pub seed: u64,
}

/// Runs `slots` slots with Poisson arrivals and returns the backlog/penalty series.
pub fn run_virtual(plan: &VirtualScenario<'_>, slots: u64) -> Result<VirtualSeries> {
    if slots == 0 {
        return Err(Error::param("slots", "must be at least 1"));
    }
    let nodes = plan.model.node_count();
    let objects = plan.catalog.len();
    let duration = slots as f64 * plan.slot_length;
    let workload = generate_workload(plan.catalog, nodes, duration, plan.seed)?;

    let mut vp = VirtualPlane::new(plan.model, plan.routing, plan.caches, plan.params)?;
    let mut arrivals = ArrivalRecord::new(nodes, objects);
    let mut series = VirtualSeries::default();
    let mut next_request = 0;
    for t in 1..=slots {
        arrivals.clear();
        let end = t as f64 * plan.slot_length;
        while next_request < workload.len() && workload[next_request].time < end {
            let r = workload[next_request];
            arrivals.record(r.node, r.object);
            next_request += 1;
        }
        let out = vp.step(&arrivals)?;
        let ledger = vp.ledger();
        series.rows.push(SlotRow {
            slot: out.slot,
            total_backlog: out.backlog,
            total_penalty: out.penalty,
            cumavg_backlog: ledger.average_backlog(),
            cumavg_penalty: ledger.average_penalty(),
        });
    }
    Ok(series)
}
