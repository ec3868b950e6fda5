use serde::{Deserialize, Serialize};

use crate::data_plane::cache::{CacheAction, DeviceModel, NodeCache};
use crate::data_plane::clock::SimClock;
use crate::data_plane::workload::RequestSpec;
use crate::error::{Error, Result};
use crate::model::{NetworkModel, NodeCacheConfig, NodeId, ObjectId, RoutingTable};
use crate::policies::{Policy, RequestVisit, RttTable};
use crate::virtual_plane::ArrivalRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPlaneConfig {
    /// Slot length in seconds; slot boundaries drive slot-based policies.
    pub slot_length: f64,
    pub device: DeviceModel,
    /// Keep every cache action in the output.
    pub record_actions: bool,
}

impl Default for DataPlaneConfig {
    fn default() -> Self {
        Self {
            slot_length: 1.0,
            device: DeviceModel::default(),
            record_actions: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ServedBy {
    Source,
    Tier(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: usize,
    pub object: ObjectId,
    pub origin: NodeId,
    pub created: f64,
    /// Nodes visited, starting at the origin and ending where the request was served.
    pub path: Vec<NodeId>,
    pub served: Option<ServedBy>,
    pub completed: Option<f64>,
}

impl Request {
    pub fn delay(&self) -> Option<f64> {
        self.completed.map(|c| c - self.created)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub time: f64,
    pub node: NodeId,
    #[serde(flatten)]
    pub action: CacheAction,
    pub cost: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub requests_generated: u64,
    pub requests_completed: u64,
    /// Sum over requests of completion minus arrival, in seconds.
    pub total_delay: f64,
    pub hits_per_tier: Vec<u64>,
    pub total_hits: u64,
    pub source_served: u64,
    pub total_penalty: f64,
    pub admissions: u64,
    pub evictions: u64,
    /// Time the last request completed.
    pub makespan: f64,
    /// Total delay of the same workload without caching, when known.
    pub baseline_delay: Option<f64>,
}

impl RunMetrics {
    pub fn delay_fraction(&self) -> Option<f64> {
        self.baseline_delay.map(|b| {
            if b > 0.0 {
                self.total_delay / b
            } else {
                1.0
            }
        })
    }

    /// Share of hits served by the first tier, or 0 without hits.
    pub fn tier1_share(&self) -> f64 {
        match self.hits_per_tier.first() {
            Some(&h) if self.total_hits > 0 => h as f64 / self.total_hits as f64,
            _ => 0.0,
        }
    }

    pub fn hits(&self, tier: usize) -> u64 {
        self.hits_per_tier.get(tier).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub metrics: RunMetrics,
    pub requests: Vec<Request>,
    pub actions: Vec<ActionRecord>,
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Request(usize),
    /// Data for a request is at `path[hop]`.
    Data { req: usize, hop: usize },
    SlotEnd,
}

struct Engine<'a, 'p> {
    model: &'a NetworkModel,
    routing: &'a RoutingTable,
    policy: &'p mut (dyn Policy + 'a),
    cfg: DataPlaneConfig,
    clock: SimClock<Event>,
    caches: Vec<NodeCache>,
    link_free_at: Vec<f64>,
    rtt: RttTable,
    requests: Vec<Request>,
    arrivals: ArrivalRecord,
    metrics: RunMetrics,
    actions: Vec<ActionRecord>,
}

/// Simulates `workload` until every request has been served.
pub fn simulate<'a>(
    model: &'a NetworkModel,
    routing: &'a RoutingTable,
    caches: &[NodeCacheConfig],
    workload: &[RequestSpec],
    policy: &mut (dyn Policy + 'a),
    cfg: DataPlaneConfig,
) -> Result<RunOutput> {
    let nodes = model.node_count();
    let objects = routing.object_count();
    if caches.len() != nodes {
        return Err(Error::Tiers(format!("{} cache configs for {nodes} nodes", caches.len())));
    }
    if !(cfg.slot_length > 0.0 && cfg.slot_length.is_finite()) {
        return Err(Error::param("slot_length", "must be positive"));
    }
    let tiers = caches.iter().map(NodeCacheConfig::len).max().unwrap_or(0);
    let mut engine = Engine {
        model,
        routing,
        policy,
        cfg,
        clock: SimClock::default(),
        caches: caches
            .iter()
            .enumerate()
            .map(|(n, c)| NodeCache::new(n, c, objects))
            .collect(),
        link_free_at: vec![0.0; model.links().len()],
        rtt: RttTable::new(model.links().len()),
        requests: Vec::with_capacity(workload.len()),
        arrivals: ArrivalRecord::new(nodes, objects),
        metrics: RunMetrics {
            hits_per_tier: vec![0; tiers],
            ..RunMetrics::default()
        },
        actions: Vec::new(),
    };
    for (id, r) in workload.iter().enumerate() {
        if r.node >= nodes || r.object >= objects || !(r.time >= 0.0) {
            return Err(Error::param("workload", format!("invalid request {r:?}")));
        }
        engine.requests.push(Request {
            id,
            object: r.object,
            origin: r.node,
            created: r.time,
            path: Vec::new(),
            served: None,
            completed: None,
        });
        engine.clock.schedule(r.time, Event::Request(id));
    }
    engine.metrics.requests_generated = workload.len() as u64;
    if engine.policy.uses_slots() && !workload.is_empty() {
        engine.clock.schedule(cfg.slot_length, Event::SlotEnd);
    }
    engine.run()?;
    Ok(RunOutput {
        metrics: engine.metrics,
        requests: engine.requests,
        actions: engine.actions,
    })
}

impl Engine<'_, '_> {
    fn run(&mut self) -> Result<()> {
        while let Some((now, event)) = self.clock.pop() {
            match event {
                Event::Request(id) => self.on_request(id, now)?,
                Event::Data { req, hop } => self.on_data(req, hop, now)?,
                Event::SlotEnd => {
                    self.policy.on_slot_end(&self.arrivals)?;
                    self.arrivals.clear();
                    if self.metrics.requests_completed < self.metrics.requests_generated {
                        self.clock.schedule(now + self.cfg.slot_length, Event::SlotEnd);
                    }
                }
            }
        }
        Ok(())
    }

    fn on_request(&mut self, id: usize, now: f64) -> Result<()> {
        let object = self.requests[id].object;
        let mut node = self.requests[id].origin;
        self.arrivals.record(node, object);
        let mut path = vec![node];
        let (served, ready) = loop {
            let at_origin = path.len() == 1;
            if self.routing.source(object) == node {
                self.policy.on_request(&RequestVisit { node, object, at_origin, hit: None });
                break (ServedBy::Source, now);
            }
            if let Some(j) = self.caches[node].hit_tier(object, now) {
                self.policy.on_request(&RequestVisit { node, object, at_origin, hit: Some(j) });
                let done = self.caches[node].read(j, now, self.cfg.device);
                self.metrics.hits_per_tier[j] += 1;
                self.metrics.total_hits += 1;
                break (ServedBy::Tier(j), done);
            }
            self.policy.on_request(&RequestVisit { node, object, at_origin, hit: None });
            let candidates = self.routing.next_hops(object, node);
            let next = self
                .policy
                .forward_choice(node, object, candidates, &self.rtt)
                .filter(|b| candidates.contains(b))
                .ok_or(Error::NoRoute { node, object })?;
            path.push(next);
            node = next;
        };
        if served == ServedBy::Source {
            self.metrics.source_served += 1;
        }
        let hop = path.len() - 1;
        let r = &mut self.requests[id];
        r.path = path;
        r.served = Some(served);
        self.clock.schedule(ready, Event::Data { req: id, hop });
        Ok(())
    }

    fn on_data(&mut self, id: usize, hop: usize, now: f64) -> Result<()> {
        let r = &self.requests[id];
        let node = r.path[hop];
        let object = r.object;
        if hop + 1 < r.path.len() {
            let link = self.model.link_id(node, r.path[hop + 1]).expect("path follows links");
            self.rtt.record(link, now - r.created);
            if !self.caches[node].contains(object) {
                self.admit(node, object, now)?;
            }
        }
        if hop == 0 {
            let r = &mut self.requests[id];
            r.completed = Some(now);
            self.metrics.requests_completed += 1;
            self.metrics.total_delay += now - r.created;
            self.metrics.makespan = self.metrics.makespan.max(now);
            return Ok(());
        }
        let prev = self.requests[id].path[hop - 1];
        let link = self.model.link_id(node, prev).expect("path follows links");
        let depart = now.max(self.link_free_at[link]) + 1.0 / self.model.link(link).capacity;
        self.link_free_at[link] = depart;
        self.clock.schedule(depart, Event::Data { req: id, hop: hop - 1 });
        Ok(())
    }

    fn admit(&mut self, node: NodeId, object: ObjectId, now: f64) -> Result<()> {
        let actions = self.policy.on_data_arrival(&self.caches[node], object, now);
        for action in actions {
            let applied = self.caches[node].apply(action, object, now, self.cfg.device)?;
            match action {
                CacheAction::Admit { .. } => self.metrics.admissions += 1,
                CacheAction::Evict { .. } => self.metrics.evictions += 1,
                CacheAction::Drop { .. } => {}
            }
            self.metrics.total_penalty += applied.cost;
            if self.cfg.record_actions {
                self.actions.push(ActionRecord {
                    time: now,
                    node,
                    action,
                    cost: applied.cost,
                });
            }
        }
        self.caches[node].flush_buffer();
        Ok(())
    }
}
