use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data_plane::{
    generate_workload, simulate, DataPlaneConfig, DeviceModel, RequestSpec, RunMetrics, RunOutput,
};
use crate::error::{Error, Result};
use crate::model::{
    assign_sources, build_routing, NetworkModel, NodeCacheConfig, ObjectCatalog, RoutingTable,
    TierSpec, TopologySpec,
};
use crate::policies::{build_policy, NoCachePolicy, PolicyKind};
use crate::virtual_plane::{run_virtual, PolicyParams, VirtualScenario, VirtualSeries};

/// Every parameter of one experiment, loadable from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub topology: TopologySpec,
    /// Objects/s, used for edges without an explicit capacity.
    pub link_capacity: f64,
    pub objects: usize,
    pub zipf_exponent: f64,
    /// Requests/s at each node.
    pub arrival_rate: f64,
    /// Fastest first; the same tiers are installed at every node.
    pub tiers: Vec<TierSpec>,
    pub omega: f64,
    /// Window of the windowed VIP statistics, in slots.
    pub window: usize,
    /// Seconds.
    pub slot_length: f64,
    /// Requests are generated over `[0, duration)` seconds.
    pub duration: f64,
    pub seeds: Vec<u64>,
    pub policy: PolicyKind,
    #[serde(default)]
    pub device: DeviceModel,
}

/// Link capacity 10, 1000 objects, Zipf 0.75, 10 requests/s per node, two tiers
/// (5 objects at 20/s costing 4/2, and 100 objects at 10/s costing 2/1), window 100,
/// 1 s slots, 100 s of requests, five seeds, VIP policy with zero penalty weight.
pub fn preset_paper_defaults() -> ScenarioConfig {
    ScenarioConfig {
        topology: TopologySpec::Abilene,
        link_capacity: 10.0,
        objects: 1000,
        zipf_exponent: 0.75,
        arrival_rate: 10.0,
        tiers: vec![
            TierSpec {
                capacity: 5,
                readout_rate: 20.0,
                write_rate: 20.0,
                admission_cost: 4.0,
                eviction_cost: 2.0,
            },
            TierSpec {
                capacity: 100,
                readout_rate: 10.0,
                write_rate: 10.0,
                admission_cost: 2.0,
                eviction_cost: 1.0,
            },
        ],
        omega: 0.0,
        window: 100,
        slot_length: 1.0,
        duration: 100.0,
        seeds: vec![1, 2, 3, 4, 5],
        policy: PolicyKind::Vip,
        device: DeviceModel::Shared,
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::param("seeds", "must not be empty"));
        }
        if self.objects == 0 {
            return Err(Error::EmptyCatalog);
        }
        if self.window == 0 {
            return Err(Error::param("window", "must be at least 1"));
        }
        if !(self.slot_length > 0.0 && self.duration > 0.0) {
            return Err(Error::param("duration", "slot length and duration must be positive"));
        }
        PolicyParams::new(self.omega)?;
        NodeCacheConfig::new(self.tiers.clone())?;
        if let TopologySpec::File(p) = &self.topology {
            if !p.exists() {
                return Err(Error::io(p, std::io::ErrorKind::NotFound.into()));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        // Topology files are resolved next to the scenario file.
        if let TopologySpec::File(p) = &mut cfg.topology {
            if p.is_relative() {
                if let Some(dir) = origin.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Hex SHA-256 of the canonical TOML form.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn tier2_capacity(&self) -> Option<usize> {
        self.tiers.get(1).map(|t| t.capacity)
    }

    pub fn with_tier2_capacity(mut self, capacity: usize) -> Self {
        if let Some(t) = self.tiers.get_mut(1) {
            t.capacity = capacity;
        }
        self
    }

    /// Short identifier of the (config, seed) pair.
    pub fn run_id(&self, seed: u64) -> String {
        format!(
            "{}-{}-w{}-c{}-s{seed}",
            self.topology.label(),
            self.policy,
            self.omega,
            self.tier2_capacity().map_or("na".into(), |c| c.to_string()),
        )
    }
}

/// Network, catalog, routing and caches materialized for one seed.
pub struct Instance {
    pub model: NetworkModel,
    pub catalog: ObjectCatalog,
    pub routing: RoutingTable,
    pub caches: Vec<NodeCacheConfig>,
    pub seed: u64,
}

impl Instance {
    pub fn build(cfg: &ScenarioConfig, seed: u64) -> Result<Self> {
        let model = cfg.topology.build(cfg.link_capacity)?;
        let sources = assign_sources(&model, cfg.objects, seed)?;
        let catalog = ObjectCatalog::new(sources, cfg.zipf_exponent, cfg.arrival_rate)?;
        let routing = build_routing(&model, &catalog)?;
        let caches = vec![NodeCacheConfig::new(cfg.tiers.clone())?; model.node_count()];
        Ok(Self {
            model,
            catalog,
            routing,
            caches,
            seed,
        })
    }

    pub fn workload(&self, cfg: &ScenarioConfig) -> Result<Vec<RequestSpec>> {
        generate_workload(&self.catalog, self.model.node_count(), cfg.duration, self.seed)
    }

    /// Runs `policy` on `workload`.
    pub fn simulate(
        &self,
        cfg: &ScenarioConfig,
        policy: PolicyKind,
        workload: &[RequestSpec],
        record_actions: bool,
    ) -> Result<RunOutput> {
        let params = PolicyParams::new(cfg.omega)?;
        let dp = DataPlaneConfig {
            slot_length: cfg.slot_length,
            device: cfg.device,
            record_actions,
        };
        let mut p = build_policy(
            policy,
            &self.model,
            &self.routing,
            &self.caches,
            params,
            cfg.window,
            self.seed,
        )?;
        simulate(&self.model, &self.routing, &self.caches, workload, p.as_mut(), dp)
    }

    /// Total delay of `workload` with caching disabled.
    pub fn baseline_delay(&self, cfg: &ScenarioConfig, workload: &[RequestSpec]) -> Result<f64> {
        let mut p = NoCachePolicy::new(&self.model);
        let dp = DataPlaneConfig {
            slot_length: cfg.slot_length,
            device: cfg.device,
            record_actions: false,
        };
        Ok(simulate(&self.model, &self.routing, &self.caches, workload, &mut p, dp)?
            .metrics
            .total_delay)
    }

    /// Virtual plane alone for `slots` slots.
    pub fn run_virtual(&self, cfg: &ScenarioConfig, slots: u64) -> Result<VirtualSeries> {
        let plan = VirtualScenario {
            model: &self.model,
            catalog: &self.catalog,
            routing: &self.routing,
            caches: &self.caches,
            params: PolicyParams::new(cfg.omega)?,
            slot_length: cfg.slot_length,
            seed: self.seed,
        };
        run_virtual(&plan, slots)
    }
}

/// Runs one (config, seed) pair, with the no-caching baseline filled in.
pub fn run_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<RunMetrics> {
    let wrap = |e| Error::Run {
        config: cfg.run_id(seed),
        source: Box::new(e),
    };
    let inst = Instance::build(cfg, seed).map_err(wrap)?;
    let workload = inst.workload(cfg).map_err(wrap)?;
    let mut metrics = inst.simulate(cfg, cfg.policy, &workload, false).map_err(wrap)?.metrics;
    metrics.baseline_delay = Some(inst.baseline_delay(cfg, &workload).map_err(wrap)?);
    Ok(metrics)
}
