use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data_plane::RunMetrics;
use crate::error::{Error, Result};
use crate::experiments::scenario::{Instance, ScenarioConfig};
use crate::model::TopologySpec;
use crate::policies::PolicyKind;
use crate::virtual_plane::SlotRow;

/// Values swept for one policy. Empty axes keep the base value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyAxis {
    pub policy: PolicyKind,
    #[serde(default)]
    pub omegas: Vec<f64>,
    #[serde(default)]
    pub tier2_capacities: Vec<usize>,
}

/// A base scenario expanded over topologies and per-policy axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    /// Defaults to the base topology.
    #[serde(default)]
    pub topologies: Vec<TopologySpec>,
    pub policies: Vec<PolicyAxis>,
    /// Run the virtual plane alone for this many slots instead of the data plane.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_slots: Option<u64>,
}

fn strictly_sorted<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl SweepSpec {
    pub fn new(base: ScenarioConfig, policies: Vec<PolicyAxis>) -> Self {
        Self {
            base,
            topologies: Vec::new(),
            policies,
            virtual_slots: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.policies.is_empty() {
            return Err(Error::param("policies", "at least one policy axis is required"));
        }
        for a in &self.policies {
            if !strictly_sorted(&a.omegas) {
                return Err(Error::param("omegas", format!("{} values must be distinct and sorted", a.policy)));
            }
            if !strictly_sorted(&a.tier2_capacities) {
                return Err(Error::param(
                    "tier2_capacities",
                    format!("{} values must be distinct and sorted", a.policy),
                ));
            }
            if self.virtual_slots.is_some() && a.policy != PolicyKind::Vip {
                return Err(Error::param("virtual_slots", "virtual sweeps take only the vip policy"));
            }
        }
        let mut labels: Vec<String> = self.topology_list().iter().map(|t| t.label()).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("topologies", "topology labels must be distinct"));
        }
        if self.virtual_slots == Some(0) {
            return Err(Error::param("virtual_slots", "must be positive"));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let mut spec: Self = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        let dir = origin.parent().unwrap_or(Path::new(""));
        for t in spec.topologies.iter_mut().chain([&mut spec.base.topology]) {
            if let TopologySpec::File(p) = t {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path)
    }

    fn topology_list(&self) -> Vec<TopologySpec> {
        if self.topologies.is_empty() {
            vec![self.base.topology.clone()]
        } else {
            self.topologies.clone()
        }
    }

    /// Every configuration of the sweep, topology-major, in axis order.
    pub fn configs(&self) -> Vec<ScenarioConfig> {
        let mut out = Vec::new();
        for topo in self.topology_list() {
            for axis in &self.policies {
                let omegas = if axis.omegas.is_empty() { vec![self.base.omega] } else { axis.omegas.clone() };
                let caps: Vec<Option<usize>> = if axis.tier2_capacities.is_empty() {
                    vec![None]
                } else {
                    axis.tier2_capacities.iter().copied().map(Some).collect()
                };
                for &omega in &omegas {
                    for &cap in &caps {
                        let mut cfg = self.base.clone();
                        cfg.topology = topo.clone();
                        cfg.policy = axis.policy;
                        cfg.omega = omega;
                        if let Some(c) = cap {
                            cfg = cfg.with_tier2_capacity(c);
                        }
                        out.push(cfg);
                    }
                }
            }
        }
        out
    }
}

/// One data-plane run of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub topology: String,
    pub policy: PolicyKind,
    pub omega: f64,
    pub tier2_capacity: Option<usize>,
    pub seed: u64,
    pub metrics: RunMetrics,
}

/// One virtual-plane run of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualRecord {
    pub run_id: String,
    pub topology: String,
    pub omega: f64,
    pub tier2_capacity: Option<usize>,
    pub seed: u64,
    pub rows: Vec<SlotRow>,
}

/// Per-run CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub run_id: String,
    pub topology: String,
    pub policy: PolicyKind,
    pub omega: f64,
    pub tier2_capacity: Option<usize>,
    pub seed: u64,
    pub total_delay: f64,
    pub delay_fraction: Option<f64>,
    pub hits_t1: u64,
    pub hits_t2: u64,
    pub total_penalty: f64,
}

impl From<&RunRecord> for SummaryRow {
    fn from(r: &RunRecord) -> Self {
        Self {
            run_id: r.run_id.clone(),
            topology: r.topology.clone(),
            policy: r.policy,
            omega: r.omega,
            tier2_capacity: r.tier2_capacity,
            seed: r.seed,
            total_delay: r.metrics.total_delay,
            delay_fraction: r.metrics.delay_fraction(),
            hits_t1: r.metrics.hits(0),
            hits_t2: r.metrics.hits(1),
            total_penalty: r.metrics.total_penalty,
        }
    }
}

/// Mean and sample standard deviation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

/// Seed aggregate of one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub topology: String,
    pub policy: PolicyKind,
    pub omega: f64,
    pub tier2_capacity: Option<usize>,
    pub seeds: usize,
    pub total_delay: Stat,
    pub delay_fraction: Stat,
    pub hits_t1: Stat,
    pub hits_t2: Stat,
    pub total_hits: Stat,
    pub tier1_share: Stat,
    pub total_penalty: Stat,
}

#[derive(Serialize)]
struct AggregateCsv<'a> {
    topology: &'a str,
    policy: PolicyKind,
    omega: f64,
    tier2_capacity: Option<usize>,
    seeds: usize,
    total_delay_mean: f64,
    total_delay_std: f64,
    delay_fraction_mean: f64,
    delay_fraction_std: f64,
    hits_t1_mean: f64,
    hits_t1_std: f64,
    hits_t2_mean: f64,
    hits_t2_std: f64,
    tier1_share_mean: f64,
    tier1_share_std: f64,
    total_penalty_mean: f64,
    total_penalty_std: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchResults {
    pub runs: Vec<RunRecord>,
    pub virtual_runs: Vec<VirtualRecord>,
}

impl BatchResults {
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.runs.iter().map(SummaryRow::from).collect()
    }

    /// Per-configuration aggregates in first-appearance order.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut order: Vec<(String, PolicyKind, u64, Option<usize>)> = Vec::new();
        let mut groups: HashMap<(String, PolicyKind, u64, Option<usize>), Vec<&RunRecord>> = HashMap::new();
        for r in &self.runs {
            let key = (r.topology.clone(), r.policy, r.omega.to_bits(), r.tier2_capacity);
            groups
                .entry(key.clone())
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(r);
        }
        order
            .into_iter()
            .map(|key| {
                let g = &groups[&key];
                let stat = |f: &dyn Fn(&RunMetrics) -> f64| Stat::of(&g.iter().map(|r| f(&r.metrics)).collect::<Vec<_>>());
                Aggregate {
                    topology: key.0.clone(),
                    policy: key.1,
                    omega: f64::from_bits(key.2),
                    tier2_capacity: key.3,
                    seeds: g.len(),
                    total_delay: stat(&|m| m.total_delay),
                    delay_fraction: stat(&|m| m.delay_fraction().unwrap_or(f64::NAN)),
                    hits_t1: stat(&|m| m.hits(0) as f64),
                    hits_t2: stat(&|m| m.hits(1) as f64),
                    total_hits: stat(&|m| m.total_hits as f64),
                    tier1_share: stat(&|m| m.tier1_share()),
                    total_penalty: stat(&|m| m.total_penalty),
                }
            })
            .collect()
    }

    pub fn find(&self, topology: &str, policy: PolicyKind) -> impl Iterator<Item = Aggregate> + '_ {
        let topology = topology.to_string();
        self.aggregates()
            .into_iter()
            .filter(move |a| a.topology == topology && a.policy == policy)
    }

    pub fn write_summary_csv(&self, w: impl std::io::Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in self.summary_rows() {
            out.serialize(row)?;
        }
        out.flush().map_err(|e| Error::io("summary csv", e))?;
        Ok(())
    }

    pub fn write_aggregate_csv(&self, w: impl std::io::Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for a in self.aggregates() {
            out.serialize(AggregateCsv {
                topology: &a.topology,
                policy: a.policy,
                omega: a.omega,
                tier2_capacity: a.tier2_capacity,
                seeds: a.seeds,
                total_delay_mean: a.total_delay.mean,
                total_delay_std: a.total_delay.std,
                delay_fraction_mean: a.delay_fraction.mean,
                delay_fraction_std: a.delay_fraction.std,
                hits_t1_mean: a.hits_t1.mean,
                hits_t1_std: a.hits_t1.std,
                hits_t2_mean: a.hits_t2.mean,
                hits_t2_std: a.hits_t2.std,
                tier1_share_mean: a.tier1_share.mean,
                tier1_share_std: a.tier1_share.std,
                total_penalty_mean: a.total_penalty.mean,
                total_penalty_std: a.total_penalty.std,
            })?;
        }
        out.flush().map_err(|e| Error::io("aggregate csv", e))?;
        Ok(())
    }

    /// Writes `summary.csv`, `aggregate.csv` and one JSON document per run under `dir/runs`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        let runs = dir.join("runs");
        fs::create_dir_all(&runs).map_err(|e| Error::io(&runs, e))?;
        let create = |p: &Path| fs::File::create(p).map_err(|e| Error::io(p, e));
        if !self.runs.is_empty() {
            self.write_summary_csv(create(&dir.join("summary.csv"))?)?;
            self.write_aggregate_csv(create(&dir.join("aggregate.csv"))?)?;
        }
        for r in &self.runs {
            let p = runs.join(format!("{}.json", r.run_id));
            serde_json::to_writer_pretty(create(&p)?, r)?;
        }
        for r in &self.virtual_runs {
            let p = runs.join(format!("{}.virtual.json", r.run_id));
            serde_json::to_writer(create(&p)?, r)?;
        }
        Ok(())
    }

    /// Reloads the per-run JSON documents written by [`BatchResults::write_dir`].
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let runs = dir.join("runs");
        let mut paths: Vec<_> = fs::read_dir(&runs)
            .map_err(|e| Error::io(&runs, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut out = Self::default();
        for p in paths {
            let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            if p.to_string_lossy().ends_with(".virtual.json") {
                out.virtual_runs.push(serde_json::from_str(&text)?);
            } else {
                out.runs.push(serde_json::from_str(&text)?);
            }
        }
        out.runs.sort_by(|a, b| record_order(a).partial_cmp(&record_order(b)).expect("finite omegas"));
        out.virtual_runs.sort_by(|a, b| {
            (&a.topology, a.omega, a.tier2_capacity, a.seed)
                .partial_cmp(&(&b.topology, b.omega, b.tier2_capacity, b.seed))
                .expect("finite omegas")
        });
        Ok(out)
    }
}

fn record_order(r: &RunRecord) -> (&str, &'static str, f64, Option<usize>, u64) {
    (&r.topology, r.policy.as_str(), r.omega, r.tier2_capacity, r.seed)
}

fn pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::param("parallelism", e.to_string()))
}

/// Runs every (configuration, seed) pair of `sweep` on up to `parallelism` threads
/// (0 uses every core). The first failing run aborts the batch.
pub fn run_batch(sweep: &SweepSpec, parallelism: usize) -> Result<BatchResults> {
    sweep.validate()?;
    let jobs: Vec<(ScenarioConfig, u64)> = sweep
        .configs()
        .into_iter()
        .flat_map(|c| c.seeds.clone().into_iter().map(move |s| (c.clone(), s)))
        .collect();
    let pool = pool(parallelism)?;
    let wrap = |cfg: &ScenarioConfig, seed: u64| {
        let id = cfg.run_id(seed);
        move |e| Error::Run {
            config: id,
            source: Box::new(e),
        }
    };

    if let Some(slots) = sweep.virtual_slots {
        let virtual_runs = pool.install(|| {
            jobs.par_iter()
                .map(|(cfg, seed)| {
                    let inst = Instance::build(cfg, *seed).map_err(wrap(cfg, *seed))?;
                    let series = inst.run_virtual(cfg, slots).map_err(wrap(cfg, *seed))?;
                    Ok(VirtualRecord {
                        run_id: cfg.run_id(*seed),
                        topology: cfg.topology.label(),
                        omega: cfg.omega,
                        tier2_capacity: cfg.tier2_capacity(),
                        seed: *seed,
                        rows: series.rows,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        return Ok(BatchResults {
            runs: Vec::new(),
            virtual_runs,
        });
    }

    // The no-caching baseline depends only on topology and seed within a sweep.
    let mut keys: Vec<(ScenarioConfig, u64)> = Vec::new();
    for (cfg, seed) in &jobs {
        if !keys.iter().any(|(c, s)| c.topology == cfg.topology && s == seed) {
            keys.push((cfg.clone(), *seed));
        }
    }
    let baselines: Vec<f64> = pool.install(|| {
        keys.par_iter()
            .map(|(cfg, seed)| {
                let inst = Instance::build(cfg, *seed).map_err(wrap(cfg, *seed))?;
                let workload = inst.workload(cfg).map_err(wrap(cfg, *seed))?;
                inst.baseline_delay(cfg, &workload).map_err(wrap(cfg, *seed))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let baseline = |cfg: &ScenarioConfig, seed: u64| {
        let i = keys
            .iter()
            .position(|(c, s)| c.topology == cfg.topology && *s == seed)
            .expect("baseline computed");
        baselines[i]
    };

    let runs = pool.install(|| {
        jobs.par_iter()
            .map(|(cfg, seed)| {
                let inst = Instance::build(cfg, *seed).map_err(wrap(cfg, *seed))?;
                let workload = inst.workload(cfg).map_err(wrap(cfg, *seed))?;
                let mut metrics = inst
                    .simulate(cfg, cfg.policy, &workload, false)
                    .map_err(wrap(cfg, *seed))?
                    .metrics;
                metrics.baseline_delay = Some(baseline(cfg, *seed));
                Ok(RunRecord {
                    run_id: cfg.run_id(*seed),
                    topology: cfg.topology.label(),
                    policy: cfg.policy,
                    omega: cfg.omega,
                    tier2_capacity: cfg.tier2_capacity(),
                    seed: *seed,
                    metrics,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(BatchResults {
        runs,
        virtual_runs: Vec::new(),
    })
}
