#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vipcache::experiments::{preset_paper_defaults, ScenarioConfig};
use vipcache::model::{NetworkModel, NodeCacheConfig, TierSpec, TopologySpec};
use vipcache::rap::{BenefitMatrix, TierPlacement};

pub fn tier(capacity: usize, rate: f64, admission: f64, eviction: f64) -> TierSpec {
    TierSpec {
        capacity,
        readout_rate: rate,
        write_rate: rate,
        admission_cost: admission,
        eviction_cost: eviction,
    }
}

/// The default two-tier node with the given capacities.
pub fn two_tiers(c1: usize, c2: usize) -> NodeCacheConfig {
    NodeCacheConfig::new(vec![tier(c1, 20.0, 4.0, 2.0), tier(c2, 10.0, 2.0, 1.0)]).unwrap()
}

pub fn line(n: usize, capacity: f64) -> NetworkModel {
    let names = (0..n).map(|i| format!("n{i}")).collect();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, capacity)).collect();
    NetworkModel::from_edges(names, &edges).unwrap()
}

/// Random spanning tree plus extra edges; always connected.
pub fn random_graph(rng: &mut ChaCha8Rng, nodes: usize, extra: usize) -> NetworkModel {
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..nodes {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    for _ in 0..extra {
        let a = rng.random_range(0..nodes);
        let b = rng.random_range(0..nodes);
        let e = (a.min(b), a.max(b));
        if a != b && !edges.contains(&e) {
            edges.push(e);
        }
    }
    let caps: Vec<_> = edges
        .iter()
        .map(|&(a, b)| (a, b, rng.random_range(1..=6) as f64))
        .collect();
    NetworkModel::from_edges((0..nodes).map(|i| format!("g{i}")).collect(), &caps).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer benefits in `[lo, hi]` with the given tier capacities.
pub fn random_matrix(rng: &mut ChaCha8Rng, objects: usize, capacities: Vec<usize>, lo: i32, hi: i32) -> BenefitMatrix {
    let values = (0..objects * capacities.len())
        .map(|_| rng.random_range(lo..=hi) as f64)
        .collect();
    BenefitMatrix::new(objects, values, capacities).unwrap()
}

/// Capacity and one-tier-per-object checks.
pub fn feasible(p: &TierPlacement, capacities: &[usize]) -> bool {
    p.tiers.iter().all(|t| t.is_none_or(|j| j < capacities.len()))
        && (0..capacities.len()).all(|j| p.tiers.iter().filter(|&&t| t == Some(j)).count() <= capacities[j])
}

/// Small fast scenario on a 3x3 grid.
pub fn small_scenario() -> ScenarioConfig {
    let mut cfg = preset_paper_defaults();
    cfg.topology = TopologySpec::Grid { rows: 3, cols: 3 };
    cfg.objects = 100;
    cfg.duration = 10.0;
    cfg.tiers[0].capacity = 3;
    cfg.tiers[1].capacity = 15;
    cfg.seeds = vec![1, 2];
    cfg
}

/// Drives the virtual plane for `slots` slots on a random 6-node graph with random
/// arrivals and checks every per-slot invariant against independent recomputation.
/// Returns the number of link flows and cache-state changes exercised.
pub fn fuzz_virtual_plane(seed: u64, slots: u64) -> Result<(u64, u64), String> {
    use vipcache::model::{assign_sources, build_routing, ObjectCatalog};
    use vipcache::virtual_plane::{ArrivalRecord, PolicyParams, VirtualPlane};

    let mut r = rng(seed);
    let net = random_graph(&mut r, 6, 4);
    let objects = 10;
    let cat = ObjectCatalog::new(assign_sources(&net, objects, seed).unwrap(), 0.75, 1.0).unwrap();
    let rt = build_routing(&net, &cat).unwrap();
    let caches: Vec<NodeCacheConfig> = (0..6)
        .map(|_| {
            let c1 = r.random_range(1..=2);
            let c2 = r.random_range(1..=3);
            NodeCacheConfig::new(vec![
                tier(c1, r.random_range(2..=6) as f64, r.random_range(1..=4) as f64, r.random_range(0..=2) as f64),
                tier(c2, 1.0, r.random_range(1..=3) as f64, r.random_range(0..=1) as f64),
            ])
            .unwrap()
        })
        .collect();
    let omega = [0.0, 0.5, 2.0][(seed % 3) as usize];
    let mut plane = VirtualPlane::new(&net, &rt, &caches, PolicyParams::new(omega).unwrap()).unwrap();
    let (mut flows, mut changes) = (0, 0);

    for t in 1..=slots {
        let prev = plane.state().clone();
        let mut arrivals = ArrivalRecord::new(6, objects);
        for _ in 0..r.random_range(0..8) {
            arrivals.record(r.random_range(0..6), r.random_range(0..objects));
        }
        let out = plane.step(&arrivals).map_err(|e| e.to_string())?;
        let next = plane.state();
        let fail = |what: String| Err(format!("slot {t}: {what}"));

        for n in 0..6 {
            let p = &next.placement[n];
            if !feasible(p, &caches[n].capacities()) {
                return fail(format!("node {n} placement infeasible: {:?}", p.tiers));
            }
            for k in 0..objects {
                if rt.source(k) == n && (p.tiers[k].is_some() || next.count(n, k) != 0.0) {
                    return fail(format!("source {n} of {k} caches or queues it"));
                }
                if next.count(n, k) < 0.0 {
                    return fail(format!("negative count at ({n}, {k})"));
                }
            }
        }

        let mut out_mu = vec![0.0; 6 * objects];
        let mut out_sent = vec![0.0; 6 * objects];
        let mut in_sent = vec![0.0; 6 * objects];
        for (id, f) in out.allocation.flows.iter().enumerate() {
            let Some(f) = f else { continue };
            flows += 1;
            let l = net.link(id);
            let reverse = net.link(net.reverse(id)).capacity;
            let w = prev.count(l.from, f.object) - prev.count(l.to, f.object);
            if f.allocated != reverse || w <= 0.0 || !rt.is_permitted(f.object, l.from, l.to) {
                return fail(format!("bad allocation on link {id}: {f:?}"));
            }
            if !(0.0..=f.allocated).contains(&f.sent) {
                return fail(format!("sent outside [0, allocated] on link {id}"));
            }
            out_mu[l.from * objects + f.object] += f.allocated;
            out_sent[l.from * objects + f.object] += f.sent;
            in_sent[l.to * objects + f.object] += f.sent;
        }

        let mut penalty = 0.0;
        for n in 0..6 {
            let specs = caches[n].tiers();
            for k in 0..objects {
                let (a, b) = (prev.placement[n].tiers[k], next.placement[n].tiers[k]);
                if a != b {
                    changes += 1;
                    penalty += a.map_or(0.0, |j| specs[j].eviction_cost) + b.map_or(0.0, |j| specs[j].admission_cost);
                }
                let i = n * objects + k;
                if out_sent[i] > prev.count(n, k) + 1e-9 {
                    return fail(format!("({n}, {k}) sent more than its backlog"));
                }
                if rt.source(k) == n {
                    continue;
                }
                let drain: f64 = b.map_or(0.0, |j| specs[j].readout_rate);
                let want = ((prev.count(n, k) - out_mu[i]).max(0.0) + arrivals.get(n, k) as f64 + in_sent[i] - drain).max(0.0);
                if (next.count(n, k) - want).abs() > 1e-9 {
                    return fail(format!("({n}, {k}) evolved to {} instead of {want}", next.count(n, k)));
                }
                if next.count(n, k) + 1e-9 < prev.count(n, k) - out_mu[i] - drain {
                    return fail(format!("({n}, {k}) lost more than allocation plus drain"));
                }
            }
        }
        if (penalty - out.penalty).abs() > 1e-9 {
            return fail(format!("penalty {} but transitions give {penalty}", out.penalty));
        }
    }
    Ok((flows, changes))
}
