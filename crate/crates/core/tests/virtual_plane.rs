mod common;

use vipcache::model::{assign_sources, build_routing, NetworkModel, NodeCacheConfig, ObjectCatalog};
use vipcache::virtual_plane::{run_virtual, PolicyParams, VirtualScenario};

use common::{fuzz_virtual_plane, two_tiers};

#[test]
fn invariants_hold_over_long_random_runs() {
    for seed in 1..=3 {
        let (flows, changes) = fuzz_virtual_plane(seed, 10_000).unwrap();
        assert!(flows > 10_000 && changes > 100, "{flows} flows, {changes} changes");
    }
}

fn run(net: &NetworkModel, objects: usize, rate: f64, omega: f64, slots: u64, seed: u64) -> (f64, f64, Vec<(f64, f64)>) {
    let cat = ObjectCatalog::new(assign_sources(net, objects, seed).unwrap(), 0.75, rate).unwrap();
    let rt = build_routing(net, &cat).unwrap();
    let caches: Vec<NodeCacheConfig> = vec![two_tiers(2, 10); net.node_count()];
    let plan = VirtualScenario {
        model: net,
        catalog: &cat,
        routing: &rt,
        caches: &caches,
        params: PolicyParams::new(omega).unwrap(),
        slot_length: 1.0,
        seed,
    };
    let s = run_virtual(&plan, slots).unwrap();
    let rows = s.rows.iter().map(|r| (r.total_backlog, r.total_penalty)).collect();
    let (b, p) = s.final_averages();
    (b, p, rows)
}

#[test]
fn zero_rate_stays_empty() {
    let (_, _, rows) = run(&NetworkModel::abilene(10.0), 50, 0.0, 1.0, 20, 1);
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|&r| r == (0.0, 0.0)));
}

#[test]
fn lone_source_node_never_queues() {
    let net = NetworkModel::from_edges(vec!["solo".into()], &[]).unwrap();
    let (b, p, rows) = run(&net, 20, 10.0, 0.0, 30, 2);
    assert_eq!((b, p), (0.0, 0.0));
    assert!(rows.iter().all(|&r| r == (0.0, 0.0)));
}

#[test]
fn heavy_penalty_weight_lowers_average_penalty() {
    let net = NetworkModel::grid(3, 3, 10.0).unwrap();
    let (_, light, _) = run(&net, 200, 10.0, 0.0, 2000, 4);
    let (_, heavy, _) = run(&net, 200, 10.0, 10.0, 2000, 4);
    assert!(heavy <= light, "{heavy} > {light}");
}

#[test]
fn same_seed_same_series() {
    let net = NetworkModel::abilene(10.0);
    assert_eq!(run(&net, 100, 10.0, 1.0, 100, 9), run(&net, 100, 10.0, 1.0, 100, 9));
}
