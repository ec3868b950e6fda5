//! Sweeps the penalty weight on the virtual plane and prints average penalty and backlog.
//!
//! `cargo run --release --example virtual_tradeoff -- [slots] [seed] [tier2]`

use vipcache::model::{assign_sources, build_routing, NetworkModel, NodeCacheConfig, ObjectCatalog, TierSpec};
use vipcache::virtual_plane::{run_virtual, PolicyParams, VirtualScenario};

fn main() -> vipcache::Result<()> {
    let mut args = std::env::args().skip(1);
    let slots: u64 = args.next().map_or(200, |s| s.parse().expect("slots"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let tier2: usize = args.next().map_or(100, |s| s.parse().expect("tier-2 capacity"));

    let model = NetworkModel::abilene(10.0);
    let sources = assign_sources(&model, 1000, seed)?;
    let catalog = ObjectCatalog::new(sources, 0.75, 10.0)?;
    let routing = build_routing(&model, &catalog)?;
    let node = NodeCacheConfig::new(vec![
        TierSpec { capacity: 5, readout_rate: 20.0, write_rate: 20.0, admission_cost: 4.0, eviction_cost: 2.0 },
        TierSpec { capacity: tier2, readout_rate: 10.0, write_rate: 10.0, admission_cost: 2.0, eviction_cost: 1.0 },
    ])?;
    let caches = vec![node; model.node_count()];

    println!("omega,avg_penalty,avg_backlog");
    for omega in [0.0, 1.0, 3.0, 10.0] {
        let plan = VirtualScenario {
            model: &model,
            catalog: &catalog,
            routing: &routing,
            caches: &caches,
            params: PolicyParams::new(omega)?,
            slot_length: 1.0,
            seed,
        };
        let (backlog, penalty) = run_virtual(&plan, slots)?.final_averages();
        println!("{omega},{penalty:.3},{backlog:.1}");
    }
    Ok(())
}
