//! Runs every caching policy on one topology at the default parameters and prints
//! delay relative to no caching, hits per tier and total penalty.
//!
//! `cargo run --release --example policy_comparison -- [topology] [seed] [shared|split]`

use vipcache::data_plane::DeviceModel;
use vipcache::experiments::{preset_paper_defaults, Instance};
use vipcache::policies::PolicyKind;

fn main() -> vipcache::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = preset_paper_defaults();
    if let Some(t) = args.next() {
        cfg.topology = t.parse()?;
    }
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    if let Some(d) = args.next() {
        cfg.device = if d == "split" { DeviceModel::Split } else { DeviceModel::Shared };
    }

    let inst = Instance::build(&cfg, seed)?;
    let workload = inst.workload(&cfg)?;
    let baseline = inst.baseline_delay(&cfg, &workload)?;
    println!("{} requests on {}, no-cache delay {baseline:.1} s", workload.len(), cfg.topology);
    println!("policy,delay_fraction,hits_t1,hits_t2,tier1_share,penalty");
    for policy in [PolicyKind::Vip, PolicyKind::Lfu, PolicyKind::Lru, PolicyKind::Fifo, PolicyKind::Rand] {
        let m = inst.simulate(&cfg, policy, &workload, false)?.metrics;
        println!(
            "{policy},{:.3},{},{},{:.3},{}",
            m.total_delay / baseline,
            m.hits(0),
            m.hits(1),
            m.tier1_share(),
            m.total_penalty
        );
    }
    Ok(())
}
