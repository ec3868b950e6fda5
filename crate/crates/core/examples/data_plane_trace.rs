//! Simulates a short workload on the ring topology with action logging, prints a
//! few request traces and rebuilds the penalty from the action log.
//!
//! `cargo run --example data_plane_trace -- [policy] [seed]`

use vipcache::data_plane::{CacheAction, ServedBy};
use vipcache::experiments::{Instance, ScenarioConfig};
use vipcache::policies::PolicyKind;

fn main() -> vipcache::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/scenario.toml");
    let cfg = ScenarioConfig::load(path.as_ref())?;
    let mut args = std::env::args().skip(1);
    let policy: PolicyKind = args.next().map_or(Ok(cfg.policy), |s| s.parse())?;
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let inst = Instance::build(&cfg, seed)?;
    let workload = inst.workload(&cfg)?;
    let out = inst.simulate(&cfg, policy, &workload, true)?;

    for r in out.requests.iter().step_by(out.requests.len().max(8) / 8) {
        let path: Vec<&str> = r.path.iter().map(|&n| inst.model.name(n)).collect();
        let served = match r.served {
            Some(ServedBy::Tier(j)) => format!("tier {}", j + 1),
            _ => "source".to_string(),
        };
        println!(
            "t={:7.3} object {:3} path {:?} served by {served}, delay {:.3} s",
            r.created,
            r.object,
            path,
            r.delay().unwrap_or(f64::NAN)
        );
    }

    let mut penalty = 0.0;
    for a in &out.actions {
        let tiers = inst.caches[a.node].tiers();
        penalty += match a.action {
            CacheAction::Admit { tier, .. } => tiers[tier].admission_cost,
            CacheAction::Evict { tier, .. } => tiers[tier].eviction_cost,
            CacheAction::Drop { .. } => 0.0,
        };
    }
    let m = &out.metrics;
    println!(
        "{policy}: {} requests, {} hits ({} / {}), {} from sources, total delay {:.2} s",
        m.requests_completed,
        m.total_hits,
        m.hits(0),
        m.hits(1),
        m.source_served,
        m.total_delay
    );
    println!("penalty {} from metrics, {penalty} from {} logged actions", m.total_penalty, out.actions.len());
    Ok(())
}
