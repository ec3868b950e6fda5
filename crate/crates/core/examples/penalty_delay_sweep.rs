//! Sweeps the penalty weight for the VIP and adapted LFU policies on Abilene, prints
//! both (penalty, delay) frontiers and how often VIP's frontier is at least as good.
//!
//! `cargo run --release --example penalty_delay_sweep -- [seeds]`

use vipcache::experiments::{
    dominance_share, pareto_frontier, preset_paper_defaults, run_batch, tradeoff_points, PolicyAxis, SweepSpec,
};
use vipcache::policies::PolicyKind;

fn main() -> vipcache::Result<()> {
    let seeds: u64 = std::env::args().nth(1).map_or(3, |s| s.parse().expect("seeds"));
    let mut base = preset_paper_defaults();
    base.seeds = (1..=seeds).collect();
    let omegas = vec![0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0];
    let axis = |policy| PolicyAxis {
        policy,
        omegas: omegas.clone(),
        tier2_capacities: vec![50, 100, 200],
    };
    let spec = SweepSpec::new(base, vec![axis(PolicyKind::Vip), axis(PolicyKind::Lfu)]);
    let res = run_batch(&spec, 0)?;

    let vip = tradeoff_points(&res, "abilene", PolicyKind::Vip);
    let lfu = tradeoff_points(&res, "abilene", PolicyKind::Lfu);
    for (name, pts) in [("vip", &vip), ("lfu", &lfu)] {
        println!("{name} frontier (penalty, delay):");
        for (p, d) in pareto_frontier(pts) {
            println!("  {p:10.1} {d:10.1}");
        }
    }
    println!("vip at least as good at {:.0}% of penalty levels", 100.0 * dominance_share(&vip, &lfu));
    Ok(())
}
