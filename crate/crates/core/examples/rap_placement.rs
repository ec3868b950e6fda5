//! Solves random tier-placement instances exactly and checks each against
//! exhaustive search.
//!
//! `cargo run --example rap_placement -- [instances] [seed]`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vipcache::rap::{brute_force, collapse, expand, solve, BenefitMatrix};

fn main() -> vipcache::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().map_or(5, |s| s.parse().expect("instances"));
    let seed: u64 = args.next().map_or(11, |s| s.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for i in 0..instances {
        let objects = rng.random_range(1..=6);
        let capacities = vec![rng.random_range(0..=2), rng.random_range(1..=3)];
        let values = (0..objects * 2).map(|_| rng.random_range(-20..=20) as f64).collect();
        let benefits = BenefitMatrix::new(objects, values, capacities.clone())?;

        let expanded = expand(&benefits);
        let exact = solve(&expanded)?;
        let placement = collapse(&exact, expanded.slot_map(), objects);
        let oracle = brute_force(&benefits)?;

        println!("instance {i}: {objects} objects, capacities {capacities:?}");
        for k in 0..objects {
            let row: Vec<f64> = (0..2).map(|j| benefits.get(k, j)).collect();
            let tier = placement.tiers[k].map_or("-".to_string(), |j| (j + 1).to_string());
            println!("  {row:?} -> tier {tier}");
        }
        println!("  objective {} (exhaustive {})", exact.objective, oracle.objective);
        assert_eq!(exact.objective, oracle.objective);
    }
    Ok(())
}
