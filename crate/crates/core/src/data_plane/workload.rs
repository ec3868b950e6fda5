use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Exp;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rng::{stream_rng, Stream};
use crate::model::{NodeId, ObjectCatalog, ObjectId};

/// One request entering the network.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequestSpec {
    /// Seconds.
    pub time: f64,
    pub node: NodeId,
    pub object: ObjectId,
}

/// Poisson request arrivals at every node over `[0, duration)`, with objects drawn
/// independently from the catalog's Zipf popularity.
///
/// The result is sorted by time, then node.
pub fn generate_workload(
    catalog: &ObjectCatalog,
    nodes: usize,
    duration: f64,
    seed: u64,
) -> Result<Vec<RequestSpec>> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::param("duration", "must be positive"));
    }
    if catalog.arrival_rate == 0.0 {
        return Ok(Vec::new());
    }
    let mut arrivals_rng = stream_rng(seed, Stream::Arrivals);
    let gap = Exp::new(catalog.arrival_rate)
        .map_err(|e| Error::param("arrival_rate", e.to_string()))?;
    let mut requests = Vec::new();
    for node in 0..nodes {
        let mut t = gap.sample(&mut arrivals_rng);
        while t < duration {
            requests.push(RequestSpec {
                time: t,
                node,
                object: 0,
            });
            t += gap.sample(&mut arrivals_rng);
        }
    }
    requests.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.node.cmp(&b.node)));

    let popularity = WeightedIndex::new(catalog.popularity())
        .map_err(|e| Error::param("zipf_exponent", e.to_string()))?;
    let mut objects_rng = stream_rng(seed, Stream::Objects);
    for r in &mut requests {
        r.object = popularity.sample(&mut objects_rng);
    }
    Ok(requests)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog(rate: f64) -> ObjectCatalog {
        ObjectCatalog::new(vec![0; 100], 0.75, rate).unwrap()
    }

    #[test]
    fn zero_rate_is_empty() {
        assert!(generate_workload(&catalog(0.0), 3, 100.0, 1).unwrap().is_empty());
    }

    #[test]
    fn deterministic_and_sorted() {
        let a = generate_workload(&catalog(10.0), 4, 20.0, 7).unwrap();
        let b = generate_workload(&catalog(10.0), 4, 20.0, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].time <= w[1].time));
        assert!(a.iter().all(|r| r.time < 20.0 && r.object < 100));
    }

    #[test]
    fn count_within_poisson_tail() {
        // Mean 1000, sd ~31.6; four sd is ~127.
        for seed in 0..10 {
            let n = generate_workload(&catalog(10.0), 1, 100.0, seed).unwrap().len() as f64;
            assert!((n - 1000.0).abs() <= 4.0 * 1000f64.sqrt(), "seed {seed}: {n}");
        }
    }
}
