//! Minimum-hop permitted-link sets per object.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{LinkId, NetworkModel, NodeId, ObjectCatalog, ObjectId};

/// For each object `k`, the links `(n, b)` allowed to carry its interests: `b` is a next
/// hop of `n` on some minimum-hop path to the source of `k`.
#[derive(Clone, Debug)]
pub struct RoutingTable {
    /// `hops[s][n]`: hop distance from `n` to `s`.
    hops: Vec<Vec<u32>>,
    /// `next[s][n]`: next hops from `n` toward `s`, ascending node id.
    next: Vec<Vec<Vec<NodeId>>>,
    sources: Vec<NodeId>,
    /// Objects permitted on each link, ascending object id.
    link_objects: Vec<Vec<ObjectId>>,
}

impl RoutingTable {
    /// Next hops from `node` toward the source of `object`; empty at the source.
    pub fn next_hops(&self, object: ObjectId, node: NodeId) -> &[NodeId] {
        &self.next[self.sources[object]][node]
    }

    pub fn is_permitted(&self, object: ObjectId, from: NodeId, to: NodeId) -> bool {
        self.next_hops(object, from).binary_search(&to).is_ok()
    }

    pub fn hops(&self, from: NodeId, to: NodeId) -> u32 {
        self.hops[to][from]
    }

    pub fn objects_on_link(&self, link: LinkId) -> &[ObjectId] {
        &self.link_objects[link]
    }

    pub fn source(&self, object: ObjectId) -> NodeId {
        self.sources[object]
    }

    pub fn object_count(&self) -> usize {
        self.sources.len()
    }
}

fn bfs(model: &NetworkModel, root: NodeId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; model.node_count()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(n) = queue.pop_front() {
        // Links are symmetric, so distances to `root` equal distances from it.
        for b in model.neighbors(n) {
            if dist[b] == u32::MAX {
                dist[b] = dist[n] + 1;
                queue.push_back(b);
            }
        }
    }
    dist
}

/// Builds shortest-path (in hops) permitted-link sets for every object in `catalog`.
pub fn build_routing(model: &NetworkModel, catalog: &ObjectCatalog) -> Result<RoutingTable> {
    let n = model.node_count();
    let mut hops = Vec::with_capacity(n);
    let mut next = Vec::with_capacity(n);
    for s in 0..n {
        let dist = bfs(model, s);
        if let Some(node) = dist.iter().position(|&d| d == u32::MAX) {
            return Err(Error::Disconnected {
                node,
                source_node: s,
            });
        }
        let per_node: Vec<Vec<NodeId>> = (0..n)
            .map(|a| {
                if a == s {
                    return Vec::new();
                }
                let mut hopsv: Vec<NodeId> = model
                    .neighbors(a)
                    .filter(|&b| dist[b] + 1 == dist[a])
                    .collect();
                hopsv.sort_unstable();
                hopsv
            })
            .collect();
        hops.push(dist);
        next.push(per_node);
    }

    let mut link_objects = vec![Vec::new(); model.links().len()];
    for (k, &s) in catalog.sources().iter().enumerate() {
        for a in 0..n {
            for &b in &next[s][a] {
                let id = model.link_id(a, b).expect("next hop is a neighbor");
                link_objects[id].push(k);
            }
        }
    }

    Ok(RoutingTable {
        hops,
        next,
        sources: catalog.sources().to_vec(),
        link_objects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    #[test]
    fn two_node_line() {
        let net = NetworkModel::from_edges(names(2), &[(0, 1, 1.0)]).unwrap();
        let cat = ObjectCatalog::new(vec![1], 0.0, 1.0).unwrap();
        let rt = build_routing(&net, &cat).unwrap();
        assert_eq!(rt.next_hops(0, 0), &[1]);
        assert!(rt.next_hops(0, 1).is_empty());
    }

    #[test]
    fn four_cycle_has_two_next_hops() {
        // a=0, b=1, c=2, d=3 with cycle a-b-c-d-a; source c.
        let net = NetworkModel::from_edges(
            names(4),
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)],
        )
        .unwrap();
        let cat = ObjectCatalog::new(vec![2], 0.0, 1.0).unwrap();
        let rt = build_routing(&net, &cat).unwrap();
        assert_eq!(rt.next_hops(0, 0), &[1, 3]);
        assert_eq!(rt.next_hops(0, 1), &[2]);
        assert_eq!(rt.next_hops(0, 3), &[2]);
        assert!(rt.next_hops(0, 2).is_empty());
        let ab = net.link_id(0, 1).unwrap();
        assert_eq!(rt.objects_on_link(ab), &[0]);
        let ba = net.link_id(1, 0).unwrap();
        assert!(rt.objects_on_link(ba).is_empty());
    }

    #[test]
    fn disconnected_graph_is_reported() {
        let net = NetworkModel::from_edges(names(3), &[(0, 1, 1.0)]).unwrap();
        let cat = ObjectCatalog::new(vec![0], 0.0, 1.0).unwrap();
        match build_routing(&net, &cat) {
            Err(Error::Disconnected { node, source_node }) => {
                assert_eq!((node, source_node), (2, 0));
            }
            other => panic!("expected disconnection, got {other:?}"),
        }
    }
}
