use crate::model::{LinkId, NetworkModel, NodeId};

/// Round-trip delay of the last request sent over each link.
#[derive(Clone, Debug)]
pub struct RttTable {
    last: Vec<Option<f64>>,
}

impl RttTable {
    pub fn new(links: usize) -> Self {
        Self {
            last: vec![None; links],
        }
    }

    pub fn get(&self, link: LinkId) -> Option<f64> {
        self.last[link]
    }

    pub fn record(&mut self, link: LinkId, rtt: f64) {
        self.last[link] = Some(rtt);
    }

    /// Ranking key; links never measured count as zero delay.
    pub fn key(&self, link: LinkId) -> f64 {
        self.last[link].unwrap_or(0.0)
    }
}

/// Least-response-time choice among `candidates`; ties go to the lowest node id.
pub fn lrt_forward(
    model: &NetworkModel,
    node: NodeId,
    candidates: &[NodeId],
    rtt: &RttTable,
) -> Option<NodeId> {
    candidates.iter().copied().min_by(|&a, &b| {
        let ka = rtt.key(model.link_id(node, a).expect("candidate is a neighbor"));
        let kb = rtt.key(model.link_id(node, b).expect("candidate is a neighbor"));
        ka.total_cmp(&kb).then(a.cmp(&b))
    })
}
