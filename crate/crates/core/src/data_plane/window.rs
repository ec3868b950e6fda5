use std::collections::VecDeque;

use crate::model::{LinkId, NetworkModel, NodeId, ObjectId};

/// VIPs moved on one link during one slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotFlow {
    pub link: LinkId,
    pub object: ObjectId,
    pub vips: f64,
}

/// Windowed sums of VIPs received per (node, object) and sent per (link, object)
/// over the last `window` completed slots.
#[derive(Clone, Debug)]
pub struct SlidingWindowStats {
    window: usize,
    objects: usize,
    received: Vec<f64>,
    sent: Vec<f64>,
    history: VecDeque<Vec<SlotFlow>>,
}

impl SlidingWindowStats {
    pub fn new(window: usize, nodes: usize, links: usize, objects: usize) -> Self {
        assert!(window >= 1);
        Self {
            window,
            objects,
            received: vec![0.0; nodes * objects],
            sent: vec![0.0; links * objects],
            history: VecDeque::with_capacity(window + 1),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn slots_recorded(&self) -> usize {
        self.history.len()
    }

    fn add(&mut self, model: &NetworkModel, flows: &[SlotFlow], sign: f64) {
        for f in flows {
            let to = model.link(f.link).to;
            self.received[to * self.objects + f.object] += sign * f.vips;
            self.sent[f.link * self.objects + f.object] += sign * f.vips;
        }
    }

    /// Records one completed slot, dropping the slot that falls out of the window.
    pub fn push_slot(&mut self, model: &NetworkModel, flows: Vec<SlotFlow>) {
        self.add(model, &flows, 1.0);
        self.history.push_back(flows);
        if self.history.len() > self.window {
            let old = self.history.pop_front().expect("non-empty");
            self.add(model, &old, -1.0);
        }
    }

    /// Average VIPs of `object` received by `node` per slot over the window.
    pub fn cache_score(&self, node: NodeId, object: ObjectId) -> f64 {
        self.received[node * self.objects + object] / self.window as f64
    }

    /// Average VIPs of `object` sent over `link` per slot over the window.
    pub fn sent_average(&self, link: LinkId, object: ObjectId) -> f64 {
        self.sent[link * self.objects + object] / self.window as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> NetworkModel {
        NetworkModel::from_edges(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1, 10.0), (0, 2, 10.0), (1, 2, 10.0)],
        )
        .unwrap()
    }

    #[test]
    fn empty_window_scores_zero() {
        let s = SlidingWindowStats::new(100, 3, 6, 2);
        assert_eq!(s.cache_score(0, 1), 0.0);
    }

    #[test]
    fn score_averages_last_window_slots() {
        let net = triangle();
        let l = net.link_id(1, 0).unwrap();
        let mut s = SlidingWindowStats::new(3, 3, 6, 1);
        for v in [7.0, 2.0, 0.0, 4.0] {
            let flows = if v > 0.0 {
                vec![SlotFlow { link: l, object: 0, vips: v }]
            } else {
                vec![]
            };
            s.push_slot(&net, flows);
        }
        assert_eq!(s.cache_score(0, 0), 2.0);
        assert_eq!(s.sent_average(l, 0), 2.0);
    }

    #[test]
    fn score_sums_incoming_links() {
        let net = triangle();
        let mut s = SlidingWindowStats::new(100, 3, 6, 1);
        s.push_slot(
            &net,
            vec![
                SlotFlow { link: net.link_id(1, 0).unwrap(), object: 0, vips: 6.0 },
                SlotFlow { link: net.link_id(2, 0).unwrap(), object: 0, vips: 4.0 },
            ],
        );
        assert_eq!(s.cache_score(0, 0), 0.1);
    }
}
