use alloc::vec;
use alloc::vec::Vec;

use super::{CoupledNetwork, NodeKind, Scheme, SyncStyle, SyncWeights};
use crate::diffusion::InfluenceGraph;
use crate::error::Result;
use crate::graph::MultiplexNetwork;

struct Builder {
    thresholds: Vec<f64>,
    weights: Vec<f64>,
    kinds: Vec<NodeKind>,
    edges: Vec<(usize, usize, f64)>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, threshold: f64, weight: f64) -> usize {
        self.kinds.push(kind);
        self.thresholds.push(threshold);
        self.weights.push(weight);
        self.kinds.len() - 1
    }
}

/// Lossless couplings. Per user, in this order: the hub (gateway, or user
/// vertex when `reduced`), one vertex per layer in layer order (dummies for
/// unjoined layers unless `reduced`), then the intermediate for star sync.
pub(super) fn build(
    network: &MultiplexNetwork,
    style: SyncStyle,
    reduced: bool,
    sync: SyncWeights,
) -> Result<CoupledNetwork> {
    network.require_complete()?;
    let n = network.user_count();
    let k = network.layer_count();
    let mut b = Builder {
        thresholds: Vec::new(),
        weights: Vec::new(),
        kinds: Vec::new(),
        edges: Vec::new(),
    };
    let mut hub = vec![0usize; n];
    let mut rep: Vec<Vec<Option<usize>>> = vec![vec![None; n]; k];
    let mut group: Vec<usize> = Vec::with_capacity(k + 2);

    for user in 0..n {
        let joined = network.membership_count(user);
        let (hub_kind, hub_weight) = if reduced {
            (NodeKind::UserVertex { user }, (k - joined) as f64)
        } else {
            (NodeKind::Gateway { user }, 1.0)
        };
        hub[user] = b.push(hub_kind, 1.0, hub_weight);
        group.clear();
        group.push(hub[user]);
        for (pos, slots) in rep.iter_mut().enumerate() {
            let layer = pos + 1;
            let v = match network.threshold(pos, user) {
                Some(theta) => b.push(NodeKind::Representative { user, layer }, theta, 1.0),
                None if reduced => continue,
                None => b.push(NodeKind::Dummy { user, layer }, 1.0, 1.0),
            };
            slots[user] = Some(v);
            group.push(v);
        }
        let sync_weight = |b: &Builder, v: usize| match sync {
            SyncWeights::Threshold => b.thresholds[v],
            SyncWeights::Unit => 1.0,
        };
        match style {
            SyncStyle::Clique => {
                for &x in &group {
                    for &y in &group {
                        if x != y {
                            let w = sync_weight(&b, y);
                            b.edges.push((x, y, w));
                        }
                    }
                }
            }
            SyncStyle::Star => {
                let mid_weight = if reduced { 0.0 } else { 1.0 };
                let mid = b.push(NodeKind::Intermediate { user }, 1.0, mid_weight);
                for &r in &group[1..] {
                    let w = sync_weight(&b, r);
                    b.edges.push((r, mid, 1.0));
                    b.edges.push((mid, r, w));
                }
                b.edges.push((mid, hub[user], 1.0));
                b.edges.push((hub[user], mid, 1.0));
            }
        }
    }

    for (pos, slots) in rep.iter().enumerate() {
        for (user, &src) in hub.iter().enumerate() {
            for (target, w) in network.out_edges(pos, user) {
                let dst = slots[target].expect("layer member has a representative");
                b.edges.push((src, dst, w));
            }
        }
    }

    let scheme = match (style, reduced) {
        (SyncStyle::Clique, false) => Scheme::Clique,
        (SyncStyle::Star, false) => Scheme::Star,
        (SyncStyle::Clique, true) => Scheme::ReducedClique,
        (SyncStyle::Star, true) => Scheme::ReducedStar,
    };
    let graph = InfluenceGraph::new(b.thresholds, b.weights, b.edges)?;
    Ok(CoupledNetwork::from_parts(scheme, graph, b.kinds, network))
}
