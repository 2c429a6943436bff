use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{CoupledNetwork, LossyKind, NodeKind, Scheme};
use crate::diffusion::InfluenceGraph;
use crate::error::{Error, Result};
use crate::graph::MultiplexNetwork;

/// Parameter value used when easiness or involvement is undefined or zero
/// (no incoming influence, no edges in the neighbourhood).
pub const DEFAULT_ALPHA_FLOOR: f64 = 1.0;

/// Easiness of `user` in layer `pos`: total incoming weight divided by the
/// threshold, or `floor` when that total is zero. `None` if the user does
/// not join the layer.
pub fn easiness(network: &MultiplexNetwork, user: usize, pos: usize, floor: f64) -> Option<f64> {
    let theta = network.threshold(pos, user)?;
    let incoming: f64 = network.in_edges(pos, user).map(|(_, w)| w).sum();
    if incoming > 0.0 {
        Some(incoming / theta)
    } else {
        Some(floor)
    }
}

/// Involvement of `user` in layer `pos`: over ordered pairs `(x, y)` of the
/// closed neighbourhood (in- and out-neighbours plus the user) joined by an
/// edge `x -> y`, the sum of `w(x, y) / theta(y)`. `floor` when the
/// neighbourhood has no edges.
pub fn involvement(network: &MultiplexNetwork, user: usize, pos: usize, floor: f64) -> Option<f64> {
    network.local_index(pos, user)?;
    let mut hood: Vec<usize> = network
        .in_edges(pos, user)
        .chain(network.out_edges(pos, user))
        .map(|(v, _)| v)
        .collect();
    hood.push(user);
    hood.sort_unstable();
    hood.dedup();
    let mut sum = 0.0;
    for &x in &hood {
        for (y, w) in network.out_edges(pos, x) {
            if hood.binary_search(&y).is_ok() {
                let theta = network.threshold(pos, y).expect("member has a threshold");
                sum += w / theta;
            }
        }
    }
    Some(if sum > 0.0 { sum } else { floor })
}

/// Per `(user, layer)` weights for the lossy scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct LossyParams {
    pub kind: LossyKind,
    pub floor: f64,
    /// `alpha[pos][user]`, `None` where the user does not join the layer.
    pub alpha: Vec<Vec<Option<f64>>>,
}

impl LossyParams {
    pub fn compute(network: &MultiplexNetwork, kind: LossyKind, floor: f64) -> Result<Self> {
        if !(floor.is_finite() && floor > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha floor must be positive, got {floor}"
            )));
        }
        network.require_complete()?;
        let alpha = (0..network.layer_count())
            .map(|pos| {
                (0..network.user_count())
                    .map(|user| match kind {
                        LossyKind::Easiness => easiness(network, user, pos, floor),
                        LossyKind::Involvement => involvement(network, user, pos, floor),
                        LossyKind::Average => network.local_index(pos, user).map(|_| 1.0),
                    })
                    .collect()
            })
            .collect();
        Ok(LossyParams { kind, floor, alpha })
    }

    pub fn alpha(&self, pos: usize, user: usize) -> Option<f64> {
        self.alpha[pos][user]
    }
}

/// Lossy coupling with the default floor.
pub fn couple_lossy(network: &MultiplexNetwork, kind: LossyKind) -> Result<CoupledNetwork> {
    let params = LossyParams::compute(network, kind, DEFAULT_ALPHA_FLOOR)?;
    couple_lossy_with(network, &params)
}

/// One node per user (node index = user index). The threshold of `u` is
/// `sum_i alpha_i(u) theta_i(u)` and the edge `v -> u` weighs
/// `sum_i alpha_i(u) w_i(v, u)`, both over the layers `u` joins. A user in
/// no layer gets threshold 1 and no in-edges.
pub fn couple_lossy_with(
    network: &MultiplexNetwork,
    params: &LossyParams,
) -> Result<CoupledNetwork> {
    network.require_complete()?;
    let n = network.user_count();
    let mut thresholds = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut incoming: BTreeMap<usize, f64> = BTreeMap::new();
    for user in 0..n {
        let mut theta = 0.0;
        incoming.clear();
        for pos in network.layers_of(user) {
            let alpha = params.alpha(pos, user).expect("alpha for joined layer");
            theta += alpha * network.threshold(pos, user).expect("threshold for member");
            for (src, w) in network.in_edges(pos, user) {
                *incoming.entry(src).or_insert(0.0) += alpha * w;
            }
        }
        thresholds.push(if theta > 0.0 { theta } else { 1.0 });
        edges.extend(
            incoming
                .iter()
                .filter(|(_, &w)| w > 0.0)
                .map(|(&src, &w)| (src, user, w)),
        );
    }
    let kinds = (0..n).map(|user| NodeKind::UserVertex { user }).collect();
    let graph = InfluenceGraph::new(thresholds, alloc::vec![1.0; n], edges)?;
    Ok(CoupledNetwork::from_parts(
        Scheme::Lossy(params.kind),
        graph,
        kinds,
        network,
    ))
}
