use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{normalize_incoming_weights, Csr, LayerGraph, UserId};
use crate::error::{Error, Result};
use crate::rng;

/// Layer adjacency re-indexed for simulation.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CompiledLayer {
    pub(crate) to_global: Vec<usize>,
    pub(crate) to_local: Vec<Option<usize>>,
    /// Outgoing edges, local indices.
    pub(crate) out: Csr,
    /// Incoming edges, local indices.
    pub(crate) inc: Csr,
    /// Thresholds by local index; zero where unset.
    pub(crate) thresholds: Vec<f64>,
}

/// `k >= 1` layers over a shared, sorted user universe.
///
/// Users are addressed by their dense index in the sorted universe. The
/// universe is normally the union of the layer node sets; synthetic
/// networks may carry extra users that belong to no layer (see
/// [`MultiplexNetwork::with_universe`]).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    universe: Vec<UserId>,
    layers: Vec<LayerGraph>,
    compiled: Vec<CompiledLayer>,
    complete: bool,
}

impl MultiplexNetwork {
    /// Builds a network whose universe is the union of the layer node sets.
    /// Layer `i` (0-based position) is renumbered to index `i + 1` when it
    /// still carries the default index of zero.
    pub fn new(layers: Vec<LayerGraph>) -> Result<Self> {
        Self::with_universe(layers, core::iter::empty())
    }

    /// Like [`new`](Self::new) but also adds `extra` users to the universe,
    /// whether or not they join any layer.
    pub fn with_universe(
        mut layers: Vec<LayerGraph>,
        extra: impl IntoIterator<Item = UserId>,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::NoLayers);
        }
        for (pos, layer) in layers.iter_mut().enumerate() {
            if layer.index() == 0 {
                layer.set_index(pos + 1);
            } else if layer.index() != pos + 1 {
                return Err(Error::LayerIndexMismatch {
                    expected: pos + 1,
                    found: layer.index(),
                });
            }
        }
        let mut set: BTreeSet<UserId> = extra.into_iter().collect();
        for layer in &layers {
            set.extend(layer.ids().iter().cloned());
        }
        let universe: Vec<UserId> = set.into_iter().collect();
        let compiled = layers
            .iter()
            .map(|layer| compile(layer, &universe))
            .collect();
        let complete = layers.iter().all(LayerGraph::is_complete);
        Ok(MultiplexNetwork {
            universe,
            layers,
            compiled,
            complete,
        })
    }

    pub fn universe(&self) -> &[UserId] {
        &self.universe
    }

    pub fn user_count(&self) -> usize {
        self.universe.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[LayerGraph] {
        &self.layers
    }

    /// Layer at 0-based position `pos` (its index is `pos + 1`).
    pub fn layer(&self, pos: usize) -> &LayerGraph {
        &self.layers[pos]
    }

    pub fn into_layers(self) -> Vec<LayerGraph> {
        self.layers
    }

    pub fn user_index(&self, id: &str) -> Option<usize> {
        self.universe.binary_search_by(|u| u.as_str().cmp(id)).ok()
    }

    pub fn user_id(&self, user: usize) -> &UserId {
        &self.universe[user]
    }

    /// Resolves string ids to user indices.
    pub fn resolve<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<Vec<usize>> {
        ids.into_iter()
            .map(|id| {
                self.user_index(id)
                    .ok_or_else(|| Error::UnknownUser(id.into()))
            })
            .collect()
    }

    /// True when all edge weights and thresholds are set.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.complete {
            return Ok(());
        }
        for layer in &self.layers {
            if let Some(e) = layer.edges().iter().find(|e| e.weight.is_none()) {
                return Err(Error::Incomplete(format!(
                    "layer {} edge {} -> {} has no weight",
                    layer.index(),
                    layer.id(e.src),
                    layer.id(e.dst)
                )));
            }
            if let Some(v) = layer.thresholds().iter().position(Option::is_none) {
                return Err(Error::Incomplete(format!(
                    "layer {} node {} has no threshold",
                    layer.index(),
                    layer.id(v)
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn compiled(&self, pos: usize) -> &CompiledLayer {
        &self.compiled[pos]
    }

    /// Local index of `user` in layer `pos`, if the user joins it.
    pub fn local_index(&self, pos: usize, user: usize) -> Option<usize> {
        self.compiled[pos].to_local[user]
    }

    pub fn is_member(&self, pos: usize, user: usize) -> bool {
        self.local_index(pos, user).is_some()
    }

    /// 0-based positions of the layers `user` joins, ascending.
    pub fn layers_of(&self, user: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.layers.len()).filter(move |&pos| self.is_member(pos, user))
    }

    pub fn membership_count(&self, user: usize) -> usize {
        self.layers_of(user).count()
    }

    /// Threshold of `user` in layer `pos`.
    pub fn threshold(&self, pos: usize, user: usize) -> Option<f64> {
        let local = self.local_index(pos, user)?;
        self.layers[pos].threshold(local)
    }

    /// Incoming edges of `user` in layer `pos` as `(source user, weight)`.
    pub fn in_edges(&self, pos: usize, user: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let c = &self.compiled[pos];
        c.to_local[user]
            .into_iter()
            .flat_map(move |v| c.inc.row(v).map(move |(u, w)| (c.to_global[u], w)))
    }

    /// Outgoing edges of `user` in layer `pos` as `(target user, weight)`.
    pub fn out_edges(&self, pos: usize, user: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let c = &self.compiled[pos];
        c.to_local[user]
            .into_iter()
            .flat_map(move |v| c.out.row(v).map(move |(u, w)| (c.to_global[u], w)))
    }

    /// Users that belong to no layer (only possible via `with_universe`).
    pub fn detached_users(&self) -> Vec<usize> {
        (0..self.user_count())
            .filter(|&u| self.membership_count(u) == 0)
            .collect()
    }

    fn rebuild(&self, layers: Vec<LayerGraph>) -> MultiplexNetwork {
        let compiled = layers
            .iter()
            .map(|layer| compile(layer, &self.universe))
            .collect();
        let complete = layers.iter().all(LayerGraph::is_complete);
        MultiplexNetwork {
            universe: self.universe.clone(),
            layers,
            compiled,
            complete,
        }
    }

    /// Applies [`normalize_incoming_weights`] to every layer, each with its
    /// own derived stream.
    pub fn normalized(&self, rng_seed: u64) -> MultiplexNetwork {
        let layers = self
            .layers
            .iter()
            .map(|l| normalize_incoming_weights(l, rng_seed))
            .collect();
        self.rebuild(layers)
    }

    /// Replaces one layer (same node set) and recompiles.
    pub fn with_layer(&self, pos: usize, layer: LayerGraph) -> Result<MultiplexNetwork> {
        let mut layers = self.layers.clone();
        let mut layer = layer;
        layer.set_index(pos + 1);
        layers[pos] = layer;
        let extra = self.universe.iter().cloned();
        MultiplexNetwork::with_universe(layers, extra)
    }

    /// Restricts the network to the layers at `positions` (renumbered in
    /// the given order), keeping the full universe.
    pub fn select_layers(&self, positions: &[usize]) -> Result<MultiplexNetwork> {
        let layers = positions
            .iter()
            .enumerate()
            .map(|(i, &pos)| {
                let mut l = self.layers[pos].clone();
                l.set_index(i + 1);
                l
            })
            .collect();
        MultiplexNetwork::with_universe(layers, self.universe.iter().cloned())
    }
    /// The layer at `pos` as a network of its own: one layer, universe equal
    /// to the layer's members.
    pub fn layer_network(&self, pos: usize) -> Result<MultiplexNetwork> {
        let mut l = self.layers[pos].clone();
        l.set_index(1);
        MultiplexNetwork::new(vec![l])
    }
}

fn compile(layer: &LayerGraph, universe: &[UserId]) -> CompiledLayer {
    let to_global: Vec<usize> = layer
        .ids()
        .iter()
        .map(|id| universe.binary_search(id).expect("layer node in universe"))
        .collect();
    let mut to_local = vec![None; universe.len()];
    for (local, &g) in to_global.iter().enumerate() {
        to_local[g] = Some(local);
    }
    let n = layer.node_count();
    let pairs: Vec<(usize, usize, f64)> = layer
        .edges()
        .iter()
        .map(|e| (e.src, e.dst, e.weight.unwrap_or(0.0)))
        .collect();
    let out = Csr::from_pairs(n, pairs.clone());
    let inc = Csr::from_pairs(n, pairs.into_iter().map(|(s, d, w)| (d, s, w)).collect());
    let thresholds = layer
        .thresholds()
        .iter()
        .map(|t| t.unwrap_or(0.0))
        .collect();
    CompiledLayer {
        to_global,
        to_local,
        out,
        inc,
        thresholds,
    }
}

/// Draws an independent threshold uniform in `(0, 1]` for every
/// `(user, layer)` pair, replacing any existing thresholds.
pub fn assign_random_thresholds(network: &MultiplexNetwork, rng_seed: u64) -> MultiplexNetwork {
    let layers = network
        .layers()
        .iter()
        .map(|layer| {
            let mut layer = layer.clone();
            let mut rng = rng::stream(rng_seed, "theta", layer.index() as u64);
            for local in 0..layer.node_count() {
                layer.set_threshold_local(local, rng::unit_open_closed(&mut rng));
            }
            layer
        })
        .collect();
    network.rebuild(layers)
}

/// Draws thresholds uniform in `(0, 1]` for the `(user, layer)` pairs that
/// have none, keeping the others. Uses the same streams as
/// [`assign_random_thresholds`].
pub fn fill_missing_thresholds(network: &MultiplexNetwork, rng_seed: u64) -> MultiplexNetwork {
    let layers = network
        .layers()
        .iter()
        .map(|layer| {
            let mut layer = layer.clone();
            let mut rng = rng::stream(rng_seed, "theta", layer.index() as u64);
            for local in 0..layer.node_count() {
                let draw = rng::unit_open_closed(&mut rng);
                if layer.threshold(local).is_none() {
                    layer.set_threshold_local(local, draw);
                }
            }
            layer
        })
        .collect();
    network.rebuild(layers)
}

/// Users present in at least two layers, as ascending user indices.
pub fn overlap_users(network: &MultiplexNetwork) -> Vec<usize> {
    (0..network.user_count())
        .filter(|&u| network.membership_count(u) >= 2)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(index: usize, edges: &[(&str, &str, f64)]) -> LayerGraph {
        let mut l = LayerGraph::new(index);
        for &(s, d, w) in edges {
            l.add_edge(s, d, Some(w)).unwrap();
        }
        l
    }

    #[test]
    fn universe_is_sorted_union() {
        let net = MultiplexNetwork::new(vec![
            layer(1, &[("b", "a", 1.0)]),
            layer(2, &[("c", "b", 1.0)]),
        ])
        .unwrap();
        let ids: Vec<&str> = net.universe().iter().map(UserId::as_str).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(overlap_users(&net), vec![1]);
        assert!(!net.is_complete());
    }

    #[test]
    fn disjoint_layers_have_no_overlap() {
        let net = MultiplexNetwork::new(vec![
            layer(1, &[("a", "b", 1.0)]),
            layer(2, &[("c", "d", 1.0)]),
        ])
        .unwrap();
        assert!(overlap_users(&net).is_empty());
    }

    #[test]
    fn rejects_empty_and_misnumbered() {
        assert_eq!(MultiplexNetwork::new(vec![]), Err(Error::NoLayers));
        let err = MultiplexNetwork::new(vec![layer(2, &[("a", "b", 1.0)])]).unwrap_err();
        assert_eq!(
            err,
            Error::LayerIndexMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn thresholds_are_deterministic_and_independent_per_layer() {
        let net = MultiplexNetwork::new(vec![
            layer(1, &[("a", "b", 1.0)]),
            layer(2, &[("b", "a", 1.0)]),
        ])
        .unwrap();
        let a = assign_random_thresholds(&net, 9);
        let b = assign_random_thresholds(&net, 9);
        assert_eq!(a, b);
        assert!(a.is_complete());
        let u = a.user_index("a").unwrap();
        let t1 = a.threshold(0, u).unwrap();
        let t2 = a.threshold(1, u).unwrap();
        assert_ne!(t1, t2);
        assert!(t1 > 0.0 && t1 <= 1.0);
    }

    #[test]
    fn extra_universe_users_join_no_layer() {
        let net = MultiplexNetwork::with_universe(
            vec![layer(1, &[("a", "b", 1.0)])],
            [UserId::new("z").unwrap()],
        )
        .unwrap();
        assert_eq!(net.user_count(), 3);
        assert_eq!(net.detached_users(), vec![2]);
    }
}
