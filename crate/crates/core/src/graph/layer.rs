use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::UserId;
use crate::error::{Error, Result};
use crate::rng;

/// Directed edge between two local node indices of a layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// `None` until the layer is normalised.
    pub weight: Option<f64>,
}

/// One network of the multiplex: nodes, weighted directed edges and
/// per-node thresholds, all addressed by local indices in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGraph {
    index: usize,
    ids: Vec<UserId>,
    lookup: BTreeMap<UserId, usize>,
    edges: Vec<Edge>,
    edge_lookup: BTreeMap<(usize, usize), usize>,
    thresholds: Vec<Option<f64>>,
}

impl LayerGraph {
    /// Empty layer with the given 1-based index.
    pub fn new(index: usize) -> Self {
        LayerGraph {
            index,
            ids: Vec::new(),
            lookup: BTreeMap::new(),
            edges: Vec::new(),
            edge_lookup: BTreeMap::new(),
            thresholds: Vec::new(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub(crate) fn set_index(&mut self, index: usize) {
        self.index = index;
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[UserId] {
        &self.ids
    }

    pub fn id(&self, local: usize) -> &UserId {
        &self.ids[local]
    }

    pub fn local(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.lookup.contains_key(id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn thresholds(&self) -> &[Option<f64>] {
        &self.thresholds
    }

    pub fn threshold(&self, local: usize) -> Option<f64> {
        self.thresholds[local]
    }

    pub fn weight(&self, src: &str, dst: &str) -> Option<Option<f64>> {
        let key = (self.local(src)?, self.local(dst)?);
        self.edge_lookup.get(&key).map(|&e| self.edges[e].weight)
    }

    /// Adds a node if it is not present yet and returns its local index.
    pub fn add_node(&mut self, id: &str) -> Result<usize> {
        if let Some(local) = self.local(id) {
            return Ok(local);
        }
        let user = UserId::new(id.to_string())?;
        let local = self.ids.len();
        self.lookup.insert(user.clone(), local);
        self.ids.push(user);
        self.thresholds.push(None);
        Ok(local)
    }

    /// Adds `src -> dst`. Self-loops, parallel edges and weights outside
    /// `[0, 1]` are rejected.
    pub fn add_edge(&mut self, src: &str, dst: &str, weight: Option<f64>) -> Result<()> {
        if src == dst {
            return Err(Error::SelfLoop(src.to_string()));
        }
        if let Some(w) = weight {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange {
                    src: src.to_string(),
                    dst: dst.to_string(),
                    weight: w,
                });
            }
        }
        if let (Some(s), Some(d)) = (self.local(src), self.local(dst)) {
            if self.edge_lookup.contains_key(&(s, d)) {
                return Err(Error::DuplicateEdge {
                    src: src.to_string(),
                    dst: dst.to_string(),
                });
            }
        }
        let s = self.add_node(src)?;
        let d = self.add_node(dst)?;
        self.edge_lookup.insert((s, d), self.edges.len());
        self.edges.push(Edge {
            src: s,
            dst: d,
            weight,
        });
        Ok(())
    }

    /// Sets the threshold of `id`, adding the node when missing. Range
    /// checks are left to [`validate`](super::validate).
    pub fn set_threshold(&mut self, id: &str, theta: f64) -> Result<()> {
        if !theta.is_finite() {
            return Err(Error::NonFinite(theta));
        }
        let local = self.add_node(id)?;
        self.thresholds[local] = Some(theta);
        Ok(())
    }

    pub(crate) fn set_threshold_local(&mut self, local: usize, theta: f64) {
        self.thresholds[local] = Some(theta);
    }

    /// True when every edge weight and every threshold is set.
    pub fn is_complete(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_some()) && self.thresholds.iter().all(Option::is_some)
    }

    /// Sum of set incoming weights per local node.
    pub fn in_weight_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.ids.len()];
        for e in &self.edges {
            sums[e.dst] += e.weight.unwrap_or(0.0);
        }
        sums
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.ids.len()];
        for e in &self.edges {
            deg[e.dst] += 1;
        }
        deg
    }
}

/// Fills unset edge weights with uniform draws from `(0, 1)` and rescales
/// the incoming weights of every node to sum to one. Nodes without incoming
/// edges (or whose incoming weights are all zero) are left untouched.
pub fn normalize_incoming_weights(layer: &LayerGraph, rng_seed: u64) -> LayerGraph {
    let mut out = layer.clone();
    let mut rng = rng::stream(rng_seed, "weights", layer.index as u64);
    for e in &mut out.edges {
        if e.weight.is_none() {
            e.weight = Some(rng::unit_open(&mut rng));
        }
    }
    let sums = out.in_weight_sums();
    for e in &mut out.edges {
        let s = sums[e.dst];
        if s > 0.0 {
            e.weight = e.weight.map(|w| w / s);
        }
    }
    out
}
