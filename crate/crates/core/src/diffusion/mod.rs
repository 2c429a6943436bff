//! Hop-limited diffusion: deterministic linear threshold (LT), stochastic
//! threshold (ST) and independent cascade (IC), on single influence graphs
//! and directly on multiplex networks.
//!
//! Rounds are synchronous. Seeds are active at hop 0; at hop `t` every
//! inactive node whose active in-neighbours (as of hop `t - 1`) carry total
//! weight `>= theta - ACTIVATION_TOLERANCE` activates. A node needs at least
//! one active in-neighbour to activate. Propagation stops after the hop
//! budget or at the first hop with no new activation.

mod lt;
mod multiplex;
mod stochastic;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Csr, LayerGraph};

pub use self::lt::{lt_propagate, LtSimulator};
pub use self::multiplex::{
    multiplex_ic_propagate, multiplex_lt_propagate, multiplex_propagate_mc, multiplex_st_propagate,
    MultiplexSimulator,
};
pub use self::stochastic::{ic_propagate, propagate_mc, st_propagate};

pub const DEFAULT_MC_SAMPLES: usize = 1000;

/// Weighted directed graph with node thresholds and node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceGraph {
    thresholds: Vec<f64>,
    node_weights: Vec<f64>,
    out: Csr,
    inc: Csr,
}

impl InfluenceGraph {
    /// `edges` are `(src, dst, weight)`; parallel edges are the caller's
    /// responsibility.
    pub fn new(
        thresholds: Vec<f64>,
        node_weights: Vec<f64>,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        let n = thresholds.len();
        if node_weights.len() != n {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} node weights for {} nodes",
                node_weights.len(),
                n
            )));
        }
        if let Some(&(s, d, _)) = edges.iter().find(|&&(s, d, _)| s >= n || d >= n) {
            return Err(Error::NodeOutOfRange(s.max(d)));
        }
        let inc = Csr::from_pairs(n, edges.iter().map(|&(s, d, w)| (d, s, w)).collect());
        let out = Csr::from_pairs(n, edges);
        Ok(InfluenceGraph {
            thresholds,
            node_weights,
            out,
            inc,
        })
    }

    /// Single layer with unit node weights, in the layer's local indices.
    pub fn from_layer(layer: &LayerGraph) -> Result<Self> {
        if !layer.is_complete() {
            return Err(Error::Incomplete(alloc::format!(
                "layer {} has unset weights or thresholds",
                layer.index()
            )));
        }
        let thresholds = layer
            .thresholds()
            .iter()
            .map(|t| t.unwrap_or(1.0))
            .collect();
        let edges = layer
            .edges()
            .iter()
            .map(|e| (e.src, e.dst, e.weight.unwrap_or(0.0)))
            .collect();
        InfluenceGraph::new(thresholds, alloc::vec![1.0; layer.node_count()], edges)
    }

    pub fn node_count(&self) -> usize {
        self.thresholds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.len()
    }

    pub fn threshold(&self, v: usize) -> f64 {
        self.thresholds[v]
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn node_weight(&self, v: usize) -> f64 {
        self.node_weights[v]
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn total_weight(&self) -> f64 {
        self.node_weights.iter().sum()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out.row(v)
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.inc.row(v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out.degree(v)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc.degree(v)
    }

    /// All edges as `(src, dst, weight)`, ordered by source then target.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.out.row(u).map(move |(v, w)| (u, v, w)))
    }

    pub(crate) fn check_nodes(&self, nodes: &[usize]) -> Result<()> {
        match nodes.iter().find(|&&v| v >= self.node_count()) {
            Some(&v) => Err(Error::NodeOutOfRange(v)),
            None => Ok(()),
        }
    }
}

/// Activation trace. `per_hop[t]` holds the nodes first active at hop `t`
/// (`per_hop[0]` are the seeds), each sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActiveSet {
    pub members: Vec<usize>,
    pub per_hop: Vec<Vec<usize>>,
}

impl ActiveSet {
    pub fn from_hops(per_hop: Vec<Vec<usize>>) -> Self {
        let mut members: Vec<usize> = per_hop.iter().flatten().copied().collect();
        members.sort_unstable();
        ActiveSet { members, per_hop }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn seeds(&self) -> &[usize] {
        self.per_hop.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Hop at which `v` activated.
    pub fn hop_of(&self, v: usize) -> Option<usize> {
        self.per_hop
            .iter()
            .position(|hop| hop.binary_search(&v).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionOutcome {
    pub active: ActiveSet,
    pub coverage_count: usize,
    pub coverage_weight: f64,
    /// Last hop at which some node activated (0 when only seeds are active).
    pub hops_used: usize,
}

/// Monte Carlo summary over `samples` independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct McOutcome {
    pub samples: usize,
    pub mean_count: f64,
    pub mean_weight: f64,
    /// Fraction of samples in which each node ended active.
    pub activation_frequency: Vec<f64>,
    pub max_hops_used: usize,
}

impl McOutcome {
    /// Nodes active in every sample.
    pub fn always_active(&self) -> Vec<usize> {
        self.activation_frequency
            .iter()
            .enumerate()
            .filter(|(_, &f)| f >= 1.0)
            .map(|(v, _)| v)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LinearThreshold,
    /// Thresholds are redrawn uniformly from `(0, Theta(v)]` per sample,
    /// where `Theta(v)` is the threshold stored on the graph.
    StochasticThreshold,
    /// Each newly active node gets one chance per out-edge, succeeding with
    /// probability equal to the edge weight.
    IndependentCascade,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionModel {
    pub kind: ModelKind,
    /// Ignored for LT.
    pub mc_samples: usize,
    pub rng_seed: u64,
}

impl DiffusionModel {
    pub fn linear_threshold() -> Self {
        DiffusionModel {
            kind: ModelKind::LinearThreshold,
            mc_samples: 1,
            rng_seed: 0,
        }
    }

    pub fn stochastic_threshold(mc_samples: usize, rng_seed: u64) -> Self {
        DiffusionModel {
            kind: ModelKind::StochasticThreshold,
            mc_samples,
            rng_seed,
        }
    }

    pub fn independent_cascade(mc_samples: usize, rng_seed: u64) -> Self {
        DiffusionModel {
            kind: ModelKind::IndependentCascade,
            mc_samples,
            rng_seed,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.kind == ModelKind::LinearThreshold
    }

    pub fn check(&self) -> Result<()> {
        if self.mc_samples == 0 {
            return Err(Error::InvalidParameter(
                "mc_samples must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for DiffusionModel {
    fn default() -> Self {
        Self::linear_threshold()
    }
}

/// Denominator for [`coverage_fraction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Denominator {
    /// Number of users (or nodes).
    Count(usize),
    /// Total node weight.
    Weight(f64),
}

/// Covered share of the denominator: the count for [`Denominator::Count`],
/// the active node weight for [`Denominator::Weight`].
pub fn coverage_fraction(outcome: &DiffusionOutcome, denominator: Denominator) -> Result<f64> {
    match denominator {
        Denominator::Count(0) => Err(Error::ZeroDenominator),
        Denominator::Count(n) => Ok(outcome.coverage_count as f64 / n as f64),
        Denominator::Weight(w) if w <= 0.0 => Err(Error::ZeroDenominator),
        Denominator::Weight(w) => Ok(outcome.coverage_weight / w),
    }
}

/// Mean covered amount of a seed set under any model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub count: f64,
    pub weight: f64,
}

/// Coverage of `seeds` after `hops` hops under `model` (sample means for
/// the stochastic models).
pub fn simulate_coverage(
    graph: &InfluenceGraph,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<Coverage> {
    match model.kind {
        ModelKind::LinearThreshold => {
            let (count, weight) = LtSimulator::new(graph).coverage(seeds, hops)?;
            Ok(Coverage {
                count: count as f64,
                weight,
            })
        }
        _ => {
            let mc = propagate_mc(graph, seeds, hops, model)?;
            Ok(Coverage {
                count: mc.mean_count,
                weight: mc.mean_weight,
            })
        }
    }
}
