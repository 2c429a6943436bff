//! Coupling schemes: map a multiplex network to one influence graph.
//!
//! Lossless schemes reproduce multiplex LT diffusion exactly, with a hop
//! stretch of 2 (clique synchronisation) or 3 (star synchronisation). The
//! reduced variants drop dummy vertices and use node weights instead. The
//! lossy scheme keeps one node per user and merges the layers through
//! per-user parameters, so that anything it activates is also active in the
//! multiplex network.

mod lossless;
mod lossy;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::diffusion::{InfluenceGraph, ModelKind};
use crate::error::{Error, Result};
use crate::graph::{MultiplexNetwork, UserId};
use crate::solver::CoverageMode;

pub use self::lossy::{
    couple_lossy, couple_lossy_with, easiness, involvement, LossyParams, DEFAULT_ALPHA_FLOOR,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LossyKind {
    Easiness,
    Involvement,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyncStyle {
    Clique,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Clique,
    Star,
    ReducedClique,
    ReducedStar,
    Lossy(LossyKind),
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::Clique,
        Scheme::Star,
        Scheme::ReducedClique,
        Scheme::ReducedStar,
        Scheme::Lossy(LossyKind::Easiness),
        Scheme::Lossy(LossyKind::Involvement),
        Scheme::Lossy(LossyKind::Average),
    ];

    /// Hop stretch between the multiplex process and the coupled one.
    pub fn hop_scale(self) -> usize {
        match self {
            Scheme::Clique | Scheme::ReducedClique => 2,
            Scheme::Star | Scheme::ReducedStar => 3,
            Scheme::Lossy(_) => 1,
        }
    }

    pub fn is_lossless(self) -> bool {
        !matches!(self, Scheme::Lossy(_))
    }

    /// Reduced schemes measure coverage by node weight.
    pub fn coverage_mode(self) -> CoverageMode {
        match self {
            Scheme::ReducedClique | Scheme::ReducedStar => CoverageMode::Weight,
            _ => CoverageMode::Count,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Clique => "clique",
            Scheme::Star => "star",
            Scheme::ReducedClique => "reduced-clique",
            Scheme::ReducedStar => "reduced-star",
            Scheme::Lossy(LossyKind::Easiness) => "lossy-easiness",
            Scheme::Lossy(LossyKind::Involvement) => "lossy-involvement",
            Scheme::Lossy(LossyKind::Average) => "lossy-average",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown scheme `{s}`")))
    }
}

/// Weight put on synchronisation edges into a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SyncWeights {
    /// The target's threshold (LT), or its threshold bound (ST).
    #[default]
    Threshold,
    /// Weight 1, so cascades cross with certainty (IC).
    Unit,
}

impl SyncWeights {
    pub fn for_model(kind: ModelKind) -> Self {
        match kind {
            ModelKind::IndependentCascade => SyncWeights::Unit,
            _ => SyncWeights::Threshold,
        }
    }
}

/// Role of a coupled vertex. `user` is a user index, `layer` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Gateway { user: usize },
    Representative { user: usize, layer: usize },
    Dummy { user: usize, layer: usize },
    Intermediate { user: usize },
    UserVertex { user: usize },
}

impl NodeKind {
    pub fn user(self) -> usize {
        match self {
            NodeKind::Gateway { user }
            | NodeKind::Representative { user, .. }
            | NodeKind::Dummy { user, .. }
            | NodeKind::Intermediate { user }
            | NodeKind::UserVertex { user } => user,
        }
    }

    pub fn layer(self) -> Option<usize> {
        match self {
            NodeKind::Representative { layer, .. } | NodeKind::Dummy { layer, .. } => Some(layer),
            _ => None,
        }
    }

    /// Gateways and user vertices are the images of the user mapping.
    pub fn is_user_node(self) -> bool {
        matches!(self, NodeKind::Gateway { .. } | NodeKind::UserVertex { .. })
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Gateway { .. } => "gateway",
            NodeKind::Representative { .. } => "representative",
            NodeKind::Dummy { .. } => "dummy",
            NodeKind::Intermediate { .. } => "intermediate",
            NodeKind::UserVertex { .. } => "user",
        }
    }
}

/// Result of a coupling: the influence graph, the role of each vertex, and
/// the user mapping restricted to gateway / user vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledNetwork {
    scheme: Scheme,
    graph: InfluenceGraph,
    kinds: Vec<NodeKind>,
    user_node: Vec<usize>,
    users: Vec<UserId>,
    layer_count: usize,
}

impl CoupledNetwork {
    pub(crate) fn from_parts(
        scheme: Scheme,
        graph: InfluenceGraph,
        kinds: Vec<NodeKind>,
        network: &MultiplexNetwork,
    ) -> Self {
        let mut user_node = alloc::vec![usize::MAX; network.user_count()];
        for (v, kind) in kinds.iter().enumerate() {
            if kind.is_user_node() {
                user_node[kind.user()] = v;
            }
        }
        debug_assert!(user_node.iter().all(|&v| v != usize::MAX));
        CoupledNetwork {
            scheme,
            graph,
            kinds,
            user_node,
            users: network.universe().to_vec(),
            layer_count: network.layer_count(),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn graph(&self) -> &InfluenceGraph {
        &self.graph
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn kind(&self, v: usize) -> NodeKind {
        self.kinds[v]
    }

    pub fn hop_scale(&self) -> usize {
        self.scheme.hop_scale()
    }

    pub fn coverage_mode(&self) -> CoverageMode {
        self.scheme.coverage_mode()
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    pub fn users(&self) -> &[UserId] {
        &self.users
    }

    /// The user a gateway / user vertex stands for.
    pub fn user_of(&self, v: usize) -> Option<usize> {
        self.kinds
            .get(v)
            .filter(|k| k.is_user_node())
            .map(|k| k.user())
    }

    /// Gateway / user vertex of `user`.
    pub fn node_of(&self, user: usize) -> usize {
        self.user_node[user]
    }

    /// Gateway / user vertices in user order (also ascending node order).
    pub fn user_nodes(&self) -> &[usize] {
        &self.user_node
    }

    /// Images of `nodes` under the user mapping. Any node outside its domain
    /// (a representative, say) is an error.
    pub fn map_nodes_to_users(&self, nodes: &[usize]) -> Result<Vec<usize>> {
        nodes
            .iter()
            .map(|&v| {
                if v >= self.node_count() {
                    return Err(Error::NodeOutOfRange(v));
                }
                self.user_of(v).ok_or(Error::NotAUserNode(v))
            })
            .collect()
    }

    pub fn map_users_to_nodes(&self, users: &[usize]) -> Result<Vec<usize>> {
        users
            .iter()
            .map(|&u| {
                self.user_node
                    .get(u)
                    .copied()
                    .ok_or(Error::NodeOutOfRange(u))
            })
            .collect()
    }

    /// Users whose gateway / user vertex is in `active`, ascending.
    pub fn active_users(&self, active: &[usize]) -> Vec<usize> {
        let mut users: Vec<usize> = active.iter().filter_map(|&v| self.user_of(v)).collect();
        users.sort_unstable();
        users
    }
}

/// Couples `network` with `scheme`, LT-style synchronisation weights.
pub fn couple(network: &MultiplexNetwork, scheme: Scheme) -> Result<CoupledNetwork> {
    couple_with(network, scheme, SyncWeights::Threshold)
}

/// Couples `network` with explicit synchronisation weights (lossy schemes
/// ignore them).
pub fn couple_with(
    network: &MultiplexNetwork,
    scheme: Scheme,
    sync: SyncWeights,
) -> Result<CoupledNetwork> {
    match scheme {
        Scheme::Clique => lossless::build(network, SyncStyle::Clique, false, sync),
        Scheme::Star => lossless::build(network, SyncStyle::Star, false, sync),
        Scheme::ReducedClique => lossless::build(network, SyncStyle::Clique, true, sync),
        Scheme::ReducedStar => lossless::build(network, SyncStyle::Star, true, sync),
        Scheme::Lossy(kind) => couple_lossy(network, kind),
    }
}

/// Clique lossless scheme: per user a gateway plus one representative or
/// dummy per layer, all pairwise synchronised. Hop scale 2.
pub fn couple_clique_lossless(network: &MultiplexNetwork) -> Result<CoupledNetwork> {
    couple(network, Scheme::Clique)
}

/// Star lossless scheme: synchronisation through one intermediate vertex
/// per user. Hop scale 3.
pub fn couple_star_lossless(network: &MultiplexNetwork) -> Result<CoupledNetwork> {
    couple(network, Scheme::Star)
}

/// Reduced lossless scheme: representatives only for joined layers, the
/// user vertex weighted `k - p`.
pub fn couple_reduced(network: &MultiplexNetwork, style: SyncStyle) -> Result<CoupledNetwork> {
    match style {
        SyncStyle::Clique => couple(network, Scheme::ReducedClique),
        SyncStyle::Star => couple(network, Scheme::ReducedStar),
    }
}

/// Free-function form of [`CoupledNetwork::map_nodes_to_users`].
pub fn map_nodes_to_users(coupled: &CoupledNetwork, nodes: &[usize]) -> Result<Vec<usize>> {
    coupled.map_nodes_to_users(nodes)
}
