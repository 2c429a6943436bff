//! Couple, select seeds, map them back to users, replay on the multiplex
//! network.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use lci_core::coupling::couple_with;
use lci_core::diffusion::{multiplex_lt_propagate, multiplex_propagate_mc};
use lci_core::solver::{brute_force_optimal, improved_greedy, naive_greedy};
use lci_core::{
    meets_target, DiffusionModel, GreedyConfig, LossyKind, ModelKind, MultiplexNetwork, Scheme,
    SyncWeights,
};

use crate::error::{LciError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How seeds are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Greedy on a coupled network.
    Coupled(Scheme),
    /// Exhaustive search on the multiplex network (small universes only).
    Direct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Coupled(s) => s.name(),
            Method::Direct => "direct",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" | "none" => Ok(Method::Direct),
            _ => Ok(Method::Coupled(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub method: Method,
    pub beta: f64,
    pub hops: usize,
    pub light_reevaluations: usize,
    pub heavy_period: usize,
    pub model: DiffusionModel,
    /// Use the plain greedy instead of the lazy one.
    pub naive: bool,
}

impl SolveOptions {
    pub fn new(method: Method, beta: f64, hops: usize) -> Self {
        let cfg = GreedyConfig::new(beta, hops);
        SolveOptions {
            method,
            beta,
            hops,
            light_reevaluations: cfg.light_reevaluations,
            heavy_period: cfg.heavy_period,
            model: cfg.model,
            naive: false,
        }
    }
}

pub fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::LinearThreshold => "lt",
        ModelKind::StochasticThreshold => "st",
        ModelKind::IndependentCascade => "ic",
    }
}

/// One solve run. Field names double as the JSON schema.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub scheme: String,
    pub beta: f64,
    pub d: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub model: String,
    pub mc_samples: usize,
    pub rng_seed: u64,
    pub users: usize,
    pub layers: usize,
    pub coupled_nodes: usize,
    pub coupled_edges: usize,
    pub seed_users: Vec<String>,
    pub gains: Vec<f64>,
    /// Coverage on the graph the solver worked on.
    pub achieved_fraction: f64,
    /// Coverage of the mapped seeds on the multiplex network.
    pub replayed_fraction: f64,
    pub replay_meets_target: bool,
    pub evaluations: usize,
    pub wall_time_ms: f64,
    pub notes: Vec<String>,
    pub version: &'static str,
}

/// Fraction of users covered by `users` on the multiplex network.
pub fn replay(
    network: &MultiplexNetwork,
    users: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<f64> {
    let n = network.user_count() as f64;
    let covered = match model.kind {
        ModelKind::LinearThreshold => {
            multiplex_lt_propagate(network, users, hops)?.coverage_count as f64
        }
        _ => multiplex_propagate_mc(network, users, hops, model)?.mean_count,
    };
    Ok(if n > 0.0 { covered / n } else { 1.0 })
}

/// Runs the pipeline and checks the replayed coverage. Under LT a replay
/// below `beta` is an error; Monte Carlo replays only report it.
pub fn solve(network: &MultiplexNetwork, opts: &SolveOptions) -> Result<(SolveReport, Vec<usize>)> {
    let start = Instant::now();
    let (users, gains, achieved, nodes, edges, evaluations) = match opts.method {
        Method::Direct => {
            if !opts.model.is_deterministic() {
                return Err(LciError::Usage(
                    "direct search supports the LT model only".into(),
                ));
            }
            let out = brute_force_optimal(network, opts.beta, opts.hops)?;
            (
                out.users,
                out.gains,
                out.achieved_fraction,
                0,
                0,
                out.evaluations,
            )
        }
        Method::Coupled(scheme) => {
            let coupled = couple_with(network, scheme, SyncWeights::for_model(opts.model.kind))?;
            let cfg = GreedyConfig::for_network(&coupled, opts.beta, opts.hops)
                .with_lazy(opts.light_reevaluations, opts.heavy_period)
                .with_model(opts.model);
            let out = if opts.naive {
                naive_greedy(&coupled, &cfg)?
            } else {
                improved_greedy(&coupled, &cfg)?
            };
            (
                out.users,
                out.gains,
                out.achieved_fraction,
                coupled.node_count(),
                coupled.edge_count(),
                out.evaluations,
            )
        }
    };
    let replayed = replay(network, &users, opts.hops, &opts.model)?;
    let ok = meets_target(
        replayed * network.user_count() as f64,
        network.user_count() as f64,
        opts.beta,
    );
    if !ok && opts.model.is_deterministic() {
        return Err(LciError::Soundness {
            beta: opts.beta,
            replayed,
        });
    }
    let report = SolveReport {
        scheme: opts.method.name().to_string(),
        beta: opts.beta,
        d: opts.hops,
        t: opts.light_reevaluations,
        r: opts.heavy_period,
        model: model_name(opts.model.kind).to_string(),
        mc_samples: opts.model.mc_samples,
        rng_seed: opts.model.rng_seed,
        users: network.user_count(),
        layers: network.layer_count(),
        coupled_nodes: nodes,
        coupled_edges: edges,
        seed_users: users
            .iter()
            .map(|&u| network.user_id(u).to_string())
            .collect(),
        gains,
        achieved_fraction: achieved,
        replayed_fraction: replayed,
        replay_meets_target: ok,
        evaluations,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        notes: Vec::new(),
        version: VERSION,
    };
    Ok((report, users))
}

/// Seeds for layer `pos` alone (its members as the universe, target `beta`
/// of them), as user indices of `network`.
pub fn solve_layer_only(
    network: &MultiplexNetwork,
    pos: usize,
    opts: &SolveOptions,
) -> Result<Vec<usize>> {
    let single = network.layer_network(pos)?;
    // With one layer the average-parameter lossy coupling is the layer
    // itself, so it is exact and the cheapest choice.
    let opts = SolveOptions {
        method: Method::Coupled(Scheme::Lossy(LossyKind::Average)),
        ..*opts
    };
    let (_, users) = solve(&single, &opts)?;
    Ok(users
        .iter()
        .map(|&u| {
            network
                .user_index(single.user_id(u).as_str())
                .expect("layer user in universe")
        })
        .collect())
}

/// Union of the per-layer solutions.
pub fn solve_union(network: &MultiplexNetwork, opts: &SolveOptions) -> Result<Vec<usize>> {
    let mut all = BTreeSet::new();
    for pos in 0..network.layer_count() {
        all.extend(solve_layer_only(network, pos, opts)?);
    }
    Ok(all.into_iter().collect())
}
