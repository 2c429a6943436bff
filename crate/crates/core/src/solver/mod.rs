//! Seed selection for the least cost influence problem: find a small seed
//! set whose diffusion covers at least a `beta` fraction within the hop
//! budget.

mod brute;
mod greedy;
mod ilp;

use alloc::vec::Vec;

use crate::coupling::CoupledNetwork;
use crate::diffusion::{simulate_coverage, DiffusionModel, LtSimulator, ModelKind};
use crate::error::{Error, Result};

pub use self::brute::{brute_force_optimal, feasible_set_of_size, BRUTE_FORCE_USER_CAP};
pub use self::greedy::{improved_greedy, naive_greedy};
pub use self::ilp::{export_ilp, export_ilp_graph, IlpSummary};

pub const DEFAULT_LIGHT_REEVALUATIONS: usize = 4;
pub const DEFAULT_HEAVY_PERIOD: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoverageMode {
    /// Number of active vertices.
    #[default]
    Count,
    /// Total node weight of active vertices.
    Weight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyConfig {
    /// Target fraction in `(0, 1]`.
    pub beta: f64,
    /// Hop budget `d` on the multiplex network; the coupled run uses
    /// `hop_scale * d`.
    pub hops: usize,
    /// `T`: entries re-evaluated in a light iteration.
    pub light_reevaluations: usize,
    /// `R`: every `R`-th iteration refreshes every key.
    pub heavy_period: usize,
    pub coverage_mode: CoverageMode,
    pub model: DiffusionModel,
}

impl GreedyConfig {
    pub fn new(beta: f64, hops: usize) -> Self {
        GreedyConfig {
            beta,
            hops,
            light_reevaluations: DEFAULT_LIGHT_REEVALUATIONS,
            heavy_period: DEFAULT_HEAVY_PERIOD,
            coverage_mode: CoverageMode::Count,
            model: DiffusionModel::linear_threshold(),
        }
    }

    /// Defaults matched to a coupling (coverage mode from its scheme).
    pub fn for_network(coupled: &CoupledNetwork, beta: f64, hops: usize) -> Self {
        GreedyConfig {
            coverage_mode: coupled.coverage_mode(),
            ..GreedyConfig::new(beta, hops)
        }
    }

    pub fn with_lazy(mut self, light_reevaluations: usize, heavy_period: usize) -> Self {
        self.light_reevaluations = light_reevaluations;
        self.heavy_period = heavy_period;
        self
    }

    pub fn with_model(mut self, model: DiffusionModel) -> Self {
        self.model = model;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        if self.hops == 0 {
            return Err(Error::InvalidParameter("hops must be at least 1".into()));
        }
        if self.light_reevaluations == 0 || self.heavy_period == 0 {
            return Err(Error::InvalidParameter("T and R must be at least 1".into()));
        }
        self.model.check()
    }
}

/// Selected seeds in selection order.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    /// User indices.
    pub users: Vec<usize>,
    /// Coupled vertices that were selected (empty for direct solvers).
    pub nodes: Vec<usize>,
    /// Marginal gain of each selection, fresh at selection time.
    pub gains: Vec<f64>,
    pub achieved_fraction: f64,
    /// Coverage evaluations spent by the greedy solvers (zero for exhaustive
    /// search).
    pub evaluations: usize,
}

impl SeedSet {
    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }
}

/// Coverage of seed sets on a coupled network under a greedy config.
pub struct Objective<'a> {
    coupled: &'a CoupledNetwork,
    hops: usize,
    mode: CoverageMode,
    model: DiffusionModel,
    total: f64,
    sim: LtSimulator<'a>,
    evaluations: usize,
}

impl<'a> Objective<'a> {
    pub fn new(coupled: &'a CoupledNetwork, cfg: &GreedyConfig) -> Self {
        let graph = coupled.graph();
        let total = match cfg.coverage_mode {
            CoverageMode::Count => graph.node_count() as f64,
            CoverageMode::Weight => graph.total_weight(),
        };
        Objective {
            coupled,
            hops: coupled.hop_scale() * cfg.hops,
            mode: cfg.coverage_mode,
            model: cfg.model,
            total,
            sim: LtSimulator::new(graph),
            evaluations: 0,
        }
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Covered amount after `hop_scale * d` hops.
    pub fn coverage(&mut self, seeds: &[usize]) -> Result<f64> {
        self.evaluations += 1;
        let (count, weight) = if self.model.kind == ModelKind::LinearThreshold {
            let (c, w) = self.sim.coverage(seeds, self.hops)?;
            (c as f64, w)
        } else {
            let c = simulate_coverage(self.coupled.graph(), seeds, self.hops, &self.model)?;
            (c.count, c.weight)
        };
        Ok(match self.mode {
            CoverageMode::Count => count,
            CoverageMode::Weight => weight,
        })
    }
}

/// `f_I(u)`: coverage of `current + candidate` minus coverage of `current`.
pub fn marginal_gain(
    coupled: &CoupledNetwork,
    current: &[usize],
    candidate: usize,
    cfg: &GreedyConfig,
) -> Result<f64> {
    if coupled.user_of(candidate).is_none() {
        return Err(Error::NotAUserNode(candidate));
    }
    let mut objective = Objective::new(coupled, cfg);
    let base = objective.coverage(current)?;
    let mut with: Vec<usize> = current.to_vec();
    with.push(candidate);
    Ok(objective.coverage(&with)? - base)
}
