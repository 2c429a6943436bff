//! Parameter sweeps: every (arm, beta, repetition) cell is solved and
//! measured on the multiplex network, one CSV row per cell.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use lci_core::diffusion::multiplex_lt_propagate;
use lci_core::generator::{generate, SynthSpec};
use lci_core::graph::overlap_users;
use lci_core::rng::derive_seed;
use lci_core::{MultiplexNetwork, Scheme};

use crate::error::{LciError, Result};
use crate::format::write_atomic;
use crate::pipeline::{replay, solve, solve_layer_only, solve_union, Method, SolveOptions};

/// One line of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Solve(Method),
    /// Union of the per-layer solutions.
    Union,
    /// Layer `pos` (0-based) alone; coverage is measured on that layer.
    Only(usize),
}

impl Arm {
    pub fn name(self) -> String {
        match self {
            Arm::Solve(m) => m.name().to_string(),
            Arm::Union => "union".into(),
            Arm::Only(pos) => format!("only-{}", pos + 1),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "union" {
            return Ok(Arm::Union);
        }
        if let Some(i) = s.strip_prefix("only-") {
            let layer: usize = i
                .parse()
                .ok()
                .filter(|&l| l >= 1)
                .ok_or_else(|| LciError::Usage(format!("bad layer in `{s}`")))?;
            return Ok(Arm::Only(layer - 1));
        }
        Ok(Arm::Solve(Method::parse(s)?))
    }
}

/// Where the networks come from.
#[derive(Debug, Clone)]
pub enum Source {
    /// A fresh synthetic network per repetition (seed derived from the
    /// base spec's seed and the repetition number).
    Synth(SynthSpec),
    /// The same network for every repetition.
    Fixed(MultiplexNetwork),
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub source: Source,
    pub arms: Vec<Arm>,
    pub betas: Vec<f64>,
    pub repetitions: usize,
    /// Template for every cell; method and beta are overridden.
    pub options: SolveOptions,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Row {
    pub scheme: String,
    pub beta: f64,
    pub rep: usize,
    pub network_seed: u64,
    pub users: usize,
    pub layers: usize,
    pub seed_size: Option<usize>,
    pub wall_time_ms: Option<f64>,
    /// Share of overlapping users in the seed set.
    pub overlap_seed_fraction: Option<f64>,
    /// Share of overlapping users in the universe.
    pub overlap_population_fraction: f64,
    /// Seeds per layer, `;`-separated.
    pub layer_seeds: String,
    /// Active users per layer after `d` hops, `;`-separated.
    pub layer_influenced: String,
    pub replayed_fraction: Option<f64>,
    /// Share of non-seed activations inside layers that need influence
    /// from other layers (LT only).
    pub external_influence_fraction: Option<f64>,
    /// Share of all activations lost when overlapping seeds are dropped
    /// (LT only).
    pub overlap_influence_fraction: Option<f64>,
    pub status: String,
}

/// Measurements of a seed set on the multiplex network.
struct Metrics {
    overlap_seed_fraction: Option<f64>,
    layer_seeds: Vec<usize>,
    layer_influenced: Vec<usize>,
    external: Option<f64>,
    overlap_influence: Option<f64>,
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn measure(
    network: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
    deterministic: bool,
) -> Result<Metrics> {
    let overlap: BTreeSet<usize> = overlap_users(network).into_iter().collect();
    let k = network.layer_count();
    let layer_seeds = (0..k)
        .map(|pos| seeds.iter().filter(|&&u| network.is_member(pos, u)).count())
        .collect();
    let overlap_seed_fraction = (!seeds.is_empty())
        .then(|| seeds.iter().filter(|u| overlap.contains(u)).count() as f64 / seeds.len() as f64);
    let active = multiplex_lt_propagate(network, seeds, hops)?.active.members;
    let layer_influenced = (0..k)
        .map(|pos| {
            active
                .iter()
                .filter(|&&u| network.is_member(pos, u))
                .count()
        })
        .collect();
    if !deterministic {
        return Ok(Metrics {
            overlap_seed_fraction,
            layer_seeds,
            layer_influenced,
            external: None,
            overlap_influence: None,
        });
    }
    let seed_set: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut activations = 0usize;
    let mut external = 0usize;
    for pos in 0..k {
        let single = network.layer_network(pos)?;
        let local_seeds: Vec<usize> = seeds
            .iter()
            .filter(|&&u| network.is_member(pos, u))
            .map(|&u| {
                single
                    .user_index(network.user_id(u).as_str())
                    .expect("member")
            })
            .collect();
        let alone: BTreeSet<usize> = multiplex_lt_propagate(&single, &local_seeds, hops)?
            .active
            .members
            .iter()
            .map(|&v| {
                network
                    .user_index(single.user_id(v).as_str())
                    .expect("member")
            })
            .collect();
        for &u in &active {
            if network.is_member(pos, u) && !seed_set.contains(&u) {
                activations += 1;
                if !alone.contains(&u) {
                    external += 1;
                }
            }
        }
    }
    let plain: Vec<usize> = seeds
        .iter()
        .copied()
        .filter(|u| !overlap.contains(u))
        .collect();
    let without = multiplex_lt_propagate(network, &plain, hops)?.coverage_count;
    Ok(Metrics {
        overlap_seed_fraction,
        layer_seeds,
        layer_influenced,
        external: (activations > 0).then(|| external as f64 / activations as f64),
        overlap_influence: (!active.is_empty())
            .then(|| (active.len() - without) as f64 / active.len() as f64),
    })
}

fn run_cell(
    network: &MultiplexNetwork,
    arm: Arm,
    beta: f64,
    template: &SolveOptions,
) -> Result<(Vec<usize>, f64, f64)> {
    let opts = SolveOptions { beta, ..*template };
    let start = Instant::now();
    let (seeds, replayed) = match arm {
        Arm::Solve(method) => {
            let (report, users) = solve(network, &SolveOptions { method, ..opts })?;
            (users, report.replayed_fraction)
        }
        Arm::Union => {
            let users = solve_union(network, &opts)?;
            let replayed = replay(network, &users, opts.hops, &opts.model)?;
            (users, replayed)
        }
        Arm::Only(pos) => {
            if pos >= network.layer_count() {
                return Err(LciError::Usage(format!("no layer {}", pos + 1)));
            }
            let users = solve_layer_only(network, pos, &opts)?;
            let single = network.layer_network(pos)?;
            let local: Vec<usize> = users
                .iter()
                .map(|&u| {
                    single
                        .user_index(network.user_id(u).as_str())
                        .expect("member")
                })
                .collect();
            (users, replay(&single, &local, opts.hops, &opts.model)?)
        }
    };
    Ok((seeds, start.elapsed().as_secs_f64() * 1e3, replayed))
}

/// Runs the sweep on at most `jobs` threads (0 = rayon's default). Rows
/// come back in (repetition, arm, beta) order; failed cells are marked in
/// `status` and the sweep goes on.
pub fn run(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<Row>> {
    if spec.repetitions == 0 {
        return Err(LciError::Usage("repetitions must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| LciError::Usage(e.to_string()))?;
    pool.install(|| {
        let networks: Vec<(u64, MultiplexNetwork)> = (0..spec.repetitions)
            .into_par_iter()
            .map(|rep| match &spec.source {
                Source::Synth(base) => {
                    let seed = derive_seed(base.rng_seed, "rep", rep as u64);
                    let net = generate(&SynthSpec {
                        rng_seed: seed,
                        ..base.clone()
                    })?;
                    Ok((seed, net))
                }
                Source::Fixed(net) => Ok((0, net.clone())),
            })
            .collect::<Result<_>>()?;
        let cells: Vec<(usize, Arm, f64)> = (0..spec.repetitions)
            .flat_map(|rep| {
                spec.arms
                    .iter()
                    .flat_map(move |&arm| spec.betas.iter().map(move |&beta| (rep, arm, beta)))
            })
            .collect();
        let rows = cells
            .par_iter()
            .map(|&(rep, arm, beta)| {
                let (network_seed, network) = &networks[rep];
                cell_row(network, *network_seed, rep, arm, beta, &spec.options)
            })
            .collect();
        Ok(rows)
    })
}

fn cell_row(
    network: &MultiplexNetwork,
    network_seed: u64,
    rep: usize,
    arm: Arm,
    beta: f64,
    template: &SolveOptions,
) -> Row {
    let overlap = overlap_users(network).len();
    let mut row = Row {
        scheme: arm.name(),
        beta,
        rep,
        network_seed,
        users: network.user_count(),
        layers: network.layer_count(),
        seed_size: None,
        wall_time_ms: None,
        overlap_seed_fraction: None,
        overlap_population_fraction: overlap as f64 / network.user_count().max(1) as f64,
        layer_seeds: String::new(),
        layer_influenced: String::new(),
        replayed_fraction: None,
        external_influence_fraction: None,
        overlap_influence_fraction: None,
        status: "ok".into(),
    };
    let outcome = run_cell(network, arm, beta, template).and_then(|(seeds, ms, replayed)| {
        let m = measure(
            network,
            &seeds,
            template.hops,
            template.model.is_deterministic(),
        )?;
        Ok((seeds, ms, replayed, m))
    });
    match outcome {
        Ok((seeds, ms, replayed, m)) => {
            row.seed_size = Some(seeds.len());
            row.wall_time_ms = Some(ms);
            row.replayed_fraction = Some(replayed);
            row.overlap_seed_fraction = m.overlap_seed_fraction;
            row.layer_seeds = join(&m.layer_seeds);
            row.layer_influenced = join(&m.layer_influenced);
            row.external_influence_fraction = m.external;
            row.overlap_influence_fraction = m.overlap_influence;
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

pub fn rows_to_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner()
        .map_err(|e| LciError::io("<csv>", e.into_error()))
}

pub fn write_rows(rows: &[Row], path: &Path) -> Result<()> {
    write_atomic(path, &rows_to_csv(rows)?)
}

/// Arms used when none are given.
pub fn default_arms() -> Vec<Arm> {
    vec![Arm::Solve(Method::Coupled(Scheme::Clique)), Arm::Union]
}
