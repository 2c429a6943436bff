//! Reproducible synthetic multiplex networks: layers sampled from a user
//! base, directed Erdős–Rényi edges, normalised weights, random thresholds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{assign_random_thresholds, LayerGraph, MultiplexNetwork, UserId};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Size of the user base. Every base user is part of the universe, also
    /// those that end up in no layer.
    pub universe_size: usize,
    /// `(layer_size, edge_prob)` per layer.
    pub per_layer: Vec<(usize, f64)>,
    /// When set, every pair of layers `(i, j)` shares exactly
    /// `round(f * min(size_i, size_j))` users and no user joins more than two
    /// layers. When unset, layers are sampled independently.
    pub overlap_fraction: Option<f64>,
    pub rng_seed: u64,
}

impl SynthSpec {
    pub fn new(universe_size: usize, per_layer: Vec<(usize, f64)>, rng_seed: u64) -> Self {
        SynthSpec {
            universe_size,
            per_layer,
            overlap_fraction: None,
            rng_seed,
        }
    }

    pub fn with_overlap(mut self, fraction: f64) -> Self {
        self.overlap_fraction = Some(fraction);
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.per_layer.is_empty() {
            return Err(Error::NoLayers);
        }
        for (i, &(size, p)) in self.per_layer.iter().enumerate() {
            if size > self.universe_size {
                return Err(Error::InvalidParameter(format!(
                    "layer {} has {size} users but the base only {}",
                    i + 1,
                    self.universe_size
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "edge probability of layer {} is {p}, outside [0, 1]",
                    i + 1
                )));
            }
        }
        if let Some(f) = self.overlap_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidParameter(format!(
                    "overlap fraction {f} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Prescribed shared-user count for layers `i < j` under forced overlap.
    pub fn shared_count(&self, i: usize, j: usize) -> Option<usize> {
        let f = self.overlap_fraction?;
        let smaller = self.per_layer[i].0.min(self.per_layer[j].0);
        Some(libm::round(f * smaller as f64) as usize)
    }
}

/// Id of base user `i`, zero-padded so that ids sort numerically.
pub fn user_name(i: usize, universe_size: usize) -> String {
    let mut width = 1;
    let mut rest = universe_size.saturating_sub(1);
    while rest >= 10 {
        rest /= 10;
        width += 1;
    }
    format!("u{i:0width$}")
}

fn sample_members(spec: &SynthSpec) -> Result<Vec<Vec<usize>>> {
    let k = spec.per_layer.len();
    if spec.overlap_fraction.is_none() {
        return Ok((0..k)
            .map(|pos| {
                let mut rng = rng::stream(spec.rng_seed, "members", pos as u64);
                let mut members =
                    rand::seq::index::sample(&mut rng, spec.universe_size, spec.per_layer[pos].0)
                        .into_vec();
                members.sort_unstable();
                members
            })
            .collect());
    }
    let mut need: Vec<usize> = spec.per_layer.iter().map(|&(size, _)| size).collect();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let c = spec.shared_count(i, j).expect("overlap set");
            pairs.push((i, j, c));
        }
    }
    for &(i, j, c) in &pairs {
        for layer in [i, j] {
            need[layer] = need[layer].checked_sub(c).ok_or_else(|| {
                Error::InfeasibleOverlap(format!(
                    "layer {} is too small for its prescribed shared users",
                    layer + 1
                ))
            })?;
        }
    }
    let required: usize = pairs.iter().map(|p| p.2).sum::<usize>() + need.iter().sum::<usize>();
    if required > spec.universe_size {
        return Err(Error::InfeasibleOverlap(format!(
            "{required} distinct users needed, base has {}",
            spec.universe_size
        )));
    }
    let mut pool: Vec<usize> = (0..spec.universe_size).collect();
    pool.shuffle(&mut rng::stream(spec.rng_seed, "members", 0));
    let mut next = pool.into_iter();
    let mut members = alloc::vec![Vec::new(); k];
    for &(i, j, c) in &pairs {
        for user in next.by_ref().take(c) {
            members[i].push(user);
            members[j].push(user);
        }
    }
    for (layer, &n) in need.iter().enumerate() {
        members[layer].extend(next.by_ref().take(n));
    }
    for m in &mut members {
        m.sort_unstable();
    }
    Ok(members)
}

/// Directed G(n, p) over ordered pairs, by geometric skipping.
fn sample_edges<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if n < 2 || p <= 0.0 {
        return edges;
    }
    let pairs = n * (n - 1);
    let to_pair = |k: usize| {
        let src = k / (n - 1);
        let r = k % (n - 1);
        (src, if r < src { r } else { r + 1 })
    };
    if p >= 1.0 {
        return (0..pairs).map(to_pair).collect();
    }
    let log_q = libm::log(1.0 - p);
    let mut k = 0usize;
    loop {
        let skip = libm::floor(libm::log(rng::unit_open_closed(rng)) / log_q);
        if skip >= (pairs - k) as f64 {
            break;
        }
        k += skip as usize;
        edges.push(to_pair(k));
        k += 1;
        if k >= pairs {
            break;
        }
    }
    edges
}

/// Builds the network described by `spec`. Equal specs give equal networks.
pub fn generate(spec: &SynthSpec) -> Result<MultiplexNetwork> {
    spec.check()?;
    let names: Vec<String> = (0..spec.universe_size)
        .map(|i| user_name(i, spec.universe_size))
        .collect();
    let members = sample_members(spec)?;
    let mut layers = Vec::with_capacity(members.len());
    for (pos, users) in members.iter().enumerate() {
        let mut layer = LayerGraph::new(pos + 1);
        for &u in users {
            layer.add_node(&names[u])?;
        }
        let mut rng = rng::stream(spec.rng_seed, "edges", pos as u64);
        for (a, b) in sample_edges(users.len(), spec.per_layer[pos].1, &mut rng) {
            layer.add_edge(&names[users[a]], &names[users[b]], None)?;
        }
        layers.push(layer);
    }
    let base = names
        .into_iter()
        .map(UserId::new)
        .collect::<Result<Vec<_>>>()?;
    let network = MultiplexNetwork::with_universe(layers, base)?;
    Ok(assign_random_thresholds(
        &network.normalized(spec.rng_seed),
        spec.rng_seed,
    ))
}

/// The small instance family used for exact comparisons: two layers of 50
/// users drawn from a base of 100, edge probability 0.04.
pub fn small_ilp_spec(rng_seed: u64) -> SynthSpec {
    SynthSpec::new(100, alloc::vec![(50, 0.04), (50, 0.04)], rng_seed)
}

pub fn small_ilp_instance(rng_seed: u64) -> MultiplexNetwork {
    generate(&small_ilp_spec(rng_seed)).expect("preset spec is valid")
}
