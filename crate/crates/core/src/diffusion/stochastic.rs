use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::lt::{LtSimulator, INACTIVE};
use super::{DiffusionModel, InfluenceGraph, McOutcome, ModelKind};
use crate::error::{Error, Result};
use crate::rng;

/// Monte Carlo IC or ST diffusion; sample `s` uses the stream
/// `(model.rng_seed, "mc", s)`.
pub fn propagate_mc(
    graph: &InfluenceGraph,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    match model.kind {
        ModelKind::IndependentCascade => ic_propagate(graph, seeds, hops, model),
        ModelKind::StochasticThreshold => st_propagate(graph, seeds, hops, model),
        ModelKind::LinearThreshold => Err(Error::InvalidParameter(
            "linear threshold is deterministic; use lt_propagate".into(),
        )),
    }
}

struct Tally {
    count: f64,
    weight: f64,
    freq: Vec<f64>,
    max_hops: usize,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            count: 0.0,
            weight: 0.0,
            freq: vec![0.0; n],
            max_hops: 0,
        }
    }

    fn finish(mut self, samples: usize) -> McOutcome {
        let s = samples as f64;
        self.freq.iter_mut().for_each(|f| *f /= s);
        McOutcome {
            samples,
            mean_count: self.count / s,
            mean_weight: self.weight / s,
            activation_frequency: self.freq,
            max_hops_used: self.max_hops,
        }
    }
}

/// Independent cascade: each node activated at hop `t - 1` tries every
/// out-edge once at hop `t`, succeeding with probability equal to the
/// edge weight. Cascades are cut after `hops` rounds.
pub fn ic_propagate(
    graph: &InfluenceGraph,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    model.check()?;
    graph.check_nodes(seeds)?;
    let n = graph.node_count();
    let mut hop_of = vec![INACTIVE; n];
    let mut active: Vec<usize> = Vec::new();
    let mut tally = Tally::new(n);
    for sample in 0..model.mc_samples {
        let mut rng = rng::stream(model.rng_seed, "mc", sample as u64);
        for &v in &active {
            hop_of[v] = INACTIVE;
        }
        active.clear();
        let mut frontier = Vec::new();
        for &s in seeds {
            if hop_of[s] == INACTIVE {
                hop_of[s] = 0;
                active.push(s);
                frontier.push(s);
            }
        }
        frontier.sort_unstable();
        let mut last = 0;
        for t in 1..=hops {
            let mut next = Vec::new();
            for &u in &frontier {
                for (v, w) in graph.out_edges(u) {
                    if hop_of[v] == INACTIVE && rng.gen::<f64>() < w {
                        hop_of[v] = t as u32;
                        active.push(v);
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            last = t;
            frontier = next;
        }
        tally.max_hops = tally.max_hops.max(last);
        tally.count += active.len() as f64;
        for &v in &active {
            tally.weight += graph.node_weight(v);
            tally.freq[v] += 1.0;
        }
    }
    Ok(tally.finish(model.mc_samples))
}

/// Stochastic threshold: per sample every node draws its threshold
/// uniformly from `(0, Theta(v)]`, `Theta(v)` being the stored threshold,
/// then LT runs on the drawn values.
pub fn st_propagate(
    graph: &InfluenceGraph,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    model.check()?;
    graph.check_nodes(seeds)?;
    let n = graph.node_count();
    let mut sim = LtSimulator::new(graph);
    let mut drawn = vec![f64::NAN; n];
    let mut drawn_list: Vec<usize> = Vec::new();
    let mut tally = Tally::new(n);
    for sample in 0..model.mc_samples {
        let mut rng = rng::stream(model.rng_seed, "mc", sample as u64);
        for &v in &drawn_list {
            drawn[v] = f64::NAN;
        }
        drawn_list.clear();
        let mut theta = |v: usize| {
            if drawn[v].is_nan() {
                drawn[v] = graph.threshold(v) * rng::unit_open_closed(&mut rng);
                drawn_list.push(v);
            }
            drawn[v]
        };
        let (count, weight) = sim.spread(seeds, hops, &mut theta, true)?;
        let outcome = sim.outcome(count, weight);
        tally.max_hops = tally.max_hops.max(outcome.hops_used);
        tally.count += count as f64;
        tally.weight += weight;
        for &v in &outcome.active.members {
            tally.freq[v] += 1.0;
        }
    }
    Ok(tally.finish(model.mc_samples))
}
