use alloc::vec;
use alloc::vec::Vec;

use super::{ActiveSet, DiffusionOutcome, InfluenceGraph};
use crate::error::Result;
use crate::ACTIVATION_TOLERANCE;

pub(crate) const INACTIVE: u32 = u32::MAX;

/// Reusable scratch state for threshold propagation over one graph.
///
/// The graph is only read; several simulators may share it across threads.
pub struct LtSimulator<'g> {
    graph: &'g InfluenceGraph,
    hop_of: Vec<u32>,
    acc: Vec<f64>,
    stamp: Vec<u32>,
    touched: Vec<usize>,
    per_hop: Vec<Vec<usize>>,
    epoch: u32,
}

impl<'g> LtSimulator<'g> {
    pub fn new(graph: &'g InfluenceGraph) -> Self {
        let n = graph.node_count();
        LtSimulator {
            graph,
            hop_of: vec![INACTIVE; n],
            acc: vec![0.0; n],
            stamp: vec![0; n],
            touched: Vec::new(),
            per_hop: Vec::new(),
            epoch: 0,
        }
    }

    pub fn graph(&self) -> &'g InfluenceGraph {
        self.graph
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.hop_of[v] = INACTIVE;
            self.acc[v] = 0.0;
        }
        self.touched.clear();
        self.per_hop.clear();
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX - 1 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    /// Runs propagation with thresholds supplied by `theta`, which is called
    /// only for nodes receiving influence. Returns `(count, weight)`.
    pub(crate) fn spread(
        &mut self,
        seeds: &[usize],
        hops: usize,
        theta: &mut dyn FnMut(usize) -> f64,
        record: bool,
    ) -> Result<(usize, f64)> {
        self.graph.check_nodes(seeds)?;
        self.reset();
        let graph = self.graph;
        let mut frontier: Vec<usize> = Vec::with_capacity(seeds.len());
        for &s in seeds {
            if self.hop_of[s] == INACTIVE {
                self.hop_of[s] = 0;
                self.touched.push(s);
                frontier.push(s);
            }
        }
        frontier.sort_unstable();
        let mut count = frontier.len();
        let mut weight: f64 = frontier.iter().map(|&v| graph.node_weight(v)).sum();
        if record {
            self.per_hop.push(frontier.clone());
        }
        let mut candidates = Vec::new();
        for t in 1..=hops {
            let epoch = self.next_epoch();
            candidates.clear();
            for &u in &frontier {
                for (v, w) in graph.out_edges(u) {
                    if self.hop_of[v] != INACTIVE {
                        continue;
                    }
                    if self.stamp[v] != epoch {
                        self.stamp[v] = epoch;
                        candidates.push(v);
                        self.touched.push(v);
                    }
                    self.acc[v] += w;
                }
            }
            frontier.clear();
            for &v in &candidates {
                if self.acc[v] >= theta(v) - ACTIVATION_TOLERANCE {
                    frontier.push(v);
                }
            }
            if frontier.is_empty() {
                break;
            }
            frontier.sort_unstable();
            for &v in &frontier {
                self.hop_of[v] = t as u32;
                weight += graph.node_weight(v);
            }
            count += frontier.len();
            if record {
                self.per_hop.push(frontier.clone());
            }
        }
        Ok((count, weight))
    }

    /// Full LT run with the trace recorded.
    pub fn run(&mut self, seeds: &[usize], hops: usize) -> Result<DiffusionOutcome> {
        let graph = self.graph;
        let (count, weight) = self.spread(seeds, hops, &mut |v| graph.threshold(v), true)?;
        Ok(self.outcome(count, weight))
    }

    /// LT coverage `(count, weight)` without building a trace.
    pub fn coverage(&mut self, seeds: &[usize], hops: usize) -> Result<(usize, f64)> {
        let graph = self.graph;
        self.spread(seeds, hops, &mut |v| graph.threshold(v), false)
    }

    pub(crate) fn outcome(&mut self, count: usize, weight: f64) -> DiffusionOutcome {
        let per_hop = core::mem::take(&mut self.per_hop);
        let hops_used = per_hop.len().saturating_sub(1);
        DiffusionOutcome {
            active: ActiveSet::from_hops(per_hop),
            coverage_count: count,
            coverage_weight: weight,
            hops_used,
        }
    }

    /// Whether `v` ended active in the last run.
    pub fn is_active(&self, v: usize) -> bool {
        self.hop_of[v] != INACTIVE
    }
}

/// Deterministic LT diffusion from `seeds` for at most `hops` rounds.
pub fn lt_propagate(
    graph: &InfluenceGraph,
    seeds: &[usize],
    hops: usize,
) -> Result<DiffusionOutcome> {
    LtSimulator::new(graph).run(seeds, hops)
}
