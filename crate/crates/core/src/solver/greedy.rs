use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{GreedyConfig, Objective, SeedSet};
use crate::coupling::CoupledNetwork;
use crate::error::{Error, Result};
use crate::meets_target;

/// Heap entry: larger gain first, then the smaller node index.
#[derive(Debug, Clone, Copy)]
struct Entry {
    gain: f64,
    node: usize,
    /// Coverage with the node added, when the gain was computed.
    cover: f64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.node.cmp(&self.node))
    }
}

struct State<'a> {
    objective: Objective<'a>,
    selected: Vec<usize>,
    covered: f64,
    scratch: Vec<usize>,
}

impl State<'_> {
    fn gain(&mut self, node: usize) -> Result<(f64, f64)> {
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.selected);
        self.scratch.push(node);
        let scratch = core::mem::take(&mut self.scratch);
        let with = self.objective.coverage(&scratch);
        self.scratch = scratch;
        let with = with?;
        Ok((with - self.covered, with))
    }

    fn done(&self, beta: f64) -> bool {
        meets_target(self.covered, self.objective.total(), beta)
    }

    fn finish(self, coupled: &CoupledNetwork, gains: Vec<f64>) -> Result<SeedSet> {
        let users = coupled.map_nodes_to_users(&self.selected)?;
        let total = self.objective.total();
        Ok(SeedSet {
            users,
            nodes: self.selected,
            gains,
            achieved_fraction: if total > 0.0 {
                self.covered / total
            } else {
                1.0
            },
            evaluations: self.objective.evaluations(),
        })
    }

    fn unreachable(&self, beta: f64) -> Error {
        Error::Unreachable {
            beta,
            reached: self.covered,
            total: self.objective.total(),
        }
    }
}

fn start<'a>(coupled: &'a CoupledNetwork, cfg: &GreedyConfig) -> Result<State<'a>> {
    cfg.check()?;
    let mut objective = Objective::new(coupled, cfg);
    let covered = objective.coverage(&[])?;
    Ok(State {
        objective,
        selected: Vec::new(),
        covered,
        scratch: Vec::new(),
    })
}

/// Lazy greedy with alternating heavy and light iterations.
///
/// Keys in a max-heap hold possibly stale gains of the candidate user
/// vertices. Every `R`-th iteration refreshes all keys (heavy); the others
/// refresh only the top `T` (light). Then the top entry is selected once its
/// key is fresh; a stale top is recomputed and pushed back first. Ties go to
/// the smaller node.
pub fn improved_greedy(coupled: &CoupledNetwork, cfg: &GreedyConfig) -> Result<SeedSet> {
    let mut state = start(coupled, cfg)?;
    let mut gains = Vec::new();
    let mut heap = BinaryHeap::with_capacity(coupled.user_count());
    let mut fresh_at = vec![0usize; coupled.node_count()];
    for &node in coupled.user_nodes() {
        let (gain, cover) = state.gain(node)?;
        heap.push(Entry { gain, node, cover });
    }
    let mut counter = 0usize;
    let mut popped = Vec::with_capacity(cfg.light_reevaluations);
    while !state.done(cfg.beta) {
        if heap.is_empty() {
            return Err(state.unreachable(cfg.beta));
        }
        counter += 1;
        if counter.is_multiple_of(cfg.heavy_period) {
            let stale = core::mem::take(&mut heap).into_vec();
            for Entry { node, .. } in stale {
                let (gain, cover) = state.gain(node)?;
                fresh_at[node] = counter;
                heap.push(Entry { gain, node, cover });
            }
        } else {
            popped.clear();
            for _ in 0..cfg.light_reevaluations {
                match heap.pop() {
                    Some(entry) => popped.push(entry.node),
                    None => break,
                }
            }
            for &node in &popped {
                let (gain, cover) = state.gain(node)?;
                fresh_at[node] = counter;
                heap.push(Entry { gain, node, cover });
            }
        }
        // A stale top is re-evaluated and pushed back until the top is fresh.
        let top = loop {
            let top = heap.pop().expect("heap is non-empty");
            if fresh_at[top.node] == counter {
                break top;
            }
            let (gain, cover) = state.gain(top.node)?;
            fresh_at[top.node] = counter;
            heap.push(Entry {
                gain,
                node: top.node,
                cover,
            });
        };
        state.selected.push(top.node);
        state.covered = top.cover;
        gains.push(top.gain);
    }
    state.finish(coupled, gains)
}

/// Plain greedy: every iteration recomputes the gain of every unselected
/// candidate and takes the best, ties to the smaller node.
pub fn naive_greedy(coupled: &CoupledNetwork, cfg: &GreedyConfig) -> Result<SeedSet> {
    let mut state = start(coupled, cfg)?;
    let mut gains = Vec::new();
    let mut remaining: Vec<usize> = coupled.user_nodes().to_vec();
    remaining.sort_unstable();
    while !state.done(cfg.beta) {
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, &node) in remaining.iter().enumerate() {
            let (gain, covered) = state.gain(node)?;
            if best.is_none_or(|(_, g, _)| gain > g) {
                best = Some((i, gain, covered));
            }
        }
        let Some((i, gain, covered)) = best else {
            return Err(state.unreachable(cfg.beta));
        };
        let node = remaining.remove(i);
        state.selected.push(node);
        state.covered = covered;
        gains.push(gain);
    }
    state.finish(coupled, gains)
}
