use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::lt::INACTIVE;
use super::{ActiveSet, DiffusionModel, DiffusionOutcome, McOutcome, ModelKind};
use crate::error::{Error, Result};
use crate::graph::MultiplexNetwork;
use crate::{rng, ACTIVATION_TOLERANCE};

/// Scratch state for diffusion run directly on a multiplex network.
///
/// A user activates at hop `t` when, in at least one layer it joins, its
/// in-neighbours active at `t - 1` meet its threshold in that layer. Once
/// active, a user influences every layer it joins.
pub struct MultiplexSimulator<'n> {
    net: &'n MultiplexNetwork,
    offsets: Vec<usize>,
    hop_of: Vec<u32>,
    acc: Vec<f64>,
    stamp: Vec<u32>,
    user_stamp: Vec<u32>,
    touched_users: Vec<usize>,
    touched_slots: Vec<usize>,
    per_hop: Vec<Vec<usize>>,
    epoch: u32,
}

impl<'n> MultiplexSimulator<'n> {
    pub fn new(net: &'n MultiplexNetwork) -> Result<Self> {
        net.require_complete()?;
        let mut offsets = Vec::with_capacity(net.layer_count() + 1);
        offsets.push(0);
        for layer in net.layers() {
            offsets.push(offsets.last().unwrap() + layer.node_count());
        }
        let slots = *offsets.last().unwrap();
        let n = net.user_count();
        Ok(MultiplexSimulator {
            net,
            offsets,
            hop_of: vec![INACTIVE; n],
            acc: vec![0.0; slots],
            stamp: vec![0; slots],
            user_stamp: vec![0; n],
            touched_users: Vec::new(),
            touched_slots: Vec::new(),
            per_hop: Vec::new(),
            epoch: 0,
        })
    }

    pub fn network(&self) -> &'n MultiplexNetwork {
        self.net
    }

    fn reset(&mut self) {
        for &u in &self.touched_users {
            self.hop_of[u] = INACTIVE;
        }
        for &s in &self.touched_slots {
            self.acc[s] = 0.0;
        }
        self.touched_users.clear();
        self.touched_slots.clear();
        self.per_hop.clear();
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX - 1 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.user_stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    fn seed(&mut self, seeds: &[usize]) -> Result<Vec<usize>> {
        if let Some(&s) = seeds.iter().find(|&&s| s >= self.net.user_count()) {
            return Err(Error::NodeOutOfRange(s));
        }
        self.reset();
        let mut frontier = Vec::with_capacity(seeds.len());
        for &s in seeds {
            if self.hop_of[s] == INACTIVE {
                self.hop_of[s] = 0;
                self.touched_users.push(s);
                frontier.push(s);
            }
        }
        frontier.sort_unstable();
        self.per_hop.push(frontier.clone());
        Ok(frontier)
    }

    fn commit(&mut self, next: &mut [usize], t: usize) {
        next.sort_unstable();
        for &v in next.iter() {
            self.hop_of[v] = t as u32;
            self.touched_users.push(v);
        }
        self.per_hop.push(next.to_vec());
    }

    /// Threshold propagation; `theta(pos, local)` supplies thresholds.
    fn spread(
        &mut self,
        seeds: &[usize],
        hops: usize,
        theta: &mut dyn FnMut(usize, usize) -> f64,
    ) -> Result<usize> {
        let net = self.net;
        let mut frontier = self.seed(seeds)?;
        let mut count = frontier.len();
        let mut candidates: Vec<(usize, usize, usize, usize)> = Vec::new();
        for t in 1..=hops {
            let epoch = self.next_epoch();
            candidates.clear();
            for &u in &frontier {
                for pos in 0..net.layer_count() {
                    let c = net.compiled(pos);
                    let Some(lu) = c.to_local[u] else { continue };
                    for (lv, w) in c.out.row(lu) {
                        let g = c.to_global[lv];
                        if self.hop_of[g] != INACTIVE {
                            continue;
                        }
                        let slot = self.offsets[pos] + lv;
                        if self.stamp[slot] != epoch {
                            self.stamp[slot] = epoch;
                            self.touched_slots.push(slot);
                            candidates.push((slot, pos, lv, g));
                        }
                        self.acc[slot] += w;
                    }
                }
            }
            let mut next = Vec::new();
            for &(slot, pos, lv, g) in &candidates {
                if self.user_stamp[g] != epoch
                    && self.acc[slot] >= theta(pos, lv) - ACTIVATION_TOLERANCE
                {
                    self.user_stamp[g] = epoch;
                    next.push(g);
                }
            }
            if next.is_empty() {
                break;
            }
            count += next.len();
            self.commit(&mut next, t);
            frontier = next;
        }
        Ok(count)
    }

    fn outcome(&mut self, count: usize) -> DiffusionOutcome {
        let per_hop = core::mem::take(&mut self.per_hop);
        let hops_used = per_hop.len().saturating_sub(1);
        DiffusionOutcome {
            active: ActiveSet::from_hops(per_hop),
            coverage_count: count,
            coverage_weight: count as f64,
            hops_used,
        }
    }

    /// Deterministic LT run.
    pub fn run(&mut self, seeds: &[usize], hops: usize) -> Result<DiffusionOutcome> {
        let net = self.net;
        let count = self.spread(seeds, hops, &mut |pos, lv| net.compiled(pos).thresholds[lv])?;
        Ok(self.outcome(count))
    }

    /// Number of users active after an LT run.
    pub fn coverage(&mut self, seeds: &[usize], hops: usize) -> Result<usize> {
        let net = self.net;
        let count = self.spread(seeds, hops, &mut |pos, lv| net.compiled(pos).thresholds[lv])?;
        self.per_hop.clear();
        Ok(count)
    }

    fn st_sample(
        &mut self,
        seeds: &[usize],
        hops: usize,
        rng: &mut rng::StreamRng,
    ) -> Result<DiffusionOutcome> {
        let net = self.net;
        let offsets = self.offsets.clone();
        let mut drawn = vec![f64::NAN; *offsets.last().unwrap()];
        let mut theta = |pos: usize, lv: usize| {
            let slot = offsets[pos] + lv;
            if drawn[slot].is_nan() {
                drawn[slot] = net.compiled(pos).thresholds[lv] * rng::unit_open_closed(rng);
            }
            drawn[slot]
        };
        let count = self.spread(seeds, hops, &mut theta)?;
        Ok(self.outcome(count))
    }

    fn ic_sample(
        &mut self,
        seeds: &[usize],
        hops: usize,
        rng: &mut rng::StreamRng,
    ) -> Result<DiffusionOutcome> {
        let net = self.net;
        let mut frontier = self.seed(seeds)?;
        let mut count = frontier.len();
        for t in 1..=hops {
            let mut next = Vec::new();
            for &u in &frontier {
                for pos in 0..net.layer_count() {
                    let c = net.compiled(pos);
                    let Some(lu) = c.to_local[u] else { continue };
                    for (lv, w) in c.out.row(lu) {
                        let g = c.to_global[lv];
                        if self.hop_of[g] == INACTIVE && rng.gen::<f64>() < w {
                            self.hop_of[g] = t as u32;
                            next.push(g);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            count += next.len();
            self.commit(&mut next, t);
            frontier = next;
        }
        Ok(self.outcome(count))
    }
}

/// Deterministic LT diffusion on the multiplex network itself; seeds and
/// the returned trace use user indices.
pub fn multiplex_lt_propagate(
    network: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
) -> Result<DiffusionOutcome> {
    MultiplexSimulator::new(network)?.run(seeds, hops)
}

/// Monte Carlo IC or ST diffusion on the multiplex network.
pub fn multiplex_propagate_mc(
    network: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    model.check()?;
    let mut sim = MultiplexSimulator::new(network)?;
    let n = network.user_count();
    let mut count = 0.0;
    let mut freq = vec![0.0; n];
    let mut max_hops = 0;
    for sample in 0..model.mc_samples {
        let mut rng = rng::stream(model.rng_seed, "mc", sample as u64);
        let outcome = match model.kind {
            ModelKind::IndependentCascade => sim.ic_sample(seeds, hops, &mut rng)?,
            ModelKind::StochasticThreshold => sim.st_sample(seeds, hops, &mut rng)?,
            ModelKind::LinearThreshold => sim.run(seeds, hops)?,
        };
        count += outcome.coverage_count as f64;
        max_hops = max_hops.max(outcome.hops_used);
        for &v in &outcome.active.members {
            freq[v] += 1.0;
        }
    }
    let s = model.mc_samples as f64;
    freq.iter_mut().for_each(|f| *f /= s);
    Ok(McOutcome {
        samples: model.mc_samples,
        mean_count: count / s,
        mean_weight: count / s,
        activation_frequency: freq,
        max_hops_used: max_hops,
    })
}

pub fn multiplex_ic_propagate(
    network: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    multiplex_propagate_mc(
        network,
        seeds,
        hops,
        &DiffusionModel {
            kind: ModelKind::IndependentCascade,
            ..*model
        },
    )
}

pub fn multiplex_st_propagate(
    network: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
    model: &DiffusionModel,
) -> Result<McOutcome> {
    multiplex_propagate_mc(
        network,
        seeds,
        hops,
        &DiffusionModel {
            kind: ModelKind::StochasticThreshold,
            ..*model
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LayerGraph;
    use alloc::format;

    /// u has threshold 0.1 in layer 1 and 0.7 in layer 2, with eight
    /// in-neighbours of weight 0.1 in both.
    fn easiness_example() -> MultiplexNetwork {
        let mut layers = Vec::new();
        for (index, theta) in [(1, 0.1), (2, 0.7)] {
            let mut l = LayerGraph::new(index);
            for i in 0..8 {
                let v = format!("v{i}");
                l.add_edge(&v, "u", Some(0.1)).unwrap();
                l.set_threshold(&v, 1.0).unwrap();
            }
            l.set_threshold("u", theta).unwrap();
            layers.push(l);
        }
        MultiplexNetwork::new(layers).unwrap()
    }

    #[test]
    fn one_active_neighbour_suffices_in_the_easy_layer() {
        let net = easiness_example();
        let u = net.user_index("u").unwrap();
        let v0 = net.user_index("v0").unwrap();
        let out = multiplex_lt_propagate(&net, &[v0], 1).unwrap();
        assert!(out.active.contains(u));
        assert_eq!(out.active.hop_of(u), Some(1));
    }

    #[test]
    fn incomplete_network_is_rejected() {
        let mut l = LayerGraph::new(1);
        l.add_edge("a", "b", None).unwrap();
        let net = MultiplexNetwork::new(vec![l]).unwrap();
        assert!(matches!(
            multiplex_lt_propagate(&net, &[0], 1),
            Err(Error::Incomplete(_))
        ));
    }

    #[test]
    fn unknown_user_index_is_rejected() {
        let net = easiness_example();
        assert_eq!(
            multiplex_lt_propagate(&net, &[99], 1),
            Err(Error::NodeOutOfRange(99))
        );
    }

    #[test]
    fn ic_with_unit_weights_matches_lt_reachability() {
        let mut l = LayerGraph::new(1);
        l.add_edge("a", "b", Some(1.0)).unwrap();
        l.add_edge("b", "c", Some(1.0)).unwrap();
        for id in ["a", "b", "c"] {
            l.set_threshold(id, 1.0).unwrap();
        }
        let net = MultiplexNetwork::new(vec![l]).unwrap();
        let mc = multiplex_ic_propagate(&net, &[0], 1, &DiffusionModel::independent_cascade(20, 3))
            .unwrap();
        assert_eq!(mc.mean_count, 2.0);
        let st =
            multiplex_st_propagate(&net, &[0], 5, &DiffusionModel::stochastic_threshold(20, 3))
                .unwrap();
        assert_eq!(st.mean_count, 3.0);
    }
}
