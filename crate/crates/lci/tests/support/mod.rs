//! Oracles and instance builders for the integration tests. The oracles
//! read the layer edge lists directly and never call the library's
//! simulators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use lci::format::write_layer;
use lci_core::{InfluenceGraph, LayerGraph, MultiplexNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn name(i: usize) -> String {
    format!("n{i:03}")
}

/// Random complete multiplex network: each user joins each layer with
/// probability `join`, ordered member pairs are linked with probability `p`,
/// in-weights are rescaled to a random total in `(0.3, 1]`, thresholds are
/// uniform in `(0, 1]`.
pub fn random_network(
    r: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    p: f64,
    join: f64,
) -> MultiplexNetwork {
    let mut layers = Vec::new();
    for i in 1..=k {
        let mut members: Vec<usize> = (0..n).filter(|_| r.gen::<f64>() < join).collect();
        if members.is_empty() {
            members.push(r.gen_range(0..n));
        }
        let mut raw: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for &a in &members {
            for &b in &members {
                if a != b && r.gen::<f64>() < p {
                    raw.entry(b).or_default().push((a, r.gen_range(0.01..1.0)));
                }
            }
        }
        let mut layer = LayerGraph::new(i);
        for &m in &members {
            layer.set_threshold(&name(m), 1.0 - r.gen::<f64>()).unwrap();
        }
        for (dst, ins) in raw {
            let total: f64 = ins.iter().map(|x| x.1).sum();
            let target = r.gen_range(0.3..=1.0);
            for (src, w) in ins {
                layer
                    .add_edge(&name(src), &name(dst), Some(w / total * target))
                    .unwrap();
            }
        }
        layers.push(layer);
    }
    MultiplexNetwork::new(layers).unwrap()
}

/// Distinct random users, at most `max` of them.
pub fn random_seeds(r: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    let size = r.gen_range(0..=max.min(n));
    let mut seeds: Vec<usize> = Vec::new();
    while seeds.len() < size {
        let s = r.gen_range(0..n);
        if !seeds.contains(&s) {
            seeds.push(s);
        }
    }
    seeds
}

/// Multiplex LT read off the layer edge lists: user -> activation hop.
pub fn multiplex_lt_hops(
    net: &MultiplexNetwork,
    seeds: &[usize],
    hops: usize,
) -> BTreeMap<usize, usize> {
    let ids: Vec<String> = net
        .universe()
        .iter()
        .map(|u| u.as_str().to_string())
        .collect();
    let index: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut hop_of: BTreeMap<usize, usize> = seeds.iter().map(|&s| (s, 0)).collect();
    for hop in 1..=hops {
        let mut fresh = BTreeSet::new();
        for layer in net.layers() {
            let mut sum: BTreeMap<usize, f64> = BTreeMap::new();
            for e in layer.edges() {
                let src = index[layer.id(e.src).as_str()];
                if hop_of.contains_key(&src) {
                    let dst = index[layer.id(e.dst).as_str()];
                    *sum.entry(dst).or_insert(0.0) += e.weight.unwrap();
                }
            }
            for (dst, s) in sum {
                let local = layer.local(&ids[dst]).unwrap();
                if !hop_of.contains_key(&dst) && s >= layer.threshold(local).unwrap() - TOL {
                    fresh.insert(dst);
                }
            }
        }
        for u in fresh {
            hop_of.insert(u, hop);
        }
    }
    hop_of
}

pub fn multiplex_lt(net: &MultiplexNetwork, seeds: &[usize], hops: usize) -> BTreeSet<usize> {
    multiplex_lt_hops(net, seeds, hops).into_keys().collect()
}

/// LT on a single graph: vertex -> activation hop.
pub fn lt_hops(graph: &InfluenceGraph, seeds: &[usize], hops: usize) -> BTreeMap<usize, usize> {
    let mut hop_of: BTreeMap<usize, usize> = seeds.iter().map(|&s| (s, 0)).collect();
    for hop in 1..=hops {
        let mut fresh = Vec::new();
        for v in 0..graph.node_count() {
            if hop_of.contains_key(&v) {
                continue;
            }
            let mut touched = false;
            let mut s = 0.0;
            for (u, w) in graph.in_edges(v) {
                if hop_of.contains_key(&u) {
                    touched = true;
                    s += w;
                }
            }
            if touched && s >= graph.threshold(v) - TOL {
                fresh.push(v);
            }
        }
        for v in fresh {
            hop_of.insert(v, hop);
        }
    }
    hop_of
}

/// Vertices within `hops` directed steps of a seed.
pub fn reachable(graph: &InfluenceGraph, seeds: &[usize], hops: usize) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut frontier: Vec<usize> = seen.iter().copied().collect();
    for _ in 0..hops {
        let mut next = Vec::new();
        for &u in &frontier {
            for (v, _) in graph.out_edges(u) {
                if seen.insert(v) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Writes `layer<i>.txt` per layer and `users.txt`; returns the users file
/// and the layer files.
pub fn write_network(net: &MultiplexNetwork, dir: &Path) -> (PathBuf, Vec<PathBuf>) {
    let users = dir.join("users.txt");
    let ids: Vec<&str> = net.universe().iter().map(|u| u.as_str()).collect();
    fs::write(&users, ids.join("\n") + "\n").unwrap();
    let layers = net
        .layers()
        .iter()
        .enumerate()
        .map(|(i, layer)| {
            let path = dir.join(format!("layer{}.txt", i + 1));
            let mut buf = Vec::new();
            write_layer(layer, &mut buf).unwrap();
            fs::write(&path, buf).unwrap();
            path
        })
        .collect();
    (users, layers)
}
