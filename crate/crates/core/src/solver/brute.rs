use alloc::vec::Vec;

use super::SeedSet;
use crate::diffusion::MultiplexSimulator;
use crate::error::{Error, Result};
use crate::graph::MultiplexNetwork;
use crate::meets_target;

/// Largest universe [`brute_force_optimal`] accepts.
pub const BRUTE_FORCE_USER_CAP: usize = 22;

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!(
            "beta must lie in (0, 1], got {beta}"
        )))
    }
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First seed set of exactly `size` users (lexicographic order) whose
/// multiplex diffusion reaches `beta * |A|` users within `hops` hops.
/// No size cap, so the caller controls the cost.
pub fn feasible_set_of_size(
    network: &MultiplexNetwork,
    beta: f64,
    hops: usize,
    size: usize,
) -> Result<Option<Vec<usize>>> {
    check_beta(beta)?;
    let n = network.user_count();
    if size > n {
        return Ok(None);
    }
    let mut sim = MultiplexSimulator::new(network)?;
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        let covered = sim.coverage(&combo, hops)?;
        if meets_target(covered as f64, n as f64, beta) {
            return Ok(Some(combo));
        }
        if size == 0 || !next_combination(&mut combo, n) {
            return Ok(None);
        }
    }
}

/// Exact minimum seed set by enumeration in increasing cardinality, ties to
/// the lexicographically first set. Refuses universes above
/// [`BRUTE_FORCE_USER_CAP`].
pub fn brute_force_optimal(network: &MultiplexNetwork, beta: f64, hops: usize) -> Result<SeedSet> {
    check_beta(beta)?;
    let n = network.user_count();
    if n > BRUTE_FORCE_USER_CAP {
        return Err(Error::TooManyUsers {
            users: n,
            cap: BRUTE_FORCE_USER_CAP,
        });
    }
    network.require_complete()?;
    for size in 0..=n {
        if let Some(users) = feasible_set_of_size(network, beta, hops, size)? {
            let mut sim = MultiplexSimulator::new(network)?;
            let mut gains = Vec::with_capacity(users.len());
            let mut before = sim.coverage(&[], hops)?;
            for i in 1..=users.len() {
                let after = sim.coverage(&users[..i], hops)?;
                gains.push(after as f64 - before as f64);
                before = after;
            }
            let achieved_fraction = if n == 0 {
                1.0
            } else {
                before as f64 / n as f64
            };
            return Ok(SeedSet {
                users,
                nodes: Vec::new(),
                gains,
                achieved_fraction,
                evaluations: 0,
            });
        }
    }
    // Seeding every user covers the universe, so some size always works.
    unreachable!("the full universe is feasible")
}
