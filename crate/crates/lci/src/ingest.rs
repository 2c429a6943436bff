//! From layer files to a complete, valid multiplex network.

use std::fs;
use std::path::PathBuf;

use lci_core::graph::{fill_missing_thresholds, normalize_incoming_weights, validate};
use lci_core::{LayerGraph, MultiplexNetwork, UserId};

use crate::error::{LciError, Result};
use crate::format::{apply_aliases, parse_aliases, parse_id_list, read_layer};

/// Slack allowed on an incoming weight sum before a layer is rescaled.
pub const IN_SUM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Prepared {
    pub network: MultiplexNetwork,
    /// What was changed to make the network complete.
    pub notes: Vec<String>,
}

/// Files making up a network on disk.
#[derive(Debug, Clone, Default)]
pub struct NetworkFiles {
    /// Layer files; layer `i` is the `i`-th path.
    pub layers: Vec<PathBuf>,
    /// Tab-separated alias file.
    pub aliases: Option<PathBuf>,
    /// Extra users, one id per line, that belong to the universe even when
    /// they join no layer.
    pub universe: Option<PathBuf>,
}

/// Reads the layer files, applies the optional alias file, adds the extra
/// universe users and completes the network with [`prepare`].
pub fn load_network(files: &NetworkFiles, rng_seed: u64) -> Result<Prepared> {
    let paths = &files.layers;
    if paths.is_empty() {
        return Err(LciError::Usage(
            "at least one layer file is required".into(),
        ));
    }
    let mut layers: Vec<LayerGraph> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| read_layer(p, i + 1))
        .collect::<Result<_>>()?;
    if let Some(path) = &files.aliases {
        let text = fs::read_to_string(path).map_err(|e| LciError::io(path, e))?;
        let map = parse_aliases(&text, &path.display().to_string())?;
        layers = layers
            .iter()
            .map(|l| apply_aliases(l, &map))
            .collect::<Result<_>>()?;
    }
    let mut extra = Vec::new();
    if let Some(path) = &files.universe {
        let text = fs::read_to_string(path).map_err(|e| LciError::io(path, e))?;
        for id in parse_id_list(&text) {
            extra.push(UserId::new(id)?);
        }
    }
    prepare(MultiplexNetwork::with_universe(layers, extra)?, rng_seed)
}

/// Rescales every layer with unset weights or an incoming sum above one,
/// draws missing thresholds, then validates.
pub fn prepare(network: MultiplexNetwork, rng_seed: u64) -> Result<Prepared> {
    let mut notes = Vec::new();
    let mut network = network;
    for pos in 0..network.layer_count() {
        let layer = network.layer(pos);
        let unset = layer.edges().iter().filter(|e| e.weight.is_none()).count();
        let over = layer
            .in_weight_sums()
            .iter()
            .filter(|&&s| s > 1.0 + IN_SUM_SLACK)
            .count();
        if unset > 0 || over > 0 {
            notes.push(format!(
                "layer {}: normalised incoming weights ({unset} unset weights, {over} nodes with in-sum above 1)",
                pos + 1
            ));
            let fixed = normalize_incoming_weights(layer, rng_seed);
            network = network.with_layer(pos, fixed)?;
        }
    }
    let missing: usize = network
        .layers()
        .iter()
        .map(|l| l.thresholds().iter().filter(|t| t.is_none()).count())
        .sum();
    if missing > 0 {
        notes.push(format!(
            "drew {missing} missing thresholds uniformly from (0, 1]"
        ));
        network = fill_missing_thresholds(&network, rng_seed);
    }
    let report = validate(&network);
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(LciError::InvalidNetwork(lines.join("; ")));
    }
    Ok(Prepared { network, notes })
}
