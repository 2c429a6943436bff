//! Text formats: layer edge lists, alias files, node manifests, traces.
//!
//! Layer files hold one `src dst [weight]` edge per line. Lines starting
//! with `#` are either directives or comments:
//!
//! ```text
//! # node <user>            declares a node (useful for isolated ones)
//! # theta <user> <value>   sets a threshold
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use lci_core::diffusion::DiffusionOutcome;
use lci_core::{CoupledNetwork, LayerGraph, NodeKind};

use crate::error::{LciError, Result};

fn parse_error(path: &str, line: usize, message: impl Into<String>) -> LciError {
    LciError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_number(path: &str, line: usize, token: &str, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_error(path, line, format!("bad {what} `{token}`")))
}

/// Parses a layer file. `origin` names the source in error messages.
pub fn parse_layer(text: &str, index: usize, origin: &str) -> Result<LayerGraph> {
    let mut layer = LayerGraph::new(index);
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let at = |e: lci_core::Error| parse_error(origin, line, e.to_string());
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            match tokens.as_slice() {
                ["theta", user, value] => {
                    let theta = parse_number(origin, line, value, "threshold")?;
                    layer.set_threshold(user, theta).map_err(at)?;
                }
                ["theta", ..] => {
                    return Err(parse_error(
                        origin,
                        line,
                        "expected `# theta <user> <value>`",
                    ))
                }
                ["node", user] => {
                    layer.add_node(user).map_err(at)?;
                }
                ["node", ..] => return Err(parse_error(origin, line, "expected `# node <user>`")),
                _ => {}
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let (src, dst, weight) = match tokens.as_slice() {
            [src, dst] => (*src, *dst, None),
            [src, dst, w] => (*src, *dst, Some(parse_number(origin, line, w, "weight")?)),
            _ => {
                return Err(parse_error(
                    origin,
                    line,
                    format!("expected `src dst [weight]`, got {} fields", tokens.len()),
                ))
            }
        };
        layer.add_edge(src, dst, weight).map_err(at)?;
    }
    Ok(layer)
}

pub fn read_layer(path: &Path, index: usize) -> Result<LayerGraph> {
    let text = fs::read_to_string(path).map_err(|e| LciError::io(path, e))?;
    parse_layer(&text, index, &path.display().to_string())
}

/// Writes `layer` so that [`parse_layer`] rebuilds it node for node.
pub fn write_layer<W: Write>(layer: &LayerGraph, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# layer {}", layer.index())?;
    for id in layer.ids() {
        writeln!(out, "# node {id}")?;
    }
    for (id, theta) in layer.ids().iter().zip(layer.thresholds()) {
        if let Some(theta) = theta {
            writeln!(out, "# theta {id} {theta}")?;
        }
    }
    for e in layer.edges() {
        let (src, dst) = (layer.id(e.src), layer.id(e.dst));
        match e.weight {
            Some(w) => writeln!(out, "{src} {dst} {w}")?,
            None => writeln!(out, "{src} {dst}")?,
        }
    }
    Ok(())
}

/// Alias table: layer-local id to canonical id.
pub type Aliases = BTreeMap<String, String>;

/// Parses `id_a TAB id_b TAB canonical` lines; both ids map to `canonical`.
/// Blank lines and `#` comments are skipped.
pub fn parse_aliases(text: &str, origin: &str) -> Result<Aliases> {
    let mut map = Aliases::new();
    for (n, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [a, b, canonical] = fields.as_slice() else {
            return Err(parse_error(
                origin,
                n + 1,
                "expected three tab-separated ids",
            ));
        };
        for id in [a, b] {
            if let Some(previous) = map.insert(id.to_string(), canonical.to_string()) {
                if previous != *canonical {
                    return Err(parse_error(
                        origin,
                        n + 1,
                        format!("`{id}` aliased to both `{previous}` and `{canonical}`"),
                    ));
                }
            }
        }
    }
    Ok(map)
}

/// Renames the nodes of `layer` through `aliases`.
pub fn apply_aliases(layer: &LayerGraph, aliases: &Aliases) -> Result<LayerGraph> {
    let rename = |id: &str| {
        aliases
            .get(id)
            .map(String::as_str)
            .unwrap_or(id)
            .to_string()
    };
    let mut out = LayerGraph::new(layer.index());
    for (id, theta) in layer.ids().iter().zip(layer.thresholds()) {
        let name = rename(id.as_str());
        if out.contains(&name) {
            return Err(LciError::InvalidNetwork(format!(
                "aliases merge two nodes of layer {} into `{name}`",
                layer.index()
            )));
        }
        out.add_node(&name)?;
        if let Some(theta) = theta {
            out.set_threshold(&name, *theta)?;
        }
    }
    for e in layer.edges() {
        out.add_edge(
            &rename(layer.id(e.src).as_str()),
            &rename(layer.id(e.dst).as_str()),
            e.weight,
        )?;
    }
    Ok(out)
}

#[derive(Debug, serde::Serialize)]
struct ManifestRow<'a> {
    node_id: usize,
    kind: &'static str,
    user_id: &'a str,
    layer: Option<usize>,
    threshold: f64,
    weight: f64,
}

/// Node manifest CSV: `node_id,kind,user_id,layer,threshold,weight`.
pub fn write_manifest<W: Write>(coupled: &CoupledNetwork, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let g = coupled.graph();
    for (v, kind) in coupled.kinds().iter().enumerate() {
        w.serialize(ManifestRow {
            node_id: v,
            kind: kind.name(),
            user_id: coupled.users()[kind.user()].as_str(),
            layer: kind.layer(),
            threshold: g.threshold(v),
            weight: g.node_weight(v),
        })?;
    }
    w.flush().map_err(|e| LciError::io("<manifest>", e))?;
    Ok(())
}

/// Coupled graph in layer-file format with numeric node ids.
pub fn write_coupled_edges<W: Write>(coupled: &CoupledNetwork, out: &mut W) -> std::io::Result<()> {
    let g = coupled.graph();
    writeln!(out, "# scheme {}", coupled.scheme())?;
    for v in 0..g.node_count() {
        writeln!(out, "# theta {v} {}", g.threshold(v))?;
    }
    for (src, dst, w) in g.edges() {
        writeln!(out, "{src} {dst} {w}")?;
    }
    Ok(())
}

/// Activation trace CSV `hop,node_id,node_kind`. With `coupled` the ids are
/// vertex numbers and kinds come from the coupling; otherwise ids are user
/// ids from `users` and the kind is `user`.
pub fn write_trace<W: Write>(
    outcome: &DiffusionOutcome,
    coupled: Option<&CoupledNetwork>,
    users: &[lci_core::UserId],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["hop", "node_id", "node_kind"])?;
    for (hop, fresh) in outcome.active.per_hop.iter().enumerate() {
        for &v in fresh {
            let (id, kind) = match coupled {
                Some(c) => (v.to_string(), c.kind(v).name()),
                None => (
                    users[v].to_string(),
                    NodeKind::UserVertex { user: v }.name(),
                ),
            };
            w.write_record([hop.to_string(), id, kind.to_string()])?;
        }
    }
    w.flush().map_err(|e| LciError::io("<trace>", e))?;
    Ok(())
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| LciError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| LciError::io(path, e))?;
    tmp.persist(path).map_err(|e| LciError::io(path, e.error))?;
    Ok(())
}

/// Reads user ids, one per line; blank lines and `#` comments skipped.
pub fn parse_id_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
