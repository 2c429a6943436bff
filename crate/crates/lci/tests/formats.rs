use std::fs;

use lci::error::LciError;
use lci::format::{apply_aliases, parse_aliases, parse_layer, write_layer, write_manifest};
use lci::ingest::{load_network, prepare, NetworkFiles};
use lci_core::coupling::couple;
use lci_core::graph::overlap_users;
use lci_core::{MultiplexNetwork, Scheme};

const RED_BLUE: &str = "\
# theta red 0.4
# theta blue 0.5
# node loner
red blue 0.6
blue red 0.25
";

#[test]
fn layer_round_trip() {
    let layer = parse_layer(RED_BLUE, 1, "t").unwrap();
    assert_eq!(layer.node_count(), 3);
    assert_eq!(layer.edge_count(), 2);
    let mut buf = Vec::new();
    write_layer(&layer, &mut buf).unwrap();
    let again = parse_layer(std::str::from_utf8(&buf).unwrap(), 1, "t").unwrap();
    assert_eq!(again, layer);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("a b c d\n", 1),
        ("a b 0.5\n\nb a x\n", 3),
        ("# theta a\n", 1),
        ("a a 0.5\n", 1),
        ("# theta a 0.2\n# theta a 0.3\na b nan\n", 3),
    ];
    for (text, line) in cases {
        match parse_layer(text, 1, "f.txt") {
            Err(LciError::Parse { path, line: at, .. }) => {
                assert_eq!(path, "f.txt");
                assert_eq!(at, line, "{text:?}");
            }
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn comments_and_unknown_directives_are_skipped() {
    let layer = parse_layer("# just a comment\n#\n# layer 7\na b\n", 1, "t").unwrap();
    assert_eq!(layer.edge_count(), 1);
    assert_eq!(layer.weight("a", "b"), Some(None));
}

#[test]
fn aliases_merge_ids_across_layers() {
    let map = parse_aliases(
        "# comment\nalice_fb\talice_tw\talice\n\nbob1\tbob2\tbob\n",
        "a",
    )
    .unwrap();
    assert_eq!(map["alice_tw"], "alice");
    let l1 = parse_layer(
        "alice_fb bob1 0.5\n# theta alice_fb 0.5\n# theta bob1 0.5\n",
        1,
        "1",
    )
    .unwrap();
    let l2 = parse_layer(
        "bob2 alice_tw 0.5\n# theta alice_tw 0.5\n# theta bob2 0.5\n",
        2,
        "2",
    )
    .unwrap();
    let net = MultiplexNetwork::new(vec![
        apply_aliases(&l1, &map).unwrap(),
        apply_aliases(&l2, &map).unwrap(),
    ])
    .unwrap();
    assert_eq!(net.user_count(), 2);
    assert_eq!(overlap_users(&net).len(), 2);
}

#[test]
fn conflicting_aliases_are_rejected() {
    let err = parse_aliases("a\tb\tx\na\tc\ty\n", "al").unwrap_err();
    assert!(matches!(err, LciError::Parse { line: 2, .. }), "{err:?}");
    assert!(parse_aliases("a\tb\n", "al").is_err());
    let merged = parse_aliases("a\tb\tx\n", "al").unwrap();
    let layer = parse_layer("a b 0.5\n", 1, "l").unwrap();
    assert!(apply_aliases(&layer, &merged).is_err());
}

fn four_user_files(dir: &std::path::Path) -> NetworkFiles {
    let layers = [
        "red blue 0.6\nblue yellow 0.5\nyellow red 0.4\n# theta red 0.4\n# theta blue 0.5\n# theta yellow 0.7\n",
        "red green 0.3\ngreen blue 0.8\nblue red 0.2\n# theta red 0.6\n# theta green 0.3\n# theta blue 0.6\n",
        "green yellow 0.7\nyellow green 0.1\n# theta green 0.2\n# theta yellow 0.5\n",
    ];
    let paths = layers
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let p = dir.join(format!("g{}.txt", i + 1));
            fs::write(&p, text).unwrap();
            p
        })
        .collect();
    NetworkFiles {
        layers: paths,
        ..NetworkFiles::default()
    }
}

#[test]
fn clique_manifest_of_four_users() {
    let dir = tempfile::tempdir().unwrap();
    let net = load_network(&four_user_files(dir.path()), 0).unwrap();
    assert!(net.notes.is_empty(), "{:?}", net.notes);
    let c = couple(&net.network, Scheme::Clique).unwrap();
    let mut buf = Vec::new();
    write_manifest(&c, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "node_id,kind,user_id,layer,threshold,weight");
    assert_eq!(lines.len(), 1 + 16);
    let count = |kind: &str| {
        lines
            .iter()
            .filter(|l| l.split(',').nth(1) == Some(kind))
            .count()
    };
    assert_eq!(count("gateway"), 4);
    // green misses layer 1, yellow layer 2, red and blue layer 3.
    assert_eq!(count("dummy"), 4);
    assert_eq!(count("representative"), 8);
}

#[test]
fn prepare_normalises_and_fills_thresholds() {
    let heavy = parse_layer("a c 0.9\nb c 0.9\n# theta a 0.5\n# theta b 0.5\n", 1, "h").unwrap();
    let net = MultiplexNetwork::new(vec![heavy]).unwrap();
    let out = prepare(net, 3).unwrap();
    assert_eq!(out.notes.len(), 2, "{:?}", out.notes);
    let layer = out.network.layer(0);
    let sum: f64 = layer.in_weight_sums().iter().cloned().fold(0.0, f64::max);
    assert!(sum <= 1.0 + 1e-12);
    assert!(layer.is_complete());
}

#[test]
fn missing_layer_file_is_an_io_error() {
    let files = NetworkFiles {
        layers: vec!["/nonexistent/layer.txt".into()],
        ..NetworkFiles::default()
    };
    let err = load_network(&files, 0).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn universe_file_adds_detached_users() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = four_user_files(dir.path());
    let users = dir.path().join("users.txt");
    fs::write(&users, "red\nnobody\n# comment\nghost\n").unwrap();
    files.universe = Some(users);
    let net = load_network(&files, 0).unwrap().network;
    assert_eq!(net.user_count(), 6);
    assert_eq!(net.detached_users().len(), 2);
}
