mod support;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lci::experiment::{rows_to_csv, run, write_rows, Arm, ExperimentSpec, Source};
use lci::pipeline::{replay, solve, Method, SolveOptions};
use lci_core::coupling::couple;
use lci_core::generator::{small_ilp_instance, SynthSpec};
use lci_core::solver::improved_greedy;
use lci_core::{DiffusionModel, GreedyConfig, LossyKind, Scheme};
use serde_json::Value;

fn lci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lci"))
        .args(args)
        .output()
        .unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = lci(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Generates the 100-user preset into `dir` and returns (users, layers).
fn preset(dir: &Path, seed: &str) -> (PathBuf, Vec<PathBuf>) {
    let out = lci(&[
        "generate",
        "--preset",
        "small-ilp",
        "--seed",
        seed,
        "--out",
        s(dir),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    (
        dir.join("users.txt"),
        vec![dir.join("layer1.txt"), dir.join("layer2.txt")],
    )
}

#[test]
fn generate_writes_layers_users_and_spec() {
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = preset(dir.path(), "3");
    for l in &layers {
        assert!(l.exists());
    }
    assert_eq!(fs::read_to_string(&users).unwrap().lines().count(), 100);
    let spec: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("spec.json")).unwrap()).unwrap();
    assert_eq!(spec["universe_size"], 100);
    let again = tempfile::tempdir().unwrap();
    preset(again.path(), "3");
    for name in ["layer1.txt", "layer2.txt"] {
        assert_eq!(
            fs::read(dir.path().join(name)).unwrap(),
            fs::read(again.path().join(name)).unwrap()
        );
    }
}

#[test]
fn couple_reports_three_hundred_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = preset(dir.path(), "1");
    let out = dir.path().join("c");
    let v = ok_json(&[
        "couple",
        "--layers",
        s(&layers[0]),
        s(&layers[1]),
        "--universe",
        s(&users),
        "--out",
        s(&out),
    ]);
    assert_eq!(v["nodes"], 300);
    assert_eq!(v["hop_scale"], 2);
    let manifest = fs::read_to_string(out.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 301);
    assert!(fs::read_to_string(out.join("coupled.txt"))
        .unwrap()
        .starts_with("# scheme clique"));
}

#[test]
fn simulate_with_no_seeds_covers_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = preset(dir.path(), "2");
    let seeds = dir.path().join("seeds.txt");
    fs::write(&seeds, "# none\n").unwrap();
    for extra in [&[][..], &["--scheme", "star"][..]] {
        let mut args = vec![
            "simulate",
            "--layers",
            s(&layers[0]),
            s(&layers[1]),
            "--universe",
            s(&users),
            "--seeds",
            s(&seeds),
        ];
        args.extend_from_slice(extra);
        let v = ok_json(&args);
        assert_eq!(v["coverage"], 0.0);
        assert_eq!(v["coverage_fraction"], 0.0);
    }
}

#[test]
fn simulate_trace_lists_seeds_at_hop_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = preset(dir.path(), "2");
    let seeds = dir.path().join("seeds.txt");
    fs::write(&seeds, "u05\nu17\n").unwrap();
    let trace = dir.path().join("trace.csv");
    let v = ok_json(&[
        "simulate",
        "--layers",
        s(&layers[0]),
        s(&layers[1]),
        "--universe",
        s(&users),
        "--seeds",
        s(&seeds),
        "--hops",
        "3",
        "--trace",
        s(&trace),
    ]);
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("hop,node_id,node_kind"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as f64, v["coverage"].as_f64().unwrap());
    assert!(rows.contains(&"0,u05,user") && rows.contains(&"0,u17,user"));
}

#[test]
fn solve_replays_at_least_beta() {
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = preset(dir.path(), "4");
    for scheme in ["clique", "reduced-star", "lossy-easiness"] {
        let v = ok_json(&[
            "solve",
            "--layers",
            s(&layers[0]),
            s(&layers[1]),
            "--universe",
            s(&users),
            "--scheme",
            scheme,
        ]);
        assert_eq!(v["beta"], 0.8);
        assert_eq!(v["d"], 4);
        assert_eq!(v["T"], 4);
        assert_eq!(v["R"], 20);
        assert!(
            v["replayed_fraction"].as_f64().unwrap() >= 0.8 - 1e-12,
            "{scheme}: {v}"
        );
        assert_eq!(v["replay_meets_target"], true);
        assert!(v["version"].is_string());
    }
}

#[test]
fn lossless_replay_matches_coupled_coverage() {
    let net = small_ilp_instance(6);
    for scheme in [Scheme::Clique, Scheme::Star, Scheme::ReducedClique] {
        let (report, users) =
            solve(&net, &SolveOptions::new(Method::Coupled(scheme), 0.5, 3)).unwrap();
        assert!(
            (report.achieved_fraction - report.replayed_fraction).abs() < 1e-9,
            "{scheme}"
        );
        let again = replay(&net, &users, 3, &DiffusionModel::linear_threshold()).unwrap();
        assert_eq!(again, report.replayed_fraction);
    }
    let lossy = couple(&net, Scheme::Lossy(LossyKind::Involvement)).unwrap();
    let out = improved_greedy(&lossy, &GreedyConfig::for_network(&lossy, 0.5, 3)).unwrap();
    let replayed = replay(&net, &out.users, 3, &DiffusionModel::linear_threshold()).unwrap();
    assert!(replayed >= out.achieved_fraction - 1e-12);
}

#[test]
fn direct_search_on_a_tiny_network() {
    let dir = tempfile::tempdir().unwrap();
    let layer = dir.path().join("l.txt");
    fs::write(
        &layer,
        "a b 1\nb c 1\n# theta a 0.5\n# theta b 0.5\n# theta c 0.5\n",
    )
    .unwrap();
    let v = ok_json(&[
        "solve",
        "--layers",
        s(&layer),
        "--scheme",
        "direct",
        "--beta",
        "1",
        "--hops",
        "2",
    ]);
    assert_eq!(v["seed_users"], serde_json::json!(["a"]));
    let short = ok_json(&[
        "solve",
        "--layers",
        s(&layer),
        "--scheme",
        "direct",
        "--beta",
        "1",
        "--hops",
        "1",
    ]);
    assert_eq!(short["seed_users"].as_array().unwrap().len(), 2);
}

#[test]
fn export_ilp_writes_lp_sections() {
    let dir = tempfile::tempdir().unwrap();
    let layer = dir.path().join("l.txt");
    fs::write(&layer, "a b 1\n# theta a 0.5\n# theta b 0.5\n").unwrap();
    let lp = dir.path().join("m.lp");
    let out = lci(&[
        "export-ilp",
        "--layers",
        s(&layer),
        "--hops",
        "1",
        "--beta",
        "1",
        "--out",
        s(&lp),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&lp).unwrap();
    for section in ["Minimize", "Subject To", "Binaries", "End"] {
        assert!(text.lines().any(|l| l.trim() == section), "{section}");
    }
}

#[test]
fn experiment_rows_and_csv() {
    let spec = ExperimentSpec {
        source: Source::Synth(SynthSpec::new(60, vec![(40, 0.08), (40, 0.08)], 9)),
        arms: vec![
            Arm::Solve(Method::Coupled(Scheme::Clique)),
            Arm::Union,
            Arm::Only(0),
            Arm::Only(5),
        ],
        betas: vec![0.3, 0.6],
        repetitions: 2,
        options: SolveOptions::new(Method::Coupled(Scheme::Clique), 0.3, 3),
    };
    let rows = run(&spec, 2).unwrap();
    assert_eq!(rows.len(), 2 * 4 * 2);
    // Wall times are the only nondeterministic field.
    let timeless = |mut rows: Vec<lci::experiment::Row>| {
        rows.iter_mut().for_each(|r| r.wall_time_ms = None);
        rows
    };
    assert_eq!(timeless(rows.clone()), timeless(run(&spec, 1).unwrap()));
    for row in &rows {
        if row.scheme == "only-6" {
            assert!(row.status.starts_with("error"), "{row:?}");
            continue;
        }
        assert_eq!(row.status, "ok");
        assert!(row.replayed_fraction.unwrap() >= row.beta - 1e-12);
        assert_eq!(row.layer_seeds.split(';').count(), 2);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    write_rows(&rows, &path).unwrap();
    let text = fs::read(&path).unwrap();
    assert_eq!(text, rows_to_csv(&rows).unwrap());
    let header = String::from_utf8(text)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert!(header.starts_with("scheme,beta,rep,network_seed"));
    // Only the finished file is left in the directory.
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn experiment_cli_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let o = lci(&[
        "experiment",
        "--users",
        "50",
        "--layer",
        "30:0.1",
        "--layer",
        "30:0.1",
        "--scheme",
        "clique",
        "--scheme",
        "union",
        "--beta",
        "0.4",
        "--reps",
        "2",
        "--hops",
        "2",
        "--jobs",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1 + 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        lci(&["solve", "--layers", s(&missing)]).status.code(),
        Some(3)
    );

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a b c d\n").unwrap();
    let out = lci(&["solve", "--layers", s(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":1"));

    let good = dir.path().join("good.txt");
    fs::write(&good, "a b 0.5\n# theta a 0.5\n# theta b 0.5\n").unwrap();
    assert_eq!(
        lci(&["solve", "--layers", s(&good), "--beta", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lci(&["solve", "--layers", s(&good), "--scheme", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lci(&["solve", "--layers", s(&good), "--model", "xx"])
            .status
            .code(),
        Some(2)
    );

    let seeds = dir.path().join("seeds.txt");
    fs::write(&seeds, "zed\n").unwrap();
    assert_ne!(
        lci(&["simulate", "--layers", s(&good), "--seeds", s(&seeds)])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn support_writer_round_trips_through_the_cli() {
    let net = small_ilp_instance(8);
    let dir = tempfile::tempdir().unwrap();
    let (users, layers) = support::write_network(&net, dir.path());
    let v = ok_json(&[
        "couple",
        "--layers",
        s(&layers[0]),
        s(&layers[1]),
        "--universe",
        s(&users),
        "--out",
        s(&dir.path().join("c")),
    ]);
    assert_eq!(v["nodes"], 300);
    assert_eq!(v["notes"], serde_json::json!([]));
}
