use lci_core::coupling::couple;
use lci_core::generator::{generate, small_ilp_instance, small_ilp_spec, SynthSpec};
use lci_core::graph::{overlap_users, validate};
use lci_core::{MultiplexNetwork, Scheme};

fn shared(net: &MultiplexNetwork, a: usize, b: usize) -> usize {
    (0..net.user_count())
        .filter(|&u| net.is_member(a, u) && net.is_member(b, u))
        .count()
}

#[test]
fn zero_probability_gives_no_edges() {
    let net = generate(&SynthSpec::new(50, vec![(30, 0.0), (20, 0.0)], 1)).unwrap();
    assert!(net.layers().iter().all(|l| l.edge_count() == 0));
    assert_eq!(net.layer(0).node_count(), 30);
    assert_eq!(net.user_count(), 50);
}

#[test]
fn generated_networks_are_valid_and_reproducible() {
    let spec = SynthSpec::new(200, vec![(120, 0.05), (90, 0.08), (60, 0.1)], 17);
    let a = generate(&spec).unwrap();
    assert!(validate(&a).is_valid());
    assert_eq!(a, generate(&spec).unwrap());
    let other = generate(&SynthSpec {
        rng_seed: 18,
        ..spec
    })
    .unwrap();
    assert_ne!(a, other);
    for l in a.layers() {
        for (node, sum) in l.in_weight_sums().into_iter().enumerate() {
            if l.in_degrees()[node] > 0 {
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn average_degrees_of_large_layers() {
    let spec = SynthSpec::new(20_000, vec![(10_000, 0.0008), (10_000, 0.006)], 4);
    let net = generate(&spec).unwrap();
    for (pos, expected) in [(0, 8.0), (1, 60.0)] {
        let l = net.layer(pos);
        let avg = l.edge_count() as f64 / l.node_count() as f64;
        assert!(
            (avg - expected).abs() / expected < 0.05,
            "layer {pos}: {avg}"
        );
    }
}

#[test]
fn five_layer_sweep_degree_and_overlap() {
    let spec = SynthSpec::new(10_000, vec![(4000, 0.0025); 5], 8);
    let net = generate(&spec).unwrap();
    for l in net.layers() {
        let avg = l.edge_count() as f64 / l.node_count() as f64;
        assert!((avg - 10.0).abs() < 0.5, "{avg}");
    }
    let mut total = 0.0;
    for a in 0..5 {
        for b in a + 1..5 {
            let f = shared(&net, a, b) as f64 / 10_000.0;
            assert!((f - 0.16).abs() < 0.015, "{f}");
            total += f;
        }
    }
    assert!((total / 10.0 - 0.16).abs() < 0.005);
}

#[test]
fn edge_counts_over_many_seeds() {
    let (n, p) = (80usize, 0.05);
    let runs = 30;
    let mean = (0..runs)
        .map(|s| {
            generate(&SynthSpec::new(n, vec![(n, p)], s))
                .unwrap()
                .layer(0)
                .edge_count() as f64
        })
        .sum::<f64>()
        / runs as f64;
    let m = (n * (n - 1)) as f64;
    let sd_of_mean = (m * p * (1.0 - p) / runs as f64).sqrt();
    assert!((mean - m * p).abs() < 3.0 * sd_of_mean, "{mean}");
}

#[test]
fn forced_overlap_is_exact() {
    let spec = SynthSpec::new(150, vec![(100, 0.02), (100, 0.02)], 3).with_overlap(0.5);
    let net = generate(&spec).unwrap();
    assert_eq!(overlap_users(&net).len(), 50);
    assert_eq!(net.user_count(), 150);

    let spec =
        SynthSpec::new(1000, vec![(300, 0.01), (200, 0.01), (250, 0.01)], 9).with_overlap(0.3);
    let net = generate(&spec).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        assert_eq!(shared(&net, a, b), spec.shared_count(a, b).unwrap());
    }
    assert_eq!(spec.shared_count(0, 1), Some(60));
}

#[test]
fn thresholds_average_near_one_half() {
    let net = generate(&SynthSpec::new(100, vec![(100, 0.05), (100, 0.05)], 12)).unwrap();
    let all: Vec<f64> = net
        .layers()
        .iter()
        .flat_map(|l| l.thresholds().iter().map(|t| t.unwrap()))
        .collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    assert!((0.4..=0.6).contains(&mean), "{mean}");
    assert!(all.iter().all(|&t| t > 0.0 && t <= 1.0));
}

#[test]
fn small_instance_shape() {
    let net = small_ilp_instance(1);
    assert_eq!(net, small_ilp_instance(1));
    assert_eq!(net.user_count(), 100);
    assert_eq!(net.layer_count(), 2);
    assert!(net.layers().iter().all(|l| l.node_count() == 50));
    assert_eq!(couple(&net, Scheme::Clique).unwrap().node_count(), 300);
    let runs = 40;
    let degree: f64 = (0..runs)
        .map(|s| {
            let net = small_ilp_instance(s);
            net.layers().iter().map(|l| l.edge_count()).sum::<usize>() as f64 / 100.0
        })
        .sum::<f64>()
        / runs as f64;
    assert!((degree - 1.96).abs() < 0.1, "{degree}");
    assert_eq!(small_ilp_spec(5).per_layer, vec![(50, 0.04), (50, 0.04)]);
}
