use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::MultiplexNetwork;

/// Slack allowed on incoming weight sums before they count as exceeding one.
pub const IN_WEIGHT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingThreshold {
        layer: usize,
        user: String,
    },
    NonPositiveThreshold {
        layer: usize,
        user: String,
        theta: f64,
    },
    ThresholdAboveOne {
        layer: usize,
        user: String,
        theta: f64,
    },
    UnsetWeight {
        layer: usize,
        src: String,
        dst: String,
    },
    InWeightSumExceedsOne {
        layer: usize,
        user: String,
        sum: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingThreshold { layer, user } => {
                write!(f, "missing threshold: layer {layer} user {user}")
            }
            Violation::NonPositiveThreshold { layer, user, theta } => {
                write!(
                    f,
                    "non-positive threshold: layer {layer} user {user} theta {theta}"
                )
            }
            Violation::ThresholdAboveOne { layer, user, theta } => {
                write!(
                    f,
                    "threshold above 1: layer {layer} user {user} theta {theta}"
                )
            }
            Violation::UnsetWeight { layer, src, dst } => {
                write!(f, "unset edge weight: layer {layer} {src} -> {dst}")
            }
            Violation::InWeightSumExceedsOne { layer, user, sum } => {
                write!(
                    f,
                    "in-weight sum exceeds 1: layer {layer} user {user} sum {sum}"
                )
            }
        }
    }
}

/// Result of [`validate`]. Empty `violations` means the network is valid;
/// `notes` records non-fatal decisions taken while ingesting it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks thresholds, weights and incoming weight sums of every layer.
/// Structural invariants (no self-loops, no parallel edges, endpoints in the
/// node set) are enforced when layers are built and cannot be violated here.
pub fn validate(network: &MultiplexNetwork) -> ValidationReport {
    let mut report = ValidationReport::default();
    for layer in network.layers() {
        let index = layer.index();
        let name = |v: usize| String::from(layer.id(v).as_str());
        for (v, theta) in layer.thresholds().iter().enumerate() {
            match *theta {
                None => report.violations.push(Violation::MissingThreshold {
                    layer: index,
                    user: name(v),
                }),
                Some(t) if t <= 0.0 => report.violations.push(Violation::NonPositiveThreshold {
                    layer: index,
                    user: name(v),
                    theta: t,
                }),
                Some(t) if t > 1.0 => report.violations.push(Violation::ThresholdAboveOne {
                    layer: index,
                    user: name(v),
                    theta: t,
                }),
                Some(_) => {}
            }
        }
        for e in layer.edges().iter().filter(|e| e.weight.is_none()) {
            report.violations.push(Violation::UnsetWeight {
                layer: index,
                src: name(e.src),
                dst: name(e.dst),
            });
        }
        for (v, sum) in layer.in_weight_sums().into_iter().enumerate() {
            if sum > 1.0 + IN_WEIGHT_SLACK {
                report.violations.push(Violation::InWeightSumExceedsOne {
                    layer: index,
                    user: name(v),
                    sum,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{assign_random_thresholds, LayerGraph};
    use alloc::string::ToString;
    use alloc::vec;

    fn two_layers() -> MultiplexNetwork {
        let mut a = LayerGraph::new(1);
        a.add_edge("x", "y", Some(1.0)).unwrap();
        let mut b = LayerGraph::new(2);
        b.add_edge("y", "z", Some(0.5)).unwrap();
        b.add_edge("x", "z", Some(0.5)).unwrap();
        assign_random_thresholds(&MultiplexNetwork::new(vec![a, b]).unwrap(), 1)
    }

    #[test]
    fn valid_network_has_empty_report() {
        assert!(validate(&two_layers()).is_valid());
    }

    #[test]
    fn zero_threshold_is_reported() {
        let net = two_layers();
        let mut layer = net.layer(0).clone();
        layer.set_threshold("x", 0.0).unwrap();
        let net = net.with_layer(0, layer).unwrap();
        let report = validate(&net);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0]
            .to_string()
            .starts_with("non-positive threshold"));
    }

    #[test]
    fn excess_in_weight_is_reported() {
        let mut layer = LayerGraph::new(1);
        layer.add_edge("a", "c", Some(0.6)).unwrap();
        layer.add_edge("b", "c", Some(0.6)).unwrap();
        let net = assign_random_thresholds(&MultiplexNetwork::new(vec![layer]).unwrap(), 2);
        let report = validate(&net);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0]
            .to_string()
            .starts_with("in-weight sum exceeds 1"));
    }

    #[test]
    fn missing_pieces_are_reported() {
        let mut layer = LayerGraph::new(1);
        layer.add_edge("a", "b", None).unwrap();
        let net = MultiplexNetwork::new(vec![layer]).unwrap();
        let report = validate(&net);
        assert_eq!(report.violations.len(), 3);
    }
}
