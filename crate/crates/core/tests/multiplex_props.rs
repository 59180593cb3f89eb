use proptest::prelude::*;

use teplex::multiplex::{build_multiplexes, cooccurrence, participation_coefficient};
use teplex::{CooccurrenceMode, CooccurrenceScope, LayerId, LayerSet, SourceClass, TeEdge};

/// A layer set over `n` actors from `(layer, source, target, weight)` tuples.
fn layer_set(n: u32, edges: &[(usize, u32, u32, f64)]) -> LayerSet {
    let mut set = LayerSet::empty((0..n).map(|i| format!("a{i:02}")).collect());
    for &(layer, source, target, weight) in edges {
        set.layers[layer].edges.push(TeEdge { source, target, weight });
    }
    for l in &mut set.layers {
        l.edges.sort_by_key(|e| (e.source, e.target));
        l.edges.dedup_by_key(|e| (e.source, e.target));
    }
    set
}

fn edges_strategy() -> impl Strategy<Value = Vec<(usize, u32, u32, f64)>> {
    proptest::collection::vec((0usize..16, 0u32..12, 0u32..12, 1e-4f64..2.0), 0..120)
        .prop_map(|v| v.into_iter().filter(|e| e.1 != e.2).collect())
}

#[test]
fn participation_endpoints() {
    assert_eq!(participation_coefficient(&[0.7, 0.0, 0.0, 0.0]).unwrap(), 0.0);
    assert!((participation_coefficient(&[0.3; 4]).unwrap() - 1.0).abs() < 1e-12);
    assert!((participation_coefficient(&[0.3, 0.3, 0.0, 0.0]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((participation_coefficient(&[0.3, 0.3, 0.3, 0.0]).unwrap() - 8.0 / 9.0).abs() < 1e-12);
    assert!(participation_coefficient(&[0.0; 4]).is_err());
}

#[test]
fn cooccurrence_is_not_symmetric() {
    // Four actors active in TM, one of them also in UM.
    let tm = LayerId::new(SourceClass::TM, SourceClass::TM).index();
    let um = LayerId::new(SourceClass::UM, SourceClass::UM).index();
    let set = layer_set(
        6,
        &[(tm, 0, 5, 0.2), (tm, 1, 5, 0.2), (tm, 2, 5, 0.2), (tm, 3, 5, 0.2), (um, 0, 4, 0.3)],
    );
    let m = cooccurrence(&set, CooccurrenceMode::ActorLevel, CooccurrenceScope::Aggregated4);
    assert_eq!(m.entry("UM*", "TM*"), Some(1.0));
    assert_eq!(m.entry("TM*", "UM*"), Some(0.25));
    assert_eq!(m.entry("TF*", "TM*"), None);
}

proptest! {
    #[test]
    fn measures_are_bounded_and_additive(edges in edges_strategy()) {
        let set = layer_set(12, &edges);
        for mux in build_multiplexes(&set) {
            for m in &mux.measures {
                prop_assert!(m.participation >= 0.0 && m.participation <= 1.0 + 1e-12);
                prop_assert_eq!(m.o, ((m.k[0] + m.k[1]) + m.k[2]) + m.k[3]);
                prop_assert!(m.o > 0.0);
            }
        }
    }

    #[test]
    fn diagonal_entries_are_exactly_one(edges in edges_strategy()) {
        let set = layer_set(12, &edges);
        for mode in [CooccurrenceMode::EdgeLevel, CooccurrenceMode::ActorLevel] {
            for scope in [CooccurrenceScope::Layer16, CooccurrenceScope::Aggregated4] {
                let m = cooccurrence(&set, mode, scope);
                for i in 0..m.dim() {
                    let row_defined = m.get(i, i).is_some();
                    prop_assert!(m.get(i, i).is_none_or(|v| v == 1.0));
                    for j in 0..m.dim() {
                        prop_assert_eq!(m.get(i, j).is_some(), row_defined);
                        prop_assert!(m.get(i, j).is_none_or(|v| (0.0..=1.0).contains(&v)));
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_weights_scales_strength_only(edges in edges_strategy(), c in 0.01f64..50.0) {
        let set = layer_set(12, &edges);
        let mut scaled = set.clone();
        for l in &mut scaled.layers {
            for e in &mut l.edges {
                e.weight *= c;
            }
        }
        for (a, b) in build_multiplexes(&set).iter().zip(build_multiplexes(&scaled).iter()) {
            let by_actor = |v: &[teplex::NodeMeasures]| {
                let mut v = v.to_vec();
                v.sort_by(|x, y| x.actor_id.cmp(&y.actor_id));
                v
            };
            for (x, y) in by_actor(&a.measures).iter().zip(by_actor(&b.measures).iter()) {
                prop_assert_eq!(&x.actor_id, &y.actor_id);
                prop_assert!((x.participation - y.participation).abs() < 1e-12);
                prop_assert!((x.o * c - y.o).abs() <= 1e-12 * y.o.max(1.0));
            }
        }
        for mode in [CooccurrenceMode::EdgeLevel, CooccurrenceMode::ActorLevel] {
            for scope in [CooccurrenceScope::Layer16, CooccurrenceScope::Aggregated4] {
                prop_assert_eq!(cooccurrence(&set, mode, scope), cooccurrence(&scaled, mode, scope));
            }
        }
    }

    #[test]
    fn disjoint_layers_cooccur_at_zero(n in 1u32..6) {
        // Actors 0..n only in TM->TM, actors n..2n only in UF->UF.
        let tm = LayerId::new(SourceClass::TM, SourceClass::TM).index();
        let uf = LayerId::new(SourceClass::UF, SourceClass::UF).index();
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((tm, i, (i + 1) % n + if n == 1 { 1 } else { 0 }, 0.5));
            edges.push((uf, n + i, n + (i + 1) % n, 0.5));
        }
        let set = layer_set(2 * n + 1, &edges);
        for mode in [CooccurrenceMode::EdgeLevel, CooccurrenceMode::ActorLevel] {
            let m = cooccurrence(&set, mode, CooccurrenceScope::Layer16);
            prop_assert_eq!(m.entry("TM->TM", "UF->UF"), Some(0.0));
            prop_assert_eq!(m.entry("UF->UF", "TM->TM"), Some(0.0));
        }
    }
}
