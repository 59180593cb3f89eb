use teplex::series::SeriesMap;
use teplex::synth::SynthSpec;
use teplex::te::{build_all_layers, transfer_entropy, LayerBuilder};
use teplex::{LayerId, LayerOptions, SourceClass};

fn opts(te_min: f64) -> LayerOptions {
    LayerOptions {
        te_min,
        ..LayerOptions::default()
    }
}

/// Brute force over ordered pairs of series of different actors.
fn positive_pairs(series: &SeriesMap, te_min: f64) -> usize {
    let mut n = 0;
    for ((a, _), x) in series {
        for ((b, _), y) in series {
            if a != b && transfer_entropy(&x.bits, &y.bits).unwrap() > te_min {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn layer_count_identity() {
    use SourceClass::*;
    let series = SynthSpec::asymmetric_overlap(90, 0.8, 17).generate().unwrap().series;
    for te_min in [1e-6, 0.02, 0.1] {
        let set = build_all_layers(&series, &opts(te_min)).unwrap();
        assert_eq!(set.total_edges(), positive_pairs(&series, te_min), "te_min = {te_min}");
    }
    let mixed = SynthSpec::null_population(12, &[TM, UM, UF], 60, 4).generate().unwrap().series;
    let set = build_all_layers(&mixed, &opts(1e-6)).unwrap();
    assert_eq!(set.total_edges(), positive_pairs(&mixed, 1e-6));
}

#[test]
fn structural_emptiness() {
    use SourceClass::*;
    let empty = build_all_layers(&SeriesMap::new(), &opts(1e-6)).unwrap();
    assert_eq!(empty.layers.len(), 16);
    assert_eq!(empty.total_edges(), 0);

    let series = SynthSpec::null_population(8, &[TM, UM], 60, 9).generate().unwrap().series;
    let set = build_all_layers(&series, &opts(0.0)).unwrap();
    for id in LayerId::all() {
        let touches_fringe = [TF, UF].contains(&id.source) || [TF, UF].contains(&id.target);
        if touches_fringe {
            assert!(set.layer(id).is_empty(), "{id}");
        }
    }
    assert!(!set.layer(LayerId::new(TM, UM)).is_empty());

    let lone = SynthSpec::null_population(1, &[TM], 60, 9).generate().unwrap().series;
    let set = build_all_layers(&lone, &opts(0.0)).unwrap();
    assert_eq!(set.total_edges(), 0);
}

#[test]
fn copy_pair_gives_one_bit_edge() {
    let series = SynthSpec::copy_pair(10_000, 1.0, 3).generate().unwrap().series;
    let set = build_all_layers(&series, &opts(0.05)).unwrap();
    let layer = set.layer(LayerId::new(SourceClass::TM, SourceClass::TM));
    assert_eq!(layer.len(), 1);
    let e = layer.edges[0];
    assert_eq!(set.actor_name(e.source), "driver-0000");
    assert_eq!(set.actor_name(e.target), "follower-0000");
    assert!((e.weight - 1.0).abs() < 0.01);
}

/// 30 independent actors over 120 days: 870 ordered pairs. The null 99th
/// percentile is ≈0.056 bits, so a 0.05-bit threshold still admits about
/// 1.5% of pairs and 0.06 bits under 1%. Pairs share series, so a single
/// population fluctuates around those rates; the bounds allow for that.
#[test]
fn independent_population_has_few_edges() {
    let series = SynthSpec::null_population(30, &[SourceClass::TM], 120, 2024)
        .generate()
        .unwrap()
        .series;
    let builder = LayerBuilder::new(&series).unwrap();
    let count = |te_min| builder.build_layer(SourceClass::TM, SourceClass::TM, &opts(te_min)).len();
    let pairs = 30 * 29;
    let at_005 = count(0.05);
    let at_006 = count(0.06);
    assert!(at_005 as f64 / pairs as f64 <= 0.03, "{at_005} edges at 0.05");
    assert!(at_006 as f64 / pairs as f64 <= 0.02, "{at_006} edges at 0.06");
    assert!(at_006 <= at_005);
    assert!(count(1e-6) > pairs / 2);
}

#[test]
fn permutation_mode_prunes_null_edges_and_keeps_planted_ones() {
    let mut spec = SynthSpec::null_population(10, &[SourceClass::TM], 120, 8);
    spec.groups.push(teplex::synth::ActorGroup::new("driver", 1, &[SourceClass::TM]));
    spec.couplings.push(teplex::synth::Coupling::new(
        ("driver-0000", SourceClass::TM),
        ("actor-0000", SourceClass::TM),
        0.9,
    ));
    let series = spec.generate().unwrap().series;
    let perm = LayerOptions {
        te_min: 1e-6,
        permutations: 200,
        seed: 5,
        ..LayerOptions::default()
    };
    let set = build_all_layers(&series, &perm).unwrap();
    let plain = build_all_layers(&series, &opts(1e-6)).unwrap();
    let tm = LayerId::new(SourceClass::TM, SourceClass::TM);
    assert!(set.layer(tm).len() < plain.layer(tm).len() / 5);
    let driver = set.actor_index("driver-0000").unwrap();
    let target = set.actor_index("actor-0000").unwrap();
    assert!(set.layer(tm).edges.iter().any(|e| e.source == driver && e.target == target));
    // Same seed, same result.
    assert_eq!(set, build_all_layers(&series, &perm).unwrap());
}
