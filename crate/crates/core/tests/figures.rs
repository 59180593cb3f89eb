use teplex::multiplex::build_multiplexes;
use teplex::report::{emit_influence_distribution, emit_participation_scatter, participation_reference_lines};
use teplex::synth::{actor_id, ActorGroup, Coupling, SynthSpec};
use teplex::te::build_all_layers;
use teplex::{LayerId, LayerOptions, LayerSet, SourceClass, TeEdge};

fn opts() -> LayerOptions {
    LayerOptions {
        te_min: 0.1,
        ..LayerOptions::default()
    }
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn single_layer_actor_and_tie_order() {
    let mut set = LayerSet::empty(vec!["b".into(), "a".into(), "c".into()]);
    set.actors.sort();
    let tm_uf = LayerId::new(SourceClass::TM, SourceClass::UF).index();
    // a and b tie on strength; c has one edge only.
    set.layers[tm_uf].edges = vec![
        TeEdge { source: 0, target: 2, weight: 0.25 },
        TeEdge { source: 1, target: 2, weight: 0.25 },
    ];
    let muxes = build_multiplexes(&set);
    let csv = emit_influence_distribution(&muxes[0]);
    assert_eq!(
        csv,
        "rank,actor_id,k_TM,k_TF,k_UM,k_UF\n1,a,0,0,0,0.250000000000\n2,b,0,0,0,0.250000000000\n"
    );
    let scatter = emit_participation_scatter(&muxes[0]);
    assert_eq!(scatter, "o,participation,actor_id\n0.250000000000,0,a\n0.250000000000,0,b\n");
    assert!(emit_influence_distribution(&muxes[1]).lines().count() == 1);
}

/// Uniform drivers put one planted c = 0.8 edge in each of the four layers,
/// so their four strengths estimate the same quantity.
#[test]
fn uniform_drivers_have_near_equal_strengths() {
    let series = SynthSpec::participation_mix(365, 0.8, 21).generate().unwrap().series;
    let set = build_all_layers(&series, &opts()).unwrap();
    let mut spreads = Vec::new();
    for mux in build_multiplexes(&set) {
        for r in rows(&emit_influence_distribution(&mux)) {
            if !r[1].starts_with("uniform-") {
                continue;
            }
            let k: Vec<f64> = r[2..6].iter().map(|v| v.parse().unwrap()).collect();
            let mean = k.iter().sum::<f64>() / 4.0;
            let spread = k.iter().map(|v| (v - mean).abs() / mean).fold(0.0, f64::max);
            spreads.push(spread);
        }
    }
    assert_eq!(spreads.len(), 40);
    assert!(spreads.iter().all(|&s| s < 0.3), "{spreads:?}");
    assert!(median(spreads) < 0.15);
}

/// Drivers coupled to m = 1..4 target classes land near (4/3)(1 - 1/m).
#[test]
fn mixed_population_clusters_on_reference_lines() {
    use SourceClass::*;
    let all = SourceClass::ALL;
    let mut spec = SynthSpec {
        days: 365,
        seed: 77,
        start_date: chrono::NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
        groups: vec![ActorGroup::new("target", 120, &all)],
        couplings: Vec::new(),
    };
    let mut next_target = 0;
    for m in 1..=4usize {
        let prefix = format!("m{m}");
        spec.groups.push(ActorGroup::new(&prefix, 12, &[UM]));
        for i in 0..12 {
            let driver = actor_id(&prefix, i);
            for class in all.iter().cycle().skip(i).take(m) {
                let target = actor_id("target", next_target);
                next_target += 1;
                spec.couplings.push(Coupling::new((&driver, UM), (&target, *class), 0.8));
            }
        }
    }
    let series = spec.generate().unwrap().series;
    let set = build_all_layers(&series, &opts()).unwrap();
    let muxes = build_multiplexes(&set);
    let um = muxes.iter().find(|m| m.source_class() == UM).unwrap();
    let points = rows(&emit_participation_scatter(um));
    for (m, line) in participation_reference_lines() {
        let p: Vec<f64> = points
            .iter()
            .filter(|r| r[2].starts_with(&format!("m{m}-")))
            .map(|r| r[1].parse().unwrap())
            .collect();
        assert_eq!(p.len(), 12, "m = {m}");
        let med = median(p.clone());
        assert!((med - line).abs() < 0.05, "m = {m}: median {med}, line {line}");
        assert!(p.iter().all(|v| (v - line).abs() < 0.15), "m = {m}: {p:?}");
    }
}
