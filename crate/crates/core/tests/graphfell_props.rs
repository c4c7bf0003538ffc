use proptest::prelude::*;
use rand::Rng;

use groupoidlab::corpus;
use groupoidlab::graphfell::{periodic_fell_verdict, single_threaded_vertices, DirectedGraph, PeriodicGraph, Verdict};

/// A block of up to four vertices with forward edges, one or two seams and
/// an optional one-vertex prefix.
fn periodic(seed: u64) -> PeriodicGraph {
    let mut rng = corpus::rng(seed);
    let k = rng.gen_range(1..=4);
    let names: Vec<String> = (0..k).map(|i| format!("b{i}")).collect();
    let edges = (0..rng.gen_range(0..=2 * k))
        .filter_map(|e| {
            let (r, s) = (rng.gen_range(0..k), rng.gen_range(0..k));
            (r < s).then(|| (format!("g{e}"), r, s))
        })
        .collect();
    let block = DirectedGraph::new(names.clone(), edges).unwrap();
    let seams = (0..rng.gen_range(1..=2))
        .map(|e| (format!("s{e}"), names[rng.gen_range(0..k)].clone(), names[rng.gen_range(0..k)].clone()))
        .collect();
    let (prefix, links) = if rng.gen_bool(0.5) {
        let p = DirectedGraph::new(vec!["p".into()], vec![]).unwrap();
        (p, vec![("l".to_string(), "p".to_string(), names[rng.gen_range(0..k)].clone())])
    } else {
        (DirectedGraph::new(vec![], vec![]).unwrap(), vec![])
    };
    let rays = names.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    PeriodicGraph::new(prefix, block, links, seams, rays).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labels_are_shift_stable(seed in any::<u64>()) {
        let p = periodic(seed);
        let depth = p.exact_depth();
        let unrolled = p.unroll(2 * depth + 2);
        let labels = single_threaded_vertices(&unrolled.graph).unwrap();
        let m = p.block().len();
        for copy in 1..=depth {
            for b in 0..m {
                prop_assert_eq!(labels[unrolled.vertex(copy, b)], labels[unrolled.vertex(0, b)], "copy {}", copy);
            }
        }
        let verdict = periodic_fell_verdict(&p);
        for b in 0..m {
            let label = format!("{} (every copy)", p.block().vertices()[b]);
            let listed = if labels[unrolled.vertex(0, b)] { &verdict.single_threaded } else { &verdict.not_single_threaded };
            prop_assert!(listed.contains(&label), "{} missing", label);
        }
    }

    #[test]
    fn verdicts_carry_valid_witnesses(seed in any::<u64>()) {
        let p = periodic(seed);
        let verdict = periodic_fell_verdict(&p);
        prop_assert!(matches!(verdict.verdict, Verdict::Fell | Verdict::NotFell));
        if verdict.verdict == Verdict::NotFell {
            let w = verdict.witness.clone().expect("witness");
            let unrolled = p.unroll(p.exact_depth() + 2);
            prop_assert!(unrolled.graph.check_path_pair(&w));
            prop_assert!(verdict.infinite_walk.as_ref().is_some_and(|walk| !walk.is_empty()));
        } else {
            prop_assert!(verdict.witness.is_none());
        }
    }
}
