use proptest::prelude::*;
use rand::Rng;

use groupoidlab::corpus;
use groupoidlab::finspace::{
    classify_map, closed_hausdorff_core, hausdorff_cover_resolution, FinSpace, SpaceError, SpaceMap,
};

fn space(seed: u64, max: usize) -> FinSpace {
    let mut rng = corpus::rng(seed);
    let n = rng.gen_range(1..=max);
    let density = rng.gen_range(0.0..0.6);
    corpus::random_space(&mut rng, n, density)
}

fn all_maps<'a>(dom: &'a FinSpace, cod: &'a FinSpace) -> impl Iterator<Item = SpaceMap> + 'a {
    let (a, b) = (dom.len(), cod.len());
    (0..b.pow(a as u32)).map(move |mut code| {
        let assignment = (0..a)
            .map(|_| {
                let y = code % b;
                code /= b;
                y
            })
            .collect();
        SpaceMap::new(dom.clone(), cod.clone(), assignment).unwrap()
    })
}

#[test]
fn finite_hausdorff_spaces_are_discrete() {
    for n in 0..=4 {
        for x in corpus::all_spaces(n) {
            assert_eq!(x.is_hausdorff(), x.is_discrete());
            assert_eq!(x.is_locally_hausdorff(), x.is_discrete());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn open_sets_form_a_lattice(seed in any::<u64>()) {
        let x = space(seed, 6);
        for p in 0..x.len() {
            for q in x.min_open(p).ones() {
                prop_assert!(x.min_open(q).is_subset(x.min_open(p)));
            }
        }
        let opens = x.open_sets().unwrap();
        for u in &opens {
            prop_assert!(x.is_open(u));
            for v in &opens {
                let mut join = u.clone();
                join.union_with(v);
                let mut meet = u.clone();
                meet.intersect_with(v);
                prop_assert!(opens.contains(&join) && opens.contains(&meet));
            }
        }
    }

    #[test]
    fn classification_is_consistent(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let dom = space(rng.gen(), 4);
        let cod = space(rng.gen(), 4);
        for f in all_maps(&dom, &cod) {
            let p = classify_map(&f);
            if p.local_homeomorphism {
                prop_assert!(p.continuous && p.open_map);
            }
            if p.quotient {
                prop_assert!(p.surjective && p.continuous);
                // Saturated opens have open images.
                for u in dom.open_sets().unwrap() {
                    if f.preimage(&f.image(&u)) == u {
                        prop_assert!(cod.is_open(&f.image(&u)));
                    }
                }
            }
        }
    }

    #[test]
    fn core_is_open_and_hausdorff(seed in any::<u64>()) {
        let x = space(seed, 6);
        let (core, report) = closed_hausdorff_core(&x);
        prop_assert!(x.is_open(&core) && x.is_hausdorff_subset(&core) && report.holds());
        prop_assert_eq!(core.count_ones(..), report.witnesses.len());
    }

    #[test]
    fn cover_resolution_is_a_local_homeomorphism(seed in any::<u64>()) {
        let x = space(seed, 6);
        let cover: Vec<Vec<usize>> = (0..x.len())
            .map(|p| x.min_open(p).clone())
            .filter(|u| x.is_hausdorff_subset(u))
            .map(|u| u.ones().collect())
            .collect();
        match hausdorff_cover_resolution(&x, &cover) {
            Ok((_, psi)) => {
                let p = classify_map(&psi);
                prop_assert!(p.continuous && p.open_map && p.surjective && p.quotient && p.local_homeomorphism);
            }
            Err(e) => {
                prop_assert!(matches!(e, SpaceError::CoverNotExhaustive(_)));
                prop_assert!(!x.is_locally_hausdorff());
            }
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let x = space(seed, 6);
        let back: FinSpace = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(&back, &x);
        let f = SpaceMap::identity(x);
        let back: SpaceMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
