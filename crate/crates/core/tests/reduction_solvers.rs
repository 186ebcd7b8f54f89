use geopack::geometry::{fits_exact, verify_packing};
use geopack::reduction::*;
use geopack::solvers::*;
use geopack::{Budget, Graph, Rational, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (0u64..1 << pairs).prop_map(move |mask| Graph::from_edge_mask(n, mask).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cliques_fit_and_only_cliques(g in graph(5)) {
        let report = verify_reduction_property(&g, &ReductionParams::<Rational>::default(), &mut Budget::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violation);
        prop_assert_eq!(report.subsets_checked, 1u64 << g.vertex_count());
    }

    #[test]
    fn clique_placement_is_valid(g in graph(6)) {
        let params = ReductionParams::<Rational>::new(Rational::from_ratio(1, 10)).unwrap();
        let clique = greedy_clique(&g);
        let instance = build_instance(&g, &params).unwrap().sub_instance(&clique).unwrap();
        let p = clique_placement(&g, &clique, &params).unwrap();
        prop_assert!(verify_packing(&instance, &p).unwrap());
    }

    #[test]
    fn bins_equal_chromatic_number_of_complement(g in graph(5)) {
        let instance = build_instance(&g, &ReductionParams::<Rational>::default()).unwrap();
        let bins = min_bins_exact(&instance).unwrap();
        prop_assert!(bins.validate(&instance).unwrap());
        prop_assert_eq!(bins.count(), chromatic_number(&complement(&g)).unwrap().count);
    }

    #[test]
    fn first_fit_is_a_valid_upper_bound(g in graph(5)) {
        let instance = build_instance(&g, &ReductionParams::<Rational>::default()).unwrap();
        let exact = min_bins_exact(&instance).unwrap().count();
        for order in [(0..instance.len()).collect::<Vec<_>>(), decreasing_volume_order(&instance)] {
            let ff = first_fit_bins(&instance, &order).unwrap();
            prop_assert!(ff.validate(&instance).unwrap());
            prop_assert!(ff.count() >= exact);
        }
    }

    #[test]
    fn colorings_are_proper_and_bounded(g in graph(6)) {
        let c = chromatic_number(&g).unwrap();
        prop_assert!(g.is_proper_coloring(&c.colors));
        prop_assert!(c.count >= greedy_clique(&g).len());
        prop_assert!(c.count <= g.max_degree() + 1);
    }

    #[test]
    fn configurations_are_the_maximal_cliques(g in graph(5)) {
        let instance = build_instance(&g, &ReductionParams::<Rational>::default()).unwrap();
        for c in enumerate_configurations(&instance).unwrap() {
            prop_assert!(is_clique(&g, &c.boxes).unwrap());
            let n = g.vertex_count();
            for v in (0..n).filter(|v| !c.boxes.contains(v)) {
                let mut bigger = c.boxes.clone();
                bigger.push(v);
                prop_assert!(!is_clique(&g, &bigger).unwrap(), "{:?} is not maximal", c.boxes);
            }
        }
    }
}

#[test]
fn random_seven_vertex_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let g = Graph::random(7, 0.5, &mut rng);
        let instance = build_instance(&g, &ReductionParams::<Rational>::default()).unwrap();
        assert_eq!(
            min_bins_exact(&instance).unwrap().count(),
            chromatic_number(&complement(&g)).unwrap().count
        );
    }
}

#[test]
fn non_adjacent_pair_never_fits() {
    let g = Graph::path(3);
    let inst = build_instance(&g, &ReductionParams::<Rational>::default()).unwrap();
    assert!(fits_exact(&inst.sub_instance(&[0, 2]).unwrap())
        .unwrap()
        .is_none());
    assert!(fits_exact(&inst.sub_instance(&[0, 1]).unwrap())
        .unwrap()
        .is_some());
}
