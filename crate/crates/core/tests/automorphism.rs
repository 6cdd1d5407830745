use std::collections::BTreeMap;

use align_lab::automorphism::block::draw_tree_permutation;
use align_lab::automorphism::{
    common_fixed_edges, common_fixed_edges_in_s, delta, node_permutation, EdgePartitionS, IntersectionAnalysis,
};
use align_lab::components::{build_census, decompose};
use align_lab::model::{sample_instance, ModelParams, Permutation, SparseGraph};
use align_lab::Seed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn built_permutations_are_automorphisms_fixing_the_large_part(
        seed in any::<u64>(),
        builder in any::<u64>(),
        lambda in 0.3f64..5.0,
        s in 0.2f64..1.0,
        n in 30usize..3000,
    ) {
        let inst = sample_instance(ModelParams::new(n, lambda, s).unwrap(), Seed(seed)).unwrap();
        let analysis = IntersectionAnalysis::new(&inst).unwrap();
        let b = analysis.build_sigma(Seed(builder)).unwrap();
        prop_assert_eq!(analysis.intersection.relabel(&b.sigma).unwrap(), analysis.intersection.clone());
        for &v in analysis.partition.v_infinity().iter().chain(analysis.partition.v_gt()) {
            prop_assert_eq!(b.sigma.apply(v), v);
        }
    }

    #[test]
    fn delta_is_the_common_edge_gain(seed in any::<u64>(), builder in any::<u64>(), lambda in 0.5f64..4.0, n in 30usize..2000) {
        let inst = sample_instance(ModelParams::new(n, lambda, 0.5).unwrap(), Seed(seed)).unwrap();
        let analysis = IntersectionAnalysis::new(&inst).unwrap();
        let b = analysis.build_sigma(Seed(builder)).unwrap();
        let (g, gp) = (inst.g(), inst.g_prime());
        let base = g.common_edge_count(&gp).unwrap();
        let moved = g.relabel(&b.sigma).unwrap().common_edge_count(&gp).unwrap();
        prop_assert!(moved >= base);
        prop_assert_eq!(moved - base, analysis.delta(&b, &inst).unwrap());
    }

    #[test]
    fn class_order_does_not_matter(seed in any::<u64>(), builder in any::<u64>(), n in 30usize..2000) {
        let inst = sample_instance(ModelParams::new(n, 1.2, 0.8).unwrap(), Seed(seed)).unwrap();
        let analysis = IntersectionAnalysis::new(&inst).unwrap();
        let b = analysis.build_sigma(Seed(builder)).unwrap();
        // compose the class blocks from the largest class code down
        let mut sigma = Permutation::identity(n);
        for class in analysis.census.classes.values().rev() {
            let tree_perm = draw_tree_permutation(class, Seed(builder));
            let block = node_permutation(class, n, &tree_perm).unwrap();
            sigma = block.compose(&sigma).unwrap();
        }
        prop_assert_eq!(sigma, b.sigma);
    }
}

#[test]
fn three_member_class_is_uniform() {
    // three isolated edges and nothing else
    let g = SparseGraph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let part = decompose(&g, 3);
    let census = build_census(&part, &g).unwrap();
    let class = &census.classes["(())"];
    assert_eq!(class.count(), 3);
    let draws = 60_000u64;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for i in 0..draws {
        let p = draw_tree_permutation(class, Seed(5).derive(i));
        *counts.entry(p.images().to_vec()).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let p = 1.0 / 6.0;
    let se = (draws as f64 * p * (1.0 - p)).sqrt();
    for (perm, &c) in &counts {
        assert!((c as f64 - draws as f64 * p).abs() <= 3.0 * se, "{perm:?}: {c}");
    }
}

#[test]
fn identity_family_fixes_every_pair_of_s() {
    // every class has a single member, so every draw is the identity
    let g = SparseGraph::from_edges(10, [(1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9), (9, 6)]).unwrap();
    let part = decompose(&g, 3);
    let census = build_census(&part, &g).unwrap();
    assert!(census.classes.values().all(|c| c.count() == 1));
    let s = EdgePartitionS::from_partition(&part);
    let sigmas: Vec<Permutation> =
        (0..3).map(|i| align_lab::automorphism::build_sigma(&census, &part, Seed(i)).unwrap().sigma).collect();
    let refs: Vec<&Permutation> = sigmas.iter().collect();
    assert_eq!(common_fixed_edges_in_s(&s, &refs[..2]).unwrap(), s.len());
    assert_eq!(common_fixed_edges_in_s(&s, &refs).unwrap(), s.len());
    let all_s = s.iter_in().chain(s.iter_out());
    assert_eq!(common_fixed_edges(all_s, &refs[..2]).unwrap() as u64, s.len());
}

#[test]
fn delta_ignores_two_colored_pairs() {
    let params = ModelParams::new(2000, 2.0, 1.0).unwrap();
    let inst = sample_instance(params, Seed(1)).unwrap();
    let analysis = IntersectionAnalysis::new(&inst).unwrap();
    for i in 0..10 {
        let b = analysis.build_sigma(Seed(i)).unwrap();
        assert_eq!(delta(&b.sigma, &inst, &analysis.s).unwrap(), 0);
    }
}
