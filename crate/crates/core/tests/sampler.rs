use align_lab::model::{sample_instance, Category, ModelParams};
use align_lab::Seed;

fn within_3se(count: usize, total: f64, p: f64) -> bool {
    let se = (total * p * (1.0 - p)).sqrt();
    (count as f64 - total * p).abs() <= 3.0 * se
}

#[test]
fn category_marginals_over_two_million_pairs() {
    let params = ModelParams::new(2000, 50.0, 0.4).unwrap();
    let total = (2000.0 * 1999.0) / 2.0;
    for seed in [1, 2] {
        let inst = sample_instance(params, Seed(seed)).unwrap();
        let c = inst.counts();
        assert!(within_3se(c.two_colored, total, params.p_two_colored()), "T {}", c.two_colored);
        assert!(within_3se(c.blue_only, total, params.p_mono()), "B {}", c.blue_only);
        assert!(within_3se(c.red_only, total, params.p_mono()), "R {}", c.red_only);
        let absent = total as usize - inst.pair_count();
        assert!(within_3se(absent, total, 1.0 - params.p_any()));
    }
}

#[test]
fn pairs_spread_evenly_over_rows() {
    // the lower half of vertices (as first endpoint) owns 3/4 of all pairs
    let params = ModelParams::new(4000, 20.0, 0.5).unwrap();
    let inst = sample_instance(params, Seed(9)).unwrap();
    let total = inst.pair_count();
    let low = inst.pairs().filter(|&(u, _, _)| u < 2000).count();
    let expected = 2000.0 * (2.0 * 4000.0 - 2000.0 - 1.0) / 2.0 / (4000.0 * 3999.0 / 2.0);
    assert!(within_3se(low, total as f64, expected), "{low} of {total}");
}

#[test]
fn projections_and_planted_relabeling() {
    let params = ModelParams::new(500, 3.0, 0.6).unwrap();
    let inst = sample_instance(params, Seed(3)).unwrap();
    let (g, gp, h) = (inst.g(), inst.g_prime(), inst.h());
    let c = inst.counts();
    assert_eq!(g.edge_count(), c.two_colored + c.blue_only);
    assert_eq!(gp.edge_count(), c.two_colored + c.red_only);
    assert_eq!(g.intersect(&gp).unwrap(), inst.intersection());
    assert_eq!(gp.relabel(inst.pi_star()).unwrap(), h);
    for (u, v, cat) in inst.pairs() {
        assert_eq!(g.has_edge(u, v), cat != Category::RedOnly);
        assert_eq!(gp.has_edge(u, v), cat != Category::BlueOnly);
    }
    let union = g.union(&gp).unwrap();
    let sym = g.sym_diff(&gp).unwrap();
    assert_eq!(union.edge_count(), inst.pair_count());
    assert_eq!(union.edge_count(), sym.edge_count() + inst.intersection().edge_count());
}

#[test]
fn sampling_is_a_function_of_the_seed() {
    let params = ModelParams::new(3000, 1.5, 0.7).unwrap();
    let a = sample_instance(params, Seed(77)).unwrap();
    let b = sample_instance(params, Seed(77)).unwrap();
    let c = sample_instance(params, Seed(78)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
