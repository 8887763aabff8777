mod common;

use glued_grids::bramble::{BrambleLabel, Verdict};
use glued_grids::chipfire::{
    apply_firing_script, divisors_equivalent, exact_gonality, is_winning_divisor, q_reduce, Divisor, FiringScript,
    GonalityConfig,
};
use glued_grids::graph::are_isomorphic;
use glued_grids::hitting::min_hitting_set;
use glued_grids::treewidth::report::{treewidth_bounds_report, Prediction, ReportConfig};
use glued_grids::treewidth::{
    decomposition_from_elimination_order, exact_treewidth, minor_min_width, validate_tree_decomposition, MethodChoice,
    SolverConfig, Validation,
};
use glued_grids::{FamilyKind, Graph, VertexSet};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;

fn tw_with(g: &Graph, method: MethodChoice) -> usize {
    let config = SolverConfig {
        method,
        ..SolverConfig::default()
    };
    exact_treewidth(g, &config).unwrap().treewidth
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..=7, 0.0f64..0.8, any::<u64>())
        .prop_map(|(n, p, seed)| random_connected_graph(&mut StdRng::seed_from_u64(seed), n, p))
}

fn tiny_graph() -> impl Strategy<Value = Graph> {
    (2usize..=5, 0.0f64..0.6, any::<u64>())
        .prop_map(|(n, p, seed)| random_connected_graph(&mut StdRng::seed_from_u64(seed), n, p))
}

fn graph_and_divisor(max_chip: i64) -> impl Strategy<Value = (Graph, Divisor)> {
    small_graph().prop_flat_map(move |g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(-max_chip..=max_chip, n).prop_map(Divisor))
    })
}

#[test]
fn product_counts() {
    for m in 2..=6 {
        for n in 2..=5 {
            let grid = Graph::grid(m, n).unwrap();
            assert_eq!(grid.vertex_count(), m * n);
            assert_eq!(grid.edge_count(), m * (n - 1) + n * (m - 1));
            if m >= 3 {
                let prism = Graph::stacked_prism(m, n).unwrap();
                assert_eq!(prism.edge_count(), m * (n - 1) + n * m);
            }
            if m >= 3 && n >= 3 {
                assert_eq!(Graph::toroidal_grid(m, n).unwrap().edge_count(), 2 * m * n);
            }
        }
    }
}

#[test]
fn families_are_cartesian_products() {
    for (m, n) in [(3, 3), (4, 2), (5, 4)] {
        let cases = [
            (Graph::grid(m, n).unwrap(), Graph::path(m).unwrap(), Graph::path(n).unwrap()),
            (Graph::stacked_prism(m, n).unwrap(), Graph::cycle(m).unwrap(), Graph::path(n).unwrap()),
        ];
        for (family, a, b) in cases {
            let product = Graph::cartesian_product(&a, &b).unwrap();
            assert!(family.edges().eq(product.edges()), "{}", family.label());
        }
    }
    let torus = Graph::toroidal_grid(4, 3).unwrap();
    let product = Graph::cartesian_product(&Graph::cycle(4).unwrap(), &Graph::cycle(3).unwrap()).unwrap();
    assert!(torus.edges().eq(product.edges()));
}

#[test]
fn row_collapse_gives_the_smaller_prism() {
    for m in 4..=7 {
        for n in 2..=4 {
            let y = Graph::stacked_prism(m, n).unwrap();
            let smaller = Graph::stacked_prism(m - 1, n).unwrap();
            for row in [0, m / 2, m - 1] {
                let minor = y.row_collapse_minor(row).unwrap();
                assert!(are_isomorphic(&minor, &smaller), "Y{m},{n} row {row}");
            }
        }
    }
}

#[test]
fn treewidth_is_invariant_under_relabeling() {
    let mut rng = StdRng::seed_from_u64(11);
    for (g, tw) in [
        (Graph::grid(3, 3).unwrap(), 3),
        (Graph::stacked_prism(4, 2).unwrap(), 3),
        (Graph::toroidal_grid(4, 3).unwrap(), 5),
        (Graph::stacked_prism(5, 3).unwrap(), 5),
    ] {
        for _ in 0..3 {
            let perm = random_permutation(&mut rng, g.vertex_count());
            let h = g.relabel(&perm).unwrap();
            assert_eq!(tw_with(&h, MethodChoice::Dp), tw, "{}", g.label());
            assert_eq!(tw_with(&h, MethodChoice::Bb), tw, "{}", g.label());
        }
    }
}

#[test]
fn seymour_thomas_equality_on_generated_brambles() {
    let cases = [
        (FamilyKind::Grid, 3, 3, BrambleLabel::GridB),
        (FamilyKind::StackedPrism, 7, 3, BrambleLabel::PrismB1),
        (FamilyKind::StackedPrism, 5, 3, BrambleLabel::PrismB2),
        (FamilyKind::ToroidalGrid, 4, 3, BrambleLabel::TorusFg),
        (FamilyKind::ToroidalGrid, 5, 3, BrambleLabel::TorusCde),
    ];
    let mut failures = Vec::new();
    for (kind, m, n, label) in cases {
        let g = Graph::family(kind, m, n).unwrap();
        let b = label.generate(&g).unwrap();
        let order = min_hitting_set(&b, None).unwrap().order;
        let bound = match b.classify().unwrap().verdict {
            Verdict::StrictBramble => order,
            Verdict::Bramble => order - 1,
            Verdict::NotBramble => panic!("{} is not a bramble", label.name()),
        };
        let tw = tw_with(&g, MethodChoice::Auto);
        assert!(bound <= tw, "{} on {}", label.name(), g.label());
        if bound != tw {
            failures.push(format!("{} on {}: bound {bound}, tw {tw}", label.name(), g.label()));
        }
    }
    assert!(failures.is_empty(), "bramble bound below treewidth: {failures:?}");
}

#[test]
fn minor_monotonicity_on_row_collapse() {
    for n in 2..=3 {
        let y = Graph::stacked_prism(2 * n, n).unwrap();
        let minor = y.row_collapse_minor(0).unwrap();
        let minor_tw = tw_with(&minor, MethodChoice::Auto);
        assert_eq!(minor_tw, 2 * n - 1);
        assert!(minor_tw <= tw_with(&y, MethodChoice::Auto));
    }
}

#[test]
fn report_examples() {
    let config = ReportConfig::default();
    let y73 = treewidth_bounds_report(&Graph::stacked_prism(7, 3).unwrap(), &config).unwrap();
    assert_eq!(y73.prediction, Prediction::Value { value: 6 });
    assert_eq!(y73.solver.unwrap().treewidth, 6);
    assert_eq!(y73.bramble.unwrap().lower_bound, Some(6));

    let t63 = treewidth_bounds_report(&Graph::toroidal_grid(6, 3).unwrap(), &config).unwrap();
    assert_eq!(t63.prediction, Prediction::Value { value: 6 });
    assert_eq!(t63.solver.unwrap().treewidth, 6);

    let y42 = treewidth_bounds_report(&Graph::stacked_prism(4, 2).unwrap(), &config).unwrap();
    assert_eq!(y42.prediction, Prediction::Interval { low: 3, high: 4 });
    assert!(y42.open_question.is_some());
    assert_eq!(y42.solver.unwrap().treewidth, 3);
}

#[test]
fn gonality_sandwich_on_y42() {
    let g = Graph::stacked_prism(4, 2).unwrap();
    let tw = tw_with(&g, MethodChoice::Auto);
    let gon = exact_gonality(&g, &GonalityConfig::default()).unwrap().gonality.unwrap();
    assert_eq!((tw, gon), (3, 4));
    assert!(tw <= gon && gon <= g.vertex_count() / 2);
}

#[test]
fn generated_brambles_have_minimal_witnesses() {
    let cases = [
        (FamilyKind::Grid, 3, 4, BrambleLabel::GridB),
        (FamilyKind::StackedPrism, 7, 2, BrambleLabel::PrismB1),
        (FamilyKind::StackedPrism, 5, 3, BrambleLabel::PrismB2),
        (FamilyKind::ToroidalGrid, 4, 3, BrambleLabel::TorusFg),
    ];
    for (kind, m, n, label) in cases {
        let g = Graph::family(kind, m, n).unwrap();
        let b = label.generate(&g).unwrap();
        let mut seen = std::collections::HashSet::new();
        assert!(b.elements().iter().all(|e| seen.insert(e.to_vec())), "duplicate element");
        let cert = min_hitting_set(&b, None).unwrap();
        assert!(b.is_hit_by(&cert.witness));
        for v in cert.witness.iter() {
            let mut smaller = cert.witness.clone();
            smaller.remove(v);
            assert!(!b.is_hit_by(&smaller), "{} witness is not minimal", label.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_solvers_agree_with_brute_force(g in small_graph()) {
        let brute = brute_treewidth(&g);
        prop_assert_eq!(tw_with(&g, MethodChoice::Dp), brute);
        prop_assert_eq!(tw_with(&g, MethodChoice::Bb), brute);
        prop_assert!(minor_min_width(&g).unwrap() <= brute);
    }

    #[test]
    fn elimination_orders_give_valid_decompositions(g in small_graph(), seed in any::<u64>()) {
        let order = random_permutation(&mut StdRng::seed_from_u64(seed), g.vertex_count());
        let td = decomposition_from_elimination_order(&g, &order).unwrap();
        let width = brute_elimination_width(&g, &order);
        prop_assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), Validation::Valid { width });
    }

    #[test]
    fn firing_preserves_degree((g, d) in graph_and_divisor(3), s in prop::collection::vec(-4i64..=4, 7)) {
        let script = FiringScript(s[..g.vertex_count()].to_vec());
        let fired = apply_firing_script(&g, &d, &script).unwrap();
        prop_assert_eq!(fired.degree(), d.degree());
        prop_assert_eq!(fired.0, fire_brute(&g, &d.0, &script.0));
    }

    #[test]
    fn q_reduce_is_idempotent_and_reduced((g, d) in graph_and_divisor(3), q in 0usize..7) {
        let q = q % g.vertex_count();
        let once = q_reduce(&g, &d, q).unwrap();
        prop_assert!(is_reduced_brute(&g, &once.reduced.0, q));
        prop_assert_eq!(fire_brute(&g, &d.0, &once.script.0), once.reduced.0.clone());
        prop_assert_eq!(once.script.0.iter().min().copied(), Some(0));
        let twice = q_reduce(&g, &once.reduced, q).unwrap();
        prop_assert_eq!(twice.reduced, once.reduced);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(
        (g, d) in graph_and_divisor(3),
        s1 in prop::collection::vec(-3i64..=3, 7),
        s2 in prop::collection::vec(-3i64..=3, 7),
    ) {
        let n = g.vertex_count();
        let e = Divisor(fire_brute(&g, &d.0, &s1[..n]));
        let f = Divisor(fire_brute(&g, &e.0, &s2[..n]));
        prop_assert!(divisors_equivalent(&g, &d, &d).unwrap().is_some());
        for (a, b) in [(&d, &e), (&e, &d), (&e, &f), (&d, &f)] {
            let script = divisors_equivalent(&g, a, b).unwrap();
            prop_assert!(script.is_some());
            prop_assert_eq!(fire_brute(&g, &a.0, &script.unwrap().0), b.0.clone());
        }
        let mut heavier = d.clone();
        heavier.0[0] += 1;
        prop_assert!(divisors_equivalent(&g, &d, &heavier).unwrap().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn winning_check_matches_script_search(g in tiny_graph(), placement in prop::collection::vec(0usize..5, 1..=3)) {
        let n = g.vertex_count();
        let placement: Vec<usize> = placement.into_iter().map(|v| v % n).collect();
        let d = Divisor::from_placement(n, &placement);
        let check = is_winning_divisor(&g, &d).unwrap();
        let brute = (0..n).all(|v| {
            let mut e = d.0.clone();
            e[v] -= 1;
            effective_in_script_box(&g, &e, 4)
        });
        prop_assert_eq!(check.wins, brute);
        if let Some(v) = check.failing_vertex {
            let mut e = d.0.clone();
            e[v] -= 1;
            prop_assert!(!effective_in_script_box(&g, &e, 4));
        }
    }

    #[test]
    fn random_brambles_match_subset_enumeration(n in 3usize..=10, p in 0.1f64..0.5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, p);
        let elements = random_bramble(&mut rng, &g, 30);
        let masks: Vec<u64> = elements.iter().map(|e| e.to_mask().unwrap()).collect();
        let b = glued_grids::bramble::Bramble::new(g, elements, BrambleLabel::Custom).unwrap();
        let cert = min_hitting_set(&b, None).unwrap();
        let (order, witness) = brute_min_hitting_set(n, &masks);
        prop_assert_eq!(cert.order, order);
        prop_assert_eq!(cert.witness, VertexSet::from_vertices(n, witness));
    }
}
