mod common;

use common::*;
use locochrome::battery::random_digraph;
use locochrome::coloring::directed_locality;
use locochrome::exact::{chromatic, directed_local_chromatic, local_chromatic};
use locochrome::fractional::{fractional_chromatic, fractional_chromatic_with, psi_d_star, LpMethod};
use locochrome::independent::{enumerate_independent_sets, max_independent_set};
use locochrome::sampler::{Gamma, Sampler};
use locochrome::universal::{counterexample_graph, mask_of, shadow, universal_undirected, universal_vertices, SetFamily};
use locochrome::{Budget, Coloring, Graph, MultiColoring, OutMode, PartialOrientation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| graph_from_mask(n, &bits))
    })
}

/// Graph plus a per-edge choice: 0 free, 1 forward, 2 backward, 3 both.
fn small_partial(max_n: usize) -> impl Strategy<Value = PartialOrientation> {
    small_graph(max_n).prop_flat_map(|g| {
        let m = g.edge_count();
        proptest::collection::vec(0u8..4, m).prop_map(move |choice| {
            let mut d = PartialOrientation::unoriented(g.clone());
            for ((u, v), c) in g.edges().into_iter().zip(choice) {
                if c & 1 == 1 {
                    d.force(u, v).unwrap();
                }
                if c & 2 == 2 {
                    d.force(v, u).unwrap();
                }
            }
            d
        })
    })
}

fn random_orientation(g: &Graph, seed: u64) -> PartialOrientation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = PartialOrientation::unoriented(g.clone());
    for (u, v) in g.edges() {
        if rng.gen_bool(0.5) {
            d.force(u, v).unwrap();
        } else {
            d.force(v, u).unwrap();
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_independent_set_matches_enumeration(g in small_graph(10)) {
        let (a, witness) = max_independent_set(&g);
        prop_assert_eq!(a, alpha(&g));
        prop_assert_eq!(witness.len(), a);
        let all = enumerate_independent_sets(&g, false, 1 << 12).unwrap();
        prop_assert_eq!(all.len(), independent_masks(&g).len());
        prop_assert_eq!(all.iter().map(|s| s.len()).max().unwrap_or(0), a);
    }

    #[test]
    fn independence_is_clique_number_of_complement(g in small_graph(12)) {
        prop_assert_eq!(max_independent_set(&g).0, max_clique(&g.complement()));
    }

    #[test]
    fn pessimistic_contains_exact(d in small_partial(7)) {
        for v in 0..d.n() {
            let pess = d.out_neighborhood(v, OutMode::Pessimistic).unwrap();
            if let Ok(exact) = d.out_neighborhood(v, OutMode::Exact) {
                prop_assert!(exact.is_subset(&pess));
                prop_assert_eq!(exact, pess);
            }
        }
    }

    #[test]
    fn shadows_are_monotone(members in proptest::collection::btree_set(0usize..56, 0..20), extra in proptest::collection::btree_set(0usize..56, 0..10)) {
        let triples: Vec<u32> = locochrome::universal::subsets_of_size(8, 3);
        let small = SetFamily::new(8, 3, members.iter().map(|&i| triples[i])).unwrap();
        let big = SetFamily::new(8, 3, members.union(&extra).map(|&i| triples[i])).unwrap();
        for r in 1..=3 {
            prop_assert!(shadow(&small, r).unwrap().is_subfamily(&shadow(&big, r).unwrap()));
        }
    }

    #[test]
    fn local_chromatic_matches_oracle_and_chi(g in small_graph(6)) {
        let psi_value = local_chromatic(&g, &mut Budget::unlimited()).value().unwrap();
        let chi_value = chromatic(&g, &mut Budget::unlimited()).value().unwrap();
        prop_assert_eq!(psi_value, psi(&g));
        prop_assert_eq!(chi_value, chi(&g));
        prop_assert!(psi_value <= chi_value);
    }

    #[test]
    fn directed_local_at_most_local(g in small_graph(6), seed in any::<u64>()) {
        let d = random_orientation(&g, seed);
        let value = directed_local_chromatic(&d, &mut Budget::unlimited()).unwrap().value().unwrap();
        prop_assert_eq!(value, psi_d(&d));
        prop_assert!(value <= psi(&g));
    }

    #[test]
    fn fractional_strong_duality(g in small_graph(8)) {
        let fc = fractional_chromatic(&g).unwrap();
        let weights: Vec<_> = fc.primal.support().map(|(s, w)| (s.clone(), w.clone())).collect();
        prop_assert!(certifies_chi_star(&g, &weights, &fc.dual.weights, &fc.value));
        prop_assert_eq!(&fc.value, &chi_star_all_sets(&g));
    }

    #[test]
    fn lp_methods_agree(g in small_graph(8), seed in any::<u64>()) {
        let a = fractional_chromatic_with(&g, LpMethod::Enumerate).unwrap().value;
        let b = fractional_chromatic_with(&g, LpMethod::ColumnGeneration).unwrap().value;
        prop_assert_eq!(a, b);
        let d = random_orientation(&g, seed);
        let a = psi_d_star(&d, LpMethod::Enumerate).unwrap().value;
        let b = psi_d_star(&d, LpMethod::ColumnGeneration).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bidirected_psi_d_star_is_chi_star(g in small_graph(7)) {
        let d = PartialOrientation::bidirected(&g);
        prop_assert_eq!(psi_d_star(&d, LpMethod::Auto).unwrap().value, fractional_chromatic(&g).unwrap().value);
    }
}

#[test]
fn gap_certificates_hold_on_random_completions() {
    let gap = counterexample_graph();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (partial, coloring) in gap.certificates() {
        for _ in 0..200 {
            let mut d = partial.clone();
            for (u, v) in d.free_edges() {
                if rng.gen_bool(0.5) {
                    d.force(u, v).unwrap();
                } else {
                    d.force(v, u).unwrap();
                }
            }
            assert!(directed_locality(&d, &coloring, OutMode::Exact).unwrap().max <= 3);
        }
    }
}

#[test]
fn palette_permutations_are_automorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (m, k) in [(4, 3), (5, 3)] {
        let g = universal_undirected(m, k).unwrap();
        let vertices = universal_vertices(m, k).unwrap();
        for _ in 0..20 {
            let mut perm: Vec<u32> = (1..=m as u32).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let image = |&(x, a): &(u32, u32)| -> usize {
                let px = perm[x as usize - 1];
                let pa: Vec<u32> = locochrome::universal::mask_elements(a).iter().map(|&c| perm[c as usize - 1]).collect();
                vertices.iter().position(|&(y, b)| y == px && b == mask_of(&pa)).unwrap()
            };
            let map: Vec<usize> = vertices.iter().map(image).collect();
            for u in 0..g.n() {
                for v in 0..g.n() {
                    assert_eq!(g.has_edge(u, v), g.has_edge(map[u], map[v]));
                }
            }
        }
    }
}

#[test]
fn sampled_sets_are_independent() {
    for i in 0..20 {
        let d = random_digraph(9, 0.3, 99, i);
        let c = Coloring::new((1..=d.n() as u32).collect());
        let mc = MultiColoring::from_coloring(&c, d.n(), d.n()).unwrap();
        let s = Sampler::new(&d, &mc, &Gamma::exact(locochrome::rational::rat(1, 2)).unwrap()).unwrap();
        for t in 0..500 {
            let set = s.sample(1, t);
            assert!(locochrome::independent::is_independent(d.base(), &set));
        }
    }
}
