use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crown_core::canon::graph_canonical;
use crown_core::catalog::{builtin_graph, classify_444, CatalogName};
use crown_core::constructions::{admissible_triples, minimal_host, random_linear, random_min_degree};
use crown_core::links::{
    crown_from_quintuple, crown_with_base, find_crown, find_crown_containing, good_quintuples, is_crown, link_graph,
    trim_to_degree_vector,
};
use crown_core::search::random_maximal;
use crown_core::{DegreeVector, LinearThreeGraph, Triple};

fn small_graph() -> impl Strategy<Value = LinearThreeGraph> {
    (3usize..16, any::<u64>()).prop_flat_map(|(n, seed)| {
        let cap = n * (n - 1) / 6;
        (0..=cap).prop_filter_map("packing failed", move |m| random_linear(n, m, seed).ok())
    })
}

fn brute_crown_with_base(h: &LinearThreeGraph, e: &Triple) -> bool {
    let others: Vec<Triple> = h.edges().filter(|f| *f != e).copied().collect();
    let meets_once = |f: &Triple| e.vertices().iter().filter(|&&v| f.contains(v)).count() == 1;
    (0..others.len()).any(|i| {
        (i + 1..others.len()).any(|j| {
            (j + 1..others.len()).any(|k| {
                let js = [others[i], others[j], others[k]];
                js.iter().all(meets_once)
                    && js[0].is_disjoint(&js[1])
                    && js[0].is_disjoint(&js[2])
                    && js[1].is_disjoint(&js[2])
            })
        })
    })
}

/// Grow `h` by random admissible triples, keeping it crown-free.
fn crown_free_extension(h: &LinearThreeGraph, tries: usize, rng: &mut ChaCha8Rng) -> LinearThreeGraph {
    let mut g = h.clone();
    let mut candidates = admissible_triples(&g);
    candidates.shuffle(rng);
    for t in candidates.into_iter().take(tries) {
        if g.check_insertable(&t).is_ok() {
            g.add_edge(t).unwrap();
            if find_crown_containing(&g, &t).is_some() {
                g.remove_edge(&t).unwrap();
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degrees_sum_to_three_times_edges(h in small_graph()) {
        prop_assert_eq!(h.degrees().iter().sum::<usize>(), 3 * h.edge_count());
    }

    #[test]
    fn pair_index_agrees_with_rescan(h in small_graph(), a in 0usize..16, b in 0usize..16, c in 0usize..16) {
        prop_assert!(h.is_linear());
        for t in h.edges() {
            for (u, v) in t.pairs() {
                prop_assert_eq!(h.edge_covering(u, v), Some(*t));
            }
        }
        let n = h.n();
        if let Ok(t) = Triple::new(a % n, b % n, c % n) {
            let free = t.pairs().iter().all(|&(u, v)| h.edges().all(|e| !(e.contains(u) && e.contains(v))));
            prop_assert_eq!(h.check_insertable(&t).is_ok(), free);
        }
    }

    #[test]
    fn canonical_code_ignores_labels(h in small_graph(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..h.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabelled = h.relabel(&perm);
        prop_assert_eq!(graph_canonical(&h).code, graph_canonical(&relabelled).code);
    }

    #[test]
    fn text_format_round_trips(h in small_graph()) {
        let back: LinearThreeGraph = h.serialize().parse().unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn crown_with_base_matches_brute_force(h in small_graph()) {
        for e in h.edges() {
            let found = crown_with_base(&h, e).unwrap();
            prop_assert_eq!(found.is_some(), brute_crown_with_base(&h, e));
            if let Some(c) = found {
                prop_assert!(is_crown(&h, &c.base, &c.jewels));
            }
        }
    }

    /// In a crown-free graph no edge through `x1` of a good quintuple avoids
    /// the host edge and the rest of the quintuple; where one exists, the
    /// constructed crown is genuine.
    #[test]
    fn good_quintuple_edges_force_crowns(n in 9usize..20, seed in any::<u64>(), crown_free in any::<bool>()) {
        let h = if crown_free {
            random_maximal(n, &[], seed)
        } else {
            random_linear(n, n * (n - 1) / 12, seed).unwrap()
        };
        let has_crown = find_crown(&h).is_some();
        for e in h.edges() {
            let g = link_graph(&h, e).unwrap();
            for q in good_quintuples(&g) {
                for f in h.edges_at(q.0[0]) {
                    if let Ok(c) = crown_from_quintuple(&h, e, &q, f) {
                        prop_assert!(has_crown);
                        prop_assert!(is_crown(&h, &c.base, &c.jewels));
                    }
                }
            }
        }
    }

    #[test]
    fn min_degree_four_has_crown(n in 13usize..31, seed in any::<u64>()) {
        if let Some(h) = random_min_degree(n, 4, seed) {
            prop_assert!(h.min_degree().unwrap() >= 4);
            prop_assert!(find_crown(&h).is_some());
        }
    }

    /// Crown-free hosts around an edge of degree vector at least `<4,4,4>`,
    /// trimmed back to `<4,4,4>`, have a link graph among `G1..G5`.
    #[test]
    fn trimmed_links_are_catalogued(which in 0usize..5, extra in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let name = CatalogName::TRIPLE_FOUR[which];
        let (host, e) = minimal_host(&builtin_graph(name).unwrap());
        let wide = crown_free_extension(&host.with_extra_vertices(extra), 40, &mut rng);
        prop_assert!(find_crown(&wide).is_none());
        let target = DegreeVector::new(4, 4, 4);
        let trimmed = trim_to_degree_vector(&wide, &e, target).unwrap();
        prop_assert_eq!(trimmed.degree_vector(&e).unwrap(), target);
        prop_assert!(classify_444(&link_graph(&trimmed, &e).unwrap()).is_some());
    }
}
