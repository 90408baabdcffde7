use mltt_core::CheckerConfig;
use mltt_higher::free::{path_word, Evaluator, Path};
use mltt_higher::{compare_free, estimate_cells, parse_globular, small_graphs, FreeConfig, GlobularSet};
use proptest::prelude::*;
use std::rc::Rc;

fn one_edge() -> GlobularSet {
    parse_globular("cell 0 a\ncell 0 b\ncell 1 u src a tgt b").unwrap()
}

#[test]
fn one_edge_is_free_up_to_length_three() {
    let cfg = FreeConfig {
        word_len: 3,
        depth: 4,
        ..FreeConfig::default()
    };
    let r = compare_free("edge", &one_edge(), &cfg).unwrap();
    // 1_a, 1_b, u, u^-1
    assert_eq!(r.words, 4);
    assert!(r.passed(), "{r:?}");
    assert!(r.law_instances > 0);
    assert!(r.to_report().all_pass());
}

#[test]
fn a_loop_hits_every_power() {
    let g = parse_globular("cell 0 a\ncell 1 e src a tgt a").unwrap();
    let cfg = FreeConfig {
        word_len: 3,
        depth: 5,
        ..FreeConfig::default()
    };
    let r = compare_free("loop", &g, &cfg).unwrap();
    assert_eq!(r.words, 7);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn shallow_depth_misses_long_words() {
    let g = parse_globular("cell 0 a\ncell 1 e src a tgt a").unwrap();
    let cfg = FreeConfig {
        word_len: 4,
        depth: 2,
        ..FreeConfig::default()
    };
    let r = compare_free("loop", &g, &cfg).unwrap();
    assert!(!r.surjective());
    assert!(r.missing.contains(&"e.e.e.e".to_string()), "{:?}", r.missing);
    assert!(!r.to_report().all_pass());
}

#[test]
fn the_empty_graph_is_trivially_free() {
    let r = compare_free("empty", &GlobularSet::new(), &FreeConfig::default()).unwrap();
    assert_eq!((r.words, r.terms, r.law_instances), (0, 0, 0));
    assert!(r.passed());
}

#[test]
fn normal_forms_read_back_to_their_words() {
    let g = parse_globular("cell 0 a\ncell 0 b\ncell 1 u src a tgt b\ncell 1 v src b tgt a").unwrap();
    let ev = Evaluator::new(&g, CheckerConfig::default()).unwrap();
    let (u, v) = (Rc::new(Path::Gen(0)), Rc::new(Path::Gen(1)));
    let paths = [
        Path::Comp(u.clone(), v.clone()),
        Path::Inv(Rc::new(Path::Comp(u.clone(), v.clone()))),
        Path::Comp(Rc::new(Path::Refl(0)), u.clone()),
        Path::Comp(u.clone(), Rc::new(Path::Inv(u.clone()))),
        Path::Inv(Rc::new(Path::Inv(v.clone()))),
    ];
    for p in &paths {
        let nf = ev.normalize(&ev.term(p)).unwrap();
        assert_eq!(ev.read_back(&nf), Some(path_word(&g, p)), "{p:?}");
    }
    // c_l(refl a, u) computes to u
    assert_eq!(ev.normalize(&ev.term(&paths[2])).unwrap(), ev.term(&u));
}

#[test]
fn the_estimate_scales_with_the_bounds() {
    let g = one_edge();
    assert_eq!(estimate_cells(&g, 3, 4, 2), 4 * 2 * 4);
    let big = parse_globular("cell 0 a\ncell 1 e src a tgt a\ncell 1 f src a tgt a\ncell 1 h src a tgt a").unwrap();
    assert!(estimate_cells(&big, 40, 6, 2) > 1_000_000_000);
}

#[test]
fn small_graphs_up_to_isomorphism() {
    // graphs on at most one vertex with at most one edge: empty, a, loop
    assert_eq!(small_graphs(1, 1).len(), 3);
    // two vertices, at most one edge: none, a-loop, a->b
    assert_eq!(small_graphs(2, 1).iter().filter(|(_, g)| g.count(0) == 2).count(), 3);
    let all = small_graphs(3, 3);
    let names: std::collections::HashSet<_> = all.iter().map(|(n, _)| n.clone()).collect();
    assert_eq!(names.len(), all.len());
    assert!(all.iter().all(|(_, g)| g.is_graph() && g.count(0) <= 3 && g.count(1) <= 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn small_graphs_pass_at_low_bounds(k in 0usize..1000, seed in any::<u64>()) {
        let all = small_graphs(2, 2);
        let (name, g) = &all[k % all.len()];
        let cfg = FreeConfig { word_len: 2, depth: 3, seed, ..FreeConfig::default() };
        let r = compare_free(name, g, &cfg).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}

/// Counts isomorphism classes by pairwise search over vertex bijections,
/// independently of the canonical forms used by `small_graphs`.
fn isomorphism_classes(max_v: usize, max_e: usize) -> usize {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for k in 0..n {
            out = out.into_iter().flat_map(|p: Vec<usize>| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k);
                q
            })).collect();
        }
        out
    }
    let mut total = 0;
    for n in 0..=max_v {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        // every multiset of edges as a count vector over pairs
        let mut graphs: Vec<Vec<usize>> = vec![vec![0; pairs.len()]];
        for _ in 0..max_e {
            let mut next = graphs.clone();
            for gph in &graphs {
                for i in 0..pairs.len() {
                    let mut h = gph.clone();
                    h[i] += 1;
                    if h.iter().sum::<usize>() <= max_e && !next.contains(&h) {
                        next.push(h);
                    }
                }
            }
            graphs = next;
        }
        let ps = perms(n);
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for gph in graphs {
            let iso = |h: &Vec<usize>| ps.iter().any(|p| pairs.iter().enumerate().all(|(i, &(s, t))| {
                gph[i] == h[pairs.iter().position(|&q| q == (p[s], p[t])).unwrap()]
            }));
            if !reps.iter().any(iso) {
                reps.push(gph);
            }
        }
        total += reps.len();
    }
    total
}

#[test]
fn isomorphism_classes_match_a_brute_force_count() {
    for (v, e) in [(1, 3), (2, 2), (3, 3)] {
        assert_eq!(small_graphs(v, e).len(), isomorphism_classes(v, e), "{v} vertices, {e} edges");
    }
}

fn any_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = GlobularSet> {
    (1..=max_v).prop_flat_map(move |n| proptest::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |es| {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let named: Vec<_> = es.iter().enumerate().map(|(i, &(s, t))| (format!("e{i}"), s, t)).collect();
        GlobularSet::graph(&vs, &named)
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn no_soundness_failures_on_larger_graphs(g in any_graph(4, 5), seed in any::<u64>()) {
        let cfg = FreeConfig { word_len: 3, depth: 5, seed, ..FreeConfig::default() };
        let r = compare_free("random", &g, &cfg).unwrap();
        prop_assert!(r.soundness.is_empty() && r.functoriality.is_empty(), "{:?}", r);
        prop_assert!(r.passed(), "{:?}", r);
    }
}
