use mltt_higher::{parse_globular, GlobularError, GlobularSet};
use proptest::prelude::*;

#[test]
fn a_graph_parses() {
    let g = parse_globular(include_str!("fixtures/loop.glob")).unwrap();
    assert!(g.is_graph());
    assert_eq!((g.count(0), g.count(1), g.max_dim()), (1, 1, Some(1)));
    assert_eq!((g.src(1, 0), g.tgt(1, 0)), (0, 0));
}

#[test]
fn parallel_edges_carry_a_two_cell() {
    let g = parse_globular(include_str!("fixtures/two_cell.glob")).unwrap();
    assert!(!g.is_graph());
    assert_eq!([g.count(0), g.count(1), g.count(2)], [3, 3, 1]);
    assert_eq!(g.find("alpha"), Some((2, 0)));
    assert_eq!((g.src(2, 0), g.tgt(2, 0)), (0, 1));
    assert_eq!(parse_globular(&g.to_text()).unwrap(), g);
}

#[test]
fn a_two_cell_between_non_parallel_edges_is_rejected() {
    let e = parse_globular(include_str!("fixtures/not_globular.glob")).unwrap_err();
    assert_eq!(
        e,
        GlobularError::NotGlobular {
            cell: "beta".into(),
            src: "f".into(),
            tgt: "h".into()
        }
    );
}

#[test]
fn malformed_files_are_rejected() {
    assert!(matches!(parse_globular("cell 0 a\ncell x b"), Err(GlobularError::Syntax { line: 2, .. })));
    assert_eq!(
        parse_globular("cell 0 a\ncell 0 a"),
        Err(GlobularError::Duplicate("a".into()))
    );
    assert!(matches!(parse_globular("cell 1 f src a tgt a"), Err(GlobularError::Unknown { .. })));
    assert!(matches!(parse_globular("cell 0 a\ncell 2 f src a tgt a"), Err(GlobularError::Dimension { .. })));
    assert_eq!(parse_globular("cell 1 f"), Err(GlobularError::MissingBoundary("f".into())));
    assert_eq!(parse_globular(""), Ok(GlobularSet::new()));
}

/// Random cell lists where boundaries are drawn from the previous dimension;
/// whatever validates satisfies the globular identities.
fn raw_text() -> impl Strategy<Value = String> {
    (1usize..4, proptest::collection::vec((0usize..4, 0usize..4), 0..5), proptest::collection::vec((0usize..5, 0usize..5), 0..4)).prop_map(
        |(n, edges, twos)| {
            let mut s = String::new();
            for i in 0..n {
                s.push_str(&format!("cell 0 v{i}\n"));
            }
            for (i, (a, b)) in edges.iter().enumerate() {
                s.push_str(&format!("cell 1 e{i} src v{} tgt v{}\n", a % n, b % n));
            }
            if !edges.is_empty() {
                for (i, (a, b)) in twos.iter().enumerate() {
                    s.push_str(&format!("cell 2 t{i} src e{} tgt e{}\n", a % edges.len(), b % edges.len()));
                }
            }
            s
        },
    )
}

proptest! {
    #[test]
    fn validated_sets_are_globular(text in raw_text()) {
        match parse_globular(&text) {
            Ok(g) => {
                for i in 0..g.count(2) {
                    let (s, t) = (g.src(2, i), g.tgt(2, i));
                    prop_assert_eq!(g.src(1, s), g.src(1, t));
                    prop_assert_eq!(g.tgt(1, s), g.tgt(1, t));
                }
                prop_assert_eq!(parse_globular(&g.to_text()).unwrap(), g);
            }
            Err(e) => prop_assert!(matches!(e, GlobularError::NotGlobular { .. }), "{e}"),
        }
    }
}
