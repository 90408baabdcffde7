use mltt_core::{check_source, CheckerConfig, Term, Type};
use mltt_higher::theory::OPERATIONS;
use mltt_higher::{build_theory, globular_of_type, omega_ops, parse_globular};

fn cfg() -> CheckerConfig {
    CheckerConfig::default()
}

#[test]
fn the_theory_of_a_globular_set_declares_one_term_per_cell() {
    let g = parse_globular("cell 0 a\ncell 0 b\ncell 1 u src a tgt b\ncell 1 v src a tgt b\ncell 2 alpha src u tgt v").unwrap();
    let th = build_theory(&g, cfg()).unwrap();
    assert_eq!(th.base, "X");
    let x = Type::base("X");
    let idx = Type::id(x.clone(), Term::constant("a"), Term::constant("b"));
    assert_eq!(th.cell_types[0], vec![x.clone(), x]);
    assert_eq!(th.cell_types[1], vec![idx.clone(), idx.clone()]);
    assert_eq!(th.cell_types[2], vec![Type::id(idx, Term::constant("u"), Term::constant("v"))]);
    assert_eq!(th.signature.decls().len(), 6);
}

#[test]
fn the_base_type_avoids_cell_names() {
    let g = parse_globular("cell 0 X\ncell 0 X'").unwrap();
    assert_eq!(build_theory(&g, cfg()).unwrap().base, "X''");
}

#[test]
fn the_tower_of_a_single_point() {
    let m = check_source("const X : type\nconst a : X\n", cfg()).unwrap();
    let t = globular_of_type(&m.signature, &Type::base("X"), 2, 50, cfg()).unwrap();
    assert!(!t.partial);
    let a = Term::constant("a");
    assert_eq!(t.terms[0], vec![a.clone()]);
    assert_eq!(t.terms[1], vec![Term::refl(a.clone())]);
    assert_eq!(t.terms[2], vec![Term::refl(Term::refl(a))]);
    assert_eq!(t.cells.check_globularity(), Ok(()));
}

#[test]
fn composing_with_reflexivity_is_deduplicated() {
    let m = check_source("const X : type\nconst a : X\nconst b : X\nconst u : Id X a b\n", cfg()).unwrap();
    let t = globular_of_type(&m.signature, &Type::base("X"), 1, 12, cfg()).unwrap();
    assert!(t.partial, "the closure of a non-trivial edge is infinite");
    let u = Term::constant("u");
    // c_l(refl a, u) reduces to u and is not listed again
    assert_eq!(t.terms[1].iter().filter(|x| **x == u).count(), 1);
    assert!(t.terms[1].contains(&Term::refl(Term::constant("a"))));
    assert_eq!(t.cells.count(1), 12);
    assert_eq!(t.cells.check_globularity(), Ok(()));
}

#[test]
fn an_uninhabited_type_has_an_empty_tower() {
    let m = check_source("const X : type\n", cfg()).unwrap();
    let t = globular_of_type(&m.signature, &Type::base("X"), 3, 10, cfg()).unwrap();
    assert_eq!(t.cells.total(), 0);
    assert!(!t.partial);
}

#[test]
fn operations_on_the_fixture_are_complete() {
    let g = parse_globular(include_str!("fixtures/two_cell.glob")).unwrap();
    let th = build_theory(&g, cfg()).unwrap();
    let table = omega_ops(&th, &g, 2, cfg());
    let failed: Vec<_> = table.instances.iter().filter(|i| i.result.is_err()).map(|i| (i.dim, i.op, i.args.clone())).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert!(table.is_complete(&[1, 2]));
    for op in OPERATIONS {
        assert!(table.count(1, op) > 0 && table.count(2, op) > 0, "{op}");
    }
    // a dimension with no cells is not complete
    assert!(!table.is_complete(&[3]));
}

#[test]
fn a_graph_without_edges_has_no_dimension_one_operations() {
    // identities on a graph with no edges still exist in dimension 1
    let g = parse_globular("cell 0 a").unwrap();
    let th = build_theory(&g, cfg()).unwrap();
    let table = omega_ops(&th, &g, 2, cfg());
    assert_eq!(table.count(1, "identity"), 0, "no 1-cells means no dimension 1");
}
