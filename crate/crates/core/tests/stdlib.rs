use mltt_core::stdlib::{self, DerivedTerm};
use mltt_core::{check_source, Checker, CheckerConfig, Expr, Signature, Telescope, Term, Type};

fn a() -> Type {
    Type::base("A")
}

fn sig_with_points() -> Signature {
    let mut s = stdlib::base_signature();
    s.add_term_const("a0", a());
    s
}

fn ck(s: &Signature) -> Checker<'_> {
    Checker::new(s, CheckerConfig::default())
}

/// x y z : A, p : Id x y, q : Id y z
fn compose_ctx() -> Telescope {
    stdlib::derive_compose_l(&a()).telescope
}

fn generic_args() -> Vec<Term> {
    (0..5).rev().map(Term::Var).collect()
}

#[test]
fn named_corpus_checks() {
    let corpus = stdlib::standard_corpus();
    assert_eq!(corpus.len(), 12);
    for (name, r) in stdlib::check_corpus(&stdlib::base_signature(), &corpus, CheckerConfig::default())
    {
        assert!(r.is_ok(), "{name}: {r:?}");
    }
}

#[test]
fn inline_corpus_checks() {
    let corpus = stdlib::corpus(&a(), Some("B"), false);
    let s = stdlib::base_signature();
    for d in &corpus {
        d.check(&s, CheckerConfig::default())
            .unwrap_or_else(|e| panic!("{}: {e}", d.name));
    }
}

#[test]
fn corpus_is_uniform_in_the_base_type() {
    // instantiate at an identity type of A
    let s = sig_with_points();
    let at = Type::id(a(), Term::constant("a0"), Term::constant("a0"));
    for d in stdlib::corpus(&at, None, false) {
        d.check(&s, CheckerConfig::default())
            .unwrap_or_else(|e| panic!("{}: {e}", d.name));
    }
}

#[test]
fn standalone_derivations_check() {
    let s = stdlib::base_signature();
    let cfg = CheckerConfig::default();
    let mut all: Vec<DerivedTerm> = vec![
        stdlib::derive_inverse(&a()),
        stdlib::derive_compose_l(&a()),
        stdlib::derive_compose_r(&a()),
        stdlib::derive_filler_e(&a()),
        stdlib::derive_transport(&a(), "B"),
    ];
    all.extend(stdlib::derive_groupoid_laws(&a()));
    assert_eq!(all.len(), 10);
    for d in all {
        d.check(&s, cfg).unwrap_or_else(|e| panic!("{}: {e}", d.name));
    }
}

#[test]
fn inverse_of_refl() {
    let s = sig_with_points();
    let inv = stdlib::derive_inverse(&a());
    let x = Term::constant("a0");
    let t = inv.apply(&[x.clone(), x.clone(), Term::refl(x.clone())]);
    assert_eq!(ck(&s).normalize_term(&t).unwrap(), Term::refl(x));
    // Π x y, Id x y → Id y x is well formed
    assert!(ck(&s)
        .check_is_type(&Telescope::new(), &inv.closed_type())
        .is_ok());
}

#[test]
fn inverse_is_not_definitionally_involutive() {
    let s = stdlib::base_signature();
    let inv = stdlib::derive_inverse(&a());
    let ctx = inv.telescope.clone();
    let (x, y, p) = (Term::Var(2), Term::Var(1), Term::Var(0));
    let twice = inv.apply(&[y.clone(), x.clone(), inv.apply(&[x, y, p.clone()])]);
    let ty = Type::id(a(), Term::Var(2), Term::Var(1));
    assert!(!ck(&s).def_equal(&ctx, &twice, &p, &ty));
}

#[test]
fn composites_compute_on_refl() {
    let s = stdlib::base_signature();
    let cl = stdlib::derive_compose_l(&a());
    let cr = stdlib::derive_compose_r(&a());
    // x z : A, q : Id x z ⊢ c_l(q, refl x) ≡ q
    let ctx = Telescope::from_entries(vec![
        ("x".into(), a()),
        ("z".into(), a()),
        ("q".into(), Type::id(a(), Term::Var(1), Term::Var(0))),
    ]);
    let (x, z, q) = (Term::Var(2), Term::Var(1), Term::Var(0));
    let t = cl.apply(&[x.clone(), x.clone(), z.clone(), Term::refl(x.clone()), q.clone()]);
    let at = Type::id(a(), x.clone(), z.clone());
    assert!(ck(&s).def_equal(&ctx, &t, &q, &at));
    // x y : A, p : Id x y ⊢ c_r(refl y, p) ≡ p
    let (x, y, p) = (Term::Var(2), Term::Var(1), Term::Var(0));
    let t = cr.apply(&[x.clone(), y.clone(), y.clone(), p.clone(), Term::refl(y.clone())]);
    assert!(ck(&s).def_equal(&ctx, &t, &p, &at));
}

#[test]
fn composites_differ_intensionally_but_e_checks() {
    let s = stdlib::base_signature();
    let cl = stdlib::derive_compose_l(&a());
    let cr = stdlib::derive_compose_r(&a());
    let ctx = compose_ctx();
    let args = generic_args();
    let l = cl.apply(&args);
    let r = cr.apply(&args);
    let at = Type::id(a(), Term::Var(4), Term::Var(2));
    assert!(!ck(&s).def_equal(&ctx, &l, &r, &at));

    let e = stdlib::derive_filler_e(&a());
    e.check(&s, CheckerConfig::default()).unwrap();

    // with a hypothesis of e's type in scope, reflection identifies them
    let ext_ctx = ctx.extended("h", e.statement.clone());
    let ext = Checker::new(&s, CheckerConfig::extensional());
    let (l1, r1) = (l.shifted(0, 1), r.shifted(0, 1));
    assert!(ext.def_equal(&ext_ctx, &l1, &r1, &at.shifted(0, 1)));
    assert!(!ck(&s).def_equal(&ext_ctx, &l1, &r1, &at.shifted(0, 1)));
}

#[test]
fn filler_on_refl_is_iterated_refl() {
    let s = sig_with_points();
    let e = stdlib::derive_filler_e(&a());
    let x = Term::constant("a0");
    let r = Term::refl(x.clone());
    let t = e.apply(&[x.clone(), x.clone(), x.clone(), r.clone(), r.clone()]);
    assert_eq!(ck(&s).normalize_term(&t).unwrap(), Term::refl(r));
}

/// Instantiates every variable of a law's telescope at the single point
/// `a0` and every path at `refl a0`.
fn at_refl(d: &DerivedTerm) -> Vec<Term> {
    let x = Term::constant("a0");
    d.telescope
        .entries()
        .iter()
        .map(|(_, t)| match t {
            Type::Id { .. } => Term::refl(x.clone()),
            _ => x.clone(),
        })
        .collect()
}

#[test]
fn laws_at_refl_normalize_to_iterated_refl() {
    let s = sig_with_points();
    let x = Term::constant("a0");
    for law in stdlib::derive_groupoid_laws(&a()) {
        let t = law.apply(&at_refl(&law));
        assert_eq!(
            ck(&s).normalize_term(&t).unwrap(),
            Term::refl(Term::refl(x.clone())),
            "{}",
            law.name
        );
    }
}

#[test]
fn law_endpoints_are_not_definitionally_equal() {
    let s = stdlib::base_signature();
    let mut laws = stdlib::derive_groupoid_laws(&a());
    laws.push(stdlib::derive_filler_e(&a()));
    for law in laws {
        let (l, r) = law.endpoints().expect("identity statement");
        let at = match &law.statement {
            Type::Id { underlying, .. } => (**underlying).clone(),
            _ => unreachable!(),
        };
        let eq = ck(&s).def_equal(&law.telescope, l, r, &at);
        // unit_r is forced by the J conversion rule
        assert_eq!(eq, law.name == "unit_r", "{}", law.name);
    }
}

#[test]
fn assoc_lives_in_a_double_identity_type() {
    let laws = stdlib::derive_groupoid_laws(&a());
    let assoc = laws.iter().find(|d| d.name == "assoc").unwrap();
    let Type::Id { underlying, .. } = &assoc.statement else {
        panic!()
    };
    assert!(matches!(underlying.as_ref(), Type::Id { .. }));
}

#[test]
fn transport_along_refl() {
    let mut s = sig_with_points();
    s.add_term_const("b0", Type::family("B", vec![Term::constant("a0")]));
    let tr = stdlib::derive_transport(&a(), "B");
    let x = Term::constant("a0");
    let t = tr.apply(&[x.clone(), x.clone(), Term::refl(x), Term::constant("b0")]);
    assert_eq!(ck(&s).normalize_term(&t).unwrap(), Term::constant("b0"));
}

#[test]
fn transport_in_a_constant_family() {
    // B' x := A, declared as a family that ignores its argument
    let src = "const A : type\nconst C : A -> type\n";
    let m = check_source(src, CheckerConfig::default()).unwrap();
    let tr = stdlib::derive_transport(&a(), "C");
    tr.check(&m.signature, CheckerConfig::default()).unwrap();
}

#[test]
fn transport_composition_checks() {
    let corpus = stdlib::standard_corpus();
    let names: Vec<&str> = corpus.iter().map(|d| d.name.as_str()).collect();
    assert!(names.contains(&"transport_comp"));
    let results =
        stdlib::check_corpus(&stdlib::base_signature(), &corpus, CheckerConfig::default());
    assert!(results.iter().all(|(_, r)| r.is_ok()));
}

#[test]
fn stdlib_source_checks_and_round_trips() {
    let src = stdlib::stdlib_source();
    let m = check_source(&src, CheckerConfig::default()).expect("parses");
    assert!(m.all_ok(), "{:?}", m.diagnostics());
    assert_eq!(m.reports.len(), 2 + 12);
    // definitions agree with the generated ones
    let generated = stdlib::standard_signature();
    for d in generated.decls() {
        assert_eq!(m.signature.get(d.name()), Some(d), "{}", d.name());
    }
}

#[test]
fn committed_stdlib_file_is_current() {
    let committed = include_str!("../data/stdlib.mltt");
    assert_eq!(committed, stdlib::stdlib_source());
}
