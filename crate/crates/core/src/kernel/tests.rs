use super::*;
use crate::syntax::Telescope;

fn a_ty() -> Type {
    Type::base("A")
}

fn sig() -> Signature {
    let mut s = Signature::new();
    s.add_base_type("A");
    s.push(Decl::TypeConst {
        name: "B".into(),
        params: Telescope::from_entries(vec![("x".into(), a_ty())]),
    });
    s.add_term_const("a", a_ty());
    s.add_term_const("b", a_ty());
    s
}

fn ck(s: &Signature) -> Checker<'_> {
    Checker::new(s, CheckerConfig::default())
}

fn b_of(t: Term) -> Type {
    Type::family("B", vec![t])
}

#[test]
fn zero_fuel_rejected() {
    assert_eq!(
        CheckerConfig::new(Mode::Intensional, 0).unwrap_err(),
        KernelError::ZeroFuel
    );
}

#[test]
fn telescopes() {
    let s = sig();
    let k = ck(&s);
    assert!(k.check_telescope(&Telescope::new()).is_ok());
    let ok = Telescope::from_entries(vec![("x".into(), a_ty())]);
    assert!(k.check_telescope(&ok).is_ok());
    let self_ref = Telescope::from_entries(vec![("x".into(), b_of(Term::Var(0)))]);
    let err = k.check_telescope(&self_ref).unwrap_err();
    assert!(matches!(err, KernelError::IllFormedContext { index: 0, .. }));
}

#[test]
fn refl_infers_identity() {
    let s = sig();
    let ctx = Telescope::from_entries(vec![("x".into(), a_ty())]);
    let ty = ck(&s).infer_type(&ctx, &Term::refl(Term::Var(0))).unwrap();
    assert_eq!(ty, Type::id(a_ty(), Term::Var(0), Term::Var(0)));
}

#[test]
fn application_instantiates_codomain() {
    let s = sig();
    let f_ty = Type::pi("x", a_ty(), b_of(Term::Var(0)));
    let ctx = Telescope::from_entries(vec![("f".into(), f_ty), ("a".into(), a_ty())]);
    let ty = ck(&s)
        .infer_type(&ctx, &Term::app(Term::Var(1), Term::Var(0)))
        .unwrap();
    assert_eq!(ty, b_of(Term::Var(0)));
}

#[test]
fn applying_a_non_function() {
    let s = sig();
    let err = ck(&s)
        .infer_type(
            &Telescope::new(),
            &Term::app(Term::constant("a"), Term::constant("b")),
        )
        .unwrap_err();
    assert!(matches!(err, KernelError::NotAFunction { .. }));
    assert!(err.to_string().contains("not a function"));
}

#[test]
fn pair_checks_against_dependent_sigma() {
    let mut s = sig();
    s.add_term_const("y", b_of(Term::constant("a")));
    let sigma = Type::sigma("x", a_ty(), b_of(Term::Var(0)));
    let p = Term::pair(Term::constant("a"), Term::constant("y"));
    assert!(ck(&s).check_type(&Telescope::new(), &p, &sigma).is_ok());
    let bad = Term::pair(Term::constant("b"), Term::constant("y"));
    assert!(ck(&s).check_type(&Telescope::new(), &bad, &sigma).is_err());
}

#[test]
fn identity_function_checks() {
    let s = sig();
    let id = Term::lam("x", a_ty(), Term::Var(0));
    assert!(ck(&s)
        .check_type(&Telescope::new(), &id, &Type::arrow(a_ty(), a_ty()))
        .is_ok());
}

#[test]
fn refl_against_distinct_endpoints() {
    let s = sig();
    let err = ck(&s)
        .check_type(
            &Telescope::new(),
            &Term::refl(Term::constant("a")),
            &Type::id(a_ty(), Term::constant("a"), Term::constant("b")),
        )
        .unwrap_err();
    let KernelError::Mismatch { expected, found } = err else {
        panic!("{err:?}")
    };
    assert_eq!(expected, "Id A a b");
    assert_eq!(found, "Id A a a");
}

#[test]
fn beta_conversion() {
    let s = sig();
    let t = Term::app(Term::lam("x", a_ty(), Term::Var(0)), Term::constant("a"));
    assert_eq!(ck(&s).normalize_term(&t).unwrap(), Term::constant("a"));
}

#[test]
fn sigma_conversion() {
    let s = sig();
    let c = Term::pair(Term::Var(0), Term::Var(1));
    let t = Term::sig_elim(
        ("p", Type::product(a_ty(), a_ty())),
        (["x", "y"], c),
        Term::pair(Term::constant("a"), Term::constant("b")),
    );
    assert_eq!(
        ck(&s).normalize_term(&t).unwrap(),
        Term::pair(Term::constant("b"), Term::constant("a"))
    );
}

#[test]
fn j_conversion() {
    let s = sig();
    let motive = Type::id(a_ty(), Term::Var(1), Term::Var(2));
    let a = Term::constant("a");
    let t = Term::j(
        ["x", "y", "z"],
        motive,
        "x",
        Term::refl(Term::Var(0)),
        a.clone(),
        a.clone(),
        Term::refl(a.clone()),
    );
    assert_eq!(ck(&s).normalize_term(&t).unwrap(), Term::refl(a));
}

#[test]
fn j_checks_all_premises() {
    let s = sig();
    // x y : A, p : Id A x y ⊢ J(...) : Id A y x
    let ctx = Telescope::from_entries(vec![
        ("x".into(), a_ty()),
        ("y".into(), a_ty()),
        ("p".into(), Type::id(a_ty(), Term::Var(1), Term::Var(0))),
    ]);
    let motive = Type::id(a_ty(), Term::Var(1), Term::Var(2));
    let good = Term::j(
        ["u", "v", "w"],
        motive.clone(),
        "u",
        Term::refl(Term::Var(0)),
        Term::Var(2),
        Term::Var(1),
        Term::Var(0),
    );
    let ty = ck(&s).infer_type(&ctx, &good).unwrap();
    assert_eq!(ty, Type::id(a_ty(), Term::Var(1), Term::Var(2)));

    // endpoints swapped
    let swapped = Term::j(
        ["u", "v", "w"],
        motive.clone(),
        "u",
        Term::refl(Term::Var(0)),
        Term::Var(1),
        Term::Var(2),
        Term::Var(0),
    );
    assert!(matches!(
        ck(&s).infer_type(&ctx, &swapped),
        Err(KernelError::EndpointMismatch { .. })
    ));

    // base of the wrong type
    let bad_base = Term::j(
        ["u", "v", "w"],
        motive,
        "u",
        Term::constant("a"),
        Term::Var(2),
        Term::Var(1),
        Term::Var(0),
    );
    assert!(ck(&s).infer_type(&ctx, &bad_base).is_err());

    // path not an identity proof
    let not_path = Term::j(
        ["u", "v", "w"],
        Type::id(a_ty(), Term::Var(1), Term::Var(2)),
        "u",
        Term::refl(Term::Var(0)),
        Term::Var(2),
        Term::Var(1),
        Term::Var(2),
    );
    assert!(matches!(
        ck(&s).infer_type(&ctx, &not_path),
        Err(KernelError::NotAnIdentity { .. })
    ));
}

#[test]
fn sig_elim_scrutinee_must_be_sigma() {
    let s = sig();
    let t = Term::sig_elim(
        ("p", a_ty()),
        (["x", "y"], Term::Var(0)),
        Term::constant("a"),
    );
    assert!(matches!(
        ck(&s).infer_type(&Telescope::new(), &t),
        Err(KernelError::NotASigma { .. })
    ));
}

#[test]
fn family_arity_is_checked() {
    let s = sig();
    let t = Type::family("B", vec![]);
    assert!(matches!(
        ck(&s).check_is_type(&Telescope::new(), &t),
        Err(KernelError::ArityMismatch { .. })
    ));
}

#[test]
fn unknown_constant() {
    let s = sig();
    assert!(matches!(
        ck(&s).infer_type(&Telescope::new(), &Term::constant("nope")),
        Err(KernelError::UnknownConstant(_))
    ));
}

#[test]
fn fuel_exhaustion_is_reported() {
    let mut s = sig();
    // f := λx. x applied a few times; a budget of 1 cannot finish.
    let id = Term::lam("x", a_ty(), Term::Var(0));
    s.add_def("i", Type::arrow(a_ty(), a_ty()), id);
    let t = Term::app(
        Term::constant("i"),
        Term::app(Term::constant("i"), Term::constant("a")),
    );
    let cfg = CheckerConfig::new(Mode::Intensional, 1).unwrap();
    let err = Checker::new(&s, cfg).normalize_term(&t).unwrap_err();
    assert!(err.to_string().contains("step budget exceeded"));
}

#[test]
fn reflection_only_in_extensional_mode() {
    let s = sig();
    let ctx = Telescope::from_entries(vec![(
        "p".into(),
        Type::id(a_ty(), Term::constant("a"), Term::constant("b")),
    )]);
    let goal = Type::id(a_ty(), Term::constant("b"), Term::constant("a"));
    let t = Term::refl(Term::constant("a"));
    assert!(ck(&s).check_type(&ctx, &t, &goal).is_err());
    let ext = Checker::new(&s, CheckerConfig::extensional());
    assert!(ext.check_type(&ctx, &t, &goal).is_ok());
    assert!(ext.def_equal(&ctx, &Term::constant("a"), &Term::constant("b"), &a_ty()));
    assert!(!ck(&s).def_equal(&ctx, &Term::constant("a"), &Term::constant("b"), &a_ty()));
}

#[test]
fn strategies_agree() {
    let s = sig();
    let t = Term::app(
        Term::lam(
            "f",
            Type::arrow(a_ty(), a_ty()),
            Term::app(Term::Var(0), Term::constant("a")),
        ),
        Term::lam("x", a_ty(), Term::Var(0)),
    );
    let n1 = normalize_by_steps(&s, &t, Strategy::Outermost, 100).unwrap();
    let n2 = normalize_by_steps(&s, &t, Strategy::Innermost, 100).unwrap();
    assert_eq!(n1, n2);
    assert_eq!(n1, ck(&s).normalize_term(&t).unwrap());
}
