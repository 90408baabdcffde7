//! Randomized properties of substitution, normalization and printing.

use mltt_core::kernel::{normalize_by_steps, step_term, Strategy as Reduction};
use mltt_core::surface::{self, resolve::resolve_with, Item};
use mltt_core::{Checker, CheckerConfig, Expr, Signature, Telescope, Term, Type};
use proptest::prelude::*;

fn a() -> Type {
    Type::base("A")
}

// -- raw (possibly ill-typed, possibly open) expressions ---------------------

fn arb_raw_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..5).prop_map(Term::Var),
        Just(Term::constant("a")),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        let ty = inner
            .clone()
            .prop_map(|t| Type::id(a(), t.clone(), t))
            .boxed();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, x)| Term::app(f, x)),
            (ty.clone(), inner.clone()).prop_map(|(d, b)| Term::lam("x", d, b)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::pair(x, y)),
            inner.clone().prop_map(Term::refl),
            (ty.clone(), inner.clone(), inner.clone())
                .prop_map(|(m, c, s)| Term::sig_elim(("p", m), (["x", "y"], c), s)),
            (ty, inner.clone(), inner.clone(), inner.clone(), inner).prop_map(
                |(m, d, l, r, p)| Term::j(["x", "y", "z"], m, "x", d, l.clone(), r, p)
            ),
        ]
    })
}

fn is_closed(t: &Term) -> bool {
    // a term is closed iff shifting at cutoff 0 is a no-op for any amount
    t.shifted(0, 7) == *t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn shift_then_subst_cancels(e in arb_raw_term(), t in arb_raw_term()) {
        prop_assert_eq!(e.shifted(0, 1).subst(0, &t), e);
    }

    #[test]
    fn substitution_lemma(e in arb_raw_term(), s in arb_raw_term(), t in arb_raw_term()) {
        let lhs = e.subst(0, &s).subst(0, &t);
        let rhs = e.subst(1, &t.shifted(0, 1)).subst(0, &s.subst(0, &t));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closed_terms_are_fixed_points(e in arb_raw_term(), t in arb_raw_term()) {
        if is_closed(&e) {
            prop_assert_eq!(e.subst(0, &t), e.clone());
            prop_assert_eq!(e.shift(0, -1).unwrap(), e);
        }
    }

    #[test]
    fn shift_down_undoes_shift_up(e in arb_raw_term(), c in 0usize..3, k in 0usize..3) {
        prop_assert_eq!(e.shifted(c, k).shift(c, -(k as isize)).unwrap(), e);
    }
}

// -- well-typed terms of type A ---------------------------------------------

/// `A`, `a b : A`, `g : A → A`, `s : A × A`, `p : Id A a b`,
/// `i := λx. x`.
fn signature() -> Signature {
    let mut s = Signature::new();
    s.add_base_type("A");
    s.add_term_const("a", a());
    s.add_term_const("b", a());
    s.add_term_const("g", Type::arrow(a(), a()));
    s.add_term_const("s", Type::product(a(), a()));
    s.add_term_const("p", Type::id(a(), Term::constant("a"), Term::constant("b")));
    s.add_def("i", Type::arrow(a(), a()), Term::lam("x", a(), Term::Var(0)));
    s
}

/// Builds a term of type `A` from a stream of choices. `depth` is the
/// number of enclosing binders, all of type `A`.
struct Gen<'c> {
    choices: &'c [u8],
    pos: usize,
    names: &'c [&'c str],
}

impl Gen<'_> {
    fn next(&mut self, n: u8) -> u8 {
        let c = self.choices.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        c % n
    }

    fn name(&mut self) -> String {
        let k = self.next(self.names.len() as u8) as usize;
        self.names[k].to_owned()
    }

    fn term(&mut self, depth: usize, fuel: usize) -> Term {
        let pick = if fuel == 0 { self.next(2) } else { self.next(10) };
        match pick {
            0 => Term::constant(if self.next(2) == 0 { "a" } else { "b" }),
            1 if depth > 0 => Term::Var(self.next(depth as u8) as usize),
            1 => Term::constant("a"),
            2 => Term::app(Term::constant("g"), self.term(depth, fuel - 1)),
            3 => {
                let n = self.name();
                let body = self.term(depth + 1, fuel - 1);
                Term::app(Term::lam(&n, a(), body), self.term(depth, fuel - 1))
            }
            4 => {
                let (x, y) = (self.name(), self.name());
                let body = self.term(depth + 2, fuel - 1);
                let pair = Term::pair(self.term(depth, fuel - 1), self.term(depth, fuel - 1));
                Term::sig_elim(("_", a()), ([&x, &y], body), pair)
            }
            5 => {
                let w = self.name();
                let body = self.term(depth + 1, fuel - 1);
                let t = self.term(depth, fuel - 1);
                Term::j(
                    ["x", "y", "z"],
                    a(),
                    &w,
                    body,
                    t.clone(),
                    t.clone(),
                    Term::refl(t),
                )
            }
            6 => Term::app(Term::constant("i"), self.term(depth, fuel - 1)),
            7 => {
                let (x, y) = (self.name(), self.name());
                let body = self.term(depth + 2, fuel - 1);
                Term::sig_elim(("_", a()), ([&x, &y], body), Term::constant("s"))
            }
            8 => {
                let w = self.name();
                let body = self.term(depth + 1, fuel - 1);
                Term::j(
                    ["x", "y", "z"],
                    a(),
                    &w,
                    body,
                    Term::constant("a"),
                    Term::constant("b"),
                    Term::constant("p"),
                )
            }
            _ => {
                // a λ in function position of a variable-free application
                let n = self.name();
                let f = Term::lam(&n, a(), self.term(depth + 1, fuel - 1));
                Term::app(f, Term::app(Term::constant("g"), self.term(depth, fuel - 1)))
            }
        }
    }
}

fn closed_term(choices: &[u8]) -> Term {
    Gen {
        choices,
        pos: 0,
        names: &["x", "y", "a", "_"],
    }
    .term(0, 5)
}

fn arb_typed() -> impl Strategy<Value = Term> {
    prop::collection::vec(any::<u8>(), 0..64).prop_map(|c| closed_term(&c))
}

fn ck(s: &Signature) -> Checker<'_> {
    Checker::new(s, CheckerConfig::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_terms_are_well_typed(t in arb_typed()) {
        let s = signature();
        prop_assert!(ck(&s).check_type(&Telescope::new(), &t, &a()).is_ok());
    }

    #[test]
    fn reduction_order_does_not_matter(t in arb_typed()) {
        let s = signature();
        let outer = normalize_by_steps(&s, &t, Reduction::Outermost, 100_000).unwrap();
        let inner = normalize_by_steps(&s, &t, Reduction::Innermost, 100_000).unwrap();
        let big = ck(&s).normalize_term(&t).unwrap();
        prop_assert_eq!(&outer, &inner);
        prop_assert_eq!(&outer, &big);
        prop_assert!(step_term(&s, &big, Reduction::Outermost).is_none());
    }

    #[test]
    fn subject_reduction(t in arb_typed()) {
        let s = signature();
        let k = ck(&s);
        let nf = k.normalize_term(&t).unwrap();
        prop_assert!(k.check_type(&Telescope::new(), &nf, &a()).is_ok());
        // every intermediate step too
        let mut cur = t;
        for _ in 0..20 {
            let Some(next) = step_term(&s, &cur, Reduction::Outermost) else { break };
            prop_assert!(k.check_type(&Telescope::new(), &next, &a()).is_ok());
            cur = next;
        }
    }

    #[test]
    fn conversion_rules_hold_as_def_equal(
        body in prop::collection::vec(any::<u8>(), 0..32),
        x in arb_typed(),
        y in arb_typed(),
    ) {
        let s = signature();
        let k = ck(&s);
        let empty = Telescope::new();
        let mut g = Gen { choices: &body, pos: 0, names: &["x", "y"] };
        let b1 = g.term(1, 3);
        let mut g = Gen { choices: &body, pos: 0, names: &["x", "y"] };
        let b2 = g.term(2, 3);
        // Π
        let redex = Term::app(Term::lam("x", a(), b1.clone()), x.clone());
        prop_assert!(k.def_equal(&empty, &redex, &b1.subst(0, &x), &a()));
        // Σ
        let redex = Term::sig_elim(("_", a()), (["x", "y"], b2.clone()), Term::pair(x.clone(), y.clone()));
        prop_assert!(k.def_equal(&empty, &redex, &b2.instantiate(&[x.clone(), y]), &a()));
        // Id
        let redex = Term::j(["u", "v", "w"], a(), "u", b1.clone(), x.clone(), x.clone(), Term::refl(x.clone()));
        prop_assert!(k.def_equal(&empty, &redex, &b1.subst(0, &x), &a()));
    }

    #[test]
    fn def_equal_is_an_equivalence(t in arb_typed(), u in arb_typed()) {
        let s = signature();
        let k = ck(&s);
        let e = Telescope::new();
        let step = step_term(&s, &t, Reduction::Innermost).unwrap_or_else(|| t.clone());
        let nf = k.normalize_term(&t).unwrap();
        prop_assert!(k.def_equal(&e, &t, &t, &a()));
        prop_assert!(k.def_equal(&e, &t, &step, &a()));
        prop_assert!(k.def_equal(&e, &step, &t, &a()));
        prop_assert!(k.def_equal(&e, &step, &nf, &a()));
        prop_assert!(k.def_equal(&e, &t, &nf, &a()));
        prop_assert_eq!(k.def_equal(&e, &t, &u, &a()), k.def_equal(&e, &u, &t, &a()));
        // congruence under g
        let gt = Term::app(Term::constant("g"), t.clone());
        let gs = Term::app(Term::constant("g"), step);
        prop_assert!(k.def_equal(&e, &gt, &gs, &a()));
    }

    #[test]
    fn print_then_parse_is_identity(t in arb_typed()) {
        let printed = surface::print::term_to_string(&[], &t);
        let src = format!("check {printed} : A");
        let (m, d) = surface::parse_source(&src);
        prop_assert!(d.is_empty(), "{}: {:?}", src, d);
        let prelude = ["a", "b", "g", "s", "p", "i"].map(|n| (n, false));
        let (items, errs) = resolve_with(&m, std::iter::once(("A", true)).chain(prelude));
        prop_assert!(errs.is_empty(), "{}: {:?}", src, errs);
        let Item::Check { term, .. } = &items[0].item else { unreachable!() };
        prop_assert_eq!(term, &t, "{}", src);
    }

    #[test]
    fn binder_names_do_not_matter(c in prop::collection::vec(any::<u8>(), 0..64)) {
        let t1 = Gen { choices: &c, pos: 0, names: &["x"] }.term(0, 5);
        let t2 = Gen { choices: &c, pos: 0, names: &["y"] }.term(0, 5);
        // the name choice consumes one slot either way, so shapes agree
        prop_assert_eq!(&t1, &t2);
        prop_assert!(mltt_core::syntax::syntactic_eq(&t1, &t2));
    }
}

#[test]
fn shift_rejects_negative_indices() {
    assert!(Term::Var(0).shift(0, -1).is_err());
}
