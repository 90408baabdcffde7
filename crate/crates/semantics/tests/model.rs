use std::rc::Rc;

use mltt_core::stdlib::stdlib_source;
use mltt_core::{check_source, CheckedModule, CheckerConfig, Telescope};
use mltt_semantics::catalog::find;
use mltt_semantics::ir::{Elaborator, Tm, Ty, TyKind};
use mltt_semantics::model::{Model, DEFAULT_BUDGET};
use mltt_semantics::sweep::{soundness_sweep, SweepConfig};
use mltt_semantics::value::{ArrKind, Val};
use mltt_semantics::{default_catalog, FiniteGroupoid};

fn g(name: &str) -> Rc<FiniteGroupoid> {
    find(&default_catalog(), name).unwrap().clone()
}

fn stdlib() -> CheckedModule {
    check_source(&stdlib_source(), CheckerConfig::default()).unwrap()
}

/// Applies a closed function value of type `ty` at `env` to `x`.
fn apply(m: &Model, ty: &Rc<Ty>, env: &[Val], f: &Val, x: &Val) -> (Val, Rc<Ty>) {
    let TyKind::Pi(a, b) = &ty.kind else { panic!("not a function type") };
    let Val::Fun(t) = f else { panic!("not a function value") };
    let i = m.fiber(a, env).unwrap().position(x).expect("argument in the domain");
    (t.points()[i].clone(), b.clone())
}

fn base_arrow(g: &FiniteGroupoid, name: &str) -> usize {
    g.arrow_index(name).unwrap()
}

#[test]
fn transport_along_u_is_post_composition() {
    let module = stdlib();
    let sig = &module.signature;
    let elab = Elaborator::new(sig, CheckerConfig::default());
    let (empty, tele) = (Rc::new(Vec::new()), Telescope::new());
    let ty_src = sig.get("transport").unwrap();
    let mltt_core::Decl::Def { ty, body, .. } = ty_src else { panic!() };
    let ty = elab.ty(&empty, &tele, ty).unwrap();
    let body = elab.tm(&empty, &tele, body, None).unwrap();

    let i = g("interval");
    let mut m = Model::new(i.clone(), DEFAULT_BUDGET);
    m.define("transport", ty.clone(), body);
    let f = m.eval(&Tm::Const("transport".into()), &[]).unwrap();
    let u = base_arrow(&i, "u");
    let (x, y) = (Val::Obj(0), Val::Obj(1));
    let (f1, t1) = apply(&m, &ty, &[], &f, &x);
    let (f2, t2) = apply(&m, &t1, &[x.clone()], &f1, &y);
    let ids = m.fiber(&base(&t2), &[x.clone(), y.clone()]).unwrap();
    assert_eq!(ids.objects.len(), 1);
    let p = ids.objects[0].clone();
    let Val::Path(pa) = &p else { unreachable!() };
    assert_eq!(pa.kind, ArrKind::Base(u));
    let (f3, t3) = apply(&m, &t2, &[x.clone(), y.clone()], &f2, &p);
    let env = [x.clone(), y.clone(), p.clone()];
    let TyKind::Pi(fam, _) = &t3.kind else { panic!() };
    let points = m.fiber(fam, &env).unwrap().objects.clone();
    // B(0) is the set of arrows into 0: id_0 and v.
    assert_eq!(points.len(), 2);
    for b in points {
        let Val::Fam(alpha) = &b else { panic!() };
        let ArrKind::Base(a) = alpha.arrs[0].kind else { panic!() };
        let (out, _) = apply(&m, &t3, &env, &f3, &b);
        let Val::Fam(beta) = &out else { panic!() };
        assert_eq!(beta.arrs[0].kind, ArrKind::Base(i.comp(u, a)));
    }
}

fn base(t: &Rc<Ty>) -> Rc<Ty> {
    let TyKind::Pi(a, _) = &t.kind else { panic!() };
    a.clone()
}

#[test]
fn refl_denotes_identities() {
    let src = "const A : type\ndef r : Pi (x : A), Id A x x := fun (x : A) => refl x\n";
    let module = check_source(src, CheckerConfig::default()).unwrap();
    let sig = &module.signature;
    let elab = Elaborator::new(sig, CheckerConfig::default());
    let (empty, tele) = (Rc::new(Vec::new()), Telescope::new());
    let mltt_core::Decl::Def { ty, body, .. } = sig.get("r").unwrap() else { panic!() };
    let ty = elab.ty(&empty, &tele, ty).unwrap();
    let body = elab.tm(&empty, &tele, body, None).unwrap();
    for name in ["z3", "interval", "codiscrete3"] {
        let gr = g(name);
        let m = Model::new(gr.clone(), DEFAULT_BUDGET);
        let v = m.eval(&body, &[]).unwrap();
        assert!(m.is_object(&ty, &[], &v).unwrap());
        for o in 0..gr.object_count() {
            let (p, _) = apply(&m, &ty, &[], &v, &Val::Obj(o));
            let Val::Path(a) = p else { panic!() };
            assert_eq!(a.kind, ArrKind::Base(gr.id(o)));
        }
    }
}

#[test]
fn stdlib_sweep_is_green_on_small_groupoids() {
    let module = stdlib();
    let cat: Vec<_> = ["point", "discrete2", "z2", "interval"].into_iter().map(g).collect();
    let r = soundness_sweep(&module, CheckerConfig::default(), &cat, &SweepConfig::default());
    assert!(r.all_pass(), "{}", r.to_lines());
    for check in ["interpret", "conversion", "substitution", "strictness", "j_filler"] {
        let (pass, fail) = r.count(check);
        assert!(pass > 0 && fail == 0, "{check}: {pass} pass, {fail} fail");
    }
}

#[test]
fn sweep_is_deterministic_for_a_seed() {
    let module = stdlib();
    let cat = vec![g("z3")];
    let cfg = SweepConfig::default();
    let a = soundness_sweep(&module, CheckerConfig::default(), &cat, &cfg).to_lines();
    let b = soundness_sweep(&module, CheckerConfig::default(), &cat, &cfg).to_lines();
    assert_eq!(a, b);
}

#[test]
fn reflection_fixture_fails_in_the_model() {
    let src = include_str!("../../core/tests/fixtures/extensional/reflection.mltt");
    let ext = CheckerConfig::extensional();
    let module = check_source(src, ext.clone()).unwrap();
    assert!(module.all_ok());
    let r = soundness_sweep(&module, ext, &[g("interval")], &SweepConfig::default());
    assert!(!r.failures().is_empty(), "{}", r.to_lines());
}

mod seeds {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(4))]

        #[test]
        fn sweep_passes_for_any_seed(seed in any::<u64>(), which in 0usize..3) {
            let module = stdlib();
            let name = ["z2", "interval", "discrete3"][which];
            let cfg = SweepConfig { seed, ..SweepConfig::default() };
            let r = soundness_sweep(&module, CheckerConfig::default(), &[g(name)], &cfg);
            prop_assert!(r.all_pass(), "{}", r.to_lines());
        }
    }
}
