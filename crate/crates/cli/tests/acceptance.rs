//! One PASS/FAIL line per acceptance criterion, each with a pinned runtime
//! limit. The lines go straight to standard error, past the test harness's
//! output capture.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use mltt_cli::{cmd_semantics, ops_report};
use mltt_core::stdlib::{self, stdlib_source};
use mltt_core::surface::parse_source;
use mltt_core::{check_source, Checker, CheckerConfig, Term, Type};
use mltt_higher::{compare_free, parse_globular, small_graphs, FreeConfig};
use mltt_semantics::functor::GroupoidFunctor;
use mltt_semantics::sweep::{groupoid_checks, soundness_sweep, SweepConfig};
use mltt_semantics::wfs::{functor_catalog, has_llp, solve_lifting, verify_wfs, LiftingSquare, WFS_GROUPOIDS};
use mltt_semantics::{default_catalog, Report};

const LIMIT_1: Duration = Duration::from_secs(5);
const LIMIT_2: Duration = Duration::from_secs(5);
const LIMIT_3: Duration = Duration::from_secs(120);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(300);
const LIMIT_6: Duration = Duration::from_secs(600);
const LIMIT_7: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(60);

/// Largest groupoid the catalog may contain, in objects.
const MAX_OBJECTS: usize = 4;

type Outcome = Result<String, String>;

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_failures(r: &Report) -> Result<(), String> {
    let f = r.failures();
    ensure(f.is_empty(), || format!("{} FAIL records, first: {} {:?}", f.len(), f[0], f[0].detail))
}

fn fixture_files(sub: &str) -> Vec<(PathBuf, String)> {
    let dir = here("../core/tests/fixtures").join(sub);
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mltt"))
        .map(|p| {
            let s = std::fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    v.sort();
    v
}

/// Rule fixtures: at least 60 judgements; positives check, every
/// non-postulate of a negative file fails; β for Π, Σ and J normalize to
/// exactly the expected terms.
fn criterion_1() -> Outcome {
    let cfg = CheckerConfig::default();
    let mut judgements = 0;
    for sub in ["positive", "negative", "extensional"] {
        for (_, src) in fixture_files(sub) {
            judgements += parse_source(&src).0.declarations.len();
        }
    }
    ensure(judgements >= 60, || format!("only {judgements} judgements"))?;
    let positive = fixture_files("positive");
    let names: Vec<String> = positive.iter().map(|(p, _)| p.file_stem().unwrap().to_string_lossy().into_owned()).collect();
    ensure(names == ["conversion", "elim", "formation", "intro"], || format!("rule groups {names:?}"))?;
    for (p, src) in &positive {
        let m = check_source(src, cfg).map_err(|d| format!("{}: {d:?}", p.display()))?;
        ensure(m.all_ok(), || format!("{}: {:?}", p.display(), m.diagnostics()))?;
    }
    for (p, src) in fixture_files("negative") {
        let m = check_source(&src, cfg).map_err(|d| format!("{}: {d:?}", p.display()))?;
        let accepted = m
            .reports
            .iter()
            .filter(|r| r.is_ok() && matches!(r.item, mltt_core::surface::Item::Def { .. } | mltt_core::surface::Item::Check { .. }))
            .count();
        ensure(accepted == 0, || format!("{}: {accepted} negative judgements accepted", p.display()))?;
    }
    let src = "const A : type\nconst B : A -> type\nconst a : A\nconst b : B a\n\
               def beta_pi : A := (fun (x : A) => x) a\n\
               def beta_sigma : B a := sig_elim [_ => B a] (x y => y ; <a, b>)\n\
               def beta_j : A := J [x y z => A] (x => x ; a, a, refl a)\n";
    let m = check_source(src, cfg).map_err(|d| format!("{d:?}"))?;
    ensure(m.all_ok(), || format!("{:?}", m.diagnostics()))?;
    let ck = Checker::new(&m.signature, cfg);
    for (name, want) in [("beta_pi", "a"), ("beta_sigma", "b"), ("beta_j", "a")] {
        let body = m.signature.definition(name).unwrap();
        let nf = ck.normalize_term(body).map_err(|e| e.to_string())?;
        ensure(nf == Term::constant(want) && nf.to_string() == want, || format!("{name} normalizes to {nf}"))?;
    }
    Ok(format!("{judgements} judgements, 3 conversions exact"))
}

/// The derived corpus checks; c_l and c_r are not definitionally equal on
/// variables while e relating them checks.
fn criterion_2() -> Outcome {
    let cfg = CheckerConfig::default();
    let sig = stdlib::base_signature();
    let corpus = stdlib::standard_corpus();
    let names: Vec<&str> = corpus.iter().map(|d| d.name.as_str()).collect();
    for n in ["inv", "c_l", "c_r", "e", "assoc", "unit_l", "unit_r", "inv_l", "inv_r", "transport"] {
        ensure(names.contains(&n), || format!("{n} missing from the corpus"))?;
    }
    for (name, r) in stdlib::check_corpus(&sig, &corpus, cfg) {
        r.map_err(|e| format!("{name}: {e}"))?;
    }
    let a = Type::base(stdlib::BASE);
    let (cl, cr, e) = (stdlib::derive_compose_l(&a), stdlib::derive_compose_r(&a), stdlib::derive_filler_e(&a));
    let args: Vec<Term> = (0..5).rev().map(Term::Var).collect();
    let at = Type::id(a.clone(), Term::Var(4), Term::Var(2));
    let ck = Checker::new(&sig, cfg);
    ensure(!ck.def_equal(&cl.telescope, &cl.apply(&args), &cr.apply(&args), &at), || "c_l and c_r are definitionally equal".into())?;
    e.check(&sig, cfg).map_err(|e| format!("e: {e}"))?;
    Ok(format!("{} derivations check; c_l != c_r definitionally; e checks", corpus.len()))
}

fn stdlib_module() -> mltt_core::CheckedModule {
    check_source(&stdlib_source(), CheckerConfig::default()).unwrap()
}

/// The stdlib sweep and the path-object checks over the whole catalog.
fn criterion_3() -> Outcome {
    let catalog = default_catalog();
    for g in &catalog {
        ensure(g.object_count() <= MAX_OBJECTS, || format!("{} has {} objects", g.name(), g.object_count()))?;
    }
    let module = stdlib_source();
    let report = cmd_semantics(&[("stdlib".into(), module)], &catalog, CheckerConfig::default(), &SweepConfig::default(), false)
        .map_err(|e| e.to_string())?;
    no_failures(&report)?;
    for check in ["interpret", "conversion", "substitution", "j_filler", "path_object"] {
        let (pass, _) = report.count(check);
        ensure(pass > 0, || format!("no {check} records"))?;
    }
    let (po, _) = report.count("path_object");
    ensure(po == catalog.len(), || format!("path_object on {po} of {} groupoids", catalog.len()))?;
    Ok(format!("{} records over {} groupoids, 0 FAIL", report.len(), catalog.len()))
}

/// Strictness of the composites and truncation of double identity types.
fn criterion_4() -> Outcome {
    let catalog = default_catalog();
    let module = stdlib_module();
    let sweep = soundness_sweep(&module, CheckerConfig::default(), &catalog, &SweepConfig::default());
    let strict: Vec<_> = sweep.records().into_iter().filter(|r| r.check == "strictness").collect();
    for g in &catalog {
        for id in ["c_l", "c_r", "e"] {
            ensure(strict.iter().any(|r| r.judgement == id && r.groupoid == g.name() && r.pass), || {
                format!("no passing strictness record for {id} on {}", g.name())
            })?;
        }
    }
    ensure(strict.iter().all(|r| r.pass), || "a strictness record failed".into())?;
    let trunc = groupoid_checks(&catalog);
    no_failures(&trunc)?;
    let (t, _) = trunc.count("truncation");
    ensure(t == catalog.len(), || format!("truncation on {t} groupoids"))?;
    Ok(format!("{} strictness and {t} truncation records, 0 FAIL", strict.len()))
}

/// The lifting sweep and a square without a filler.
fn criterion_5() -> Outcome {
    let catalog = default_catalog();
    let small: Vec<_> = catalog.iter().filter(|g| WFS_GROUPOIDS.contains(&g.name())).cloned().collect();
    let report = verify_wfs(&functor_catalog(&small));
    no_failures(&report)?;
    let (tcf, _) = report.count("llp_tc_f");
    ensure(tcf > 0, || "no (trivial cofibration, fibration) pairs".into())?;
    let find = |n: &str| catalog.iter().find(|g| g.name() == n).unwrap().clone();
    let (d2, i) = (find("discrete2"), find("interval"));
    let f = GroupoidFunctor::new("endpoints", d2.clone(), i.clone(), vec![0, 1], vec![0, 1]).map_err(|e| e.to_string())?;
    let right = GroupoidFunctor::terminal(&d2);
    let collapse = GroupoidFunctor::terminal(&i);
    let bottom = GroupoidFunctor::new("bottom", i.clone(), right.cod().clone(), collapse.on_objects().to_vec(), collapse.on_arrows().to_vec())
        .map_err(|e| e.to_string())?;
    let sq = LiftingSquare::new(f.clone(), right.clone(), GroupoidFunctor::identity(&d2), bottom).map_err(|e| e.to_string())?;
    ensure(solve_lifting(&sq).map_err(|e| e.to_string())?.is_none(), || "the endpoint square has a filler".into())?;
    ensure(!has_llp(&f, &right).map_err(|e| e.to_string())?, || "endpoints lift against discrete2 -> point".into())?;
    Ok(format!("{} records ({tcf} tc/f pairs), 0 FAIL; non-lifting square absent", report.len()))
}

/// Free groupoid comparison on every small graph.
fn criterion_6() -> Outcome {
    let cfg = FreeConfig {
        word_len: 4,
        depth: 6,
        ..FreeConfig::default()
    };
    let graphs = small_graphs(3, 3);
    let (mut words, mut terms) = (0, 0);
    for (name, g) in &graphs {
        let r = compare_free(name, g, &cfg).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.surjective(), || format!("{name}: {} of {} words hit, e.g. {:?}", r.hit, r.words, r.missing.first()))?;
        ensure(r.soundness.is_empty(), || format!("{name}: {:?}", r.soundness))?;
        ensure(r.functoriality.is_empty(), || format!("{name}: {:?}", r.functoriality))?;
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        words += r.words;
        terms += r.terms;
    }
    Ok(format!("{} graphs, {words} words all hit, {terms} terms functorial, 0 soundness failures", graphs.len()))
}

/// Operations up to dimension 2 on the fixture globular set.
fn criterion_7() -> Outcome {
    let g = parse_globular(&std::fs::read_to_string(here("../higher/tests/fixtures/two_cell.glob")).unwrap()).map_err(|e| e.to_string())?;
    ensure([g.count(0), g.count(1), g.count(2)] == [3, 3, 1], || "fixture shape".into())?;
    let report = ops_report(&g, 2, CheckerConfig::default()).map_err(|e| e.to_string())?;
    no_failures(&report)?;
    for op in ["identity", "inverse", "composite", "e", "assoc", "unit_l", "unit_r", "inv_l", "inv_r", "complete"] {
        ensure(report.count(op).0 > 0, || format!("no {op} instance"))?;
    }
    Ok(format!("{} instances kernel-checked, table complete", report.len() - 1))
}

/// The reflection fixture checks only with `--extensional`.
fn criterion_8() -> Outcome {
    let file = here("../core/tests/fixtures/extensional/reflection.mltt");
    let status = |ext: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_mltt"));
        c.arg("check");
        if ext {
            c.arg("--extensional");
        }
        c.arg(&file).env_remove("MLTT_FUEL").output().unwrap().status.code()
    };
    let (e, i) = (status(true), status(false));
    ensure(e == Some(0) && i == Some(1), || format!("extensional exit {e:?}, intensional exit {i:?}"))?;
    Ok("extensional exit 0, intensional exit 1".into())
}

#[test]
fn acceptance() {
    let criteria: [(fn() -> Outcome, Duration); 8] = [
        (criterion_1, LIMIT_1),
        (criterion_2, LIMIT_2),
        (criterion_3, LIMIT_3),
        (criterion_4, LIMIT_4),
        (criterion_5, LIMIT_5),
        (criterion_6, LIMIT_6),
        (criterion_7, LIMIT_7),
        (criterion_8, LIMIT_8),
    ];
    let mut failed = Vec::new();
    for (k, (f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let took = t.elapsed();
        let verdict = match outcome {
            Ok(msg) if took <= *limit => ("PASS", msg),
            Ok(msg) => ("FAIL", format!("{msg}; but took longer than {limit:?}")),
            Err(msg) => ("FAIL", msg),
        };
        let line = format!("{} criterion {} ({:.1?} / {:?}): {}", verdict.0, k + 1, took, limit, verdict.1);
        let _ = writeln!(std::io::stderr().lock(), "{line}");
        if verdict.0 == "FAIL" {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}
