//! The rule-conformance fixture suite under `tests/fixtures`.

use std::fs;
use std::path::{Path, PathBuf};

use mltt_core::surface::{self, print, resolve, DeclKind, Item};
use mltt_core::{check_source, CheckedModule, Checker, CheckerConfig, Telescope};

fn fixture_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(sub)
}

fn files(sub: &str) -> Vec<(PathBuf, String)> {
    let mut out: Vec<_> = fs::read_dir(fixture_dir(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mltt"))
        .map(|p| {
            let s = fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no fixtures in {sub}");
    out
}

fn check(src: &str, cfg: CheckerConfig) -> CheckedModule {
    check_source(src, cfg).expect("fixture parses")
}

#[test]
fn positive_fixtures_check() {
    for (path, src) in files("positive") {
        let m = check(&src, CheckerConfig::default());
        assert!(m.all_ok(), "{}: {:?}", path.display(), m.diagnostics());
    }
}

#[test]
fn negative_fixtures_fail_declaration_by_declaration() {
    for (path, src) in files("negative") {
        let (module, diags) = surface::parse_source(&src);
        assert!(diags.is_empty());
        let non_const = module
            .declarations
            .iter()
            .filter(|d| !matches!(d.kind, DeclKind::ConstantType(_) | DeclKind::ConstantTerm(_)))
            .count();
        let m = check(&src, CheckerConfig::default());
        let mut failures = m.scope_errors.len();
        for r in &m.reports {
            match &r.item {
                Item::TypeConst { .. } | Item::TermConst { .. } => {
                    assert!(r.is_ok(), "{}: postulate rejected", path.display())
                }
                _ => failures += usize::from(!r.is_ok()),
            }
        }
        assert_eq!(failures, non_const, "{}", path.display());
        // every accepted non-postulate would be a false positive
        assert!(m
            .reports
            .iter()
            .filter(|r| matches!(r.item, Item::Def { .. } | Item::Check { .. }))
            .all(|r| !r.is_ok()));
    }
}

#[test]
fn extensional_fixture_needs_reflection() {
    for (path, src) in files("extensional") {
        let ext = check(&src, CheckerConfig::extensional());
        assert!(ext.all_ok(), "{}: {:?}", path.display(), ext.diagnostics());
        let int = check(&src, CheckerConfig::default());
        assert!(!int.all_ok(), "{}", path.display());
    }
}

#[test]
fn suite_has_at_least_sixty_judgements() {
    let total: usize = ["positive", "negative", "extensional"]
        .iter()
        .flat_map(|d| files(d))
        .map(|(_, src)| surface::parse_source(&src).0.declarations.len())
        .sum();
    assert!(total >= 60, "only {total} judgements");
}

#[test]
fn print_resolve_parse_round_trips() {
    for (path, src) in files("positive") {
        let (module, diags) = surface::parse_source(&src);
        assert!(diags.is_empty());
        let (items, errs) = resolve(&module);
        assert!(errs.is_empty());
        let items: Vec<Item> = items.into_iter().map(|r| r.item).collect();
        let printed = print::module_to_string(&items);
        let toks = |s: &str| -> Vec<surface::Tok> {
            surface::tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
        };
        assert_eq!(toks(&printed), toks(&src), "{}:\n{printed}", path.display());
    }
}

#[test]
fn subject_reduction_on_corpus() {
    let mut srcs = files("positive");
    srcs.push(("stdlib".into(), mltt_core::stdlib::stdlib_source()));
    for (path, src) in srcs {
        let m = check(&src, CheckerConfig::default());
        let ck = Checker::new(&m.signature, CheckerConfig::default());
        let empty = Telescope::new();
        for r in &m.reports {
            let (body, ty) = match (&r.item, &r.result) {
                (Item::Def { body, .. }, Ok(Some(ty))) | (Item::Check { term: body, .. }, Ok(Some(ty))) => {
                    (body, ty)
                }
                _ => continue,
            };
            let nf = ck.normalize_term(body).unwrap();
            ck.check_type(&empty, &nf, ty)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            // normalization is idempotent
            assert_eq!(ck.normalize_term(&nf).unwrap(), nf);
        }
    }
}

#[test]
fn diagnostics_point_into_the_source() {
    for sub in ["negative", "extensional", "positive"] {
        for (_, src) in files(sub) {
            let m = check(&src, CheckerConfig::default());
            for d in m.diagnostics() {
                assert!(d.span.offset + d.span.length <= src.len());
                assert!(d.span.line >= 1 && d.span.column >= 1);
            }
        }
    }
}
