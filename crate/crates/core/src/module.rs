//! Checking whole `.mltt` modules: parse, resolve, then check declarations in
//! order, extending the signature with each one that succeeds.

use crate::kernel::{Checker, CheckerConfig, KernelError};
use crate::signature::{Decl, Signature};
use crate::surface::{self, resolve::resolve_with, Diagnostic, Item, Span};
use crate::syntax::{Ident, Judgement, Telescope, Term, Type};

#[derive(Clone, Debug)]
pub struct DeclReport {
    pub item: Item,
    pub span: Span,
    /// The checked type (inferred for untyped definitions) or the error.
    pub result: Result<Option<Type>, KernelError>,
}

impl DeclReport {
    pub fn is_ok(&self) -> bool {
        self.result.is_ok()
    }

    pub fn name(&self) -> Option<&Ident> {
        self.item.name()
    }
}

#[derive(Clone, Debug)]
pub struct CheckedModule {
    pub signature: Signature,
    pub reports: Vec<DeclReport>,
    /// Scope errors from resolution; these count as type errors.
    pub scope_errors: Vec<Diagnostic>,
}

impl CheckedModule {
    pub fn all_ok(&self) -> bool {
        self.scope_errors.is_empty() && self.reports.iter().all(DeclReport::is_ok)
    }

    /// Errors rendered as diagnostics in source order.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = self.scope_errors.clone();
        for r in &self.reports {
            if let Err(e) = &r.result {
                let what = match r.name() {
                    Some(n) => format!("in {n}: {e}"),
                    None => format!("in check: {e}"),
                };
                out.push(Diagnostic::error(what, r.span));
            }
        }
        out.sort_by_key(|d| d.span.offset);
        out
    }

    /// The judgements asserted by successfully checked declarations, all in
    /// the empty context: `A type` for postulates, `t : T` for definitions and
    /// goals.
    pub fn judgements(&self) -> Vec<(String, Judgement)> {
        let mut out = Vec::new();
        let mut goal = 0;
        for r in &self.reports {
            let Ok(ty) = &r.result else { continue };
            let empty = Telescope::new();
            match &r.item {
                Item::TypeConst { .. } => {}
                Item::TermConst { name, ty } => {
                    out.push((name.to_string(), Judgement::IsType(empty, ty.clone())))
                }
                Item::Def { name, body, .. } => out.push((
                    name.to_string(),
                    Judgement::HasType(empty, body.clone(), ty.clone().expect("checked type")),
                )),
                Item::Check { term, ty } => {
                    goal += 1;
                    out.push((
                        format!("check{goal}"),
                        Judgement::HasType(empty, term.clone(), ty.clone()),
                    ))
                }
            }
        }
        out
    }
}

/// Parses and checks `text` on top of `base`. Syntax errors are returned as
/// `Err`; type and scope errors are recorded in the result.
pub fn check_source_with(
    base: &Signature,
    text: &str,
    cfg: CheckerConfig,
) -> Result<CheckedModule, Vec<Diagnostic>> {
    let (module, diags) = surface::parse_source(text);
    if !diags.is_empty() {
        return Err(diags);
    }
    let prelude: Vec<(String, bool)> = base
        .decls()
        .iter()
        .map(|d| (d.name().to_string(), matches!(d, Decl::TypeConst { .. })))
        .collect();
    let (items, scope_errors) =
        resolve_with(&module, prelude.iter().map(|(n, t)| (n.as_str(), *t)));
    let mut signature = base.clone();
    let mut reports = Vec::new();
    for rd in items {
        let result = check_item(&signature, cfg, &rd.item);
        if let Ok(ty) = &result {
            if let Some(decl) = to_decl(&rd.item, ty.clone()) {
                signature.push(decl);
            }
        }
        reports.push(DeclReport {
            item: rd.item,
            span: rd.span,
            result,
        });
    }
    Ok(CheckedModule {
        signature,
        reports,
        scope_errors,
    })
}

pub fn check_source(text: &str, cfg: CheckerConfig) -> Result<CheckedModule, Vec<Diagnostic>> {
    check_source_with(&Signature::new(), text, cfg)
}

/// Checks one item; returns its type for definitions and goals.
pub fn check_item(
    sig: &Signature,
    cfg: CheckerConfig,
    item: &Item,
) -> Result<Option<Type>, KernelError> {
    let ck = Checker::new(sig, cfg);
    let empty = Telescope::new();
    if let Some(n) = item.name() {
        if sig.contains(n) {
            return Err(KernelError::Duplicate(n.clone()));
        }
    }
    match item {
        Item::TypeConst { params, .. } => ck.check_telescope(params).map(|_| None),
        Item::TermConst { ty, .. } => ck.check_is_type(&empty, ty).map(|_| None),
        Item::Def {
            ty: Some(ty), body, ..
        }
        | Item::Check { term: body, ty } => {
            ck.check_is_type(&empty, ty)?;
            ck.check_type(&empty, body, ty)?;
            Ok(Some(ty.clone()))
        }
        Item::Def { ty: None, body, .. } => ck.infer_type(&empty, body).map(Some),
    }
}

fn to_decl(item: &Item, ty: Option<Type>) -> Option<Decl> {
    Some(match item.clone() {
        Item::TypeConst { name, params } => Decl::TypeConst { name, params },
        Item::TermConst { name, ty } => Decl::TermConst { name, ty },
        Item::Def { name, body, .. } => Decl::Def {
            name,
            ty: ty.expect("definition type"),
            body,
        },
        Item::Check { .. } => return None,
    })
}

/// Looks up a definition's body by name.
pub fn definition<'m>(m: &'m CheckedModule, name: &str) -> Option<&'m Term> {
    m.signature.definition(name)
}
