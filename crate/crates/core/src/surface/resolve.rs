//! Scope resolution: surface names become de Bruijn indices or constants.

use std::collections::HashMap;

use super::parser::{Binder, DeclKind, SType, STerm, SourceModule};
use super::{Diagnostic, Span};
use crate::syntax::{ident, Ident, Telescope, Term, Type};

/// A declaration in core syntax, before type checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    TypeConst { name: Ident, params: Telescope },
    TermConst { name: Ident, ty: Type },
    /// A definition; the type is inferred when omitted.
    Def { name: Ident, ty: Option<Type>, body: Term },
    Check { term: Term, ty: Type },
}

impl Item {
    pub fn name(&self) -> Option<&Ident> {
        match self {
            Item::TypeConst { name, .. } | Item::TermConst { name, .. } | Item::Def { name, .. } => {
                Some(name)
            }
            Item::Check { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedDecl {
    pub item: Item,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Global {
    Type,
    Term,
}

/// Resolves every declaration in order. A declaration that fails to
/// resolve is reported and its name stays unbound for later declarations.
pub fn resolve(module: &SourceModule) -> (Vec<ResolvedDecl>, Vec<Diagnostic>) {
    resolve_with(module, std::iter::empty())
}

/// Like [`resolve`], with names already declared by an enclosing signature.
/// Each pair is `(name, is_type)`.
pub fn resolve_with<'a>(
    module: &SourceModule,
    prelude: impl IntoIterator<Item = (&'a str, bool)>,
) -> (Vec<ResolvedDecl>, Vec<Diagnostic>) {
    let mut globals: HashMap<String, Global> = prelude
        .into_iter()
        .map(|(n, t)| (n.to_owned(), if t { Global::Type } else { Global::Term }))
        .collect();
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for decl in &module.declarations {
        if let Some((n, span)) = &decl.name {
            if globals.contains_key(n) {
                diags.push(Diagnostic::error(format!("duplicate declaration {n}"), *span));
                continue;
            }
        }
        let mut r = Resolver {
            globals: &globals,
            locals: Vec::new(),
        };
        let item = match &decl.kind {
            DeclKind::ConstantType(params) => r.telescope(params).map(|params| Item::TypeConst {
                name: decl_name(decl),
                params,
            }),
            DeclKind::ConstantTerm(ty) => r.ty(ty).map(|ty| Item::TermConst {
                name: decl_name(decl),
                ty,
            }),
            DeclKind::Definition(ty, body) => (|| {
                let ty = ty.as_ref().map(|t| r.ty(t)).transpose()?;
                let body = r.term(body)?;
                Ok(Item::Def {
                    name: decl_name(decl),
                    ty,
                    body,
                })
            })(),
            DeclKind::CheckGoal(term, ty) => (|| {
                Ok(Item::Check {
                    term: r.term(term)?,
                    ty: r.ty(ty)?,
                })
            })(),
        };
        match item {
            Ok(item) => {
                match &item {
                    Item::TypeConst { name, .. } => {
                        globals.insert(name.to_string(), Global::Type);
                    }
                    Item::TermConst { name, .. } | Item::Def { name, .. } => {
                        globals.insert(name.to_string(), Global::Term);
                    }
                    Item::Check { .. } => {}
                }
                out.push(ResolvedDecl {
                    item,
                    span: decl.span,
                });
            }
            Err(d) => diags.push(d),
        }
    }
    (out, diags)
}

fn decl_name(decl: &super::SDecl) -> Ident {
    ident(&decl.name.as_ref().expect("named declaration").0)
}

struct Resolver<'g> {
    globals: &'g HashMap<String, Global>,
    /// Innermost binder last.
    locals: Vec<String>,
}

type RResult<T> = Result<T, Diagnostic>;

impl Resolver<'_> {
    fn local(&self, name: &str) -> Option<usize> {
        if name == "_" {
            return None;
        }
        self.locals.iter().rev().position(|l| l == name)
    }

    fn telescope(&mut self, binders: &[Binder]) -> RResult<Telescope> {
        let mut tel = Telescope::new();
        for b in binders {
            for (n, _) in &b.names {
                let ty = self.ty(&b.ty)?;
                tel.push(n.as_str(), ty);
                self.locals.push(n.clone());
            }
        }
        Ok(tel)
    }

    /// Resolves a binder group, returning the (name, domain) list with the
    /// binders pushed onto the scope. The caller pops them.
    fn open(&mut self, binders: &[Binder]) -> RResult<Vec<(Ident, Type)>> {
        let mut out = Vec::new();
        for b in binders {
            for (n, _) in &b.names {
                match self.ty(&b.ty) {
                    Ok(ty) => out.push((ident(n), ty)),
                    Err(e) => {
                        self.locals.truncate(self.locals.len() - out.len());
                        return Err(e);
                    }
                }
                self.locals.push(n.clone());
            }
        }
        Ok(out)
    }

    fn close(&mut self, n: usize) {
        self.locals.truncate(self.locals.len() - n);
    }

    fn under<T>(&mut self, names: &[&str], f: impl FnOnce(&mut Self) -> RResult<T>) -> RResult<T> {
        for n in names {
            self.locals.push((*n).to_owned());
        }
        let r = f(self);
        self.close(names.len());
        r
    }

    fn ty(&mut self, t: &SType) -> RResult<Type> {
        Ok(match t {
            SType::Named((n, span), args) => {
                // Type position: variables never denote types.
                match self.globals.get(n) {
                    _ if self.local(n).is_some() && self.globals.get(n) != Some(&Global::Type) => {
                        return Err(Diagnostic::error(
                            format!("expected a type, found variable {n}"),
                            *span,
                        ))
                    }
                    Some(Global::Type) => Type::Const {
                        name: ident(n),
                        args: args.iter().map(|a| self.term(a)).collect::<RResult<_>>()?,
                    },
                    Some(Global::Term) => {
                        return Err(Diagnostic::error(
                            format!("expected a type, found term constant {n}"),
                            *span,
                        ))
                    }
                    None => {
                        return Err(Diagnostic::error(format!("unbound identifier {n}"), *span))
                    }
                }
            }
            SType::Pi(bs, body) | SType::Sigma(bs, body) => {
                let opened = self.open(bs)?;
                let body = self.ty(body);
                self.close(opened.len());
                let mut acc = body?;
                for (n, dom) in opened.into_iter().rev() {
                    acc = if matches!(t, SType::Pi(..)) {
                        Type::pi(&n, dom, acc)
                    } else {
                        Type::sigma(&n, dom, acc)
                    };
                }
                acc
            }
            SType::Arrow(a, b) | SType::Prod(a, b) => {
                let a = self.ty(a)?;
                let b = self.under(&["_"], |r| r.ty(b))?;
                if matches!(t, SType::Arrow(..)) {
                    Type::pi("_", a, b)
                } else {
                    Type::sigma("_", a, b)
                }
            }
            SType::Id(a, l, r) => Type::id(self.ty(a)?, self.term(l)?, self.term(r)?),
        })
    }

    fn term(&mut self, t: &STerm) -> RResult<Term> {
        Ok(match t {
            STerm::Name((n, span)) => self.name(n, *span)?,
            STerm::Fun(bs, body) => {
                let opened = self.open(bs)?;
                let body = self.term(body);
                self.close(opened.len());
                let mut acc = body?;
                for (n, dom) in opened.into_iter().rev() {
                    acc = Term::lam(&n, dom, acc);
                }
                acc
            }
            STerm::App(f, a) => Term::app(self.term(f)?, self.term(a)?),
            STerm::Refl(a) => Term::refl(self.term(a)?),
            STerm::Pair(a, b) => Term::pair(self.term(a)?, self.term(b)?),
            STerm::J {
                motive_binders,
                motive,
                base_binder,
                base,
                left,
                right,
                path,
            } => {
                let ns: Vec<&str> = motive_binders.iter().map(|(n, _)| n.as_str()).collect();
                let m = self.under(&ns, |r| r.ty(motive))?;
                let d = self.under(&[base_binder.0.as_str()], |r| r.term(base))?;
                Term::j(
                    [ns[0], ns[1], ns[2]],
                    m,
                    &base_binder.0,
                    d,
                    self.term(left)?,
                    self.term(right)?,
                    self.term(path)?,
                )
            }
            STerm::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => {
                let m = self.under(&[motive_binder.0.as_str()], |r| r.ty(motive))?;
                let bx = branch_binders[0].0.as_str();
                let by = branch_binders[1].0.as_str();
                let c = self.under(&[bx, by], |r| r.term(branch))?;
                Term::sig_elim((&motive_binder.0, m), ([bx, by], c), self.term(scrutinee)?)
            }
        })
    }

    fn name(&self, n: &str, span: Span) -> RResult<Term> {
        if let Some(i) = self.local(n) {
            return Ok(Term::Var(i));
        }
        match self.globals.get(n) {
            Some(Global::Term) => Ok(Term::Const(ident(n))),
            Some(Global::Type) => Err(Diagnostic::error(
                format!("expected a term, found type {n}"),
                span,
            )),
            None => Err(Diagnostic::error(format!("unbound identifier {n}"), span)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_source;

    fn resolve_src(src: &str) -> (Vec<ResolvedDecl>, Vec<Diagnostic>) {
        let (m, d) = parse_source(src);
        assert!(d.is_empty(), "{d:?}");
        resolve(&m)
    }

    fn last_body(src: &str) -> Term {
        let (items, d) = resolve_src(src);
        assert!(d.is_empty(), "{d:?}");
        match &items.last().unwrap().item {
            Item::Def { body, .. } => body.clone(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_function() {
        let body = last_body("const A : type\ndef i : A -> A := fun (x : A) => x");
        assert_eq!(body, Term::lam("x", Type::base("A"), Term::Var(0)));
    }

    #[test]
    fn shadowing_picks_nearest_binder() {
        let body =
            last_body("const A : type\ndef k : A -> A -> A := fun (x : A) => fun (x : A) => x");
        let Term::Lam { body: inner, .. } = body else {
            panic!()
        };
        let Term::Lam { body: innermost, .. } = *inner else {
            panic!()
        };
        assert_eq!(*innermost, Term::Var(0));
    }

    #[test]
    fn unbound_identifier() {
        let (_, d) = resolve_src("const A : type\nconst a : A\ncheck q : A");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].message, "unbound identifier q");
    }

    #[test]
    fn forward_reference_rejected() {
        let (_, d) = resolve_src("const a : A\nconst A : type");
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("unbound identifier A"));
    }

    #[test]
    fn duplicate_rejected() {
        let (items, d) = resolve_src("const A : type\nconst A : type");
        assert_eq!(items.len(), 1);
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn arrow_codomain_is_shifted() {
        let (items, d) = resolve_src("const A : type\nconst B : A -> type\nconst f : Pi (x : A), B x -> B x");
        assert!(d.is_empty());
        let Item::TermConst { ty, .. } = &items[2].item else {
            panic!()
        };
        let Type::Pi { codomain, .. } = ty else { panic!() };
        let Type::Pi { domain, codomain, .. } = codomain.as_ref() else {
            panic!()
        };
        assert_eq!(**domain, Type::family("B", vec![Term::Var(0)]));
        assert_eq!(**codomain, Type::family("B", vec![Term::Var(1)]));
    }
}
