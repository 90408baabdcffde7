//! Kernel terms annotated with the types the evaluator needs. Annotations
//! are recovered by re-running kernel inference, so they agree with the
//! typing derivation the kernel accepted.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use mltt_core::{ident, Checker, CheckerConfig, Decl, Expr, KernelError, Signature, Telescope, Term, Type};
use thiserror::Error;

/// A context: entry `i` lives in the context of entries `0..i`.
pub type Ctx = Vec<Rc<Ty>>;

pub struct Ty {
    id: u64,
    pub ctx: Rc<Ctx>,
    pub kind: TyKind,
}

pub enum TyKind {
    Base(String),
    /// A family over the closed telescope `params`, applied to `args`.
    Fam {
        name: String,
        params: Rc<Ctx>,
        args: Vec<Rc<Tm>>,
    },
    Pi(Rc<Ty>, Rc<Ty>),
    Sigma(Rc<Ty>, Rc<Ty>),
    Id(Rc<Ty>, Rc<Tm>, Rc<Tm>),
}

pub enum Tm {
    Var(usize),
    Const(String),
    /// `ty` is the Π type of the abstraction.
    Lam { ty: Rc<Ty>, body: Rc<Tm> },
    App { pi: Rc<Ty>, fun: Rc<Tm>, arg: Rc<Tm> },
    /// `ty` is the Σ type of the pair.
    Pair { ty: Rc<Ty>, a: Rc<Tm>, b: Rc<Tm> },
    SigElim {
        sigma: Rc<Ty>,
        motive: Rc<Ty>,
        branch: Rc<Tm>,
        scrut: Rc<Tm>,
    },
    Refl { ty: Rc<Ty>, a: Rc<Tm> },
    J {
        ty: Rc<Ty>,
        motive: Rc<Ty>,
        base: Rc<Tm>,
        left: Rc<Tm>,
        right: Rc<Tm>,
        path: Rc<Tm>,
    },
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

impl Ty {
    pub fn new(ctx: Rc<Ctx>, kind: TyKind) -> Rc<Ty> {
        Rc::new(Ty {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            ctx,
            kind,
        })
    }

    /// Unique per node; used as a cache key.
    pub fn id(&self) -> u64 {
        self.id
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TyKind::Base(n) => write!(f, "{n}"),
            TyKind::Fam { name, args, .. } => write!(f, "{name}/{}", args.len()),
            TyKind::Pi(a, b) => write!(f, "Pi({a:?}, {b:?})"),
            TyKind::Sigma(a, b) => write!(f, "Sigma({a:?}, {b:?})"),
            TyKind::Id(a, _, _) => write!(f, "Id({a:?}, _, _)"),
        }
    }
}

pub fn extend(ctx: &Rc<Ctx>, ty: Rc<Ty>) -> Rc<Ctx> {
    let mut c = (**ctx).clone();
    c.push(ty);
    Rc::new(c)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ElabError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("unexpected shape: {0}")]
    Shape(String),
}

pub struct Elaborator<'s> {
    ck: Checker<'s>,
    sig: &'s Signature,
    families: RefCell<HashMap<String, Rc<Ctx>>>,
}

type R<T> = Result<T, ElabError>;

impl<'s> Elaborator<'s> {
    pub fn new(sig: &'s Signature, cfg: CheckerConfig) -> Self {
        Elaborator {
            ck: Checker::new(sig, cfg),
            sig,
            families: RefCell::new(HashMap::new()),
        }
    }

    pub fn checker(&self) -> &Checker<'s> {
        &self.ck
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    /// Elaborates a kernel telescope.
    pub fn telescope(&self, tele: &Telescope) -> R<Rc<Ctx>> {
        let mut ctx = Rc::new(Ctx::new());
        for (i, (_, ty)) in tele.entries().iter().enumerate() {
            let t = self.ty(&ctx, &tele.prefix(i), ty)?;
            ctx = extend(&ctx, t);
        }
        Ok(ctx)
    }

    fn params(&self, name: &str) -> R<Rc<Ctx>> {
        if let Some(p) = self.families.borrow().get(name) {
            return Ok(p.clone());
        }
        let tele = self
            .sig
            .type_params(name)
            .ok_or_else(|| KernelError::NotAType(ident(name)))?;
        let ctx = self.telescope(tele)?;
        self.families.borrow_mut().insert(name.to_owned(), ctx.clone());
        Ok(ctx)
    }

    pub fn ty(&self, ctx: &Rc<Ctx>, tele: &Telescope, ty: &Type) -> R<Rc<Ty>> {
        debug_assert_eq!(ctx.len(), tele.len());
        let kind = match ty {
            Type::Const { name, args } if args.is_empty() => TyKind::Base(name.to_string()),
            Type::Const { name, args } => {
                let params = self.params(name)?;
                let ptele = self.sig.type_params(name).expect("family");
                let mut out = Vec::new();
                for (i, arg) in args.iter().enumerate() {
                    let expected = ptele.entries()[i].1.instantiate(&args[..i]);
                    out.push(self.tm(ctx, tele, arg, Some(&expected))?);
                }
                TyKind::Fam {
                    name: name.to_string(),
                    params,
                    args: out,
                }
            }
            Type::Pi {
                binder,
                domain,
                codomain,
            }
            | Type::Sigma {
                binder,
                domain,
                codomain,
            } => {
                let a = self.ty(ctx, tele, domain)?;
                let inner = tele.extended(binder.clone(), (**domain).clone());
                let b = self.ty(&extend(ctx, a.clone()), &inner, codomain)?;
                if matches!(ty, Type::Pi { .. }) {
                    TyKind::Pi(a, b)
                } else {
                    TyKind::Sigma(a, b)
                }
            }
            Type::Id {
                underlying,
                left,
                right,
            } => {
                let a = self.ty(ctx, tele, underlying)?;
                let l = self.tm(ctx, tele, left, Some(underlying))?;
                let r = self.tm(ctx, tele, right, Some(underlying))?;
                TyKind::Id(a, l, r)
            }
        };
        Ok(Ty::new(ctx.clone(), kind))
    }

    fn norm(&self, ty: &Type) -> R<Type> {
        Ok(self.ck.normalize_type(ty)?)
    }

    /// Elaborates `tele ⊢ t : expected` (or `t` with its inferred type).
    pub fn tm(&self, ctx: &Rc<Ctx>, tele: &Telescope, t: &Term, expected: Option<&Type>) -> R<Rc<Tm>> {
        let expected = match expected {
            Some(e) => Some(self.norm(e)?),
            None => None,
        };
        Ok(Rc::new(match t {
            Term::Var(i) => Tm::Var(*i),
            Term::Const(c) => Tm::Const(c.to_string()),
            Term::Lam {
                binder,
                domain,
                body,
            } => {
                let inner = tele.extended(binder.clone(), (**domain).clone());
                let cod = match &expected {
                    Some(Type::Pi { codomain, .. }) => (**codomain).clone(),
                    _ => self.ck.infer_type(&inner, body)?,
                };
                let pi = Type::Pi {
                    binder: binder.clone(),
                    domain: domain.clone(),
                    codomain: Box::new(cod.clone()),
                };
                let ty = self.ty(ctx, tele, &pi)?;
                let TyKind::Pi(a, _) = &ty.kind else { unreachable!() };
                let body = self.tm(&extend(ctx, a.clone()), &inner, body, Some(&cod))?;
                Tm::Lam { ty, body }
            }
            Term::App(f, a) => {
                let fty = self.norm(&self.ck.infer_type(tele, f)?)?;
                let Type::Pi { domain, .. } = &fty else {
                    return Err(ElabError::Shape(format!("applying a non-function: {fty}")));
                };
                let pi = self.ty(ctx, tele, &fty)?;
                let fun = self.tm(ctx, tele, f, Some(&fty))?;
                let arg = self.tm(ctx, tele, a, Some(domain))?;
                Tm::App { pi, fun, arg }
            }
            Term::Pair(a, b) => {
                let sigma = match &expected {
                    Some(s @ Type::Sigma { .. }) => s.clone(),
                    _ => {
                        let at = self.ck.infer_type(tele, a)?;
                        let bt = self.ck.infer_type(tele, b)?;
                        Type::product(at, bt)
                    }
                };
                let Type::Sigma {
                    domain, codomain, ..
                } = &sigma
                else {
                    unreachable!()
                };
                let ty = self.ty(ctx, tele, &sigma)?;
                let ta = self.tm(ctx, tele, a, Some(domain))?;
                let tb = self.tm(ctx, tele, b, Some(&codomain.subst(0, a)))?;
                Tm::Pair { ty, a: ta, b: tb }
            }
            Term::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => {
                let sty = self.norm(&self.ck.infer_type(tele, scrutinee)?)?;
                let Type::Sigma {
                    domain, codomain, ..
                } = &sty
                else {
                    return Err(ElabError::Shape(format!("sig_elim on {sty}")));
                };
                let sigma = self.ty(ctx, tele, &sty)?;
                let TyKind::Sigma(sa, sb) = &sigma.kind else { unreachable!() };
                let mtele = tele.extended(motive_binder.clone(), sty.clone());
                let m = self.ty(&extend(ctx, sigma.clone()), &mtele, motive)?;
                let btele = tele
                    .extended(branch_binders[0].clone(), (**domain).clone())
                    .extended(branch_binders[1].clone(), (**codomain).clone());
                let bctx = extend(&extend(ctx, sa.clone()), sb.clone());
                let bty = motive
                    .shifted(1, 2)
                    .instantiate(&[Term::pair(Term::Var(1), Term::Var(0))]);
                let branch = self.tm(&bctx, &btele, branch, Some(&bty))?;
                let scrut = self.tm(ctx, tele, scrutinee, Some(&sty))?;
                Tm::SigElim {
                    sigma,
                    motive: m,
                    branch,
                    scrut,
                }
            }
            Term::Refl(a) => {
                let under = match &expected {
                    Some(Type::Id { underlying, .. }) => (**underlying).clone(),
                    _ => self.ck.infer_type(tele, a)?,
                };
                let ty = self.ty(ctx, tele, &under)?;
                let a = self.tm(ctx, tele, a, Some(&under))?;
                Tm::Refl { ty, a }
            }
            Term::J {
                motive_binders,
                motive,
                base_binder,
                base,
                left,
                right,
                path,
            } => {
                let pty = self.norm(&self.ck.infer_type(tele, path)?)?;
                let Type::Id { underlying, .. } = &pty else {
                    return Err(ElabError::Shape(format!("J on {pty}")));
                };
                let a = (**underlying).clone();
                let ty = self.ty(ctx, tele, &a)?;
                let mtele = tele
                    .extended(motive_binders[0].clone(), a.clone())
                    .extended(motive_binders[1].clone(), a.shifted(0, 1))
                    .extended(
                        motive_binders[2].clone(),
                        Type::id(a.shifted(0, 2), Term::Var(1), Term::Var(0)),
                    );
                let mctx = self.telescope_over(ctx, tele, &mtele)?;
                let m = self.ty(&mctx, &mtele, motive)?;
                let btele = tele.extended(base_binder.clone(), a.clone());
                let bty = motive.shifted(3, 1).instantiate(&[
                    Term::Var(0),
                    Term::Var(0),
                    Term::refl(Term::Var(0)),
                ]);
                let base = self.tm(&extend(ctx, ty.clone()), &btele, base, Some(&bty))?;
                Tm::J {
                    ty: ty.clone(),
                    motive: m,
                    base,
                    left: self.tm(ctx, tele, left, Some(&a))?,
                    right: self.tm(ctx, tele, right, Some(&a))?,
                    path: self.tm(ctx, tele, path, Some(&pty))?,
                }
            }
        }))
    }

    /// Elaborates the entries of `full` beyond the prefix `tele` already
    /// elaborated as `ctx`.
    pub fn telescope_over(&self, ctx: &Rc<Ctx>, tele: &Telescope, full: &Telescope) -> R<Rc<Ctx>> {
        let mut ctx = ctx.clone();
        for i in tele.len()..full.len() {
            let t = self.ty(&ctx, &full.prefix(i), &full.entries()[i].1)?;
            ctx = extend(&ctx, t);
        }
        Ok(ctx)
    }
}

/// Constants occurring in a term or type, including those reached through
/// definition bodies and the types of constants.
pub fn constants_used(sig: &Signature, terms: &[&Term], types: &[&Type]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut todo: Vec<String> = Vec::new();
    for t in terms {
        term_consts(t, &mut todo);
    }
    for t in types {
        type_consts(t, &mut todo);
    }
    while let Some(c) = todo.pop() {
        if !out.insert(c.clone()) {
            continue;
        }
        match sig.get(&c) {
            Some(Decl::TermConst { ty, .. }) => type_consts(ty, &mut todo),
            Some(Decl::Def { ty, body, .. }) => {
                type_consts(ty, &mut todo);
                term_consts(body, &mut todo);
            }
            Some(Decl::TypeConst { params, .. }) => {
                for (_, t) in params.entries() {
                    type_consts(t, &mut todo);
                }
            }
            None => {}
        }
    }
    out
}

fn type_consts(t: &Type, out: &mut Vec<String>) {
    match t {
        Type::Const { name, args } => {
            out.push(name.to_string());
            args.iter().for_each(|a| term_consts(a, out));
        }
        Type::Pi {
            domain, codomain, ..
        }
        | Type::Sigma {
            domain, codomain, ..
        } => {
            type_consts(domain, out);
            type_consts(codomain, out);
        }
        Type::Id {
            underlying,
            left,
            right,
        } => {
            type_consts(underlying, out);
            term_consts(left, out);
            term_consts(right, out);
        }
    }
}

fn term_consts(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(_) => {}
        Term::Const(c) => out.push(c.to_string()),
        Term::Lam { domain, body, .. } => {
            type_consts(domain, out);
            term_consts(body, out);
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            term_consts(a, out);
            term_consts(b, out);
        }
        Term::SigElim {
            motive,
            branch,
            scrutinee,
            ..
        } => {
            type_consts(motive, out);
            term_consts(branch, out);
            term_consts(scrutinee, out);
        }
        Term::Refl(a) => term_consts(a, out),
        Term::J {
            motive,
            base,
            left,
            right,
            path,
            ..
        } => {
            type_consts(motive, out);
            for x in [base, left, right, path] {
                term_consts(x, out);
            }
        }
    }
}
