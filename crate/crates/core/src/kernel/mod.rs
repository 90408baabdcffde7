//! The type checker: judgements `Γ ⊢ A type`, `Γ ⊢ a : A`, `Γ ⊢ a = b : A`
//! and `Γ ⊢ A = B type` for Π, Σ and identity types.
//!
//! Checking is bidirectional. Definitional equality normalizes both sides and
//! compares them structurally. In extensional mode the comparison also
//! accepts a pair of subterms whose normal forms are the endpoints of an
//! identity hypothesis in the context (Id-reflection restricted to literal
//! hypotheses).

mod normalize;

use thiserror::Error;

use crate::signature::{Decl, Signature};
use crate::surface::print;
use crate::syntax::{Expr, Ident, Telescope, Term, Type};

pub use normalize::{normalize_by_steps, step_term, step_type, Normalizer, Strategy};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Intensional,
    Extensional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckerConfig {
    pub mode: Mode,
    max_reduction_steps: u64,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            mode: Mode::Intensional,
            max_reduction_steps: DEFAULT_FUEL,
        }
    }
}

impl CheckerConfig {
    pub fn new(mode: Mode, max_reduction_steps: u64) -> Result<Self, KernelError> {
        if max_reduction_steps == 0 {
            return Err(KernelError::ZeroFuel);
        }
        Ok(CheckerConfig {
            mode,
            max_reduction_steps,
        })
    }

    pub fn extensional() -> Self {
        CheckerConfig {
            mode: Mode::Extensional,
            ..Default::default()
        }
    }

    pub fn fuel(&self) -> u64 {
        self.max_reduction_steps
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("fuel must be positive")]
    ZeroFuel,
    #[error("step budget exceeded ({budget} reduction steps)")]
    FuelExhausted { budget: u64 },
    #[error("unbound constant {0}")]
    UnknownConstant(Ident),
    #[error("{0} is not a type constant")]
    NotAType(Ident),
    #[error("{0} is a type, not a term")]
    NotATerm(Ident),
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("not a function: the head has type {found}")]
    NotAFunction { found: String },
    #[error("scrutinee of sig_elim is not a Σ: it has type {found}")]
    NotASigma { found: String },
    #[error("path argument of J is not an identity proof: it has type {found}")]
    NotAnIdentity { found: String },
    #[error("{name} expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: Ident,
        expected: usize,
        found: usize,
    },
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("J endpoint mismatch: {given} is not definitionally equal to {expected}")]
    EndpointMismatch { given: String, expected: String },
    #[error("ill-formed context entry {index}: {source}")]
    IllFormedContext {
        index: usize,
        #[source]
        source: Box<KernelError>,
    },
    #[error("duplicate declaration {0}")]
    Duplicate(Ident),
}

pub struct Checker<'s> {
    sig: &'s Signature,
    cfg: CheckerConfig,
    norm: Normalizer<'s>,
}

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature, cfg: CheckerConfig) -> Self {
        Checker {
            sig,
            cfg,
            norm: Normalizer::new(sig, cfg.max_reduction_steps),
        }
    }

    pub fn config(&self) -> CheckerConfig {
        self.cfg
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    // -- normalization ------------------------------------------------------

    pub fn normalize_term(&self, t: &Term) -> Result<Term, KernelError> {
        self.norm.reset();
        self.norm.term(t)
    }

    pub fn normalize_type(&self, t: &Type) -> Result<Type, KernelError> {
        self.norm.reset();
        self.norm.ty(t)
    }

    // -- definitional equality ---------------------------------------------

    /// `Γ ⊢ a = b : A`. Both sides are assumed to check against `_at`.
    pub fn def_equal(&self, ctx: &Telescope, a: &Term, b: &Term, _at: &Type) -> bool {
        self.terms_equal(ctx, a, b).unwrap_or(false)
    }

    pub fn terms_equal(&self, ctx: &Telescope, a: &Term, b: &Term) -> Result<bool, KernelError> {
        let a = self.normalize_term(a)?;
        let b = self.normalize_term(b)?;
        let hyps = self.hypotheses(ctx)?;
        Ok(Conv { hyps: &hyps }.term(&a, &b, 0))
    }

    /// `Γ ⊢ A = B type`.
    pub fn types_equal(&self, ctx: &Telescope, a: &Type, b: &Type) -> Result<bool, KernelError> {
        let a = self.normalize_type(a)?;
        let b = self.normalize_type(b)?;
        let hyps = self.hypotheses(ctx)?;
        Ok(Conv { hyps: &hyps }.ty(&a, &b, 0))
    }

    /// Normal-form endpoints of every identity hypothesis in `ctx`, weakened
    /// into the full context. Empty in intensional mode.
    fn hypotheses(&self, ctx: &Telescope) -> Result<Vec<(Term, Term)>, KernelError> {
        if self.cfg.mode == Mode::Intensional {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for i in 0..ctx.len() {
            let ty = ctx.lookup(i).expect("index within telescope");
            if let Type::Id { left, right, .. } = self.normalize_type(&ty)? {
                out.push((*left, *right));
            }
        }
        Ok(out)
    }

    // -- well-formedness ----------------------------------------------------

    pub fn check_telescope(&self, ctx: &Telescope) -> Result<(), KernelError> {
        for index in 0..ctx.len() {
            let prefix = ctx.prefix(index);
            self.check_is_type(&prefix, &ctx.entries()[index].1)
                .map_err(|e| KernelError::IllFormedContext {
                    index,
                    source: Box::new(e),
                })?;
        }
        Ok(())
    }

    /// `Γ ⊢ A type`.
    pub fn check_is_type(&self, ctx: &Telescope, ty: &Type) -> Result<(), KernelError> {
        match ty {
            Type::Const { name, args } => {
                let params = match self.sig.get(name) {
                    Some(Decl::TypeConst { params, .. }) => params,
                    Some(_) => return Err(KernelError::NotAType(name.clone())),
                    None => return Err(KernelError::UnknownConstant(name.clone())),
                };
                if params.len() != args.len() {
                    return Err(KernelError::ArityMismatch {
                        name: name.clone(),
                        expected: params.len(),
                        found: args.len(),
                    });
                }
                for (i, arg) in args.iter().enumerate() {
                    let param_ty = params.entries()[i].1.instantiate(&args[..i]);
                    self.check_type(ctx, arg, &param_ty)?;
                }
                Ok(())
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
                self.check_is_type(ctx, domain)?;
                self.check_is_type(&ctx.extended(binder.clone(), (**domain).clone()), codomain)
            }
            Type::Id {
                underlying,
                left,
                right,
            } => {
                self.check_is_type(ctx, underlying)?;
                self.check_type(ctx, left, underlying)?;
                self.check_type(ctx, right, underlying)
            }
        }
    }

    // -- typing -------------------------------------------------------------

    /// `Γ ⊢ t : ?`.
    pub fn infer_type(&self, ctx: &Telescope, term: &Term) -> Result<Type, KernelError> {
        match term {
            Term::Var(i) => ctx.lookup(*i).ok_or(KernelError::UnboundVariable(*i)),
            Term::Const(c) => match self.sig.get(c) {
                Some(Decl::TermConst { ty, .. }) | Some(Decl::Def { ty, .. }) => Ok(ty.clone()),
                Some(Decl::TypeConst { .. }) => Err(KernelError::NotATerm(c.clone())),
                None => Err(KernelError::UnknownConstant(c.clone())),
            },
            Term::Lam {
                binder,
                domain,
                body,
            } => {
                self.check_is_type(ctx, domain)?;
                let inner = ctx.extended(binder.clone(), (**domain).clone());
                let cod = self.infer_type(&inner, body)?;
                Ok(Type::Pi {
                    binder: binder.clone(),
                    domain: domain.clone(),
                    codomain: Box::new(cod),
                })
            }
            Term::App(f, a) => {
                let fty = self.infer_type(ctx, f)?;
                match self.normalize_type(&fty)? {
                    Type::Pi {
                        domain, codomain, ..
                    } => {
                        self.check_type(ctx, a, &domain)?;
                        Ok(codomain.subst(0, a))
                    }
                    other => Err(KernelError::NotAFunction {
                        found: self.show_type(ctx, &other),
                    }),
                }
            }
            Term::Pair(a, b) => {
                let aty = self.infer_type(ctx, a)?;
                let bty = self.infer_type(ctx, b)?;
                Ok(Type::product(aty, bty))
            }
            Term::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => {
                let sty = self.infer_type(ctx, scrutinee)?;
                let sty = self.normalize_type(&sty)?;
                let Type::Sigma {
                    domain, codomain, ..
                } = &sty
                else {
                    return Err(KernelError::NotASigma {
                        found: self.show_type(ctx, &sty),
                    });
                };
                self.check_is_type(&ctx.extended(motive_binder.clone(), sty.clone()), motive)?;
                let inner = ctx
                    .extended(branch_binders[0].clone(), (**domain).clone())
                    .extended(branch_binders[1].clone(), (**codomain).clone());
                let branch_ty = motive
                    .shifted(1, 2)
                    .instantiate(&[Term::pair(Term::Var(1), Term::Var(0))]);
                self.check_type(&inner, branch, &branch_ty)?;
                Ok(motive.subst(0, scrutinee))
            }
            Term::Refl(a) => {
                let aty = self.infer_type(ctx, a)?;
                Ok(Type::id(aty, (**a).clone(), (**a).clone()))
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
                let pty = self.infer_type(ctx, path)?;
                let pty = self.normalize_type(&pty)?;
                let Type::Id {
                    underlying,
                    left: pl,
                    right: pr,
                } = &pty
                else {
                    return Err(KernelError::NotAnIdentity {
                        found: self.show_type(ctx, &pty),
                    });
                };
                self.check_type(ctx, left, underlying)?;
                self.check_type(ctx, right, underlying)?;
                for (given, expected) in [(left, pl), (right, pr)] {
                    if !self.terms_equal(ctx, given, expected)? {
                        return Err(KernelError::EndpointMismatch {
                            given: self.show_term(ctx, given),
                            expected: self.show_term(ctx, expected),
                        });
                    }
                }
                let a = (**underlying).clone();
                let motive_ctx = ctx
                    .extended(motive_binders[0].clone(), a.clone())
                    .extended(motive_binders[1].clone(), a.shifted(0, 1))
                    .extended(
                        motive_binders[2].clone(),
                        Type::id(a.shifted(0, 2), Term::Var(1), Term::Var(0)),
                    );
                self.check_is_type(&motive_ctx, motive)?;
                let base_ty = motive.shifted(3, 1).instantiate(&[
                    Term::Var(0),
                    Term::Var(0),
                    Term::refl(Term::Var(0)),
                ]);
                self.check_type(&ctx.extended(base_binder.clone(), a), base, &base_ty)?;
                Ok(motive.instantiate(&[(**left).clone(), (**right).clone(), (**path).clone()]))
            }
        }
    }

    /// `Γ ⊢ t : T`.
    pub fn check_type(
        &self,
        ctx: &Telescope,
        term: &Term,
        expected: &Type,
    ) -> Result<(), KernelError> {
        match term {
            Term::Lam {
                binder,
                domain,
                body,
            } => {
                if let Type::Pi {
                    domain: edom,
                    codomain,
                    ..
                } = self.normalize_type(expected)?
                {
                    self.check_is_type(ctx, domain)?;
                    self.expect_types_equal(ctx, &edom, domain)?;
                    let inner = ctx.extended(binder.clone(), (**domain).clone());
                    return self.check_type(&inner, body, &codomain);
                }
            }
            Term::Pair(a, b) => {
                if let Type::Sigma {
                    domain, codomain, ..
                } = self.normalize_type(expected)?
                {
                    self.check_type(ctx, a, &domain)?;
                    return self.check_type(ctx, b, &codomain.subst(0, a));
                }
            }
            Term::Refl(a) => {
                if let Type::Id {
                    underlying,
                    left,
                    right,
                } = self.normalize_type(expected)?
                {
                    self.check_type(ctx, a, &underlying)?;
                    if self.terms_equal(ctx, &left, a)? && self.terms_equal(ctx, &right, a)? {
                        return Ok(());
                    }
                    let found = Type::id(*underlying, (**a).clone(), (**a).clone());
                    return Err(KernelError::Mismatch {
                        expected: self.show_type(ctx, &self.normalize_type(expected)?),
                        found: self.show_type(ctx, &self.normalize_type(&found)?),
                    });
                }
            }
            _ => {}
        }
        let found = self.infer_type(ctx, term)?;
        self.expect_types_equal(ctx, expected, &found)
    }

    fn expect_types_equal(
        &self,
        ctx: &Telescope,
        expected: &Type,
        found: &Type,
    ) -> Result<(), KernelError> {
        if self.types_equal(ctx, expected, found)? {
            Ok(())
        } else {
            Err(KernelError::Mismatch {
                expected: self.show_type(ctx, &self.normalize_type(expected)?),
                found: self.show_type(ctx, &self.normalize_type(found)?),
            })
        }
    }

    // -- declarations -------------------------------------------------------

    /// Checks a declaration against the current signature. The caller adds it
    /// on success.
    pub fn check_decl(&self, decl: &Decl) -> Result<(), KernelError> {
        if self.sig.contains(decl.name()) {
            return Err(KernelError::Duplicate(decl.name().clone()));
        }
        let empty = Telescope::new();
        match decl {
            Decl::TypeConst { params, .. } => self.check_telescope(params),
            Decl::TermConst { ty, .. } => self.check_is_type(&empty, ty),
            Decl::Def { ty, body, .. } => {
                self.check_is_type(&empty, ty)?;
                self.check_type(&empty, body, ty)
            }
        }
    }

    fn show_type(&self, ctx: &Telescope, ty: &Type) -> String {
        print::type_to_string(&names(ctx), ty)
    }

    fn show_term(&self, ctx: &Telescope, t: &Term) -> String {
        print::term_to_string(&names(ctx), t)
    }
}

fn names(ctx: &Telescope) -> Vec<Ident> {
    ctx.entries().iter().map(|(n, _)| n.clone()).collect()
}

/// Structural comparison of normal forms with optional reflection.
struct Conv<'h> {
    hyps: &'h [(Term, Term)],
}

impl Conv<'_> {
    fn reflects(&self, a: &Term, b: &Term, depth: usize) -> bool {
        self.hyps.iter().any(|(l, r)| {
            let l = l.shifted(0, depth);
            let r = r.shifted(0, depth);
            (a == &l && b == &r) || (a == &r && b == &l)
        })
    }

    fn term(&self, a: &Term, b: &Term, depth: usize) -> bool {
        if a == b || self.reflects(a, b, depth) {
            return true;
        }
        match (a, b) {
            (
                Term::Lam {
                    domain: d1,
                    body: b1,
                    ..
                },
                Term::Lam {
                    domain: d2,
                    body: b2,
                    ..
                },
            ) => self.ty(d1, d2, depth) && self.term(b1, b2, depth + 1),
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                self.term(f1, f2, depth) && self.term(a1, a2, depth)
            }
            (Term::Refl(x), Term::Refl(y)) => self.term(x, y, depth),
            (
                Term::SigElim {
                    motive: m1,
                    branch: c1,
                    scrutinee: s1,
                    ..
                },
                Term::SigElim {
                    motive: m2,
                    branch: c2,
                    scrutinee: s2,
                    ..
                },
            ) => {
                self.ty(m1, m2, depth + 1)
                    && self.term(c1, c2, depth + 2)
                    && self.term(s1, s2, depth)
            }
            (
                Term::J {
                    motive: m1,
                    base: d1,
                    left: l1,
                    right: r1,
                    path: p1,
                    ..
                },
                Term::J {
                    motive: m2,
                    base: d2,
                    left: l2,
                    right: r2,
                    path: p2,
                    ..
                },
            ) => {
                self.ty(m1, m2, depth + 3)
                    && self.term(d1, d2, depth + 1)
                    && self.term(l1, l2, depth)
                    && self.term(r1, r2, depth)
                    && self.term(p1, p2, depth)
            }
            _ => false,
        }
    }

    fn ty(&self, a: &Type, b: &Type, depth: usize) -> bool {
        match (a, b) {
            (Type::Const { name: n1, args: a1 }, Type::Const { name: n2, args: a2 }) => {
                n1 == n2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| self.term(x, y, depth))
            }
            (
                Type::Pi {
                    domain: d1,
                    codomain: c1,
                    ..
                },
                Type::Pi {
                    domain: d2,
                    codomain: c2,
                    ..
                },
            )
            | (
                Type::Sigma {
                    domain: d1,
                    codomain: c1,
                    ..
                },
                Type::Sigma {
                    domain: d2,
                    codomain: c2,
                    ..
                },
            ) => self.ty(d1, d2, depth) && self.ty(c1, c2, depth + 1),
            (
                Type::Id {
                    underlying: u1,
                    left: l1,
                    right: r1,
                },
                Type::Id {
                    underlying: u2,
                    left: l2,
                    right: r2,
                },
            ) => self.ty(u1, u2, depth) && self.term(l1, l2, depth) && self.term(r1, r2, depth),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests;
