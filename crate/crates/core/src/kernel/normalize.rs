//! Normalization under the three conversion rules plus unfolding of
//! definitions. Substitution-based and fuel-bounded.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use crate::signature::Signature;
use crate::syntax::{Expr, Ident, Term, Type};

use super::KernelError;

pub struct Normalizer<'s> {
    sig: &'s Signature,
    budget: u64,
    used: Cell<u64>,
    defs: RefCell<HashMap<Ident, Term>>,
}

impl<'s> Normalizer<'s> {
    pub fn new(sig: &'s Signature, budget: u64) -> Self {
        Normalizer {
            sig,
            budget,
            used: Cell::new(0),
            defs: RefCell::new(HashMap::new()),
        }
    }

    /// Steps consumed so far.
    pub fn steps(&self) -> u64 {
        self.used.get()
    }

    pub fn reset(&self) {
        self.used.set(0);
    }

    fn tick(&self) -> Result<(), KernelError> {
        let n = self.used.get() + 1;
        if n > self.budget {
            return Err(KernelError::FuelExhausted {
                budget: self.budget,
            });
        }
        self.used.set(n);
        Ok(())
    }

    fn unfold(&self, name: &Ident) -> Result<Option<Term>, KernelError> {
        if let Some(t) = self.defs.borrow().get(name) {
            return Ok(Some(t.clone()));
        }
        let Some(body) = self.sig.definition(name) else {
            return Ok(None);
        };
        let nf = self.term(body)?;
        self.defs.borrow_mut().insert(name.clone(), nf.clone());
        Ok(Some(nf))
    }

    pub fn term(&self, t: &Term) -> Result<Term, KernelError> {
        Ok(match t {
            Term::Var(i) => Term::Var(*i),
            Term::Const(c) => match self.unfold(c)? {
                Some(body) => {
                    self.tick()?;
                    body
                }
                None => Term::Const(c.clone()),
            },
            Term::Lam {
                binder,
                domain,
                body,
            } => Term::Lam {
                binder: binder.clone(),
                domain: Box::new(self.ty(domain)?),
                body: Box::new(self.term(body)?),
            },
            Term::App(f, a) => {
                let f = self.term(f)?;
                let a = self.term(a)?;
                match f {
                    Term::Lam { body, .. } => {
                        self.tick()?;
                        self.term(&body.subst(0, &a))?
                    }
                    f => Term::App(Box::new(f), Box::new(a)),
                }
            }
            Term::Pair(a, b) => Term::Pair(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => {
                let s = self.term(scrutinee)?;
                match s {
                    Term::Pair(a, b) => {
                        self.tick()?;
                        self.term(&branch.instantiate(&[*a, *b]))?
                    }
                    s => Term::SigElim {
                        motive_binder: motive_binder.clone(),
                        motive: Box::new(self.ty(motive)?),
                        branch_binders: branch_binders.clone(),
                        branch: Box::new(self.term(branch)?),
                        scrutinee: Box::new(s),
                    },
                }
            }
            Term::Refl(a) => Term::Refl(Box::new(self.term(a)?)),
            Term::J {
                motive_binders,
                motive,
                base_binder,
                base,
                left,
                right,
                path,
            } => {
                let p = self.term(path)?;
                let l = self.term(left)?;
                match p {
                    Term::Refl(_) => {
                        self.tick()?;
                        self.term(&base.instantiate(&[l]))?
                    }
                    p => Term::J {
                        motive_binders: motive_binders.clone(),
                        motive: Box::new(self.ty(motive)?),
                        base_binder: base_binder.clone(),
                        base: Box::new(self.term(base)?),
                        left: Box::new(l),
                        right: Box::new(self.term(right)?),
                        path: Box::new(p),
                    },
                }
            }
        })
    }

    pub fn ty(&self, t: &Type) -> Result<Type, KernelError> {
        Ok(match t {
            Type::Const { name, args } => Type::Const {
                name: name.clone(),
                args: args
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<Result<_, _>>()?,
            },
            Type::Pi {
                binder,
                domain,
                codomain,
            } => Type::Pi {
                binder: binder.clone(),
                domain: Box::new(self.ty(domain)?),
                codomain: Box::new(self.ty(codomain)?),
            },
            Type::Sigma {
                binder,
                domain,
                codomain,
            } => Type::Sigma {
                binder: binder.clone(),
                domain: Box::new(self.ty(domain)?),
                codomain: Box::new(self.ty(codomain)?),
            },
            Type::Id {
                underlying,
                left,
                right,
            } => Type::Id {
                underlying: Box::new(self.ty(underlying)?),
                left: Box::new(self.term(left)?),
                right: Box::new(self.term(right)?),
            },
        })
    }
}

/// Which redex a single reduction step contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost-outermost (normal order).
    Outermost,
    /// Rightmost-innermost: arguments before the redex that contains them.
    Innermost,
}

/// Contracts exactly one redex (a conversion rule or a definition unfolding),
/// or returns `None` if the term is normal.
pub fn step_term(sig: &Signature, t: &Term, strategy: Strategy) -> Option<Term> {
    if strategy == Strategy::Outermost {
        if let Some(r) = contract_head(sig, t) {
            return Some(r);
        }
    }
    let inner = match t {
        Term::Var(_) => None,
        Term::Const(_) => None,
        Term::Lam {
            binder,
            domain,
            body,
        } => {
            let parts = [Part::Ty(domain), Part::Tm(body)];
            step_parts(sig, &parts, strategy).map(|mut v| {
                let body = v.pop().unwrap().into_term();
                let domain = v.pop().unwrap().into_type();
                Term::Lam {
                    binder: binder.clone(),
                    domain: Box::new(domain),
                    body: Box::new(body),
                }
            })
        }
        Term::App(f, a) => step_parts(sig, &[Part::Tm(f), Part::Tm(a)], strategy).map(|mut v| {
            let a = v.pop().unwrap().into_term();
            let f = v.pop().unwrap().into_term();
            Term::app(f, a)
        }),
        Term::Pair(a, b) => step_parts(sig, &[Part::Tm(a), Part::Tm(b)], strategy).map(|mut v| {
            let b = v.pop().unwrap().into_term();
            let a = v.pop().unwrap().into_term();
            Term::pair(a, b)
        }),
        Term::Refl(a) => step_term(sig, a, strategy).map(Term::refl),
        Term::SigElim {
            motive_binder,
            motive,
            branch_binders,
            branch,
            scrutinee,
        } => step_parts(
            sig,
            &[Part::Ty(motive), Part::Tm(branch), Part::Tm(scrutinee)],
            strategy,
        )
        .map(|mut v| {
            let scrutinee = v.pop().unwrap().into_term();
            let branch = v.pop().unwrap().into_term();
            let motive = v.pop().unwrap().into_type();
            Term::SigElim {
                motive_binder: motive_binder.clone(),
                motive: Box::new(motive),
                branch_binders: branch_binders.clone(),
                branch: Box::new(branch),
                scrutinee: Box::new(scrutinee),
            }
        }),
        Term::J {
            motive_binders,
            motive,
            base_binder,
            base,
            left,
            right,
            path,
        } => step_parts(
            sig,
            &[
                Part::Ty(motive),
                Part::Tm(base),
                Part::Tm(left),
                Part::Tm(right),
                Part::Tm(path),
            ],
            strategy,
        )
        .map(|mut v| {
            let path = v.pop().unwrap().into_term();
            let right = v.pop().unwrap().into_term();
            let left = v.pop().unwrap().into_term();
            let base = v.pop().unwrap().into_term();
            let motive = v.pop().unwrap().into_type();
            Term::J {
                motive_binders: motive_binders.clone(),
                motive: Box::new(motive),
                base_binder: base_binder.clone(),
                base: Box::new(base),
                left: Box::new(left),
                right: Box::new(right),
                path: Box::new(path),
            }
        }),
    };
    if inner.is_some() {
        return inner;
    }
    if strategy == Strategy::Innermost {
        return contract_head(sig, t);
    }
    None
}

pub fn step_type(sig: &Signature, t: &Type, strategy: Strategy) -> Option<Type> {
    match t {
        Type::Const { name, args } => {
            let parts: Vec<Part> = args.iter().map(Part::Tm).collect();
            step_parts(sig, &parts, strategy).map(|v| Type::Const {
                name: name.clone(),
                args: v.into_iter().map(Owned::into_term).collect(),
            })
        }
        Type::Pi {
            binder,
            domain,
            codomain,
        } => step_parts(sig, &[Part::Ty(domain), Part::Ty(codomain)], strategy).map(|mut v| {
            let c = v.pop().unwrap().into_type();
            let d = v.pop().unwrap().into_type();
            Type::Pi {
                binder: binder.clone(),
                domain: Box::new(d),
                codomain: Box::new(c),
            }
        }),
        Type::Sigma {
            binder,
            domain,
            codomain,
        } => step_parts(sig, &[Part::Ty(domain), Part::Ty(codomain)], strategy).map(|mut v| {
            let c = v.pop().unwrap().into_type();
            let d = v.pop().unwrap().into_type();
            Type::Sigma {
                binder: binder.clone(),
                domain: Box::new(d),
                codomain: Box::new(c),
            }
        }),
        Type::Id {
            underlying,
            left,
            right,
        } => step_parts(
            sig,
            &[Part::Ty(underlying), Part::Tm(left), Part::Tm(right)],
            strategy,
        )
        .map(|mut v| {
            let r = v.pop().unwrap().into_term();
            let l = v.pop().unwrap().into_term();
            let a = v.pop().unwrap().into_type();
            Type::id(a, l, r)
        }),
    }
}

fn contract_head(sig: &Signature, t: &Term) -> Option<Term> {
    match t {
        Term::Const(c) => sig.definition(c).cloned(),
        Term::App(f, a) => match f.as_ref() {
            Term::Lam { body, .. } => Some(body.subst(0, a)),
            _ => None,
        },
        Term::SigElim {
            branch, scrutinee, ..
        } => match scrutinee.as_ref() {
            Term::Pair(a, b) => Some(branch.instantiate(&[(**a).clone(), (**b).clone()])),
            _ => None,
        },
        Term::J {
            base, left, path, ..
        } => match path.as_ref() {
            Term::Refl(_) => Some(base.instantiate(&[(**left).clone()])),
            _ => None,
        },
        _ => None,
    }
}

enum Part<'a> {
    Ty(&'a Type),
    Tm(&'a Term),
}

enum Owned {
    Ty(Type),
    Tm(Term),
}

impl Owned {
    fn into_term(self) -> Term {
        match self {
            Owned::Tm(t) => t,
            Owned::Ty(_) => unreachable!("sort mismatch in step_parts"),
        }
    }

    fn into_type(self) -> Type {
        match self {
            Owned::Ty(t) => t,
            Owned::Tm(_) => unreachable!("sort mismatch in step_parts"),
        }
    }
}

/// Steps the leftmost reducible part (outermost) or the rightmost one
/// (innermost) and returns all parts with that one replaced.
fn step_parts(sig: &Signature, parts: &[Part<'_>], strategy: Strategy) -> Option<Vec<Owned>> {
    let order: Vec<usize> = match strategy {
        Strategy::Outermost => (0..parts.len()).collect(),
        Strategy::Innermost => (0..parts.len()).rev().collect(),
    };
    for i in order {
        let stepped = match &parts[i] {
            Part::Ty(t) => step_type(sig, t, strategy).map(Owned::Ty),
            Part::Tm(t) => step_term(sig, t, strategy).map(Owned::Tm),
        };
        if let Some(s) = stepped {
            let mut out: Vec<Owned> = parts
                .iter()
                .map(|p| match p {
                    Part::Ty(t) => Owned::Ty((*t).clone()),
                    Part::Tm(t) => Owned::Tm((*t).clone()),
                })
                .collect();
            out[i] = s;
            return Some(out);
        }
    }
    None
}

/// Iterates single steps to a normal form.
pub fn normalize_by_steps(
    sig: &Signature,
    t: &Term,
    strategy: Strategy,
    budget: u64,
) -> Result<Term, KernelError> {
    let mut cur = t.clone();
    for _ in 0..budget {
        match step_term(sig, &cur, strategy) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(KernelError::FuelExhausted { budget })
}
