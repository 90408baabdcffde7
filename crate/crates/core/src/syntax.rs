//! Core abstract syntax.
//!
//! Two syntactic sorts: [`Type`] and [`Term`]. Variables are de Bruijn
//! indices (`Var(0)` is the innermost binder). Binder names are display hints
//! only; equality and hashing ignore them.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Interned-ish identifier used for constants and binder hints.
pub type Ident = Arc<str>;

pub fn ident(s: &str) -> Ident {
    Arc::from(s)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("shifting variable {index} by {amount} produces a negative index")]
    NegativeIndex { index: usize, amount: isize },
}

#[derive(Clone, Debug)]
pub enum Type {
    /// A declared type constant, applied to arguments when it is a family.
    Const { name: Ident, args: Vec<Term> },
    /// `Π (x : domain), codomain` where `codomain` binds one variable.
    Pi {
        binder: Ident,
        domain: Box<Type>,
        codomain: Box<Type>,
    },
    /// `Σ (x : domain), codomain` where `codomain` binds one variable.
    Sigma {
        binder: Ident,
        domain: Box<Type>,
        codomain: Box<Type>,
    },
    Id {
        underlying: Box<Type>,
        left: Box<Term>,
        right: Box<Term>,
    },
}

#[derive(Clone, Debug)]
pub enum Term {
    Var(usize),
    Const(Ident),
    Lam {
        binder: Ident,
        domain: Box<Type>,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    /// `σ(c, p)`: the motive binds `p : Σ`, the branch binds `x : A, y : B(x)`.
    SigElim {
        motive_binder: Ident,
        motive: Box<Type>,
        branch_binders: [Ident; 2],
        branch: Box<Term>,
        scrutinee: Box<Term>,
    },
    Refl(Box<Term>),
    /// `J(d, a, b, c)`: the motive binds `x, y, z`, the base binds `x`.
    J {
        motive_binders: [Ident; 3],
        motive: Box<Type>,
        base_binder: Ident,
        base: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
        path: Box<Term>,
    },
}

/// One of the four judgement forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgement {
    IsType(Telescope, Type),
    HasType(Telescope, Term, Type),
    EqTerm(Telescope, Term, Term, Type),
    EqType(Telescope, Type, Type),
}

impl Judgement {
    pub fn context(&self) -> &Telescope {
        match self {
            Judgement::IsType(ctx, _)
            | Judgement::HasType(ctx, _, _)
            | Judgement::EqTerm(ctx, _, _, _)
            | Judgement::EqType(ctx, _, _) => ctx,
        }
    }
}

/// An ordered context `x_1 : A_1, …, x_n : A_n`. Entry `k` lives in the
/// context formed by the entries before it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Telescope {
    entries: Vec<(Ident, Type)>,
}

impl Telescope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(Ident, Type)>) -> Self {
        Telescope { entries }
    }

    pub fn push(&mut self, name: impl Into<Ident>, ty: Type) {
        self.entries.push((name.into(), ty));
    }

    pub fn extended(&self, name: impl Into<Ident>, ty: Type) -> Telescope {
        let mut t = self.clone();
        t.push(name, ty);
        t
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Ident, Type)] {
        &self.entries
    }

    /// The type of `Var(index)`, weakened into the full context.
    pub fn lookup(&self, index: usize) -> Option<Type> {
        let n = self.entries.len();
        if index >= n {
            return None;
        }
        let (_, ty) = &self.entries[n - 1 - index];
        Some(ty.shifted(0, index + 1))
    }

    pub fn name(&self, index: usize) -> Option<&Ident> {
        let n = self.entries.len();
        (index < n).then(|| &self.entries[n - 1 - index].0)
    }

    pub fn prefix(&self, len: usize) -> Telescope {
        Telescope {
            entries: self.entries[..len].to_vec(),
        }
    }
}

// ---------------------------------------------------------------------------
// Equality and hashing up to binder names.

impl PartialEq for Type {
    fn eq(&self, other: &Self) -> bool {
        use Type::*;
        match (self, other) {
            (Const { name: a, args: xs }, Const { name: b, args: ys }) => a == b && xs == ys,
            (
                Pi {
                    domain: d1,
                    codomain: c1,
                    ..
                },
                Pi {
                    domain: d2,
                    codomain: c2,
                    ..
                },
            )
            | (
                Sigma {
                    domain: d1,
                    codomain: c1,
                    ..
                },
                Sigma {
                    domain: d2,
                    codomain: c2,
                    ..
                },
            ) => d1 == d2 && c1 == c2,
            (
                Id {
                    underlying: a1,
                    left: l1,
                    right: r1,
                },
                Id {
                    underlying: a2,
                    left: l2,
                    right: r2,
                },
            ) => a1 == a2 && l1 == l2 && r1 == r2,
            _ => false,
        }
    }
}

impl Eq for Type {}

impl Hash for Type {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Type::Const { name, args } => {
                name.hash(state);
                args.hash(state);
            }
            Type::Pi {
                domain, codomain, ..
            }
            | Type::Sigma {
                domain, codomain, ..
            } => {
                domain.hash(state);
                codomain.hash(state);
            }
            Type::Id {
                underlying,
                left,
                right,
            } => {
                underlying.hash(state);
                left.hash(state);
                right.hash(state);
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Var(i), Var(j)) => i == j,
            (Const(a), Const(b)) => a == b,
            (
                Lam {
                    domain: d1,
                    body: b1,
                    ..
                },
                Lam {
                    domain: d2,
                    body: b2,
                    ..
                },
            ) => d1 == d2 && b1 == b2,
            (App(f1, a1), App(f2, a2)) | (Pair(f1, a1), Pair(f2, a2)) => f1 == f2 && a1 == a2,
            (
                SigElim {
                    motive: m1,
                    branch: b1,
                    scrutinee: s1,
                    ..
                },
                SigElim {
                    motive: m2,
                    branch: b2,
                    scrutinee: s2,
                    ..
                },
            ) => m1 == m2 && b1 == b2 && s1 == s2,
            (Refl(a), Refl(b)) => a == b,
            (
                J {
                    motive: m1,
                    base: d1,
                    left: l1,
                    right: r1,
                    path: p1,
                    ..
                },
                J {
                    motive: m2,
                    base: d2,
                    left: l2,
                    right: r2,
                    path: p2,
                    ..
                },
            ) => m1 == m2 && d1 == d2 && l1 == l2 && r1 == r2 && p1 == p2,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Term::Var(i) => i.hash(state),
            Term::Const(c) => c.hash(state),
            Term::Lam { domain, body, .. } => {
                domain.hash(state);
                body.hash(state);
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Term::SigElim {
                motive,
                branch,
                scrutinee,
                ..
            } => {
                motive.hash(state);
                branch.hash(state);
                scrutinee.hash(state);
            }
            Term::Refl(a) => a.hash(state),
            Term::J {
                motive,
                base,
                left,
                right,
                path,
                ..
            } => {
                motive.hash(state);
                base.hash(state);
                left.hash(state);
                right.hash(state);
                path.hash(state);
            }
        }
    }
}

/// Alpha-equality. Under de Bruijn indices this is plain structural equality
/// with binder names erased.
pub fn syntactic_eq<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}

// ---------------------------------------------------------------------------
// Reindexing.

/// Generic traversal over free variables: `f(depth, index)` is called for
/// every variable occurrence with the number of binders crossed so far.
trait MapVars: Sized {
    fn map_vars<E>(
        &self,
        depth: usize,
        f: &mut impl FnMut(usize, usize) -> Result<Term, E>,
    ) -> Result<Self, E>;
}

impl MapVars for Type {
    fn map_vars<E>(
        &self,
        depth: usize,
        f: &mut impl FnMut(usize, usize) -> Result<Term, E>,
    ) -> Result<Self, E> {
        Ok(match self {
            Type::Const { name, args } => Type::Const {
                name: name.clone(),
                args: args
                    .iter()
                    .map(|a| a.map_vars(depth, f))
                    .collect::<Result<_, _>>()?,
            },
            Type::Pi {
                binder,
                domain,
                codomain,
            } => Type::Pi {
                binder: binder.clone(),
                domain: Box::new(domain.map_vars(depth, f)?),
                codomain: Box::new(codomain.map_vars(depth + 1, f)?),
            },
            Type::Sigma {
                binder,
                domain,
                codomain,
            } => Type::Sigma {
                binder: binder.clone(),
                domain: Box::new(domain.map_vars(depth, f)?),
                codomain: Box::new(codomain.map_vars(depth + 1, f)?),
            },
            Type::Id {
                underlying,
                left,
                right,
            } => Type::Id {
                underlying: Box::new(underlying.map_vars(depth, f)?),
                left: Box::new(left.map_vars(depth, f)?),
                right: Box::new(right.map_vars(depth, f)?),
            },
        })
    }
}

impl MapVars for Term {
    fn map_vars<E>(
        &self,
        depth: usize,
        f: &mut impl FnMut(usize, usize) -> Result<Term, E>,
    ) -> Result<Self, E> {
        Ok(match self {
            Term::Var(i) => f(depth, *i)?,
            Term::Const(c) => Term::Const(c.clone()),
            Term::Lam {
                binder,
                domain,
                body,
            } => Term::Lam {
                binder: binder.clone(),
                domain: Box::new(domain.map_vars(depth, f)?),
                body: Box::new(body.map_vars(depth + 1, f)?),
            },
            Term::App(a, b) => Term::App(
                Box::new(a.map_vars(depth, f)?),
                Box::new(b.map_vars(depth, f)?),
            ),
            Term::Pair(a, b) => Term::Pair(
                Box::new(a.map_vars(depth, f)?),
                Box::new(b.map_vars(depth, f)?),
            ),
            Term::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => Term::SigElim {
                motive_binder: motive_binder.clone(),
                motive: Box::new(motive.map_vars(depth + 1, f)?),
                branch_binders: branch_binders.clone(),
                branch: Box::new(branch.map_vars(depth + 2, f)?),
                scrutinee: Box::new(scrutinee.map_vars(depth, f)?),
            },
            Term::Refl(a) => Term::Refl(Box::new(a.map_vars(depth, f)?)),
            Term::J {
                motive_binders,
                motive,
                base_binder,
                base,
                left,
                right,
                path,
            } => Term::J {
                motive_binders: motive_binders.clone(),
                motive: Box::new(motive.map_vars(depth + 3, f)?),
                base_binder: base_binder.clone(),
                base: Box::new(base.map_vars(depth + 1, f)?),
                left: Box::new(left.map_vars(depth, f)?),
                right: Box::new(right.map_vars(depth, f)?),
                path: Box::new(path.map_vars(depth, f)?),
            },
        })
    }
}

/// Operations shared by both sorts.
pub trait Expr: Sized + Clone {
    /// Add `amount` to every free index `≥ cutoff`.
    fn shift(&self, cutoff: usize, amount: isize) -> Result<Self, SyntaxError>;

    /// Replace `Var(index)` by `replacement` and close the gap it leaves.
    fn subst(&self, index: usize, replacement: &Term) -> Self;

    /// Does `Var(index)` occur free?
    fn mentions(&self, index: usize) -> bool;

    /// Infallible upward shift.
    fn shifted(&self, cutoff: usize, amount: usize) -> Self {
        self.shift(cutoff, amount as isize)
            .expect("upward shift cannot underflow")
    }

    /// `self` lives under `args.len()` binders above some context Γ; the
    /// arguments live in Γ. Substitutes all of them at once (outermost first
    /// in `args`).
    fn instantiate(&self, args: &[Term]) -> Self {
        let k = args.len();
        let mut out = self.clone();
        for (i, arg) in args.iter().enumerate().rev() {
            out = out.subst(0, &arg.shifted(0, i));
        }
        debug_assert!(k == args.len());
        out
    }
}

macro_rules! impl_expr {
    ($t:ty) => {
        impl Expr for $t {
            fn shift(&self, cutoff: usize, amount: isize) -> Result<Self, SyntaxError> {
                self.map_vars(0, &mut |depth, i| {
                    if i < cutoff + depth {
                        Ok(Term::Var(i))
                    } else {
                        let j = i as isize + amount;
                        if j < (cutoff + depth) as isize {
                            Err(SyntaxError::NegativeIndex { index: i, amount })
                        } else {
                            Ok(Term::Var(j as usize))
                        }
                    }
                })
            }

            fn subst(&self, index: usize, replacement: &Term) -> Self {
                let res: Result<Self, std::convert::Infallible> =
                    self.map_vars(0, &mut |depth, i| {
                        Ok(if i < depth {
                            Term::Var(i)
                        } else if i == index + depth {
                            replacement.shifted(0, depth)
                        } else if i > index + depth {
                            Term::Var(i - 1)
                        } else {
                            Term::Var(i)
                        })
                    });
                match res {
                    Ok(v) => v,
                    Err(e) => match e {},
                }
            }

            fn mentions(&self, index: usize) -> bool {
                let mut found = false;
                let _ = self.map_vars(0, &mut |depth, i| -> Result<Term, ()> {
                    if i == index + depth {
                        found = true;
                    }
                    Ok(Term::Var(i))
                });
                found
            }
        }
    };
}

impl_expr!(Type);
impl_expr!(Term);

// ---------------------------------------------------------------------------
// Convenience constructors used by term-building code.

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Const {
            name: ident(name),
            args: Vec::new(),
        }
    }

    pub fn family(name: &str, args: Vec<Term>) -> Type {
        Type::Const {
            name: ident(name),
            args,
        }
    }

    pub fn pi(binder: &str, domain: Type, codomain: Type) -> Type {
        Type::Pi {
            binder: ident(binder),
            domain: Box::new(domain),
            codomain: Box::new(codomain),
        }
    }

    /// Non-dependent function type; `codomain` is given in the outer context.
    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::pi("_", domain, codomain.shifted(0, 1))
    }

    pub fn sigma(binder: &str, domain: Type, codomain: Type) -> Type {
        Type::Sigma {
            binder: ident(binder),
            domain: Box::new(domain),
            codomain: Box::new(codomain),
        }
    }

    pub fn product(left: Type, right: Type) -> Type {
        Type::sigma("_", left, right.shifted(0, 1))
    }

    pub fn id(underlying: Type, left: Term, right: Term) -> Type {
        Type::Id {
            underlying: Box::new(underlying),
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(ident(name))
    }

    pub fn lam(binder: &str, domain: Type, body: Term) -> Term {
        Term::Lam {
            binder: ident(binder),
            domain: Box::new(domain),
            body: Box::new(body),
        }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn refl(a: Term) -> Term {
        Term::Refl(Box::new(a))
    }

    pub fn sig_elim(motive: (&str, Type), branch: ([&str; 2], Term), scrutinee: Term) -> Term {
        Term::SigElim {
            motive_binder: ident(motive.0),
            motive: Box::new(motive.1),
            branch_binders: [ident(branch.0[0]), ident(branch.0[1])],
            branch: Box::new(branch.1),
            scrutinee: Box::new(scrutinee),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn j(
        motive_binders: [&str; 3],
        motive: Type,
        base_binder: &str,
        base: Term,
        left: Term,
        right: Term,
        path: Term,
    ) -> Term {
        Term::J {
            motive_binders: motive_binders.map(ident),
            motive: Box::new(motive),
            base_binder: ident(base_binder),
            base: Box::new(base),
            left: Box::new(left),
            right: Box::new(right),
            path: Box::new(path),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Lam { domain, body, .. } => 1 + domain.size() + body.size(),
            Term::App(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::SigElim {
                motive,
                branch,
                scrutinee,
                ..
            } => 1 + motive.size() + branch.size() + scrutinee.size(),
            Term::Refl(a) => 1 + a.size(),
            Term::J {
                motive,
                base,
                left,
                right,
                path,
                ..
            } => 1 + motive.size() + base.size() + left.size() + right.size() + path.size(),
        }
    }

    /// Splits `f a1 … an` into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }
}

impl Type {
    pub fn size(&self) -> usize {
        match self {
            Type::Const { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            Type::Pi {
                domain, codomain, ..
            }
            | Type::Sigma {
                domain, codomain, ..
            } => 1 + domain.size() + codomain.size(),
            Type::Id {
                underlying,
                left,
                right,
            } => 1 + underlying.size() + left.size() + right.size(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::print::term_to_string(&[], self))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::print::type_to_string(&[], self))
    }
}
