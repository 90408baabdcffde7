//! The groupoid model: every type denotes a split fibration over its
//! context, every term a section.
//!
//! A type `T` in context `Γ` gives, for each object `γ` of `⟦Γ⟧`, a finite
//! groupoid `T(γ)`, and for each context arrow `f : γ → γ'` a functor
//! `T_f : T(γ) → T(γ')`, strictly functorial in `f`. A term `t : T` gives a
//! point `t(γ) ∈ T(γ)` and an arrow `t_f : T_f(t γ) → t γ'`.
//!
//! Base types denote one fixed groupoid. A family over a parameter context
//! `Δ` denotes, over `δ`, the discrete groupoid of arrows of `⟦Δ⟧` into `δ`,
//! reindexed by post-composition. `Id(A, l, r)` over `γ` is the discrete
//! groupoid `Hom_{A(γ)}(l γ, r γ)`; Σ is the Grothendieck construction and
//! Π the groupoid of sections with natural transformations.

use std::cell::{Cell, OnceCell, RefCell};
use std::rc::Rc;

use rustc_hash::FxHashMap as HashMap;

use thiserror::Error;

use crate::groupoid::FiniteGroupoid;
use crate::ir::{Ctx, Tm, Ty, TyKind};
use crate::value::{Arr, ArrKind, CArr, Val};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("no value assigned to constant {0}")]
    Unassigned(String),
    #[error("evaluation budget exhausted")]
    Budget,
    #[error("ill-formed value: {0}")]
    Defect(String),
}

pub type R<T> = Result<T, ModelError>;

fn defect<T>(msg: impl Into<String>) -> R<T> {
    Err(ModelError::Defect(msg.into()))
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// A fiber `T(γ)` with its objects enumerated in a fixed order.
pub struct Fiber {
    pub objects: Vec<Val>,
    index: HashMap<Val, usize>,
    arrows: OnceCell<Rc<Arrows>>,
}

pub struct Arrows {
    pub list: Vec<Arr>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    index: HashMap<Arr, usize>,
}

impl Fiber {
    pub fn position(&self, v: &Val) -> Option<usize> {
        self.index.get(v).copied()
    }
}

impl Arrows {
    pub fn position(&self, a: &Arr) -> Option<usize> {
        self.index.get(a).copied()
    }
}

/// Precomputed data about the domain of a Π type over one `γ`.
struct PiDomain {
    fiber: Rc<Fiber>,
    arrows: Rc<Arrows>,
    /// `γ, x` for each domain object `x`.
    envs: Vec<Vec<Val>>,
    /// `(id_γ, α)` for each domain arrow `α`.
    moves: Vec<CArr>,
    identity: Vec<bool>,
    /// `(j2, j1, k)` with `α_j2 ∘ α_j1 = α_k`, listed under each of the three.
    triples: Vec<Vec<(usize, usize, usize)>>,
}

pub struct Model {
    groupoid: Rc<FiniteGroupoid>,
    consts: HashMap<String, (Rc<Ty>, Val)>,
    defs: HashMap<String, (Rc<Ty>, Rc<Tm>)>,
    def_vals: RefCell<HashMap<String, Val>>,
    fibers: RefCell<HashMap<(u64, Vec<Val>), Rc<Fiber>>>,
    domains: RefCell<HashMap<(u64, Vec<Val>), Rc<PiDomain>>>,
    budget: Cell<u64>,
    memo: Memo,
}

/// Memo tables. Terms are keyed by address; every term evaluated by a
/// model is owned by structures that outlive it.
#[derive(Default)]
struct Memo {
    eval: RefCell<HashMap<(usize, Vec<Val>), Val>>,
    path: RefCell<HashMap<(usize, CArr), Arr>>,
    reindex: RefCell<HashMap<(u64, CArr, Val), Val>>,
    reindex_arr: RefCell<HashMap<(u64, CArr, Arr), Arr>>,
    ctx_inv: RefCell<HashMap<(u64, CArr), CArr>>,
    const_id: RefCell<HashMap<String, Arr>>,
    pi_id: RefCell<HashMap<(u64, Vec<Val>, Val), Arr>>,
    ty_mask: RefCell<HashMap<u64, Rc<Mask>>>,
    tm_mask: RefCell<HashMap<usize, Rc<Mask>>>,
}

/// The context components a type or term depends on: its free variables,
/// closed under the dependencies of their types. Everything else is erased
/// from memo keys, so work is shared across the irrelevant components.
struct Mask {
    keep: Vec<bool>,
    full: bool,
}

impl Mask {
    fn new(ctx: &[Rc<Ty>], mut keep: Vec<bool>) -> Mask {
        for i in (0..ctx.len()).rev() {
            if keep[i] {
                ty_fv(&ctx[i], &mut keep);
            }
        }
        let full = keep.iter().all(|&k| k);
        Mask { keep, full }
    }

    fn env(&self, env: &[Val]) -> Vec<Val> {
        if self.full || env.len() != self.keep.len() {
            return env.to_vec();
        }
        env.iter()
            .zip(&self.keep)
            .map(|(v, &k)| if k { v.clone() } else { Val::Erased })
            .collect()
    }

    fn carr(&self, f: &CArr) -> CArr {
        if self.full || f.len() != self.keep.len() {
            return f.clone();
        }
        let pick = |v: &[Val]| self.env(v);
        let arrs = f
            .arrs
            .iter()
            .zip(&self.keep)
            .map(|(a, &k)| if k { a.clone() } else { Arr::erased() })
            .collect();
        CArr::new(pick(&f.src), pick(&f.tgt), arrs)
    }
}

fn mark(out: &mut [bool], level: usize) {
    if let Some(b) = out.get_mut(level) {
        *b = true;
    }
}

/// Marks the free variables of `t`, as de Bruijn levels of its context.
fn ty_fv(t: &Ty, out: &mut [bool]) {
    let n = t.ctx.len();
    match &t.kind {
        TyKind::Base(_) => {}
        TyKind::Fam { args, .. } => args.iter().for_each(|a| tm_fv(a, n, out)),
        TyKind::Pi(a, b) | TyKind::Sigma(a, b) => {
            ty_fv(a, out);
            ty_fv(b, out);
        }
        TyKind::Id(a, l, r) => {
            ty_fv(a, out);
            tm_fv(l, n, out);
            tm_fv(r, n, out);
        }
    }
}

/// Marks the free variables of `t` in a context of length `n`. Levels bound
/// inside `t` are at least `n` and fall outside `out`.
fn tm_fv(t: &Tm, n: usize, out: &mut [bool]) {
    match t {
        Tm::Var(i) => {
            if let Some(l) = n.checked_sub(i + 1) {
                mark(out, l);
            }
        }
        Tm::Const(_) => {}
        Tm::Lam { ty, body } => {
            ty_fv(ty, out);
            tm_fv(body, n + 1, out);
        }
        Tm::App { pi, fun, arg } => {
            ty_fv(pi, out);
            tm_fv(fun, n, out);
            tm_fv(arg, n, out);
        }
        Tm::Pair { ty, a, b } => {
            ty_fv(ty, out);
            tm_fv(a, n, out);
            tm_fv(b, n, out);
        }
        Tm::SigElim {
            sigma,
            motive,
            branch,
            scrut,
        } => {
            ty_fv(sigma, out);
            ty_fv(motive, out);
            tm_fv(branch, n + 2, out);
            tm_fv(scrut, n, out);
        }
        Tm::Refl { ty, a } => {
            ty_fv(ty, out);
            tm_fv(a, n, out);
        }
        Tm::J {
            ty,
            motive,
            base,
            left,
            right,
            path,
        } => {
            ty_fv(ty, out);
            ty_fv(motive, out);
            tm_fv(base, n + 1, out);
            tm_fv(left, n, out);
            tm_fv(right, n, out);
            tm_fv(path, n, out);
        }
    }
}

/// The context of a non-variable, non-constant term, read off its annotation.
fn tm_ctx(t: &Tm) -> Option<&Rc<Ctx>> {
    match t {
        Tm::Var(_) | Tm::Const(_) => None,
        Tm::Lam { ty, .. } | Tm::Pair { ty, .. } | Tm::Refl { ty, .. } | Tm::J { ty, .. } => Some(&ty.ctx),
        Tm::App { pi, .. } => Some(&pi.ctx),
        Tm::SigElim { sigma, .. } => Some(&sigma.ctx),
    }
}

fn push(env: &[Val], x: Val) -> Vec<Val> {
    let mut v = env.to_vec();
    v.push(x);
    v
}

fn as_pair(v: &Val) -> R<(Val, Val)> {
    match v {
        Val::Pair(p) => Ok((p.0.clone(), p.1.clone())),
        other => defect(format!("expected a pair, found {other:?}")),
    }
}

fn as_pair_arr(a: &Arr) -> R<(Arr, Arr)> {
    match &a.kind {
        ArrKind::Pair(p) => Ok((p.0.clone(), p.1.clone())),
        other => defect(format!("expected a pair of arrows, found {other:?}")),
    }
}

fn as_path(v: &Val) -> R<Arr> {
    match v {
        Val::Path(p) => Ok((**p).clone()),
        other => defect(format!("expected an identity proof, found {other:?}")),
    }
}

fn as_nat(a: &Arr) -> R<&[Arr]> {
    match &a.kind {
        ArrKind::Nat(c) => Ok(&c.data),
        other => defect(format!("expected a natural transformation, found {other:?}")),
    }
}

impl Model {
    pub fn new(groupoid: Rc<FiniteGroupoid>, budget: u64) -> Self {
        Model {
            groupoid,
            consts: HashMap::default(),
            defs: HashMap::default(),
            def_vals: RefCell::new(HashMap::default()),
            fibers: RefCell::new(HashMap::default()),
            domains: RefCell::new(HashMap::default()),
            budget: Cell::new(budget),
            memo: Memo::default(),
        }
    }

    pub fn groupoid(&self) -> &Rc<FiniteGroupoid> {
        &self.groupoid
    }

    /// Assigns a closed value to a postulated constant of closed type `ty`.
    pub fn assign(&mut self, name: &str, ty: Rc<Ty>, val: Val) {
        self.consts.insert(name.to_owned(), (ty, val));
    }

    pub fn define(&mut self, name: &str, ty: Rc<Ty>, body: Rc<Tm>) {
        self.defs.insert(name.to_owned(), (ty, body));
    }

    pub fn set_budget(&self, budget: u64) {
        self.budget.set(budget);
    }

    pub fn remaining_budget(&self) -> u64 {
        self.budget.get()
    }

    fn tick(&self) -> R<()> {
        let b = self.budget.get();
        if b == 0 {
            return Err(ModelError::Budget);
        }
        self.budget.set(b - 1);
        Ok(())
    }

    fn ty_mask(&self, t: &Ty) -> Rc<Mask> {
        if let Some(m) = self.memo.ty_mask.borrow().get(&t.id()) {
            return m.clone();
        }
        let mut keep = vec![false; t.ctx.len()];
        ty_fv(t, &mut keep);
        let m = Rc::new(Mask::new(&t.ctx, keep));
        self.memo.ty_mask.borrow_mut().insert(t.id(), m.clone());
        m
    }

    fn tm_mask(&self, t: &Tm, ctx: &Ctx) -> Rc<Mask> {
        let key = t as *const Tm as usize;
        if let Some(m) = self.memo.tm_mask.borrow().get(&key) {
            return m.clone();
        }
        let mut keep = vec![false; ctx.len()];
        tm_fv(t, ctx.len(), &mut keep);
        let m = Rc::new(Mask::new(ctx, keep));
        self.memo.tm_mask.borrow_mut().insert(key, m.clone());
        m
    }

    fn constant(&self, c: &str) -> R<(Rc<Ty>, Val)> {
        if let Some((ty, v)) = self.consts.get(c) {
            return Ok((ty.clone(), v.clone()));
        }
        let Some((ty, body)) = self.defs.get(c) else {
            return Err(ModelError::Unassigned(c.to_owned()));
        };
        if let Some(v) = self.def_vals.borrow().get(c) {
            return Ok((ty.clone(), v.clone()));
        }
        let v = self.eval(body, &[])?;
        self.def_vals.borrow_mut().insert(c.to_owned(), v.clone());
        Ok((ty.clone(), v))
    }

    // -- fibers ---------------------------------------------------------------

    pub fn fiber(&self, t: &Rc<Ty>, env: &[Val]) -> R<Rc<Fiber>> {
        let key = (t.id(), env.to_vec());
        if let Some(f) = self.fibers.borrow().get(&key) {
            return Ok(f.clone());
        }
        let objects = self.objects_upto(t, env, usize::MAX)?;
        let index = objects.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let f = Rc::new(Fiber {
            objects,
            index,
            arrows: OnceCell::new(),
        });
        self.fibers.borrow_mut().insert(key, f.clone());
        Ok(f)
    }

    pub fn arrows(&self, t: &Rc<Ty>, env: &[Val]) -> R<Rc<Arrows>> {
        let fib = self.fiber(t, env)?;
        if let Some(a) = fib.arrows.get() {
            return Ok(a.clone());
        }
        let (mut list, mut src, mut tgt) = (Vec::new(), Vec::new(), Vec::new());
        for (i, x) in fib.objects.iter().enumerate() {
            for (j, y) in fib.objects.iter().enumerate() {
                for a in self.hom(t, env, x, y)? {
                    list.push(a);
                    src.push(i);
                    tgt.push(j);
                }
            }
        }
        let index = list.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let a = Rc::new(Arrows {
            list,
            src,
            tgt,
            index,
        });
        let _ = fib.arrows.set(a.clone());
        Ok(a)
    }

    fn obj_index(&self, t: &Rc<Ty>, env: &[Val], v: &Val) -> R<usize> {
        match self.fiber(t, env)?.position(v) {
            Some(i) => Ok(i),
            None => defect(format!("{v:?} is not an object of {t:?}")),
        }
    }

    fn arr_index(&self, t: &Rc<Ty>, env: &[Val], a: &Arr) -> R<usize> {
        match self.arrows(t, env)?.position(a) {
            Some(i) => Ok(i),
            None => defect(format!("{a:?} is not an arrow of {t:?}")),
        }
    }

    /// Objects of `T(γ)` in canonical order, stopping after `limit`.
    pub fn objects_upto(&self, t: &Rc<Ty>, env: &[Val], limit: usize) -> R<Vec<Val>> {
        self.tick()?;
        let mut out = Vec::new();
        match &t.kind {
            TyKind::Base(_) => {
                out.extend((0..self.groupoid.object_count()).take(limit).map(Val::Obj));
            }
            TyKind::Fam { params, args, .. } => {
                let delta = args.iter().map(|a| self.eval(a, env)).collect::<R<Vec<_>>>()?;
                for c in self.ctx_hom_in(params, &delta, limit)? {
                    out.push(Val::Fam(Rc::new(c)));
                }
            }
            TyKind::Sigma(a, b) => {
                for x in self.fiber(a, env)?.objects.iter() {
                    if out.len() >= limit {
                        break;
                    }
                    for y in self.objects_upto(b, &push(env, x.clone()), limit - out.len())? {
                        out.push(Val::pair(x.clone(), y));
                    }
                }
            }
            TyKind::Id(a, l, r) => {
                let (l, r) = (self.eval(l, env)?, self.eval(r, env)?);
                for p in self.hom(a, env, &l, &r)?.into_iter().take(limit) {
                    out.push(Val::Path(Rc::new(p)));
                }
            }
            TyKind::Pi(a, b) => out = self.sections(t, a, b, env, limit)?,
        }
        Ok(out)
    }

    pub fn hom(&self, t: &Rc<Ty>, env: &[Val], x: &Val, y: &Val) -> R<Vec<Arr>> {
        self.tick()?;
        Ok(match &t.kind {
            TyKind::Base(_) => {
                let (Val::Obj(i), Val::Obj(j)) = (x, y) else {
                    return defect("base object expected");
                };
                self.groupoid
                    .hom(*i, *j)
                    .iter()
                    .map(|&k| Arr {
                        src: x.clone(),
                        tgt: y.clone(),
                        kind: ArrKind::Base(k),
                    })
                    .collect()
            }
            TyKind::Fam { .. } | TyKind::Id(..) => {
                if x == y {
                    vec![Arr::unit(x.clone())]
                } else {
                    vec![]
                }
            }
            TyKind::Sigma(a, b) => {
                let ((x1, x2), (y1, y2)) = (as_pair(x)?, as_pair(y)?);
                let idg = self.ctx_id(&t.ctx, env)?;
                let envy = push(env, y1.clone());
                let mut out = Vec::new();
                for al in self.hom(a, env, &x1, &y1)? {
                    let moved = self.reindex(b, &idg.extended(x1.clone(), al.clone()), &x2)?;
                    for be in self.hom(b, &envy, &moved, &y2)? {
                        out.push(Arr {
                            src: x.clone(),
                            tgt: y.clone(),
                            kind: ArrKind::Pair(Rc::new((al.clone(), be))),
                        });
                    }
                }
                out
            }
            TyKind::Pi(_, b) => self.transformations(t, b, env, x, y)?,
        })
    }

    // -- groupoid structure of fibers ----------------------------------------

    pub fn id(&self, t: &Rc<Ty>, env: &[Val], x: &Val) -> R<Arr> {
        if x.is_erased() {
            return Ok(Arr::erased());
        }
        self.tick()?;
        let kind = match &t.kind {
            TyKind::Base(_) => {
                let Val::Obj(o) = x else {
                    return defect("base object expected");
                };
                ArrKind::Base(self.groupoid.id(*o))
            }
            TyKind::Fam { .. } | TyKind::Id(..) => ArrKind::Unit,
            TyKind::Sigma(a, b) => {
                let (x1, x2) = as_pair(x)?;
                let i1 = self.id(a, env, &x1)?;
                let i2 = self.id(b, &push(env, x1), &x2)?;
                ArrKind::Pair(Rc::new((i1, i2)))
            }
            TyKind::Pi(a, b) => {
                let Val::Fun(s) = x else {
                    return defect("function expected");
                };
                let key = (t.id(), self.ty_mask(t).env(env), x.clone());
                if let Some(a) = self.memo.pi_id.borrow().get(&key) {
                    return Ok(a.clone());
                }
                let fa = self.fiber(a, env)?;
                let comps = fa
                    .objects
                    .iter()
                    .zip(s.points())
                    .map(|(o, p)| self.id(b, &push(env, o.clone()), p))
                    .collect::<R<Vec<_>>>()?;
                let out = Arr::nat(x.clone(), x.clone(), comps);
                self.memo.pi_id.borrow_mut().insert(key, out.clone());
                return Ok(out);
            }
        };
        Ok(Arr {
            src: x.clone(),
            tgt: x.clone(),
            kind,
        })
    }

    /// `g ∘ f`.
    pub fn comp(&self, t: &Rc<Ty>, env: &[Val], g: &Arr, f: &Arr) -> R<Arr> {
        if f.src.is_erased() && g.src.is_erased() {
            return Ok(Arr::erased());
        }
        self.tick()?;
        if f.tgt != g.src {
            return defect(format!("composing non-composable arrows in {t:?}: {g:?} after {f:?}"));
        }
        let kind = match (&t.kind, &g.kind, &f.kind) {
            (TyKind::Base(_), ArrKind::Base(y), ArrKind::Base(x)) => ArrKind::Base(self.groupoid.comp(*y, *x)),
            (TyKind::Fam { .. } | TyKind::Id(..), ArrKind::Unit, ArrKind::Unit) => ArrKind::Unit,
            (TyKind::Sigma(a, b), ArrKind::Pair(gp), ArrKind::Pair(fp)) => {
                let (a2, b2) = (&gp.0, &gp.1);
                let (a1, b1) = (&fp.0, &fp.1);
                let ca = self.comp(a, env, a2, a1)?;
                let mv = self.ctx_id(&t.ctx, env)?.extended(a2.src.clone(), a2.clone());
                let cb = self.comp(b, &push(env, a2.tgt.clone()), b2, &self.reindex_arr(b, &mv, b1)?)?;
                ArrKind::Pair(Rc::new((ca, cb)))
            }
            (TyKind::Pi(a, b), ArrKind::Nat(gc), ArrKind::Nat(fc)) => {
                let fa = self.fiber(a, env)?;
                let comps = fa
                    .objects
                    .iter()
                    .zip(gc.data.iter().zip(fc.data.iter()))
                    .map(|(o, (y, x))| self.comp(b, &push(env, o.clone()), y, x))
                    .collect::<R<Vec<_>>>()?;
                return Ok(Arr::nat(f.src.clone(), g.tgt.clone(), comps));
            }
            _ => return defect(format!("arrows of the wrong shape for {t:?}")),
        };
        Ok(Arr {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            kind,
        })
    }

    pub fn inv(&self, t: &Rc<Ty>, env: &[Val], f: &Arr) -> R<Arr> {
        if f.src.is_erased() {
            return Ok(Arr::erased());
        }
        self.tick()?;
        let kind = match (&t.kind, &f.kind) {
            (TyKind::Base(_), ArrKind::Base(x)) => ArrKind::Base(self.groupoid.inv(*x)),
            (TyKind::Fam { .. } | TyKind::Id(..), ArrKind::Unit) => ArrKind::Unit,
            (TyKind::Sigma(a, b), ArrKind::Pair(p)) => {
                let (al, be) = (&p.0, &p.1);
                let ial = self.inv(a, env, al)?;
                let mv = self.ctx_id(&t.ctx, env)?.extended(al.tgt.clone(), ial.clone());
                let ibe = self.inv(b, &push(env, al.src.clone()), &self.reindex_arr(b, &mv, be)?)?;
                ArrKind::Pair(Rc::new((ial, ibe)))
            }
            (TyKind::Pi(a, b), ArrKind::Nat(c)) => {
                let fa = self.fiber(a, env)?;
                let comps = fa
                    .objects
                    .iter()
                    .zip(c.data.iter())
                    .map(|(o, x)| self.inv(b, &push(env, o.clone()), x))
                    .collect::<R<Vec<_>>>()?;
                return Ok(Arr::nat(f.tgt.clone(), f.src.clone(), comps));
            }
            _ => return defect(format!("arrow of the wrong shape for {t:?}")),
        };
        Ok(Arr {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            kind,
        })
    }

    // -- reindexing -----------------------------------------------------------

    fn args_arrow(&self, args: &[Rc<Tm>], f: &CArr) -> R<CArr> {
        let mut c = CArr::empty();
        for a in args {
            let src = self.eval(a, &f.src)?;
            c = c.extended(src, self.path(a, f)?);
        }
        Ok(c)
    }

    pub fn reindex(&self, t: &Rc<Ty>, f: &CArr, x: &Val) -> R<Val> {
        if x.is_erased() {
            return Ok(Val::Erased);
        }
        let key = (t.id(), self.ty_mask(t).carr(f), x.clone());
        if let Some(v) = self.memo.reindex.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.reindex_uncached(t, &key.1, x)?;
        self.memo.reindex.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// `T_f(x)` for `f : γ → γ'` and `x ∈ T(γ)`.
    fn reindex_uncached(&self, t: &Rc<Ty>, f: &CArr, x: &Val) -> R<Val> {
        self.tick()?;
        match &t.kind {
            TyKind::Base(_) => Ok(x.clone()),
            TyKind::Fam { params, args, .. } => {
                let Val::Fam(phi) = x else {
                    return defect("family point expected");
                };
                let af = self.args_arrow(args, f)?;
                Ok(Val::Fam(Rc::new(self.ctx_comp(params, &af, phi)?)))
            }
            TyKind::Sigma(a, b) => {
                let (x1, x2) = as_pair(x)?;
                let y1 = self.reindex(a, f, &x1)?;
                let mv = f.extended(x1, self.id(a, &f.tgt, &y1)?);
                Ok(Val::pair(y1, self.reindex(b, &mv, &x2)?))
            }
            TyKind::Id(a, l, r) => {
                let p = as_path(x)?;
                let lf = self.path(l, f)?;
                let rf = self.path(r, f)?;
                let ap = self.reindex_arr(a, f, &p)?;
                let linv = self.inv(a, &f.tgt, &lf)?;
                let q = self.comp(a, &f.tgt, &rf, &self.comp(a, &f.tgt, &ap, &linv)?)?;
                Ok(Val::Path(Rc::new(q)))
            }
            TyKind::Pi(a, b) => {
                let Val::Fun(s) = x else {
                    return defect("function expected");
                };
                let fin = self.ctx_inv(&t.ctx, f)?;
                let src_fiber = self.fiber(a, &f.src)?;
                let src_arrows = self.arrows(a, &f.src)?;
                let tgt_fiber = self.fiber(a, &f.tgt)?;
                let tgt_arrows = self.arrows(a, &f.tgt)?;
                let mut points = Vec::with_capacity(tgt_fiber.objects.len());
                for y in &tgt_fiber.objects {
                    let x0 = self.reindex(a, &fin, y)?;
                    let Some(i) = src_fiber.position(&x0) else {
                        return defect("reindexed domain point missing");
                    };
                    let mv = f.extended(x0, self.id(a, &f.tgt, y)?);
                    points.push(self.reindex(b, &mv, &s.points()[i])?);
                }
                let mut paths = Vec::with_capacity(tgt_arrows.list.len());
                for al in &tgt_arrows.list {
                    let al0 = self.reindex_arr(a, &fin, al)?;
                    let Some(i) = src_arrows.position(&al0) else {
                        return defect("reindexed domain arrow missing");
                    };
                    let mv = f.extended(al0.tgt.clone(), self.id(a, &f.tgt, &al.tgt)?);
                    paths.push(self.reindex_arr(b, &mv, &s.paths()[i])?);
                }
                Ok(Val::table(points, paths))
            }
        }
    }

    pub fn reindex_arr(&self, t: &Rc<Ty>, f: &CArr, al: &Arr) -> R<Arr> {
        if al.src.is_erased() {
            return Ok(Arr::erased());
        }
        let key = (t.id(), self.ty_mask(t).carr(f), al.clone());
        if let Some(v) = self.memo.reindex_arr.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.reindex_arr_uncached(t, &key.1, al)?;
        self.memo.reindex_arr.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// `T_f(α)`.
    fn reindex_arr_uncached(&self, t: &Rc<Ty>, f: &CArr, al: &Arr) -> R<Arr> {
        self.tick()?;
        match &t.kind {
            TyKind::Base(_) => Ok(al.clone()),
            TyKind::Fam { .. } | TyKind::Id(..) => Ok(Arr::unit(self.reindex(t, f, &al.src)?)),
            TyKind::Sigma(a, b) => {
                let (a1, b1) = as_pair_arr(al)?;
                let a2 = self.reindex_arr(a, f, &a1)?;
                let mv = f.extended(a1.tgt.clone(), self.id(a, &f.tgt, &a2.tgt)?);
                let b2 = self.reindex_arr(b, &mv, &b1)?;
                Ok(Arr {
                    src: self.reindex(t, f, &al.src)?,
                    tgt: self.reindex(t, f, &al.tgt)?,
                    kind: ArrKind::Pair(Rc::new((a2, b2))),
                })
            }
            TyKind::Pi(a, b) => {
                let comps = as_nat(al)?;
                let fin = self.ctx_inv(&t.ctx, f)?;
                let src_fiber = self.fiber(a, &f.src)?;
                let tgt_fiber = self.fiber(a, &f.tgt)?;
                let mut out = Vec::with_capacity(tgt_fiber.objects.len());
                for y in &tgt_fiber.objects {
                    let x0 = self.reindex(a, &fin, y)?;
                    let Some(i) = src_fiber.position(&x0) else {
                        return defect("reindexed domain point missing");
                    };
                    let mv = f.extended(x0, self.id(a, &f.tgt, y)?);
                    out.push(self.reindex_arr(b, &mv, &comps[i])?);
                }
                Ok(Arr::nat(
                    self.reindex(t, f, &al.src)?,
                    self.reindex(t, f, &al.tgt)?,
                    out,
                ))
            }
        }
    }

    // -- Π --------------------------------------------------------------------

    fn domain(&self, pi: &Rc<Ty>, a: &Rc<Ty>, env: &[Val]) -> R<Rc<PiDomain>> {
        let key = (pi.id(), env.to_vec());
        if let Some(d) = self.domains.borrow().get(&key) {
            return Ok(d.clone());
        }
        let fiber = self.fiber(a, env)?;
        let arrows = self.arrows(a, env)?;
        let envs = fiber.objects.iter().map(|x| push(env, x.clone())).collect();
        let idg = self.ctx_id(&pi.ctx, env)?;
        let moves = arrows
            .list
            .iter()
            .map(|al| idg.extended(al.src.clone(), al.clone()))
            .collect();
        let mut identity = Vec::new();
        for (j, al) in arrows.list.iter().enumerate() {
            identity.push(arrows.src[j] == arrows.tgt[j] && *al == self.id(a, env, &al.src)?);
        }
        let m = arrows.list.len();
        let mut triples = vec![Vec::new(); m];
        for j1 in 0..m {
            for j2 in 0..m {
                if arrows.tgt[j1] != arrows.src[j2] {
                    continue;
                }
                self.tick()?;
                let c = self.comp(a, env, &arrows.list[j2], &arrows.list[j1])?;
                let Some(k) = arrows.position(&c) else {
                    return defect("composite outside the enumerated arrows");
                };
                for x in [j1, j2, k] {
                    if !triples[x].contains(&(j2, j1, k)) {
                        triples[x].push((j2, j1, k));
                    }
                }
            }
        }
        let d = Rc::new(PiDomain {
            fiber,
            arrows,
            envs,
            moves,
            identity,
            triples,
        });
        self.domains.borrow_mut().insert(key, d.clone());
        Ok(d)
    }

    /// Sections of `B` over `A(γ)`: a point over each object and a coherent
    /// arrow over each arrow, found by backtracking in canonical order.
    fn sections(&self, pi: &Rc<Ty>, a: &Rc<Ty>, b: &Rc<Ty>, env: &[Val], limit: usize) -> R<Vec<Val>> {
        let d = self.domain(pi, a, env)?;
        let n = d.fiber.objects.len();
        let mut steps = Vec::new();
        for k in 0..n {
            steps.push(None);
            for j in 0..d.arrows.list.len() {
                if d.arrows.src[j].max(d.arrows.tgt[j]) == k {
                    steps.push(Some(j));
                }
            }
        }
        let mut search = SectionSearch {
            m: self,
            b,
            d: &d,
            steps,
            points: vec![None; n],
            paths: vec![None; d.arrows.list.len()],
            out: Vec::new(),
            limit,
            next_obj: 0,
        };
        search.run(0)?;
        Ok(search.out)
    }

    fn transformations(&self, pi: &Rc<Ty>, b: &Rc<Ty>, env: &[Val], s: &Val, t: &Val) -> R<Vec<Arr>> {
        let TyKind::Pi(a, _) = &pi.kind else { unreachable!() };
        let (Val::Fun(st), Val::Fun(tt)) = (s, t) else {
            return defect("function expected");
        };
        let d = self.domain(pi, a, env)?;
        let n = d.fiber.objects.len();
        let mut cands = Vec::with_capacity(n);
        for k in 0..n {
            cands.push(self.hom(b, &d.envs[k], &st.points()[k], &tt.points()[k])?);
        }
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in 0..d.arrows.list.len() {
            if !d.identity[j] {
                checks[d.arrows.src[j].max(d.arrows.tgt[j])].push(j);
            }
        }
        let mut out = Vec::new();
        let mut comps: Vec<Option<Arr>> = vec![None; n];
        self.nat_rec(b, &d, st.paths(), tt.paths(), &cands, &checks, 0, &mut comps, s, t, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn nat_rec(
        &self,
        b: &Rc<Ty>,
        d: &PiDomain,
        sp: &[Arr],
        tp: &[Arr],
        cands: &[Vec<Arr>],
        checks: &[Vec<usize>],
        k: usize,
        comps: &mut Vec<Option<Arr>>,
        s: &Val,
        t: &Val,
        out: &mut Vec<Arr>,
    ) -> R<()> {
        if k == comps.len() {
            out.push(Arr::nat(s.clone(), t.clone(), comps.iter().map(|c| c.clone().unwrap()).collect()));
            return Ok(());
        }
        'cand: for c in &cands[k] {
            self.tick()?;
            comps[k] = Some(c.clone());
            for &j in &checks[k] {
                let (x, y) = (d.arrows.src[j], d.arrows.tgt[j]);
                let (cx, cy) = (comps[x].as_ref().unwrap(), comps[y].as_ref().unwrap());
                let lhs = self.comp(b, &d.envs[y], &tp[j], &self.reindex_arr(b, &d.moves[j], cx)?)?;
                let rhs = self.comp(b, &d.envs[y], cy, &sp[j])?;
                if lhs != rhs {
                    continue 'cand;
                }
            }
            self.nat_rec(b, d, sp, tp, cands, checks, k + 1, comps, s, t, out)?;
        }
        comps[k] = None;
        Ok(())
    }

    fn apply(&self, pi: &Rc<Ty>, env: &[Val], f: &Val, x: &Val) -> R<Val> {
        let TyKind::Pi(a, _) = &pi.kind else { unreachable!() };
        let Val::Fun(s) = f else {
            return defect("applying a non-function value");
        };
        Ok(s.points()[self.obj_index(a, env, x)?].clone())
    }

    fn apply_arr(&self, pi: &Rc<Ty>, env: &[Val], f: &Val, al: &Arr) -> R<Arr> {
        let TyKind::Pi(a, _) = &pi.kind else { unreachable!() };
        let Val::Fun(s) = f else {
            return defect("applying a non-function value");
        };
        Ok(s.paths()[self.arr_index(a, env, al)?].clone())
    }

    // -- membership -----------------------------------------------------------

    pub fn is_object(&self, t: &Rc<Ty>, env: &[Val], x: &Val) -> R<bool> {
        self.tick()?;
        Ok(match (&t.kind, x) {
            (TyKind::Base(_), Val::Obj(o)) => *o < self.groupoid.object_count(),
            (TyKind::Fam { .. }, Val::Fam(_)) => self.fiber(t, env)?.position(x).is_some(),
            (TyKind::Sigma(a, b), Val::Pair(p)) => {
                self.is_object(a, env, &p.0)? && self.is_object(b, &push(env, p.0.clone()), &p.1)?
            }
            (TyKind::Id(a, l, r), Val::Path(p)) => {
                p.src == self.eval(l, env)? && p.tgt == self.eval(r, env)? && self.is_arrow(a, env, p)?
            }
            (TyKind::Pi(a, b), Val::Fun(s)) => {
                let d = self.domain(t, a, env)?;
                if s.points().len() != d.fiber.objects.len() || s.paths().len() != d.arrows.list.len() {
                    return Ok(false);
                }
                for (k, p) in s.points().iter().enumerate() {
                    if !self.is_object(b, &d.envs[k], p)? {
                        return Ok(false);
                    }
                }
                for (j, p) in s.paths().iter().enumerate() {
                    let (x, y) = (d.arrows.src[j], d.arrows.tgt[j]);
                    if p.src != self.reindex(b, &d.moves[j], &s.points()[x])?
                        || p.tgt != s.points()[y]
                        || !self.is_arrow(b, &d.envs[y], p)?
                    {
                        return Ok(false);
                    }
                    if d.identity[j] && *p != self.id(b, &d.envs[y], &s.points()[y])? {
                        return Ok(false);
                    }
                    for &(j2, j1, k) in &d.triples[j] {
                        if j != k {
                            continue;
                        }
                        let y2 = d.arrows.tgt[j2];
                        let moved = self.reindex_arr(b, &d.moves[j2], &s.paths()[j1])?;
                        if s.paths()[k] != self.comp(b, &d.envs[y2], &s.paths()[j2], &moved)? {
                            return Ok(false);
                        }
                    }
                }
                true
            }
            _ => false,
        })
    }

    pub fn is_arrow(&self, t: &Rc<Ty>, env: &[Val], al: &Arr) -> R<bool> {
        self.tick()?;
        if !self.is_object(t, env, &al.src)? || !self.is_object(t, env, &al.tgt)? {
            return Ok(false);
        }
        Ok(match (&t.kind, &al.kind) {
            (TyKind::Base(_), ArrKind::Base(k)) => {
                let (Val::Obj(x), Val::Obj(y)) = (&al.src, &al.tgt) else {
                    return Ok(false);
                };
                *k < self.groupoid.arrow_count() && self.groupoid.src(*k) == *x && self.groupoid.tgt(*k) == *y
            }
            (TyKind::Fam { .. } | TyKind::Id(..), ArrKind::Unit) => al.src == al.tgt,
            (TyKind::Sigma(a, b), ArrKind::Pair(p)) => {
                let ((x1, x2), (y1, y2)) = (as_pair(&al.src)?, as_pair(&al.tgt)?);
                let (a1, b1) = (&p.0, &p.1);
                let mv = self.ctx_id(&t.ctx, env)?.extended(x1.clone(), a1.clone());
                a1.src == x1
                    && a1.tgt == y1
                    && self.is_arrow(a, env, a1)?
                    && b1.src == self.reindex(b, &mv, &x2)?
                    && b1.tgt == y2
                    && self.is_arrow(b, &push(env, y1), b1)?
            }
            (TyKind::Pi(a, b), ArrKind::Nat(c)) => {
                let (Val::Fun(s), Val::Fun(u)) = (&al.src, &al.tgt) else {
                    return Ok(false);
                };
                let d = self.domain(t, a, env)?;
                if c.data.len() != d.fiber.objects.len() {
                    return Ok(false);
                }
                for (k, x) in c.data.iter().enumerate() {
                    if x.src != s.points()[k] || x.tgt != u.points()[k] || !self.is_arrow(b, &d.envs[k], x)? {
                        return Ok(false);
                    }
                }
                for j in 0..d.arrows.list.len() {
                    let (x, y) = (d.arrows.src[j], d.arrows.tgt[j]);
                    let lhs = self.comp(b, &d.envs[y], &u.paths()[j], &self.reindex_arr(b, &d.moves[j], &c.data[x])?)?;
                    let rhs = self.comp(b, &d.envs[y], &c.data[y], &s.paths()[j])?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
                true
            }
            _ => false,
        })
    }

    // -- contexts -------------------------------------------------------------

    pub fn ctx_id(&self, ctx: &[Rc<Ty>], env: &[Val]) -> R<CArr> {
        let mut c = CArr::empty();
        for (i, t) in ctx.iter().enumerate() {
            c = c.extended(env[i].clone(), self.id(t, &env[..i], &env[i])?);
        }
        Ok(c)
    }

    /// `g ∘ f`.
    pub fn ctx_comp(&self, ctx: &[Rc<Ty>], g: &CArr, f: &CArr) -> R<CArr> {
        if f.tgt != g.src {
            return defect("composing non-composable context arrows");
        }
        let mut arrs = Vec::with_capacity(ctx.len());
        for (i, t) in ctx.iter().enumerate() {
            let moved = self.reindex_arr(t, &g.prefix(i), &f.arrs[i])?;
            arrs.push(self.comp(t, &g.tgt[..i], &g.arrs[i], &moved)?);
        }
        Ok(CArr::new(f.src.clone(), g.tgt.clone(), arrs))
    }

    pub fn ctx_inv(&self, ctx: &[Rc<Ty>], f: &CArr) -> R<CArr> {
        let Some(last) = ctx.last() else {
            return Ok(CArr::empty());
        };
        let key = (last.id(), f.clone());
        if let Some(v) = self.memo.ctx_inv.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.ctx_inv_uncached(ctx, f)?;
        self.memo.ctx_inv.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn ctx_inv_uncached(&self, ctx: &[Rc<Ty>], f: &CArr) -> R<CArr> {
        let mut out = CArr::empty();
        for (i, t) in ctx.iter().enumerate() {
            let moved = self.reindex_arr(t, &out, &f.arrs[i])?;
            let a = self.inv(t, &f.src[..i], &moved)?;
            out = out.extended(f.tgt[i].clone(), a);
        }
        Ok(out)
    }

    /// Objects of the context groupoid in canonical order, up to `limit`.
    pub fn ctx_objects(&self, ctx: &[Rc<Ty>], limit: usize) -> R<Vec<Vec<Val>>> {
        let mut out = Vec::new();
        self.ctx_objects_rec(ctx, &mut Vec::new(), limit, &mut out)?;
        Ok(out)
    }

    fn ctx_objects_rec(&self, ctx: &[Rc<Ty>], env: &mut Vec<Val>, limit: usize, out: &mut Vec<Vec<Val>>) -> R<()> {
        if out.len() >= limit {
            return Ok(());
        }
        let i = env.len();
        if i == ctx.len() {
            out.push(env.clone());
            return Ok(());
        }
        for x in self.fiber(&ctx[i], env)?.objects.iter() {
            env.push(x.clone());
            self.ctx_objects_rec(ctx, env, limit, out)?;
            env.pop();
            if out.len() >= limit {
                break;
            }
        }
        Ok(())
    }

    /// Arrows of the context groupoid out of `src`, for entry `i`: the
    /// candidate last components over a prefix arrow `cur`.
    pub fn out_candidates(&self, ctx: &[Rc<Ty>], cur: &CArr, src: &[Val]) -> R<Vec<Arr>> {
        let i = cur.len();
        let y = self.reindex(&ctx[i], cur, &src[i])?;
        let mut out = Vec::new();
        for x in self.fiber(&ctx[i], &cur.tgt)?.objects.iter() {
            out.extend(self.hom(&ctx[i], &cur.tgt, &y, x)?);
        }
        Ok(out)
    }

    pub fn ctx_hom_out(&self, ctx: &[Rc<Ty>], src: &[Val], limit: usize) -> R<Vec<CArr>> {
        let mut out = Vec::new();
        self.out_rec(ctx, src, CArr::empty(), limit, &mut out)?;
        Ok(out)
    }

    fn out_rec(&self, ctx: &[Rc<Ty>], src: &[Val], cur: CArr, limit: usize, out: &mut Vec<CArr>) -> R<()> {
        if cur.len() == ctx.len() {
            out.push(cur);
            return Ok(());
        }
        for a in self.out_candidates(ctx, &cur, src)? {
            if out.len() >= limit {
                break;
            }
            let i = cur.len();
            self.out_rec(ctx, src, cur.extended(src[i].clone(), a), limit, out)?;
        }
        Ok(())
    }

    /// All arrows of the context groupoid with target `tgt`, up to `limit`.
    pub fn ctx_hom_in(&self, ctx: &[Rc<Ty>], tgt: &[Val], limit: usize) -> R<Vec<CArr>> {
        let mut out = Vec::new();
        self.in_rec(ctx, tgt, CArr::empty(), limit, &mut out)?;
        Ok(out)
    }

    fn in_rec(&self, ctx: &[Rc<Ty>], tgt: &[Val], cur: CArr, limit: usize, out: &mut Vec<CArr>) -> R<()> {
        let i = cur.len();
        if i == ctx.len() {
            out.push(cur);
            return Ok(());
        }
        for x in self.fiber(&ctx[i], &cur.src)?.objects.iter() {
            let y = self.reindex(&ctx[i], &cur, x)?;
            for a in self.hom(&ctx[i], &tgt[..i], &y, &tgt[i])? {
                if out.len() >= limit {
                    return Ok(());
                }
                self.in_rec(ctx, tgt, cur.extended(x.clone(), a), limit, out)?;
            }
        }
        Ok(())
    }

    /// All arrows `src → tgt` of the context groupoid.
    pub fn ctx_hom(&self, ctx: &[Rc<Ty>], src: &[Val], tgt: &[Val]) -> R<Vec<CArr>> {
        let mut level = vec![CArr::empty()];
        for (i, t) in ctx.iter().enumerate() {
            let mut next = Vec::new();
            for cur in level {
                let y = self.reindex(t, &cur, &src[i])?;
                for a in self.hom(t, &tgt[..i], &y, &tgt[i])? {
                    next.push(cur.extended(src[i].clone(), a));
                }
            }
            level = next;
        }
        Ok(level)
    }

    // -- terms ----------------------------------------------------------------

    pub fn eval(&self, t: &Tm, env: &[Val]) -> R<Val> {
        let Some(ctx) = tm_ctx(t) else {
            return self.eval_uncached(t, env);
        };
        let env = self.tm_mask(t, ctx).env(env);
        let key = (t as *const Tm as usize, env);
        if let Some(v) = self.memo.eval.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.eval_uncached(t, &key.1)?;
        self.memo.eval.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// The point `t(γ)`.
    fn eval_uncached(&self, t: &Tm, env: &[Val]) -> R<Val> {
        self.tick()?;
        match t {
            Tm::Var(i) => match env.len().checked_sub(i + 1) {
                Some(k) => Ok(env[k].clone()),
                None => defect(format!("unbound variable #{i}")),
            },
            Tm::Const(c) => Ok(self.constant(c)?.1),
            Tm::Lam { ty, body } => {
                let TyKind::Pi(a, _) = &ty.kind else {
                    return defect("abstraction without a Π type");
                };
                let d = self.domain(ty, a, env)?;
                let points = d
                    .envs
                    .iter()
                    .map(|e| self.eval(body, e))
                    .collect::<R<Vec<_>>>()?;
                let paths = d
                    .moves
                    .iter()
                    .map(|mv| self.path(body, mv))
                    .collect::<R<Vec<_>>>()?;
                Ok(Val::table(points, paths))
            }
            Tm::App { pi, fun, arg } => {
                let f = self.eval(fun, env)?;
                let x = self.eval(arg, env)?;
                self.apply(pi, env, &f, &x)
            }
            Tm::Pair { a, b, .. } => Ok(Val::pair(self.eval(a, env)?, self.eval(b, env)?)),
            Tm::SigElim { branch, scrut, .. } => {
                let (x, y) = as_pair(&self.eval(scrut, env)?)?;
                let mut e = env.to_vec();
                e.push(x);
                e.push(y);
                self.eval(branch, &e)
            }
            Tm::Refl { ty, a } => {
                let x = self.eval(a, env)?;
                Ok(Val::Path(Rc::new(self.id(ty, env, &x)?)))
            }
            Tm::J {
                ty,
                motive,
                base,
                left,
                right,
                path,
            } => {
                let l = self.eval(left, env)?;
                let r = self.eval(right, env)?;
                let p = as_path(&self.eval(path, env)?)?;
                self.j_point(ty, motive, base, env, &l, &r, &p)
            }
        }
    }

    /// The canonical diagonal filler at `(γ, l, r, p)`: the base case at
    /// `(γ, l)` transported along the arrow from `(γ, l, l, refl l)`.
    #[allow(clippy::too_many_arguments)]
    pub fn j_point(&self, a: &Rc<Ty>, motive: &Rc<Ty>, base: &Tm, env: &[Val], l: &Val, r: &Val, p: &Arr) -> R<Val> {
        let d = self.eval(base, &push(env, l.clone()))?;
        let kappa = self.j_arrow(a, motive, env, l, r, p)?;
        self.reindex(motive, &kappa, &d)
    }

    /// The filler's action on an arrow `(f, lf, ·, ·)` of `Γ.A.A.Id` ending at
    /// `(f.tgt, lf.tgt, r2, p2)` and starting at a point with left end `l1`.
    #[allow(clippy::too_many_arguments)]
    pub fn j_path(
        &self,
        a: &Rc<Ty>,
        motive: &Rc<Ty>,
        base: &Tm,
        f: &CArr,
        l1: &Val,
        lf: &Arr,
        r2: &Val,
        p2: &Arr,
    ) -> R<Arr> {
        let kappa = self.j_arrow(a, motive, &f.tgt, &lf.tgt, r2, p2)?;
        let df = self.path(base, &f.extended(l1.clone(), lf.clone()))?;
        self.reindex_arr(motive, &kappa, &df)
    }

    /// `(id_γ, id_l, p, ·) : (γ, l, l, refl l) → (γ, l, r, p)` in the context
    /// of a J motive.
    pub fn j_arrow(&self, a: &Rc<Ty>, motive: &Rc<Ty>, env: &[Val], l: &Val, r: &Val, p: &Arr) -> R<CArr> {
        let mctx = &motive.ctx;
        let n = env.len();
        if p.src != *l || p.tgt != *r {
            return defect("J path endpoints disagree with its arguments");
        }
        let c = self
            .ctx_id(&mctx[..n], env)?
            .extended(l.clone(), self.id(a, env, l)?)
            .extended(l.clone(), p.clone());
        let refl = Val::Path(Rc::new(self.id(a, env, l)?));
        let moved = self.reindex(&mctx[n + 2], &c, &refl)?;
        if moved != Val::Path(Rc::new(p.clone())) {
            return defect("transport of refl along the J square is not the path");
        }
        Ok(c.extended(refl, Arr::unit(moved)))
    }

    pub fn path(&self, t: &Tm, f: &CArr) -> R<Arr> {
        let Some(ctx) = tm_ctx(t) else {
            return self.path_uncached(t, f);
        };
        let key = (t as *const Tm as usize, self.tm_mask(t, ctx).carr(f));
        if let Some(v) = self.memo.path.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.path_uncached(t, &key.1)?;
        self.memo.path.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// The arrow `t_f : T_f(t γ) → t γ'` for `f : γ → γ'`.
    fn path_uncached(&self, t: &Tm, f: &CArr) -> R<Arr> {
        self.tick()?;
        match t {
            Tm::Var(i) => match f.len().checked_sub(i + 1) {
                Some(k) => Ok(f.arrs[k].clone()),
                None => defect(format!("unbound variable #{i}")),
            },
            Tm::Const(c) => {
                if let Some(a) = self.memo.const_id.borrow().get(c) {
                    return Ok(a.clone());
                }
                let (ty, v) = self.constant(c)?;
                let a = self.id(&ty, &[], &v)?;
                self.memo.const_id.borrow_mut().insert(c.clone(), a.clone());
                Ok(a)
            }
            Tm::Lam { ty, body } => {
                let TyKind::Pi(a, _) = &ty.kind else {
                    return defect("abstraction without a Π type");
                };
                let fin = self.ctx_inv(&ty.ctx, f)?;
                let tgt_fiber = self.fiber(a, &f.tgt)?;
                let mut comps = Vec::with_capacity(tgt_fiber.objects.len());
                for y in &tgt_fiber.objects {
                    let x = self.reindex(a, &fin, y)?;
                    comps.push(self.path(body, &f.extended(x, self.id(a, &f.tgt, y)?))?);
                }
                let src = self.reindex(ty, f, &self.eval(t, &f.src)?)?;
                Ok(Arr::nat(src, self.eval(t, &f.tgt)?, comps))
            }
            Tm::App { pi, fun, arg } => {
                let TyKind::Pi(a, b) = &pi.kind else {
                    return defect("application without a Π type");
                };
                let uf = self.path(arg, f)?;
                let tau = self.path(fun, f)?;
                let k = self.obj_index(a, &f.tgt, &uf.src)?;
                let comp_k = &as_nat(&tau)?[k];
                let mv = self.ctx_id(&pi.ctx, &f.tgt)?.extended(uf.src.clone(), uf.clone());
                let w = self.reindex_arr(b, &mv, comp_k)?;
                let tu = self.apply_arr(pi, &f.tgt, &tau.tgt, &uf)?;
                self.comp(b, &push(&f.tgt, uf.tgt.clone()), &tu, &w)
            }
            Tm::Pair { ty, a, b } => {
                let pa = self.path(a, f)?;
                let pb = self.path(b, f)?;
                let src = self.reindex(ty, f, &self.eval(t, &f.src)?)?;
                Ok(Arr {
                    src,
                    tgt: Val::pair(pa.tgt.clone(), pb.tgt.clone()),
                    kind: ArrKind::Pair(Rc::new((pa, pb))),
                })
            }
            Tm::SigElim { branch, scrut, .. } => {
                let s = self.path(scrut, f)?;
                let (al, be) = as_pair_arr(&s)?;
                let (x, y) = as_pair(&self.eval(scrut, &f.src)?)?;
                self.path(branch, &f.extended(x, al).extended(y, be))
            }
            Tm::Refl { .. } => Ok(Arr::unit(self.eval(t, &f.tgt)?)),
            Tm::J {
                ty,
                motive,
                base,
                left,
                right,
                path,
            } => {
                let r2 = self.eval(right, &f.tgt)?;
                let p2 = as_path(&self.eval(path, &f.tgt)?)?;
                let l1 = self.eval(left, &f.src)?;
                let lf = self.path(left, f)?;
                self.j_path(ty, motive, base, f, &l1, &lf, &r2, &p2)
            }
        }
    }
}

struct SectionSearch<'a> {
    m: &'a Model,
    b: &'a Rc<Ty>,
    d: &'a PiDomain,
    /// `None` assigns the next object, `Some(j)` the arrow `j`.
    steps: Vec<Option<usize>>,
    points: Vec<Option<Val>>,
    paths: Vec<Option<Arr>>,
    out: Vec<Val>,
    limit: usize,
    next_obj: usize,
}

impl SectionSearch<'_> {
    fn run(&mut self, step: usize) -> R<()> {
        if self.out.len() >= self.limit {
            return Ok(());
        }
        if step == self.steps.len() {
            let points = self.points.iter().map(|p| p.clone().unwrap()).collect();
            let paths = self.paths.iter().map(|p| p.clone().unwrap()).collect();
            self.out.push(Val::table(points, paths));
            return Ok(());
        }
        let (m, b, d) = (self.m, self.b, self.d);
        match self.steps[step] {
            None => {
                let k = self.next_obj;
                self.next_obj += 1;
                for x in m.fiber(b, &d.envs[k])?.objects.iter() {
                    m.tick()?;
                    self.points[k] = Some(x.clone());
                    self.run(step + 1)?;
                    if self.out.len() >= self.limit {
                        break;
                    }
                }
                self.points[k] = None;
                self.next_obj -= 1;
            }
            Some(j) => {
                let (x, y) = (d.arrows.src[j], d.arrows.tgt[j]);
                let (px, py) = (self.points[x].clone().unwrap(), self.points[y].clone().unwrap());
                let cands = if d.identity[j] {
                    vec![m.id(b, &d.envs[y], &py)?]
                } else {
                    let moved = m.reindex(b, &d.moves[j], &px)?;
                    m.hom(b, &d.envs[y], &moved, &py)?
                };
                'cand: for c in cands {
                    m.tick()?;
                    self.paths[j] = Some(c);
                    for &(j2, j1, k) in &d.triples[j] {
                        let (Some(g), Some(f), Some(h)) = (&self.paths[j2], &self.paths[j1], &self.paths[k]) else {
                            continue;
                        };
                        let y2 = d.arrows.tgt[j2];
                        let moved = m.reindex_arr(b, &d.moves[j2], f)?;
                        if *h != m.comp(b, &d.envs[y2], g, &moved)? {
                            continue 'cand;
                        }
                    }
                    self.run(step + 1)?;
                    if self.out.len() >= self.limit {
                        break;
                    }
                }
                self.paths[j] = None;
            }
        }
        Ok(())
    }
}
