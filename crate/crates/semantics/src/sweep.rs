//! Soundness sweeps of checked modules over a catalog of groupoids.
//!
//! Each judgement `⊢ t : T` is opened to `Γ ⊢ t : T` by peeling
//! abstractions, every reachable postulate is assigned a value in the model,
//! and the resulting section is checked on sampled points and arrows of `⟦Γ⟧`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use mltt_core::{CheckedModule, CheckerConfig, Decl, Expr, Judgement, Signature, Telescope, Term, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functor::{diagonal, fiber, path_object_factorization, GroupoidFunctor};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::ir::{constants_used, Ctx, Elaborator, Tm, Ty, TyKind};
use crate::model::{Model, ModelError, R};
use crate::report::{Record, Report};
use crate::value::{Arr, ArrKind, CArr, Val};
use crate::wfs::{classify, solve_lifting, LiftingSquare};

pub const DEFAULT_SEED: u64 = 0x5eed_2008;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub seed: u64,
    /// Context points sampled per environment.
    pub points: usize,
    /// Arrows sampled out of each sampled point.
    pub arrows: usize,
    /// Candidate values tried per postulate.
    pub choices: usize,
    /// Environments per (judgement, groupoid).
    pub environments: usize,
    /// Evaluation steps allowed per (judgement, groupoid).
    pub budget: u64,
    /// Largest materialized context groupoid, in arrows, for the J check.
    pub filler_arrows: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: DEFAULT_SEED,
            points: 12,
            arrows: 3,
            choices: 3,
            environments: 3,
            budget: 20_000_000,
            filler_arrows: 400,
        }
    }
}

/// A judgement with its leading abstractions moved into the context.
#[derive(Clone, Debug)]
pub struct Opened {
    pub context: Telescope,
    pub term: Option<Term>,
    pub ty: Type,
}

pub fn open(j: &Judgement) -> Option<Opened> {
    match j {
        Judgement::HasType(ctx, t, ty) => {
            let (mut ctx, mut t, mut ty) = (ctx.clone(), t.clone(), ty.clone());
            while let (
                Term::Lam { binder, body, .. },
                Type::Pi {
                    domain, codomain, ..
                },
            ) = (&t, &ty)
            {
                ctx = ctx.extended(binder.clone(), (**domain).clone());
                let (b, c) = ((**body).clone(), (**codomain).clone());
                t = b;
                ty = c;
            }
            Some(Opened {
                context: ctx,
                term: Some(t),
                ty,
            })
        }
        Judgement::IsType(ctx, ty) => {
            let (mut ctx, mut ty) = (ctx.clone(), ty.clone());
            while let Type::Pi {
                binder,
                domain,
                codomain,
            } = &ty
            {
                ctx = ctx.extended(binder.clone(), (**domain).clone());
                let c = (**codomain).clone();
                ty = c;
            }
            Some(Opened {
                context: ctx,
                term: None,
                ty,
            })
        }
        Judgement::EqTerm(..) | Judgement::EqType(..) => None,
    }
}

/// One elaborated judgement plus everything needed to build its models.
struct Prepared {
    ctx: Rc<Ctx>,
    ty: Rc<Ty>,
    term: Option<Rc<Tm>>,
    normal: Option<Rc<Tm>>,
    substituted: Option<Substituted>,
    postulates: Vec<(String, Rc<Ty>)>,
    defs: Vec<(String, Rc<Ty>, Rc<Tm>)>,
}

/// `t[x_j / x_k]` together with the positions involved.
struct Substituted {
    ctx: Rc<Ctx>,
    term: Rc<Tm>,
    k: usize,
    j: usize,
}

type Fail = String;

fn fail<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(msg.into())
}

fn model_err(e: ModelError) -> Fail {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A context position `k` whose type is a weakening of an earlier entry `j`.
fn substitution_site(tele: &Telescope) -> Option<(usize, usize)> {
    let entries = tele.entries();
    for k in (1..entries.len()).rev() {
        for j in (0..k).rev() {
            if entries[j].1.shifted(0, k - j) == entries[k].1 {
                return Some((k, j));
            }
        }
    }
    None
}

fn prepare(elab: &Elaborator<'_>, sig: &Signature, o: &Opened) -> Result<Prepared, Fail> {
    let e = |x: crate::ir::ElabError| x.to_string();
    let ctx = elab.telescope(&o.context).map_err(e)?;
    let ty = elab.ty(&ctx, &o.context, &o.ty).map_err(e)?;
    let mut term = None;
    let mut normal = None;
    let mut substituted = None;
    if let Some(t) = &o.term {
        term = Some(elab.tm(&ctx, &o.context, t, Some(&o.ty)).map_err(e)?);
        let nf = elab.checker().normalize_term(t).map_err(|x| x.to_string())?;
        normal = Some(elab.tm(&ctx, &o.context, &nf, Some(&o.ty)).map_err(e)?);
        if let Some((k, j)) = substitution_site(&o.context) {
            let n = o.context.len();
            let a = Term::Var(k - 1 - j);
            let mut tele = o.context.prefix(k);
            for i in k + 1..n {
                let (name, t) = &o.context.entries()[i];
                let d = i - 1 - k;
                tele = tele.extended(name.clone(), t.subst(d, &a.shifted(0, d)));
            }
            let m = n - 1 - k;
            let sub_t = t.subst(m, &a.shifted(0, m));
            let sub_ty = o.ty.subst(m, &a.shifted(0, m));
            let sctx = elab.telescope(&tele).map_err(e)?;
            let st = elab.tm(&sctx, &tele, &sub_t, Some(&sub_ty)).map_err(e)?;
            substituted = Some(Substituted {
                ctx: sctx,
                term: st,
                k,
                j,
            });
        }
    }
    let mut terms: Vec<&Term> = Vec::new();
    if let Some(t) = &o.term {
        terms.push(t);
    }
    let mut types: Vec<&Type> = vec![&o.ty];
    types.extend(o.context.entries().iter().map(|(_, t)| t));
    let used = constants_used(sig, &terms, &types);
    let empty = Rc::new(Ctx::new());
    let tele = Telescope::new();
    let mut postulates = Vec::new();
    let mut defs = Vec::new();
    for d in sig.decls() {
        match d {
            Decl::TermConst { name, ty } if used.contains(&**name) => {
                postulates.push((name.to_string(), elab.ty(&empty, &tele, ty).map_err(e)?));
            }
            Decl::Def { name, ty, body } if used.contains(&**name) => {
                let t = elab.ty(&empty, &tele, ty).map_err(e)?;
                let b = elab.tm(&empty, &tele, body, Some(ty)).map_err(e)?;
                defs.push((name.to_string(), t, b));
            }
            _ => {}
        }
    }
    Ok(Prepared {
        ctx,
        ty,
        term,
        normal,
        substituted,
        postulates,
        defs,
    })
}

fn rng_for(seed: u64, judgement: &str, groupoid: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    (judgement, groupoid).hash(&mut h);
    ChaCha8Rng::seed_from_u64(seed ^ h.finish())
}

fn base_model(g: &Rc<FiniteGroupoid>, p: &Prepared, cfg: &SweepConfig) -> Model {
    let mut m = Model::new(g.clone(), cfg.budget);
    for (name, ty, body) in &p.defs {
        m.define(name, ty.clone(), body.clone());
    }
    m
}

/// Assignments of values to the postulates, found by seeded random
/// descents. Each postulate ranges over a few values of its fiber.
fn environments(
    g: &Rc<FiniteGroupoid>,
    p: &Prepared,
    cfg: &SweepConfig,
    rng: &mut ChaCha8Rng,
) -> R<Vec<Vec<Val>>> {
    let mut found: Vec<Vec<Val>> = Vec::new();
    let mut seen = HashSet::new();
    let mut candidates: HashMap<Vec<Val>, Vec<Val>> = HashMap::new();
    let attempts = cfg.environments * 4;
    let budget_left = std::cell::Cell::new(cfg.budget);
    for _ in 0..attempts {
        if found.len() >= cfg.environments {
            break;
        }
        let mut chosen: Vec<Val> = Vec::new();
        let mut dead = false;
        for (_, ty) in &p.postulates {
            let cands = match candidates.get(&chosen) {
                Some(c) => c.clone(),
                None => {
                    let mut m = base_model(g, p, cfg);
                    m.set_budget(budget_left.get());
                    for (k, v) in chosen.iter().enumerate() {
                        let (n, t) = &p.postulates[k];
                        m.assign(n, t.clone(), v.clone());
                    }
                    let all = m.objects_upto(ty, &[], 4 * cfg.choices.max(1))?;
                    budget_left.set(m.remaining_budget());
                    let mut pick = all;
                    pick.shuffle(rng);
                    pick.truncate(cfg.choices.max(1));
                    candidates.insert(chosen.clone(), pick.clone());
                    pick
                }
            };
            if cands.is_empty() {
                dead = true;
                break;
            }
            chosen.push(cands[rng.gen_range(0..cands.len())].clone());
        }
        if !dead && seen.insert(chosen.clone()) {
            found.push(chosen);
        }
        if p.postulates.is_empty() {
            break;
        }
    }
    Ok(found)
}

/// Context points: all of them if there are few, otherwise random descents.
fn sample_points(m: &Model, ctx: &[Rc<Ty>], n: usize, rng: &mut ChaCha8Rng) -> R<Vec<Vec<Val>>> {
    let all = m.ctx_objects(ctx, n + 1)?;
    if all.len() <= n {
        return Ok(all);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..4 * n {
        if out.len() >= n {
            break;
        }
        let mut env = Vec::new();
        for t in ctx {
            let f = m.fiber(t, &env)?;
            if f.objects.is_empty() {
                break;
            }
            env.push(f.objects[rng.gen_range(0..f.objects.len())].clone());
        }
        if env.len() == ctx.len() && seen.insert(env.clone()) {
            out.push(env);
        }
    }
    Ok(out)
}

fn sample_arrows(m: &Model, ctx: &[Rc<Ty>], src: &[Val], n: usize, rng: &mut ChaCha8Rng) -> R<Vec<CArr>> {
    let all = m.ctx_hom_out(ctx, src, n + 1)?;
    if all.len() <= n {
        return Ok(all);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..4 * n {
        if out.len() >= n {
            break;
        }
        let mut cur = CArr::empty();
        while cur.len() < ctx.len() {
            let cands = m.out_candidates(ctx, &cur, src)?;
            let Some(a) = cands.choose(rng) else { break };
            cur = cur.extended(src[cur.len()].clone(), a.clone());
        }
        if cur.len() == ctx.len() && seen.insert(cur.clone()) {
            out.push(cur);
        }
    }
    Ok(out)
}

struct Samples {
    points: Vec<Vec<Val>>,
    /// Arrows out of each point, each paired with one arrow out of its target.
    arrows: Vec<(CArr, Option<CArr>)>,
}

fn samples(m: &Model, ctx: &[Rc<Ty>], cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> R<Samples> {
    let points = sample_points(m, ctx, cfg.points, rng)?;
    let mut arrows = Vec::new();
    for g in &points {
        for f in sample_arrows(m, ctx, g, cfg.arrows, rng)? {
            let next = sample_arrows(m, ctx, &f.tgt, 1, rng)?.into_iter().next();
            arrows.push((f, next));
        }
    }
    Ok(Samples { points, arrows })
}

fn check_interpret(m: &Model, p: &Prepared, s: &Samples) -> Result<(), Fail> {
    let me = model_err;
    for g in &s.points {
        for x in m.objects_upto(&p.ty, g, 4).map_err(me)? {
            let i = m.ctx_id(&p.ctx, g).map_err(me)?;
            ensure(m.reindex(&p.ty, &i, &x).map_err(me)? == x, || {
                format!("reindexing along an identity moves {x:?}")
            })?;
        }
        if let Some(t) = &p.term {
            let v = m.eval(t, g).map_err(me)?;
            ensure(m.is_object(&p.ty, g, &v).map_err(me)?, || {
                format!("value {v:?} at {g:?} is not in the fiber")
            })?;
            let i = m.ctx_id(&p.ctx, g).map_err(me)?;
            ensure(m.path(t, &i).map_err(me)? == m.id(&p.ty, g, &v).map_err(me)?, || {
                format!("identity at {g:?} is not sent to an identity")
            })?;
        }
    }
    for (f, next) in &s.arrows {
        for x in m.objects_upto(&p.ty, &f.src, 3).map_err(me)? {
            let y = m.reindex(&p.ty, f, &x).map_err(me)?;
            ensure(m.is_object(&p.ty, &f.tgt, &y).map_err(me)?, || {
                format!("reindexing {x:?} leaves the fiber")
            })?;
            if let Some(g) = next {
                let gf = m.ctx_comp(&p.ctx, g, f).map_err(me)?;
                let z = m.reindex(&p.ty, g, &y).map_err(me)?;
                ensure(m.reindex(&p.ty, &gf, &x).map_err(me)? == z, || {
                    format!("reindexing is not functorial at {x:?}")
                })?;
            }
        }
        let Some(t) = &p.term else { continue };
        let v = m.eval(t, &f.src).map_err(me)?;
        let a = m.path(t, f).map_err(me)?;
        ensure(a.src == m.reindex(&p.ty, f, &v).map_err(me)?, || {
            format!("arrow {a:?} does not start at the reindexed value")
        })?;
        ensure(a.tgt == m.eval(t, &f.tgt).map_err(me)?, || {
            format!("arrow {a:?} does not end at the value")
        })?;
        ensure(m.is_arrow(&p.ty, &f.tgt, &a).map_err(me)?, || {
            format!("{a:?} is not an arrow of the fiber")
        })?;
        if let Some(g) = next {
            let gf = m.ctx_comp(&p.ctx, g, f).map_err(me)?;
            let b = m.path(t, g).map_err(me)?;
            let moved = m.reindex_arr(&p.ty, g, &a).map_err(me)?;
            let expect = m.comp(&p.ty, &g.tgt, &b, &moved).map_err(me)?;
            ensure(m.path(t, &gf).map_err(me)? == expect, || {
                "the section does not preserve composition".to_owned()
            })?;
        }
    }
    Ok(())
}

fn check_conversion(m: &Model, p: &Prepared, s: &Samples) -> Result<(), Fail> {
    let (Some(t), Some(n)) = (&p.term, &p.normal) else {
        return Ok(());
    };
    let me = model_err;
    for g in &s.points {
        ensure(m.eval(t, g).map_err(me)? == m.eval(n, g).map_err(me)?, || {
            format!("term and normal form differ at {g:?}")
        })?;
    }
    for (f, _) in &s.arrows {
        ensure(m.path(t, f).map_err(me)? == m.path(n, f).map_err(me)?, || {
            format!("term and normal form differ on {f:?}")
        })?;
    }
    Ok(())
}

fn check_substitution(m: &Model, p: &Prepared, sub: &Substituted, cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Result<(), Fail> {
    let me = model_err;
    let t = p.term.as_ref().expect("substitution needs a term");
    let s = samples(m, &sub.ctx, cfg, rng).map_err(me)?;
    let insert = |g: &[Val]| {
        let mut v = g.to_vec();
        v.insert(sub.k, g[sub.j].clone());
        v
    };
    for g in &s.points {
        let full = insert(g);
        ensure(m.eval(&sub.term, g).map_err(me)? == m.eval(t, &full).map_err(me)?, || {
            format!("substituted term differs at {g:?}")
        })?;
    }
    for (f, _) in &s.arrows {
        let full = f.inserted(sub.k, f.src[sub.j].clone(), f.arrs[sub.j].clone());
        ensure(m.path(&sub.term, f).map_err(me)? == m.path(t, &full).map_err(me)?, || {
            format!("substituted term differs on {f:?}")
        })?;
    }
    Ok(())
}

/// For a proof of an identity between identity proofs, both sides are
/// already equal and the proof is an identity arrow. The composites of the
/// path algebra are composition in the base groupoid.
fn check_strictness(m: &Model, id: &str, p: &Prepared, s: &Samples) -> Result<bool, Fail> {
    let me = model_err;
    let Some(t) = &p.term else { return Ok(false) };
    let mut applies = false;
    if let TyKind::Id(outer, l, r) = &p.ty.kind {
        if matches!(outer.kind, TyKind::Id(..)) {
            applies = true;
            for g in &s.points {
                let (lv, rv) = (m.eval(l, g).map_err(me)?, m.eval(r, g).map_err(me)?);
                ensure(lv == rv, || format!("sides differ at {g:?}: {lv:?} vs {rv:?}"))?;
                let v = m.eval(t, g).map_err(me)?;
                let idv = Val::Path(Rc::new(m.id(outer, g, &lv).map_err(me)?));
                ensure(v == idv, || format!("proof at {g:?} is not an identity"))?;
            }
        }
    }
    if (id == "c_l" || id == "c_r") && p.ctx.len() == 5 {
        applies = true;
        for g in &s.points {
            let v = m.eval(t, g).map_err(me)?;
            let (Val::Path(pa), Val::Path(qa), Val::Path(va)) = (&g[3], &g[4], &v) else {
                continue;
            };
            if let (ArrKind::Base(pk), ArrKind::Base(qk), ArrKind::Base(vk)) = (&pa.kind, &qa.kind, &va.kind) {
                let want = m.groupoid().comp(*qk, *pk);
                ensure(*vk == want, || format!("composite at {g:?} is not composition"))?;
            }
        }
    }
    Ok(applies)
}

/// A context groupoid materialized as a finite groupoid.
pub struct Materialized {
    pub groupoid: Rc<FiniteGroupoid>,
    pub objects: Vec<Vec<Val>>,
    pub arrows: Vec<CArr>,
    obj_index: HashMap<Vec<Val>, usize>,
    arr_index: HashMap<CArr, usize>,
}

impl Materialized {
    pub fn object(&self, v: &[Val]) -> Option<usize> {
        self.obj_index.get(v).copied()
    }

    pub fn arrow(&self, a: &CArr) -> Option<usize> {
        self.arr_index.get(a).copied()
    }
}

/// Enumerates `⟦ctx⟧` completely, or returns `None` past `max_arrows`.
pub fn materialize(m: &Model, name: &str, ctx: &[Rc<Ty>], max_arrows: usize) -> R<Option<Materialized>> {
    let objects = m.ctx_objects(ctx, max_arrows + 1)?;
    if objects.len() > max_arrows {
        return Ok(None);
    }
    let obj_index: HashMap<Vec<Val>, usize> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut arrows = Vec::new();
    let mut raw = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            for a in m.ctx_hom(ctx, x, y)? {
                raw.push(Arrow {
                    name: format!("a{}", arrows.len()),
                    src: i,
                    tgt: j,
                });
                arrows.push(a);
                if arrows.len() > max_arrows {
                    return Ok(None);
                }
            }
        }
    }
    let arr_index: HashMap<CArr, usize> = arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let n = arrows.len();
    let mut table = vec![usize::MAX; n * n];
    for g in 0..n {
        for f in 0..n {
            if raw[f].tgt != raw[g].src {
                continue;
            }
            let c = m.ctx_comp(ctx, &arrows[g], &arrows[f])?;
            match arr_index.get(&c) {
                Some(&k) => table[g * n + f] = k,
                None => return Err(ModelError::Defect("context composite not enumerated".into())),
            }
        }
    }
    let names = (0..objects.len()).map(|i| format!("o{i}")).collect();
    let groupoid = FiniteGroupoid::from_fn(name, names, raw, |g, f| table[g * n + f]);
    Ok(Some(Materialized {
        groupoid: Rc::new(groupoid),
        objects,
        arrows,
        obj_index,
        arr_index,
    }))
}

/// The pieces of a J instance in the model.
pub struct JInstance<'a> {
    pub ty: &'a Rc<Ty>,
    pub motive: &'a Rc<Ty>,
    pub base: &'a Tm,
}

pub fn j_instances(t: &Tm) -> Vec<JInstance<'_>> {
    let mut out = Vec::new();
    collect_j(t, &mut out);
    out
}

fn collect_j<'a>(t: &'a Tm, out: &mut Vec<JInstance<'a>>) {
    match t {
        Tm::Var(_) | Tm::Const(_) => {}
        Tm::Lam { body, .. } => collect_j(body, out),
        Tm::App { fun, arg, .. } => {
            collect_j(fun, out);
            collect_j(arg, out);
        }
        Tm::Pair { a, b, .. } => {
            collect_j(a, out);
            collect_j(b, out);
        }
        Tm::SigElim { branch, scrut, .. } => {
            collect_j(branch, out);
            collect_j(scrut, out);
        }
        Tm::Refl { a, .. } => collect_j(a, out),
        Tm::J {
            ty,
            motive,
            base,
            left,
            right,
            path,
        } => {
            out.push(JInstance {
                ty,
                motive,
                base,
            });
            for x in [base, left, right, path] {
                collect_j(x, out);
            }
        }
    }
}

/// Outcome of the lifting check for one J instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FillerOutcome {
    /// Both the searched and the canonical filler satisfy both triangles.
    Filled { canonical_is_first: bool },
    /// The materialized groupoids exceed the size limit.
    TooLarge,
}

/// Solves the square `r : ⟦Γ.A⟧ → ⟦Γ.A.A.Id⟧` against the projection of
/// the motive with top `d` and bottom the identity, and checks that the
/// filler used for evaluation is a solution too.
pub fn check_j_filler(m: &Model, j: &JInstance<'_>, max_arrows: usize) -> Result<FillerOutcome, Fail> {
    let me = model_err;
    let full = &j.motive.ctx;
    let n = full.len() - 3;
    let ga_ctx: Vec<Rc<Ty>> = full[..n + 1].to_vec();
    let mut d_ctx: Vec<Rc<Ty>> = full.to_vec();
    d_ctx.push(j.motive.clone());
    let Some(ga) = materialize(m, "ctx_a", &ga_ctx, max_arrows).map_err(me)? else {
        return Ok(FillerOutcome::TooLarge);
    };
    let Some(gid) = materialize(m, "ctx_id", full, max_arrows).map_err(me)? else {
        return Ok(FillerOutcome::TooLarge);
    };
    let Some(gd) = materialize(m, "ctx_d", &d_ctx, max_arrows).map_err(me)? else {
        return Ok(FillerOutcome::TooLarge);
    };
    let refl_point = |env: &[Val]| -> R<Vec<Val>> {
        let (g, a) = (&env[..n], &env[n]);
        let mut v = env.to_vec();
        v.push(a.clone());
        v.push(Val::Path(Rc::new(m.id(j.ty, g, a)?)));
        Ok(v)
    };
    let refl_arrow = |f: &CArr| -> R<CArr> {
        let al = f.arrs[n].clone();
        let c = f.extended(f.src[n].clone(), al.clone());
        let refl = Val::Path(Rc::new(m.id(j.ty, &f.src[..n], &f.src[n])?));
        let moved = m.reindex(&full[n + 2], &c, &refl)?;
        Ok(c.extended(refl, Arr::unit(moved)))
    };
    let look_obj = |mat: &Materialized, v: &[Val]| mat.object(v).ok_or_else(|| format!("point {v:?} missing"));
    let look_arr = |mat: &Materialized, a: &CArr| mat.arrow(a).ok_or_else(|| format!("arrow {a:?} missing"));

    let (mut r_obj, mut r_arr, mut top_obj, mut top_arr) = (vec![], vec![], vec![], vec![]);
    for env in &ga.objects {
        let rp = refl_point(env).map_err(me)?;
        r_obj.push(look_obj(&gid, &rp)?);
        let d = m.eval(j.base, env).map_err(me)?;
        let mut tp = rp;
        tp.push(d);
        top_obj.push(look_obj(&gd, &tp)?);
    }
    for f in &ga.arrows {
        let ra = refl_arrow(f).map_err(me)?;
        r_arr.push(look_arr(&gid, &ra)?);
        let d0 = m.eval(j.base, &f.src).map_err(me)?;
        let df = m.path(j.base, f).map_err(me)?;
        top_arr.push(look_arr(&gd, &ra.extended(d0, df))?);
    }
    let q_obj = gd
        .objects
        .iter()
        .map(|v| look_obj(&gid, &v[..n + 3]))
        .collect::<Result<Vec<_>, _>>()?;
    let q_arr = gd
        .arrows
        .iter()
        .map(|a| look_arr(&gid, &a.prefix(n + 3)))
        .collect::<Result<Vec<_>, _>>()?;
    let fe = |e: crate::functor::FunctorError| e.to_string();
    let r = GroupoidFunctor::new("r", ga.groupoid.clone(), gid.groupoid.clone(), r_obj, r_arr).map_err(fe)?;
    let q = GroupoidFunctor::new("q", gd.groupoid.clone(), gid.groupoid.clone(), q_obj, q_arr).map_err(fe)?;
    let top = GroupoidFunctor::new("d", ga.groupoid.clone(), gd.groupoid.clone(), top_obj, top_arr).map_err(fe)?;
    let bottom = GroupoidFunctor::identity(&gid.groupoid);
    let sq = LiftingSquare::new(r, q, top, bottom).map_err(|e| e.to_string())?;

    let (mut j_obj, mut j_arr) = (vec![], vec![]);
    for env in &gid.objects {
        let (g, l, rv) = (&env[..n], &env[n], &env[n + 1]);
        let Val::Path(p) = &env[n + 2] else {
            return fail("identity point expected");
        };
        let v = m.j_point(j.ty, j.motive, j.base, g, l, rv, p).map_err(me)?;
        let mut w = env.clone();
        w.push(v);
        j_obj.push(look_obj(&gd, &w)?);
    }
    for a in &gid.arrows {
        let Val::Path(p2) = &a.tgt[n + 2] else {
            return fail("identity point expected");
        };
        let src = &a.src;
        let Val::Path(p1) = &src[n + 2] else {
            return fail("identity point expected");
        };
        let v0 = m.j_point(j.ty, j.motive, j.base, &src[..n], &src[n], &src[n + 1], p1).map_err(me)?;
        let fa = m
            .j_path(j.ty, j.motive, j.base, &a.prefix(n), &src[n], &a.arrs[n], &a.tgt[n + 1], p2)
            .map_err(me)?;
        j_arr.push(look_arr(&gd, &a.extended(v0, fa))?);
    }
    let canonical = GroupoidFunctor::new("J", gid.groupoid.clone(), gd.groupoid.clone(), j_obj, j_arr).map_err(fe)?;
    ensure(sq.is_filler(&canonical), || "the evaluated J is not a diagonal filler".to_owned())?;
    let found = solve_lifting(&sq).map_err(|e| e.to_string())?;
    let Some(found) = found else {
        return fail("no diagonal filler exists");
    };
    ensure(sq.is_filler(&found), || "the searched filler fails a triangle".to_owned())?;
    Ok(FillerOutcome::Filled {
        canonical_is_first: found.same_map(&canonical),
    })
}

fn record(check: &str, id: &str, g: &str, r: Result<(), Fail>) -> Record {
    match r {
        Ok(()) => Record::new(check, id, g, true),
        Err(e) => Record::new(check, id, g, false).with_detail(e),
    }
}

/// Sweeps every judgement of `module` over every groupoid of `catalog`.
pub fn soundness_sweep(
    module: &CheckedModule,
    mode: CheckerConfig,
    catalog: &[Rc<FiniteGroupoid>],
    cfg: &SweepConfig,
) -> Report {
    let sig = &module.signature;
    let elab = Elaborator::new(sig, mode);
    let mut report = Report::new();
    for (id, j) in module.judgements() {
        let Some(o) = open(&j) else { continue };
        let prepared = prepare(&elab, sig, &o);
        for g in catalog {
            match &prepared {
                Err(e) => report.push(Record::new("interpret", &id, g.name(), false).with_detail(e.clone())),
                Ok(p) => {
                    let rs = sweep_one(&id, p, g, cfg);
                    for r in rs {
                        report.push(r);
                    }
                }
            }
        }
    }
    report
}

fn sweep_one(id: &str, p: &Prepared, g: &Rc<FiniteGroupoid>, cfg: &SweepConfig) -> Vec<Record> {
    let gname = g.name();
    let mut rng = rng_for(cfg.seed, id, gname);
    let envs = match environments(g, p, cfg, &mut rng) {
        Ok(e) => e,
        Err(e) => return vec![Record::new("interpret", id, gname, false).with_detail(e.to_string())],
    };
    if envs.is_empty() {
        return vec![Record::new("interpret", id, gname, true).with_detail("no environment")];
    }
    let mut results: Vec<(&str, Result<(), Fail>)> = vec![("interpret", Ok(())), ("conversion", Ok(()))];
    if p.substituted.is_some() {
        results.push(("substitution", Ok(())));
    }
    let mut strict: Option<Result<(), Fail>> = None;
    let mut filler: Option<Result<(), Fail>> = None;
    let mut spent = 0u64;
    for (n, env) in envs.iter().enumerate() {
        let mut m = base_model(g, p, cfg);
        m.set_budget(cfg.budget.saturating_sub(spent));
        for (k, v) in env.iter().enumerate() {
            let (name, t) = &p.postulates[k];
            m.assign(name, t.clone(), v.clone());
        }
        let s = match samples(&m, &p.ctx, cfg, &mut rng) {
            Ok(s) => s,
            Err(e) => {
                results[0].1 = results[0].1.clone().and(Err(e.to_string()));
                break;
            }
        };
        for (check, res) in results.iter_mut() {
            if res.is_err() {
                continue;
            }
            let out = match *check {
                "interpret" => check_interpret(&m, p, &s),
                "conversion" => check_conversion(&m, p, &s),
                _ => check_substitution(&m, p, p.substituted.as_ref().unwrap(), cfg, &mut rng),
            };
            *res = out;
        }
        match check_strictness(&m, id, p, &s) {
            Ok(true) => strict = Some(strict.unwrap_or(Ok(()))),
            Ok(false) => {}
            Err(e) => strict = Some(Err(e)),
        }
        if n == 0 {
            if let Some(t) = &p.term {
                for j in j_instances(t) {
                    match check_j_filler(&m, &j, cfg.filler_arrows) {
                        Ok(FillerOutcome::Filled { .. }) => filler = Some(filler.unwrap_or(Ok(()))),
                        Ok(FillerOutcome::TooLarge) => {}
                        Err(e) => filler = Some(Err(e)),
                    }
                }
            }
        }
        spent += cfg.budget.saturating_sub(spent) - m.remaining_budget();
    }
    let mut out: Vec<Record> = results.into_iter().map(|(c, r)| record(c, id, gname, r)).collect();
    if let Some(r) = strict {
        out.push(record("strictness", id, gname, r));
    }
    if let Some(r) = filler {
        out.push(record("j_filler", id, gname, r));
    }
    out
}

/// Number of points of `Id(A, a, b)` for each pair of objects, and whether
/// every fiber of `Id(Id(A, a, b), f, g)` is a singleton when `f = g` and
/// empty otherwise, with `A` interpreted as `g`.
pub fn truncation(g: &Rc<FiniteGroupoid>) -> Result<Vec<((usize, usize), usize)>, Fail> {
    let me = model_err;
    let m = Model::new(g.clone(), crate::model::DEFAULT_BUDGET);
    let base = |ctx: &Rc<Ctx>| Ty::new(ctx.clone(), TyKind::Base("A".into()));
    let var = |i| Rc::new(Tm::Var(i));
    let c0: Rc<Ctx> = Rc::new(vec![]);
    let c1 = Rc::new(vec![base(&c0)]);
    let mut c2v = (*c1).clone();
    c2v.push(base(&c1));
    let c2 = Rc::new(c2v);
    let id1 = Ty::new(c2.clone(), TyKind::Id(base(&c2), var(1), var(0)));
    let mut c3v = (*c2).clone();
    c3v.push(id1.clone());
    let c3 = Rc::new(c3v);
    let id1w = Ty::new(c3.clone(), TyKind::Id(base(&c3), var(2), var(1)));
    let mut c4v = (*c3).clone();
    c4v.push(id1w);
    let c4 = Rc::new(c4v);
    let inner = Ty::new(c4.clone(), TyKind::Id(base(&c4), var(3), var(2)));
    let id2 = Ty::new(c4.clone(), TyKind::Id(inner, var(1), var(0)));
    let mut sizes = Vec::new();
    for env in m.ctx_objects(&c2, usize::MAX).map_err(me)? {
        let (Val::Obj(a), Val::Obj(b)) = (&env[0], &env[1]) else {
            return fail("base objects expected");
        };
        let k = m.fiber(&id1, &env).map_err(me)?.objects.len();
        ensure(k == g.hom(*a, *b).len(), || format!("Id fiber over ({a}, {b}) has {k} points"))?;
        sizes.push(((*a, *b), k));
    }
    for env in m.ctx_objects(&c4, usize::MAX).map_err(me)? {
        let k = m.fiber(&id2, &env).map_err(me)?.objects.len();
        let want = usize::from(env[2] == env[3]);
        ensure(k == want, || format!("double identity fiber over {env:?} has {k} points"))?;
        ensure(m.arrows(&id2, &env).map_err(me)?.list.len() == k, || "double identity fiber is not discrete".into())?;
    }
    Ok(sizes)
}

/// `p ∘ r = Δ`, `r` a trivial cofibration, `p` a fibration, and each fiber
/// of `p` discrete on the corresponding hom-set.
pub fn path_object_check(g: &Rc<FiniteGroupoid>) -> Result<(), Fail> {
    let po = path_object_factorization(g);
    let pr = po.p.after(&po.r).map_err(|e| e.to_string())?;
    ensure(pr.same_map(&diagonal(g)), || "p . r differs from the diagonal".into())?;
    ensure(classify(&po.r).is_trivial_cofibration, || "r is not a trivial cofibration".into())?;
    ensure(classify(&po.p).is_fibration, || "p is not a fibration".into())?;
    let m = g.object_count();
    for a in 0..m {
        for b in 0..m {
            let fib = fiber(&po.p, a * m + b);
            ensure(fib.is_discrete() && fib.object_count() == g.hom(a, b).len(), || {
                format!("fiber over ({a},{b}) is not discrete on the hom-set")
            })?;
        }
    }
    Ok(())
}

/// Truncation and path-object records for every groupoid.
pub fn groupoid_checks(catalog: &[Rc<FiniteGroupoid>]) -> Report {
    let mut report = Report::new();
    for g in catalog {
        report.push(record("truncation", "Id-Id", g.name(), truncation(g).map(|_| ())));
        report.push(record("path_object", "diagonal", g.name(), path_object_check(g)));
    }
    report
}
