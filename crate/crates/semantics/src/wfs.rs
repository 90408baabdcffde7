//! The (trivial cofibration, fibration) weak factorization system on finite
//! groupoids, checked by brute force.

use std::ops::ControlFlow;
use std::rc::Rc;

use thiserror::Error;

use crate::functor::{
    diagonal, for_each_functor, path_object_factorization, Constraints, EnumerationBudget,
    GroupoidFunctor, DEFAULT_SEARCH_BUDGET,
};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::report::{Record, Report};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapClass {
    pub is_fibration: bool,
    pub is_cofibration: bool,
    pub is_weak_equivalence: bool,
    pub is_trivial_cofibration: bool,
    pub is_trivial_fibration: bool,
}

/// Fibration: every arrow out of an object in the image lifts. Cofibration:
/// injective on objects. Weak equivalence: full, faithful and essentially
/// surjective. All tests are exhaustive.
pub fn classify(f: &GroupoidFunctor) -> MapClass {
    let (d, c) = (f.dom(), f.cod());
    let is_fibration = (0..d.object_count()).all(|x| {
        c.out_of(f.obj(x))
            .all(|beta| d.out_of(x).any(|alpha| f.arr(alpha) == beta))
    });
    let mut seen = vec![false; c.object_count()];
    let is_cofibration = (0..d.object_count()).all(|x| !std::mem::replace(&mut seen[f.obj(x)], true));
    let fully_faithful = (0..d.object_count()).all(|x| {
        (0..d.object_count()).all(|y| {
            let mut images: Vec<usize> = d.hom(x, y).iter().map(|&a| f.arr(a)).collect();
            images.sort_unstable();
            images.dedup();
            images.len() == d.hom(x, y).len() && images.len() == c.hom(f.obj(x), f.obj(y)).len()
        })
    });
    let essentially_surjective = (0..c.object_count())
        .all(|y| (0..d.object_count()).any(|x| !c.hom(f.obj(x), y).is_empty()));
    let is_weak_equivalence = fully_faithful && essentially_surjective;
    MapClass {
        is_fibration,
        is_cofibration,
        is_weak_equivalence,
        is_trivial_cofibration: is_cofibration && is_weak_equivalence,
        is_trivial_fibration: is_fibration && is_weak_equivalence,
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SquareError {
    #[error("square sides do not meet: {0}")]
    Shape(&'static str),
    #[error("square does not commute")]
    NotCommutative,
}

/// ```text
///   A --top--> C
///   |          |
///  left      right
///   v          v
///   B -bottom> D
/// ```
#[derive(Clone, Debug)]
pub struct LiftingSquare {
    left: GroupoidFunctor,
    right: GroupoidFunctor,
    top: GroupoidFunctor,
    bottom: GroupoidFunctor,
}

impl LiftingSquare {
    pub fn new(
        left: GroupoidFunctor,
        right: GroupoidFunctor,
        top: GroupoidFunctor,
        bottom: GroupoidFunctor,
    ) -> Result<Self, SquareError> {
        if top.dom() != left.dom() {
            return Err(SquareError::Shape("top and left have different domains"));
        }
        if top.cod() != right.dom() {
            return Err(SquareError::Shape("top does not land in the domain of right"));
        }
        if bottom.dom() != left.cod() {
            return Err(SquareError::Shape("bottom does not start at the codomain of left"));
        }
        if bottom.cod() != right.cod() {
            return Err(SquareError::Shape("bottom and right have different codomains"));
        }
        let rh = right.after(&top).expect("shapes checked");
        let bl = bottom.after(&left).expect("shapes checked");
        if !rh.same_map(&bl) {
            return Err(SquareError::NotCommutative);
        }
        Ok(LiftingSquare {
            left,
            right,
            top,
            bottom,
        })
    }

    pub fn left(&self) -> &GroupoidFunctor {
        &self.left
    }

    pub fn right(&self) -> &GroupoidFunctor {
        &self.right
    }

    pub fn top(&self) -> &GroupoidFunctor {
        &self.top
    }

    pub fn bottom(&self) -> &GroupoidFunctor {
        &self.bottom
    }

    /// `j ∘ left = top` and `right ∘ j = bottom`.
    pub fn is_filler(&self, j: &GroupoidFunctor) -> bool {
        j.check().is_ok()
            && j.after(&self.left).is_ok_and(|u| u.same_map(&self.top))
            && self.right.after(j).is_ok_and(|l| l.same_map(&self.bottom))
    }
}

fn filler_constraints(sq: &LiftingSquare) -> Constraints {
    let (f, g, h, i) = (&sq.left, &sq.right, &sq.top, &sq.bottom);
    let (b, c) = (f.cod(), g.dom());
    let mut cons = Constraints::none(b);
    for y in 0..b.object_count() {
        let mut cands: Vec<usize> = (0..c.object_count()).filter(|&z| g.obj(z) == i.obj(y)).collect();
        for x in (0..f.dom().object_count()).filter(|&x| f.obj(x) == y) {
            cands.retain(|&z| z == h.obj(x));
        }
        cons.objects[y] = Some(cands);
    }
    for beta in 0..b.arrow_count() {
        let mut cands: Vec<usize> = (0..c.arrow_count()).filter(|&z| g.arr(z) == i.arr(beta)).collect();
        for a in (0..f.dom().arrow_count()).filter(|&a| f.arr(a) == beta) {
            cands.retain(|&z| z == h.arr(a));
        }
        cons.arrows[beta] = Some(cands);
    }
    cons
}

/// The first diagonal filler in search order (objects and arrows of `B` by
/// index, candidates by ascending index), or `None` if there is none.
pub fn solve_lifting(sq: &LiftingSquare) -> Result<Option<GroupoidFunctor>, EnumerationBudget> {
    let cons = filler_constraints(sq);
    let (b, c) = (sq.left.cod(), sq.right.dom());
    let mut found = None;
    let _ = for_each_functor(b, c, &cons, DEFAULT_SEARCH_BUDGET, &mut |o, a| {
        found = Some((o.to_vec(), a.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found.map(|(o, a)| {
        let j = GroupoidFunctor::unchecked("j", b.clone(), c.clone(), o, a);
        assert!(sq.is_filler(&j), "filler search returned a non-filler");
        j
    }))
}

/// Searches for a commutative square over `(f, g)` without a filler.
pub fn find_unliftable_square(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
) -> Result<Option<LiftingSquare>, EnumerationBudget> {
    let (a, b, c, d) = (f.dom(), f.cod(), g.dom(), g.cod());
    let mut witness = None;
    let mut err = None;
    let _ = for_each_functor(b, d, &Constraints::none(b), DEFAULT_SEARCH_BUDGET, &mut |io, ia| {
        let i = GroupoidFunctor::unchecked("i", b.clone(), d.clone(), io.to_vec(), ia.to_vec());
        let mut hc = Constraints::none(a);
        for x in 0..a.object_count() {
            hc.objects[x] = Some(
                (0..c.object_count())
                    .filter(|&z| g.obj(z) == i.obj(f.obj(x)))
                    .collect(),
            );
        }
        for al in 0..a.arrow_count() {
            hc.arrows[al] = Some(
                (0..c.arrow_count())
                    .filter(|&z| g.arr(z) == i.arr(f.arr(al)))
                    .collect(),
            );
        }
        let r = for_each_functor(a, c, &hc, DEFAULT_SEARCH_BUDGET, &mut |ho, ha| {
            let h = GroupoidFunctor::unchecked("h", a.clone(), c.clone(), ho.to_vec(), ha.to_vec());
            let sq = LiftingSquare {
                left: f.clone(),
                right: g.clone(),
                top: h,
                bottom: i.clone(),
            };
            match solve_lifting(&sq) {
                Ok(Some(_)) => ControlFlow::Continue(()),
                Ok(None) => {
                    witness = Some(sq);
                    ControlFlow::Break(())
                }
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        match r {
            Ok(flow) => flow,
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(witness)
}

/// `f ⧄ g`: every commutative square over `(f, g)` has a diagonal filler.
pub fn has_llp(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<bool, EnumerationBudget> {
    Ok(find_unliftable_square(f, g)?.is_none())
}

/// `F = p ∘ i` through a middle groupoid.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: Rc<FiniteGroupoid>,
    pub left: GroupoidFunctor,
    pub right: GroupoidFunctor,
}

/// The mapping path groupoid `{(a, b, φ : F a → b)}`: `F = p ∘ i` with `i` a
/// trivial cofibration and `p` a fibration.
pub fn mapping_path_factorization(f: &GroupoidFunctor) -> Factorization {
    let (a, b) = (f.dom(), f.cod());
    let mut objs = Vec::new();
    for x in 0..a.object_count() {
        for y in 0..b.object_count() {
            for &phi in b.hom(f.obj(x), y) {
                objs.push((x, y, phi));
            }
        }
    }
    let mut arrows = Vec::new();
    let mut data = Vec::new();
    for (s, &(x, _, phi)) in objs.iter().enumerate() {
        for (t, &(x2, _, phi2)) in objs.iter().enumerate() {
            for &alpha in a.hom(x, x2) {
                let beta = b.comp(b.comp(phi2, f.arr(alpha)), b.inv(phi));
                arrows.push(Arrow {
                    name: format!("({},{})", a.arrow(alpha).name, b.arrow(beta).name),
                    src: s,
                    tgt: t,
                });
                data.push((alpha, beta));
            }
        }
    }
    let names = objs
        .iter()
        .map(|&(x, y, phi)| {
            format!(
                "({},{},{})",
                a.object_name(x),
                b.object_name(y),
                b.arrow(phi).name
            )
        })
        .collect();
    let srcs: Vec<usize> = arrows.iter().map(|x| x.src).collect();
    let tgts: Vec<usize> = arrows.iter().map(|x| x.tgt).collect();
    let lookup = |s: usize, t: usize, alpha: usize| {
        (0..data.len())
            .find(|&k| srcs[k] == s && tgts[k] == t && data[k].0 == alpha)
            .expect("arrow exists")
    };
    let middle = Rc::new(FiniteGroupoid::from_fn(
        format!("P({})", f.name()),
        names,
        arrows.clone(),
        |g2, g1| lookup(srcs[g1], tgts[g2], a.comp(data[g2].0, data[g1].0)),
    ));
    let i_obj: Vec<usize> = (0..a.object_count())
        .map(|x| {
            objs.iter()
                .position(|&o| o == (x, f.obj(x), b.id(f.obj(x))))
                .unwrap()
        })
        .collect();
    let i_arr = (0..a.arrow_count())
        .map(|al| lookup(i_obj[a.src(al)], i_obj[a.tgt(al)], al))
        .collect();
    let left = GroupoidFunctor::unchecked(
        format!("i_{}", f.name()),
        a.clone(),
        middle.clone(),
        i_obj,
        i_arr,
    );
    let right = GroupoidFunctor::unchecked(
        format!("p_{}", f.name()),
        middle.clone(),
        b.clone(),
        objs.iter().map(|o| o.1).collect(),
        data.iter().map(|d| d.1).collect(),
    );
    Factorization {
        middle,
        left,
        right,
    }
}

/// The middle groupoid on `Obj(A) ⊔ Obj(B)` with hom-sets taken from `B`:
/// `F = p ∘ i` with `i` a cofibration and `p` a trivial fibration.
pub fn cofibration_factorization(f: &GroupoidFunctor) -> Factorization {
    let (a, b) = (f.dom(), f.cod());
    let na = a.object_count();
    let under = |x: usize| if x < na { f.obj(x) } else { x - na };
    let nobj = na + b.object_count();
    let mut names: Vec<String> = a.object_names().iter().map(|o| format!("A.{o}")).collect();
    names.extend(b.object_names().iter().map(|o| format!("B.{o}")));
    let mut arrows = Vec::new();
    let mut data = Vec::new();
    for s in 0..nobj {
        for t in 0..nobj {
            for &beta in b.hom(under(s), under(t)) {
                arrows.push(Arrow {
                    name: b.arrow(beta).name.clone(),
                    src: s,
                    tgt: t,
                });
                data.push(beta);
            }
        }
    }
    let index = |s: usize, t: usize, beta: usize| {
        (0..arrows.len())
            .find(|&k| arrows[k].src == s && arrows[k].tgt == t && data[k] == beta)
            .expect("arrow exists")
    };
    let middle = Rc::new(FiniteGroupoid::from_fn(
        format!("M({})", f.name()),
        names,
        arrows.clone(),
        |g2, g1| index(arrows[g1].src, arrows[g2].tgt, b.comp(data[g2], data[g1])),
    ));
    let left = GroupoidFunctor::unchecked(
        format!("c_{}", f.name()),
        a.clone(),
        middle.clone(),
        (0..na).collect(),
        (0..a.arrow_count())
            .map(|al| index(a.src(al), a.tgt(al), f.arr(al)))
            .collect(),
    );
    let right = GroupoidFunctor::unchecked(
        format!("t_{}", f.name()),
        middle.clone(),
        b.clone(),
        (0..nobj).map(under).collect(),
        data.clone(),
    );
    Factorization {
        middle,
        left,
        right,
    }
}

/// The functors the WFS sweep ranges over, built from the given groupoids:
/// identities, path-object factors, diagonals, maps to and from the point,
/// plus the inclusion of the discrete groupoid on `I`'s endpoints and the
/// collapse of `I` onto `Z/2` when those groupoids are present.
pub fn functor_catalog(groupoids: &[Rc<FiniteGroupoid>]) -> Vec<GroupoidFunctor> {
    let mut out = Vec::new();
    for g in groupoids {
        out.push(GroupoidFunctor::identity(g));
        let po = path_object_factorization(g);
        out.push(po.r);
        out.push(po.p);
        out.push(diagonal(g));
        out.push(GroupoidFunctor::terminal(g));
        if g.object_count() > 0 {
            out.push(GroupoidFunctor::point(g, 0));
        }
    }
    let find = |n: &str| groupoids.iter().find(|g| g.name() == n);
    if let (Some(d2), Some(i)) = (find("discrete2"), find("interval")) {
        if let Ok(f) = GroupoidFunctor::new("endpoints", d2.clone(), i.clone(), vec![0, 1], vec![0, 1]) {
            out.push(f);
        }
    }
    if let (Some(i), Some(z)) = (find("interval"), find("z2")) {
        let g = z.arrow_index("g");
        if let Some(g) = g {
            let arr = (0..i.arrow_count())
                .map(|a| if i.is_identity(a) { z.id(0) } else { g })
                .collect();
            if let Ok(f) = GroupoidFunctor::new("collapse", i.clone(), z.clone(), vec![0, 0], arr) {
                out.push(f);
            }
        }
    }
    out
}

/// Names of the groupoids the lifting sweep uses by default; their arrow
/// groupoids keep the brute-force square enumeration small.
pub const WFS_GROUPOIDS: &[&str] = &["point", "discrete2", "interval", "z2", "z3"];

/// Checks factorizations, lifting for every (trivial cofibration, fibration)
/// and (cofibration, trivial fibration) pair, the agreement between the
/// exhaustive classification and lifting, and 2-of-3 for weak equivalences.
pub fn verify_wfs(catalog: &[GroupoidFunctor]) -> Report {
    let mut report = Report::new();
    let classes: Vec<MapClass> = catalog.iter().map(classify).collect();
    let llp = |f: &GroupoidFunctor, g: &GroupoidFunctor| has_llp(f, g);
    for (f, _) in catalog.iter().zip(&classes) {
        let fac = mapping_path_factorization(f);
        let comp = fac.right.after(&fac.left).expect("factors compose");
        let ok = comp.same_map(f)
            && classify(&fac.left).is_trivial_cofibration
            && classify(&fac.right).is_fibration;
        report.push(Record::new("factor_tc_f", f.name(), "-", ok));
        let fac = cofibration_factorization(f);
        let comp = fac.right.after(&fac.left).expect("factors compose");
        let ok = comp.same_map(f)
            && classify(&fac.left).is_cofibration
            && classify(&fac.right).is_trivial_fibration;
        report.push(Record::new("factor_c_tf", f.name(), "-", ok));
    }
    for (l, cl) in catalog.iter().zip(&classes) {
        for (r, cr) in catalog.iter().zip(&classes) {
            let pair = format!("{}/{}", l.name(), r.name());
            if cl.is_trivial_cofibration && cr.is_fibration {
                let res = llp(l, r);
                report.push(llp_record("llp_tc_f", &pair, res));
            }
            if cl.is_cofibration && cr.is_trivial_fibration {
                let res = llp(l, r);
                report.push(llp_record("llp_c_tf", &pair, res));
            }
        }
    }
    // duality: a map outside the left class fails to lift against the
    // fibration of its own factorization, and dually
    for (f, c) in catalog.iter().zip(&classes) {
        let fac = mapping_path_factorization(f);
        if !c.is_trivial_cofibration {
            let res = llp(f, &fac.right).map(|b| !b);
            report.push(llp_record("duality_left", f.name(), res));
        }
        if !c.is_fibration {
            let res = llp(&fac.left, f).map(|b| !b);
            report.push(llp_record("duality_right", f.name(), res));
        }
    }
    // 2-of-3
    for (f, cf) in catalog.iter().zip(&classes) {
        for (g, cg) in catalog.iter().zip(&classes) {
            let Ok(gf) = g.after(f) else { continue };
            let w = [cf.is_weak_equivalence, cg.is_weak_equivalence, classify(&gf).is_weak_equivalence];
            let ok = w.iter().filter(|&&x| x).count() != 2;
            report.push(Record::new(
                "two_of_three",
                &format!("{}/{}", g.name(), f.name()),
                "-",
                ok,
            ));
        }
    }
    report
}

fn llp_record(check: &str, id: &str, res: Result<bool, EnumerationBudget>) -> Record {
    match res {
        Ok(b) => Record::new(check, id, "-", b),
        Err(e) => Record::new(check, id, "-", false).with_detail(e.to_string()),
    }
}
