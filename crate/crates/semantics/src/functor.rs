//! Functors between finite groupoids, the arrow groupoid and the path-object
//! factorization of the diagonal.

use std::ops::ControlFlow;
use std::rc::Rc;

use thiserror::Error;

use crate::groupoid::{Arrow, FiniteGroupoid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFunctor {
    name: String,
    dom: Rc<FiniteGroupoid>,
    cod: Rc<FiniteGroupoid>,
    on_objects: Vec<usize>,
    on_arrows: Vec<usize>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("functor {functor}: table sizes do not match the domain")]
    Shape { functor: String },
    #[error("functor {functor}: image out of range")]
    Range { functor: String },
    #[error("functor {functor}: arrow {arrow} is sent to an arrow with the wrong endpoints")]
    Endpoints { functor: String, arrow: String },
    #[error("functor {functor}: identity {arrow} is not preserved")]
    Identity { functor: String, arrow: String },
    #[error("functor {functor}: composite {g} . {f} is not preserved")]
    Composition { functor: String, g: String, f: String },
    #[error("cannot compose {g} after {f}: codomain and domain differ")]
    Mismatch { g: String, f: String },
}

impl GroupoidFunctor {
    /// Builds a functor, checking that it preserves endpoints, identities
    /// and composition.
    pub fn new(
        name: impl Into<String>,
        dom: Rc<FiniteGroupoid>,
        cod: Rc<FiniteGroupoid>,
        on_objects: Vec<usize>,
        on_arrows: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        let f = GroupoidFunctor {
            name: name.into(),
            dom,
            cod,
            on_objects,
            on_arrows,
        };
        f.check()?;
        Ok(f)
    }

    /// Builds a functor whose laws hold by construction.
    pub(crate) fn unchecked(
        name: impl Into<String>,
        dom: Rc<FiniteGroupoid>,
        cod: Rc<FiniteGroupoid>,
        on_objects: Vec<usize>,
        on_arrows: Vec<usize>,
    ) -> Self {
        let f = GroupoidFunctor {
            name: name.into(),
            dom,
            cod,
            on_objects,
            on_arrows,
        };
        debug_assert_eq!(f.check(), Ok(()));
        f
    }

    pub fn check(&self) -> Result<(), FunctorError> {
        let functor = self.name.clone();
        let (d, c) = (&*self.dom, &*self.cod);
        if self.on_objects.len() != d.object_count() || self.on_arrows.len() != d.arrow_count() {
            return Err(FunctorError::Shape { functor });
        }
        if self.on_objects.iter().any(|&o| o >= c.object_count())
            || self.on_arrows.iter().any(|&a| a >= c.arrow_count())
        {
            return Err(FunctorError::Range { functor });
        }
        for f in 0..d.arrow_count() {
            let img = self.on_arrows[f];
            if c.src(img) != self.on_objects[d.src(f)] || c.tgt(img) != self.on_objects[d.tgt(f)] {
                return Err(FunctorError::Endpoints {
                    functor,
                    arrow: d.arrow(f).name.clone(),
                });
            }
        }
        for o in 0..d.object_count() {
            if self.on_arrows[d.id(o)] != c.id(self.on_objects[o]) {
                return Err(FunctorError::Identity {
                    functor,
                    arrow: d.arrow(d.id(o)).name.clone(),
                });
            }
        }
        for f in 0..d.arrow_count() {
            for g in d.out_of(d.tgt(f)) {
                if self.on_arrows[d.comp(g, f)] != c.comp(self.on_arrows[g], self.on_arrows[f]) {
                    return Err(FunctorError::Composition {
                        functor,
                        g: d.arrow(g).name.clone(),
                        f: d.arrow(f).name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dom(&self) -> &Rc<FiniteGroupoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Rc<FiniteGroupoid> {
        &self.cod
    }

    pub fn obj(&self, o: usize) -> usize {
        self.on_objects[o]
    }

    pub fn arr(&self, f: usize) -> usize {
        self.on_arrows[f]
    }

    pub fn on_objects(&self) -> &[usize] {
        &self.on_objects
    }

    pub fn on_arrows(&self) -> &[usize] {
        &self.on_arrows
    }

    pub fn identity(g: &Rc<FiniteGroupoid>) -> Self {
        GroupoidFunctor::unchecked(
            format!("id_{}", g.name()),
            g.clone(),
            g.clone(),
            (0..g.object_count()).collect(),
            (0..g.arrow_count()).collect(),
        )
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &GroupoidFunctor) -> Result<GroupoidFunctor, FunctorError> {
        if f.cod != self.dom {
            return Err(FunctorError::Mismatch {
                g: self.name.clone(),
                f: f.name.clone(),
            });
        }
        Ok(GroupoidFunctor::unchecked(
            format!("{}.{}", self.name, f.name),
            f.dom.clone(),
            self.cod.clone(),
            f.on_objects.iter().map(|&o| self.on_objects[o]).collect(),
            f.on_arrows.iter().map(|&a| self.on_arrows[a]).collect(),
        ))
    }

    /// Equality of the underlying maps, ignoring names.
    pub fn same_map(&self, other: &GroupoidFunctor) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self.on_objects == other.on_objects
            && self.on_arrows == other.on_arrows
    }

    /// The functor picking one object of `g`, from the terminal groupoid.
    pub fn point(g: &Rc<FiniteGroupoid>, o: usize) -> Self {
        let pt = Rc::new(FiniteGroupoid::discrete("point", vec!["*".into()]));
        GroupoidFunctor::unchecked(
            format!("{}_{}", g.name(), g.object_name(o)),
            pt,
            g.clone(),
            vec![o],
            vec![g.id(o)],
        )
    }

    /// The unique functor to the terminal groupoid.
    pub fn terminal(g: &Rc<FiniteGroupoid>) -> Self {
        let pt = Rc::new(FiniteGroupoid::discrete("point", vec!["*".into()]));
        GroupoidFunctor::unchecked(
            format!("!{}", g.name()),
            g.clone(),
            pt,
            vec![0; g.object_count()],
            vec![0; g.arrow_count()],
        )
    }
}

/// `Δ : G → G × G`.
pub fn diagonal(g: &Rc<FiniteGroupoid>) -> GroupoidFunctor {
    let gg = Rc::new(g.product(g));
    let (m, n) = (g.object_count(), g.arrow_count());
    GroupoidFunctor::unchecked(
        format!("diag_{}", g.name()),
        g.clone(),
        gg,
        (0..m).map(|o| o * m + o).collect(),
        (0..n).map(|f| f * n + f).collect(),
    )
}

/// The arrow groupoid together with, for each of its arrows, the pair
/// `(α, β)` of `G`-arrows forming the commutative square.
#[derive(Clone, Debug)]
pub struct ArrowGroupoid {
    pub groupoid: Rc<FiniteGroupoid>,
    pub squares: Vec<(usize, usize)>,
}

/// `G^→`: objects are the arrows of `G`; an arrow `f → g` is a pair
/// `(α, β)` with `β ∘ f = g ∘ α`.
pub fn arrow_groupoid(g: &FiniteGroupoid) -> ArrowGroupoid {
    let objects: Vec<String> = g.arrows().iter().map(|a| a.name.clone()).collect();
    let mut arrows = Vec::new();
    let mut squares = Vec::new();
    let mut index = std::collections::HashMap::new();
    for f in 0..g.arrow_count() {
        for h in 0..g.arrow_count() {
            for &alpha in g.hom(g.src(f), g.src(h)) {
                let beta = g.comp(g.comp(h, alpha), g.inv(f));
                index.insert((f, alpha, beta), arrows.len());
                arrows.push(Arrow {
                    name: format!("({},{})", g.arrow(alpha).name, g.arrow(beta).name),
                    src: f,
                    tgt: h,
                });
                squares.push((alpha, beta));
            }
        }
    }
    let sq = squares.clone();
    let srcs: Vec<usize> = arrows.iter().map(|a| a.src).collect();
    let groupoid = FiniteGroupoid::from_fn(format!("{}^->", g.name()), objects, arrows, |x, y| {
        let (a2, b2) = sq[x];
        let (a1, b1) = sq[y];
        index[&(srcs[y], g.comp(a2, a1), g.comp(b2, b1))]
    });
    ArrowGroupoid {
        groupoid: Rc::new(groupoid),
        squares,
    }
}

/// The factorization `G → G^→ → G × G` of the diagonal.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub arrows: ArrowGroupoid,
    pub r: GroupoidFunctor,
    pub p: GroupoidFunctor,
}

pub fn path_object_factorization(g: &Rc<FiniteGroupoid>) -> PathObject {
    let arrows = arrow_groupoid(g);
    let ga = arrows.groupoid.clone();
    let gg = Rc::new(g.product(g));
    let (m, n) = (g.object_count(), g.arrow_count());
    // f : a → b goes to the square (f, f) : id_a → id_b
    let r_arr = (0..n)
        .map(|f| {
            (0..ga.arrow_count())
                .find(|&s| ga.src(s) == g.id(g.src(f)) && arrows.squares[s] == (f, f))
                .expect("square exists")
        })
        .collect::<Vec<_>>();
    let r = GroupoidFunctor::unchecked(
        format!("r_{}", g.name()),
        g.clone(),
        ga.clone(),
        (0..m).map(|o| g.id(o)).collect(),
        r_arr,
    );
    let p = GroupoidFunctor::unchecked(
        format!("p_{}", g.name()),
        ga.clone(),
        gg,
        (0..n).map(|f| g.src(f) * m + g.tgt(f)).collect(),
        arrows.squares.iter().map(|&(a, b)| a * n + b).collect(),
    );
    PathObject { arrows, r, p }
}

/// The subgroupoid of `F`'s domain lying over object `b` and its identity.
pub fn fiber(f: &GroupoidFunctor, b: usize) -> FiniteGroupoid {
    let d = f.dom();
    let objs: Vec<usize> = (0..d.object_count()).filter(|&o| f.obj(o) == b).collect();
    let arrs: Vec<usize> = (0..d.arrow_count())
        .filter(|&a| f.arr(a) == f.cod().id(b) && objs.contains(&d.src(a)))
        .collect();
    let arrows = arrs
        .iter()
        .map(|&a| Arrow {
            name: d.arrow(a).name.clone(),
            src: objs.iter().position(|&o| o == d.src(a)).unwrap(),
            tgt: objs.iter().position(|&o| o == d.tgt(a)).unwrap(),
        })
        .collect();
    FiniteGroupoid::from_fn(
        format!("{}^-1({})", f.name(), f.cod().object_name(b)),
        objs.iter().map(|&o| d.object_name(o).to_owned()).collect(),
        arrows,
        |x, y| {
            let c = d.comp(arrs[x], arrs[y]);
            arrs.iter().position(|&a| a == c).unwrap()
        },
    )
}

/// Candidate images for each object and arrow of the domain; `None` means
/// unconstrained.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub objects: Vec<Option<Vec<usize>>>,
    pub arrows: Vec<Option<Vec<usize>>>,
}

impl Constraints {
    pub fn none(dom: &FiniteGroupoid) -> Self {
        Constraints {
            objects: vec![None; dom.object_count()],
            arrows: vec![None; dom.arrow_count()],
        }
    }

    fn allows_obj(&self, o: usize, img: usize) -> bool {
        self.objects[o].as_ref().is_none_or(|c| c.contains(&img))
    }

    fn allows_arr(&self, a: usize, img: usize) -> bool {
        self.arrows[a].as_ref().is_none_or(|c| c.contains(&img))
    }
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    dom: &'a FiniteGroupoid,
    cod: &'a FiniteGroupoid,
    cons: &'a Constraints,
    obj: Vec<usize>,
    arr: Vec<usize>,
    trail: Vec<(bool, usize)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn set_obj(&mut self, o: usize, img: usize) -> bool {
        if self.obj[o] != UNSET {
            return self.obj[o] == img;
        }
        if !self.cons.allows_obj(o, img) {
            return false;
        }
        self.obj[o] = img;
        self.trail.push((true, o));
        self.set_arr(self.dom.id(o), self.cod.id(img))
    }

    /// Assigns `a ↦ img` and propagates through composites and inverses.
    fn set_arr(&mut self, a: usize, img: usize) -> bool {
        let mut work = vec![(a, img)];
        while let Some((a, img)) = work.pop() {
            if self.arr[a] != UNSET {
                if self.arr[a] != img {
                    return false;
                }
                continue;
            }
            if !self.cons.allows_arr(a, img) {
                return false;
            }
            let (d, c) = (self.dom, self.cod);
            for (o, io) in [(d.src(a), c.src(img)), (d.tgt(a), c.tgt(img))] {
                if self.obj[o] == UNSET {
                    if !self.cons.allows_obj(o, io) {
                        return false;
                    }
                    self.obj[o] = io;
                    self.trail.push((true, o));
                    work.push((d.id(o), c.id(io)));
                } else if self.obj[o] != io {
                    return false;
                }
            }
            self.arr[a] = img;
            self.trail.push((false, a));
            work.push((d.inv(a), c.inv(img)));
            for g in d.out_of(d.tgt(a)) {
                if self.arr[g] != UNSET {
                    work.push((d.comp(g, a), c.comp(self.arr[g], img)));
                }
            }
            for f in d.into_obj(d.src(a)) {
                if self.arr[f] != UNSET {
                    work.push((d.comp(a, f), c.comp(img, self.arr[f])));
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (is_obj, i) = self.trail.pop().unwrap();
            if is_obj {
                self.obj[i] = UNSET;
            } else {
                self.arr[i] = UNSET;
            }
        }
    }

    fn run(
        &mut self,
        visit: &mut dyn FnMut(&[usize], &[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, EnumerationBudget> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(EnumerationBudget);
        }
        // the first unassigned arrow whose source is known …
        let next_arr = (0..self.dom.arrow_count())
            .find(|&a| self.arr[a] == UNSET && self.obj[self.dom.src(a)] != UNSET);
        if let Some(a) = next_arr {
            let src = self.obj[self.dom.src(a)];
            let candidates: Vec<usize> = self.cod.out_of(src).collect();
            for img in candidates {
                let mark = self.trail.len();
                if self.set_arr(a, img) && self.run(visit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
                self.undo(mark);
            }
            return Ok(ControlFlow::Continue(()));
        }
        // … otherwise the first unassigned object
        if let Some(o) = (0..self.dom.object_count()).find(|&o| self.obj[o] == UNSET) {
            for img in 0..self.cod.object_count() {
                let mark = self.trail.len();
                if self.set_obj(o, img) && self.run(visit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
                self.undo(mark);
            }
            return Ok(ControlFlow::Continue(()));
        }
        Ok(visit(&self.obj, &self.arr))
    }
}

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("functor enumeration exceeded its search budget")]
pub struct EnumerationBudget;

pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

/// Visits every functor `dom → cod` satisfying the constraints, in
/// lexicographic order of (object images, arrow images) as assigned by a
/// depth-first search over objects and arrows in index order. Returns
/// `Break` if the visitor stopped early.
pub fn for_each_functor(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    cons: &Constraints,
    budget: u64,
    visit: &mut dyn FnMut(&[usize], &[usize]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>, EnumerationBudget> {
    let mut s = Search {
        dom,
        cod,
        cons,
        obj: vec![UNSET; dom.object_count()],
        arr: vec![UNSET; dom.arrow_count()],
        trail: Vec::new(),
        nodes: 0,
        budget,
    };
    s.run(visit)
}

/// All functors `dom → cod`.
pub fn all_functors(
    dom: &Rc<FiniteGroupoid>,
    cod: &Rc<FiniteGroupoid>,
) -> Result<Vec<GroupoidFunctor>, EnumerationBudget> {
    let mut out = Vec::new();
    let _ = for_each_functor(
        dom,
        cod,
        &Constraints::none(dom),
        DEFAULT_SEARCH_BUDGET,
        &mut |o, a| {
            out.push(GroupoidFunctor::unchecked(
                format!("F{}", out.len()),
                dom.clone(),
                cod.clone(),
                o.to_vec(),
                a.to_vec(),
            ));
            ControlFlow::Continue(())
        },
    )?;
    Ok(out)
}
