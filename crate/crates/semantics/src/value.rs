//! Semantic values: objects and arrows of fibers, and arrows of contexts.
//!
//! Equality is structural. Function values are tabulated over a fixed
//! enumeration of their domain fiber, so structural equality of tables is
//! extensional equality.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use rustc_hash::FxHasher;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Val {
    /// An object of a base groupoid.
    Obj(usize),
    Pair(Rc<(Val, Val)>),
    /// A point of an identity fiber: an arrow of the underlying fiber.
    Path(Rc<Arr>),
    /// A point of a family fiber: an arrow of the parameter context.
    Fam(Rc<CArr>),
    Fun(Rc<Table>),
    /// A context component the surrounding computation does not depend on.
    Erased,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arr {
    pub src: Val,
    pub tgt: Val,
    pub kind: ArrKind,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ArrKind {
    Base(usize),
    Pair(Rc<(Arr, Arr)>),
    /// The identity of a discrete fiber.
    Unit,
    /// A natural transformation, one component per domain object.
    Nat(Rc<Cached<Vec<Arr>>>),
}

/// A section over a domain fiber: a point per object and an arrow per arrow.
pub type Table = Cached<(Vec<Val>, Vec<Arr>)>;

/// A value with a precomputed hash.
pub struct Cached<T> {
    hash: u64,
    pub data: T,
}

impl<T: Hash> Cached<T> {
    pub fn new(data: T) -> Self {
        let mut h = FxHasher::default();
        data.hash(&mut h);
        Cached {
            hash: h.finish(),
            data,
        }
    }
}

impl<T: PartialEq> PartialEq for Cached<T> {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.data == other.data
    }
}

impl<T: Eq> Eq for Cached<T> {}

impl<T> Hash for Cached<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash)
    }
}

impl Table {
    pub fn points(&self) -> &[Val] {
        &self.data.0
    }

    pub fn paths(&self) -> &[Arr] {
        &self.data.1
    }
}

/// An arrow `src → tgt` of a context groupoid. Component `i` is an arrow
/// `T_i[f_<i](src_i) → tgt_i` in the fiber of entry `i` over `tgt_<i`.
///
/// Hashes of every prefix are kept, so hashing and `prefix` are O(1).
#[derive(Clone)]
pub struct CArr {
    pub src: Vec<Val>,
    pub tgt: Vec<Val>,
    pub arrs: Vec<Arr>,
    hashes: Vec<u64>,
}

fn step_hash(prev: u64, src: &Val, a: &Arr) -> u64 {
    let mut h = FxHasher::default();
    prev.hash(&mut h);
    src.hash(&mut h);
    a.hash(&mut h);
    h.finish()
}

impl CArr {
    pub fn empty() -> Self {
        CArr {
            src: Vec::new(),
            tgt: Vec::new(),
            arrs: Vec::new(),
            hashes: vec![0],
        }
    }

    pub fn new(src: Vec<Val>, tgt: Vec<Val>, arrs: Vec<Arr>) -> Self {
        let mut hashes = Vec::with_capacity(arrs.len() + 1);
        hashes.push(0);
        for (s, a) in src.iter().zip(&arrs) {
            hashes.push(step_hash(*hashes.last().unwrap(), s, a));
        }
        CArr {
            src,
            tgt,
            arrs,
            hashes,
        }
    }

    pub fn len(&self) -> usize {
        self.arrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrs.is_empty()
    }

    pub fn prefix(&self, k: usize) -> CArr {
        CArr {
            src: self.src[..k].to_vec(),
            tgt: self.tgt[..k].to_vec(),
            arrs: self.arrs[..k].to_vec(),
            hashes: self.hashes[..=k].to_vec(),
        }
    }

    /// `(self, a)` with source point `src` for the new entry.
    pub fn extended(&self, src: Val, a: Arr) -> CArr {
        let mut out = self.clone();
        out.hashes.push(step_hash(*self.hashes.last().unwrap(), &src, &a));
        out.src.push(src);
        out.tgt.push(a.tgt.clone());
        out.arrs.push(a);
        out
    }

    /// The same arrow with one more component inserted at position `k`.
    pub fn inserted(&self, k: usize, src: Val, a: Arr) -> CArr {
        let (mut s, mut t, mut arrs) = (self.src.clone(), self.tgt.clone(), self.arrs.clone());
        s.insert(k, src);
        t.insert(k, a.tgt.clone());
        arrs.insert(k, a);
        CArr::new(s, t, arrs)
    }
}

impl PartialEq for CArr {
    fn eq(&self, other: &Self) -> bool {
        self.hashes.last() == other.hashes.last()
            && self.arrs == other.arrs
            && self.src == other.src
            && self.tgt == other.tgt
    }
}

impl Eq for CArr {}

impl Hash for CArr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(*self.hashes.last().unwrap())
    }
}

impl Val {
    pub fn pair(a: Val, b: Val) -> Val {
        Val::Pair(Rc::new((a, b)))
    }

    pub fn table(points: Vec<Val>, paths: Vec<Arr>) -> Val {
        Val::Fun(Rc::new(Cached::new((points, paths))))
    }

    pub fn is_erased(&self) -> bool {
        matches!(self, Val::Erased)
    }
}

impl Arr {
    pub fn erased() -> Arr {
        Arr::unit(Val::Erased)
    }

    pub fn unit(at: Val) -> Arr {
        Arr {
            src: at.clone(),
            tgt: at,
            kind: ArrKind::Unit,
        }
    }

    pub fn nat(src: Val, tgt: Val, comps: Vec<Arr>) -> Arr {
        Arr {
            src,
            tgt,
            kind: ArrKind::Nat(Rc::new(Cached::new(comps))),
        }
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Obj(o) => write!(f, "#{o}"),
            Val::Pair(p) => write!(f, "<{:?}, {:?}>", p.0, p.1),
            Val::Path(a) => write!(f, "path({:?})", a.kind),
            Val::Fam(c) => write!(f, "fam{:?}", c.arrs.iter().map(|a| &a.kind).collect::<Vec<_>>()),
            Val::Fun(t) => write!(f, "fun{:?}", t.points()),
            Val::Erased => write!(f, "_"),
        }
    }
}

impl fmt::Debug for ArrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrKind::Base(a) => write!(f, "@{a}"),
            ArrKind::Pair(p) => write!(f, "({:?}, {:?})", p.0.kind, p.1.kind),
            ArrKind::Unit => write!(f, "1"),
            ArrKind::Nat(c) => write!(f, "nat{:?}", c.data.iter().map(|a| &a.kind).collect::<Vec<_>>()),
        }
    }
}

impl fmt::Debug for Arr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {:?} -> {:?}", self.kind, self.src, self.tgt)
    }
}

impl fmt::Debug for CArr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.arrs).finish()
    }
}
