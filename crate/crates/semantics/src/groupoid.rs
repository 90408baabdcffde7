//! Finite groupoids as explicit composition tables.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category in which every arrow is invertible. Objects and arrows
/// are numbered densely; identities are arrows like any other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    id: Vec<usize>,
    inv: Vec<usize>,
    /// `comp[g * n + f] = g ∘ f`, or `NONE` when `tgt f ≠ src g`.
    comp: Vec<usize>,
    /// Arrows by `(src, tgt)`, in index order.
    hom: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("groupoid {groupoid}: duplicate name {name}")]
    Duplicate { groupoid: String, name: String },
    #[error("groupoid {groupoid}: unknown object {name}")]
    UnknownObject { groupoid: String, name: String },
    #[error("groupoid {groupoid}: unknown arrow {name}")]
    UnknownArrow { groupoid: String, name: String },
    #[error("groupoid {groupoid}: {g} . {f} is not composable")]
    NotComposable { groupoid: String, g: String, f: String },
    #[error("groupoid {groupoid}: {w} = {g} . {f} has the wrong endpoints")]
    WrongEndpoints {
        groupoid: String,
        w: String,
        g: String,
        f: String,
    },
    #[error("groupoid {groupoid}: {g} . {f} is given twice with different values")]
    Conflict { groupoid: String, g: String, f: String },
    #[error("groupoid {groupoid}: missing composite {g} . {f}")]
    MissingComposite { groupoid: String, g: String, f: String },
    #[error("groupoid {groupoid}: identity law fails at {arrow}")]
    Identity { groupoid: String, arrow: String },
    #[error("groupoid {groupoid}: associativity fails at ({h}, {g}, {f})")]
    Associativity {
        groupoid: String,
        h: String,
        g: String,
        f: String,
    },
    #[error("groupoid {groupoid}: arrow {arrow} has no inverse")]
    NoInverse { groupoid: String, arrow: String },
    #[error("groupoid {groupoid}: {g} is not inverse to {f}")]
    NotInverse { groupoid: String, f: String, g: String },
}

/// Composition tables as written in a catalog file. Identities `id_<obj>`
/// are implicit, as are composites and inverses involving them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGroupoid {
    pub name: String,
    pub objects: Vec<String>,
    /// `(name, src, tgt)`
    pub arrows: Vec<(String, String, String)>,
    pub inverses: Vec<(String, String)>,
    /// `(w, g, f)` meaning `w = g ∘ f`
    pub compositions: Vec<(String, String, String)>,
}

/// Checks every law by exhaustive enumeration and builds the tables.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<FiniteGroupoid, GroupoidError> {
    let gname = raw.name.clone();
    let dup = |name: &str| GroupoidError::Duplicate {
        groupoid: gname.clone(),
        name: name.to_owned(),
    };
    let mut obj_ix = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_ix.insert(o.as_str(), i).is_some() {
            return Err(dup(o));
        }
    }
    let mut arrows: Vec<Arrow> = raw
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Arrow {
            name: format!("id_{o}"),
            src: i,
            tgt: i,
        })
        .collect();
    let object = |name: &str| {
        obj_ix
            .get(name)
            .copied()
            .ok_or_else(|| GroupoidError::UnknownObject {
                groupoid: gname.clone(),
                name: name.to_owned(),
            })
    };
    for (name, s, t) in &raw.arrows {
        arrows.push(Arrow {
            name: name.clone(),
            src: object(s)?,
            tgt: object(t)?,
        });
    }
    let mut arr_ix = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if arr_ix.insert(a.name.clone(), i).is_some() {
            return Err(dup(&a.name));
        }
    }
    let arrow = |name: &str| {
        arr_ix
            .get(name)
            .copied()
            .ok_or_else(|| GroupoidError::UnknownArrow {
                groupoid: gname.clone(),
                name: name.to_owned(),
            })
    };
    let n = arrows.len();
    let nobj = raw.objects.len();
    let mut comp = vec![NONE; n * n];
    for f in 0..n {
        for i in 0..nobj {
            if arrows[f].tgt == i {
                comp[i * n + f] = f;
            }
            if arrows[f].src == i {
                comp[f * n + i] = f;
            }
        }
    }
    let nm = |i: usize| arrows[i].name.clone();
    for (w, g, f) in &raw.compositions {
        let (wi, gi, fi) = (arrow(w)?, arrow(g)?, arrow(f)?);
        if arrows[fi].tgt != arrows[gi].src {
            return Err(GroupoidError::NotComposable {
                groupoid: gname,
                g: g.clone(),
                f: f.clone(),
            });
        }
        if arrows[wi].src != arrows[fi].src || arrows[wi].tgt != arrows[gi].tgt {
            return Err(GroupoidError::WrongEndpoints {
                groupoid: gname,
                w: w.clone(),
                g: g.clone(),
                f: f.clone(),
            });
        }
        let slot = &mut comp[gi * n + fi];
        if *slot != NONE && *slot != wi {
            return Err(GroupoidError::Conflict {
                groupoid: gname,
                g: g.clone(),
                f: f.clone(),
            });
        }
        *slot = wi;
    }
    for g in 0..n {
        for f in 0..n {
            if arrows[f].tgt == arrows[g].src && comp[g * n + f] == NONE {
                return Err(GroupoidError::MissingComposite {
                    groupoid: gname,
                    g: nm(g),
                    f: nm(f),
                });
            }
        }
    }
    let mut inv = vec![NONE; n];
    for i in 0..nobj {
        inv[i] = i;
    }
    for (f, g) in &raw.inverses {
        let (fi, gi) = (arrow(f)?, arrow(g)?);
        let ok = arrows[fi].src == arrows[gi].tgt
            && arrows[fi].tgt == arrows[gi].src
            && comp[gi * n + fi] == arrows[fi].src
            && comp[fi * n + gi] == arrows[fi].tgt;
        if !ok {
            return Err(GroupoidError::NotInverse {
                groupoid: gname,
                f: f.clone(),
                g: g.clone(),
            });
        }
        inv[fi] = gi;
        inv[gi] = fi;
    }
    if let Some(f) = (0..n).find(|&f| inv[f] == NONE) {
        return Err(GroupoidError::NoInverse {
            groupoid: gname,
            arrow: nm(f),
        });
    }
    let g = FiniteGroupoid::from_parts(gname, raw.objects.clone(), arrows, comp, inv);
    g.check_laws()?;
    Ok(g)
}

impl FiniteGroupoid {
    fn from_parts(
        name: String,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        comp: Vec<usize>,
        inv: Vec<usize>,
    ) -> Self {
        let nobj = objects.len();
        let mut id = vec![NONE; nobj];
        let mut hom = vec![Vec::new(); nobj * nobj];
        for (i, a) in arrows.iter().enumerate() {
            hom[a.src * nobj + a.tgt].push(i);
        }
        let n = arrows.len();
        for (i, a) in arrows.iter().enumerate() {
            if a.src == a.tgt && id[a.src] == NONE {
                // the identity is the arrow that is a unit for composition
                let unit = (0..n)
                    .filter(|&f| arrows[f].tgt == a.src)
                    .all(|f| comp[i * n + f] == f);
                if unit {
                    id[a.src] = i;
                }
            }
        }
        FiniteGroupoid {
            name,
            objects,
            arrows,
            id,
            inv,
            comp,
            hom,
        }
    }

    /// Builds a groupoid from a composition function. Inverses are found by
    /// search. The result is not validated; see [`FiniteGroupoid::check_laws`].
    pub fn from_fn(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = arrows.len();
        let mut comp = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                if arrows[f].tgt == arrows[g].src {
                    comp[g * n + f] = compose(g, f);
                }
            }
        }
        let mut g = FiniteGroupoid::from_parts(name.into(), objects, arrows, comp, vec![NONE; n]);
        for f in 0..n {
            let a = &g.arrows[f];
            let (s, t) = (a.src, a.tgt);
            g.inv[f] = g.hom(t, s)
                .iter()
                .copied()
                .find(|&h| g.comp[h * n + f] == g.id[s])
                .unwrap_or(NONE);
        }
        g
    }

    /// The discrete groupoid on the given objects.
    pub fn discrete(name: impl Into<String>, objects: Vec<String>) -> Self {
        let arrows = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow {
                name: format!("id_{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        FiniteGroupoid::from_fn(name, objects, arrows, |_, f| f)
    }

    /// Exhaustively checks the category and inverse laws.
    pub fn check_laws(&self) -> Result<(), GroupoidError> {
        let n = self.arrows.len();
        let gname = || self.name.clone();
        let nm = |i: usize| self.arrows[i].name.clone();
        for o in 0..self.objects.len() {
            if self.id[o] == NONE {
                return Err(GroupoidError::Identity {
                    groupoid: gname(),
                    arrow: format!("id_{}", self.objects[o]),
                });
            }
        }
        for f in 0..n {
            let a = &self.arrows[f];
            if self.comp(self.id[a.tgt], f) != f || self.comp(f, self.id[a.src]) != f {
                return Err(GroupoidError::Identity {
                    groupoid: gname(),
                    arrow: nm(f),
                });
            }
        }
        for f in 0..n {
            for g in self.out_of(self.arrows[f].tgt) {
                let gf = self.comp(g, f);
                if gf == NONE
                    || self.arrows[gf].src != self.arrows[f].src
                    || self.arrows[gf].tgt != self.arrows[g].tgt
                {
                    return Err(GroupoidError::MissingComposite {
                        groupoid: gname(),
                        g: nm(g),
                        f: nm(f),
                    });
                }
                for h in self.out_of(self.arrows[g].tgt) {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Err(GroupoidError::Associativity {
                            groupoid: gname(),
                            h: nm(h),
                            g: nm(g),
                            f: nm(f),
                        });
                    }
                }
            }
        }
        for f in 0..n {
            let g = self.inv[f];
            if g == NONE {
                return Err(GroupoidError::NoInverse {
                    groupoid: gname(),
                    arrow: nm(f),
                });
            }
            let a = &self.arrows[f];
            if self.comp(g, f) != self.id[a.src] || self.comp(f, g) != self.id[a.tgt] {
                return Err(GroupoidError::NotInverse {
                    groupoid: gname(),
                    f: nm(f),
                    g: nm(g),
                });
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

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.arrows[f].tgt
    }

    pub fn id(&self, o: usize) -> usize {
        self.id[o]
    }

    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.id[self.arrows[f].src] == f
    }

    /// `g ∘ f`.
    ///
    /// # Panics
    /// If `tgt f ≠ src g`.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        let r = self.comp[g * self.arrows.len() + f];
        assert!(r != NONE, "{}: composing non-composable arrows", self.name);
        r
    }

    pub fn try_comp(&self, g: usize, f: usize) -> Option<usize> {
        let r = self.comp[g * self.arrows.len() + f];
        (r != NONE).then_some(r)
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn out_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    pub fn into_obj(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |a| self.hom(a, b).iter().copied())
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// True when every hom-set has at most one element.
    pub fn is_discrete(&self) -> bool {
        (0..self.arrows.len()).all(|f| self.is_identity(f))
    }

    /// The product groupoid; object `(a, b)` has index `a * |H| + b`.
    pub fn product(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let (m, n) = (other.objects.len(), other.arrows.len());
        let objects = self
            .objects
            .iter()
            .flat_map(|a| other.objects.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let arrows = self
            .arrows
            .iter()
            .flat_map(|f| {
                other.arrows.iter().map(move |g| Arrow {
                    name: format!("({},{})", f.name, g.name),
                    src: f.src * m + g.src,
                    tgt: f.tgt * m + g.tgt,
                })
            })
            .collect();
        FiniteGroupoid::from_fn(
            format!("{}x{}", self.name, other.name),
            objects,
            arrows,
            |g, f| self.comp(g / n, f / n) * n + other.comp(g % n, f % n),
        )
    }
}

impl fmt::Display for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} objects, {} arrows)",
            self.name,
            self.objects.len(),
            self.arrows.len()
        )
    }
}
