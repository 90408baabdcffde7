//! The theory `T(A•)` of a globular set, the globular set of identity-tower
//! terms of a type, and low-dimensional operations on identity towers.

use std::collections::HashMap;

use mltt_core::stdlib::{derive_compose_l, derive_filler_e, derive_groupoid_laws, derive_inverse, DerivedTerm};
use mltt_core::{ident, Checker, CheckerConfig, Decl, KernelError, Signature, Telescope, Term, Type};
use thiserror::Error;

use crate::globular::{Cell, GlobularSet};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("declaration {name}: {source}")]
    Kernel {
        name: String,
        #[source]
        source: KernelError,
    },
}

/// `T(A•)`: a base type and one postulated term per cell.
#[derive(Clone, Debug)]
pub struct Theory {
    pub signature: Signature,
    /// Name of the base type.
    pub base: String,
    /// The type of each cell, by dimension and index.
    pub cell_types: Vec<Vec<Type>>,
}

impl Theory {
    pub fn cell_term(&self, g: &GlobularSet, dim: usize, i: usize) -> Term {
        Term::constant(&g.cell(dim, i).name)
    }
}

fn fresh_base(g: &GlobularSet) -> String {
    let mut name = String::from("X");
    while g.find(&name).is_some() {
        name.push('\'');
    }
    name
}

/// `X : type`, each 0-cell `a : X`, and each `n`-cell `x : Id(T, s x, t x)`
/// where `T` is the type of its boundary cells. Every declaration is
/// kernel-checked.
pub fn build_theory(g: &GlobularSet, cfg: CheckerConfig) -> Result<Theory, TheoryError> {
    let base = fresh_base(g);
    let mut sig = Signature::new();
    sig.add_base_type(&base);
    let mut cell_types: Vec<Vec<Type>> = Vec::new();
    for d in 0..=g.max_dim().unwrap_or(0) {
        let mut tys = Vec::new();
        for (i, c) in g.cells(d).iter().enumerate() {
            let ty = if d == 0 {
                Type::base(&base)
            } else {
                let (s, t) = (g.src(d, i), g.tgt(d, i));
                Type::id(
                    cell_types[d - 1][s].clone(),
                    Term::constant(&g.cell(d - 1, s).name),
                    Term::constant(&g.cell(d - 1, t).name),
                )
            };
            let decl = Decl::TermConst {
                name: ident(&c.name),
                ty: ty.clone(),
            };
            Checker::new(&sig, cfg)
                .check_decl(&decl)
                .map_err(|source| TheoryError::Kernel {
                    name: c.name.clone(),
                    source,
                })?;
            sig.push(decl);
            tys.push(ty);
        }
        cell_types.push(tys);
    }
    Ok(Theory {
        signature: sig,
        base,
        cell_types,
    })
}

/// Derived operations at one closed type, built on first use.
#[derive(Default)]
pub struct Ops {
    by_type: HashMap<Type, OpsAt>,
}

pub struct OpsAt {
    pub inv: DerivedTerm,
    pub comp: DerivedTerm,
    pub e: DerivedTerm,
    /// `assoc`, `unit_l`, `unit_r`, `inv_l`, `inv_r`.
    pub laws: Vec<DerivedTerm>,
}

impl Ops {
    pub fn at(&mut self, t: &Type) -> &OpsAt {
        self.by_type.entry(t.clone()).or_insert_with(|| OpsAt {
            inv: derive_inverse(t),
            comp: derive_compose_l(t),
            e: derive_filler_e(t),
            laws: derive_groupoid_laws(t),
        })
    }
}

/// A cell of the enumerated tower: a closed normal form, its type and
/// boundary.
#[derive(Clone, Debug)]
struct TowerCell {
    term: Term,
    ty: Type,
    boundary: Option<(usize, usize)>,
}

/// The globular set of identity-tower terms of `a`, together with the
/// normal-form term of each cell and whether a bound cut the enumeration
/// short.
#[derive(Clone, Debug)]
pub struct Tower {
    pub cells: GlobularSet,
    pub terms: Vec<Vec<Term>>,
    pub partial: bool,
}

/// Enumerates closed normal forms of `a` and of its identity types up to
/// dimension `depth`: constants of the right types, reflexivities of the
/// previous dimension, and their closure under inverses and composites,
/// deduplicated by normal form. At most `size` cells are kept per
/// dimension; hitting the bound marks the result partial.
pub fn globular_of_type(sig: &Signature, a: &Type, depth: usize, size: usize, cfg: CheckerConfig) -> Result<Tower, KernelError> {
    let ck = Checker::new(sig, cfg);
    let empty = Telescope::new();
    let a = ck.normalize_type(a)?;
    let mut ops = Ops::default();
    let mut levels: Vec<Vec<TowerCell>> = Vec::new();
    let mut partial = false;
    let constants: Vec<(Term, Type)> = sig
        .decls()
        .iter()
        .filter_map(|d| match d {
            Decl::TermConst { name, ty } | Decl::Def { name, ty, .. } => Some((Term::Const(name.clone()), ty.clone())),
            Decl::TypeConst { .. } => None,
        })
        .collect();
    for dim in 0..=depth {
        let mut level: Vec<TowerCell> = Vec::new();
        let mut seen: HashMap<Term, usize> = HashMap::new();
        let prev = if dim == 0 { None } else { Some(&levels[dim - 1]) };
        if dim > 0 && prev.is_some_and(|p| p.is_empty()) {
            break;
        }
        // the boundary of a candidate, if it lies in this dimension
        let classify = |ty: &Type| -> Result<Option<Option<(usize, usize)>>, KernelError> {
            let ty = ck.normalize_type(ty)?;
            Ok(match (&ty, prev) {
                (_, None) => (ty == a).then_some(None),
                (Type::Id { underlying, left, right }, Some(p)) => {
                    let s = p.iter().position(|c| c.term == **left && c.ty == **underlying);
                    let t = p.iter().position(|c| c.term == **right && c.ty == **underlying);
                    match (s, t) {
                        (Some(s), Some(t)) => Some(Some((s, t))),
                        _ => None,
                    }
                }
                _ => None,
            })
        };
        let mut add = |term: Term, level: &mut Vec<TowerCell>, partial: &mut bool| -> Result<(), KernelError> {
            let nf = ck.normalize_term(&term)?;
            if seen.contains_key(&nf) {
                return Ok(());
            }
            let ty = ck.normalize_type(&ck.infer_type(&empty, &nf)?)?;
            let Some(boundary) = classify(&ty)? else { return Ok(()) };
            if level.len() >= size {
                *partial = true;
                return Ok(());
            }
            seen.insert(nf.clone(), level.len());
            level.push(TowerCell { term: nf, ty, boundary });
            Ok(())
        };
        for (t, _) in &constants {
            add(t.clone(), &mut level, &mut partial)?;
        }
        if let Some(p) = prev {
            for c in p {
                add(Term::refl(c.term.clone()), &mut level, &mut partial)?;
            }
        }
        if dim > 0 {
            // close under inverses and composites, one round per pass
            let mut start = 0;
            loop {
                let before = level.len();
                let p = prev.unwrap();
                let snapshot = level.clone();
                for (k, c) in snapshot.iter().enumerate() {
                    let (s, t) = c.boundary.unwrap();
                    let under = &p[s].ty;
                    let ops_at = ops.at(under);
                    let inv = ops_at.inv.apply(&[p[s].term.clone(), p[t].term.clone(), c.term.clone()]);
                    let comp = ops_at.comp.clone();
                    if k >= start {
                        add(inv, &mut level, &mut partial)?;
                    }
                    for (k2, c2) in snapshot.iter().enumerate() {
                        if k < start && k2 < start {
                            continue;
                        }
                        let (s2, t2) = c2.boundary.unwrap();
                        if s2 != t || p[s2].ty != *under {
                            continue;
                        }
                        let args = [p[s].term.clone(), p[t].term.clone(), p[t2].term.clone(), c.term.clone(), c2.term.clone()];
                        add(comp.apply(&args), &mut level, &mut partial)?;
                    }
                }
                start = before;
                if level.len() == before || partial {
                    break;
                }
            }
        }
        levels.push(level);
    }
    let mut cells = GlobularSet::new();
    let mut terms = Vec::new();
    for (d, level) in levels.iter().enumerate() {
        let mut ts = Vec::new();
        for (i, c) in level.iter().enumerate() {
            cells.push_unchecked(
                d,
                Cell {
                    name: format!("c{d}_{i}"),
                    src: c.boundary.map(|b| b.0),
                    tgt: c.boundary.map(|b| b.1),
                },
            );
            ts.push(c.term.clone());
        }
        terms.push(ts);
    }
    Ok(Tower { cells, terms, partial })
}

/// One instantiated operation.
#[derive(Clone, Debug)]
pub struct OpInstance {
    pub dim: usize,
    pub op: &'static str,
    pub args: Vec<String>,
    pub term: Term,
    pub statement: Type,
    pub result: Result<(), KernelError>,
}

/// The operation table of a globular set up to dimension 2.
#[derive(Clone, Debug, Default)]
pub struct OpTable {
    pub instances: Vec<OpInstance>,
}

pub const OPERATIONS: &[&str] = &["identity", "inverse", "composite", "e", "assoc", "unit_l", "unit_r", "inv_l", "inv_r"];

impl OpTable {
    /// Every operation kind has an instance in each dimension that has cells,
    /// and every instance kernel-checks.
    pub fn is_complete(&self, dims: &[usize]) -> bool {
        self.instances.iter().all(|i| i.result.is_ok())
            && dims
                .iter()
                .all(|&d| OPERATIONS.iter().all(|op| self.instances.iter().any(|i| i.dim == d && i.op == *op)))
    }

    pub fn count(&self, dim: usize, op: &str) -> usize {
        self.instances.iter().filter(|i| i.dim == dim && i.op == op).count()
    }
}

/// An operand: a named closed term of `Id(T, s, t)` with `s, t` cells of the
/// previous dimension.
#[derive(Clone)]
struct Operand {
    label: String,
    term: Term,
    src: usize,
    tgt: usize,
}

/// Instantiates identities, inverses, composites and the mediating cells
/// `e`, `assoc`, `unit_l`, `unit_r`, `inv_l`, `inv_r` in every dimension
/// `1..=max_dim` (at most 2), and kernel-checks each instance. Operands in
/// dimension `n` are the generating `n`-cells, identities on `(n-1)`-cells
/// and inverses of generators.
pub fn omega_ops(th: &Theory, g: &GlobularSet, max_dim: usize, cfg: CheckerConfig) -> OpTable {
    let ck = Checker::new(&th.signature, cfg);
    let empty = Telescope::new();
    let mut ops = Ops::default();
    let mut table = OpTable::default();
    let top = max_dim.min(2).min(g.max_dim().unwrap_or(0));
    for dim in 1..=top {
        let below = |i: usize| Term::constant(&g.cell(dim - 1, i).name);
        let below_ty = |i: usize| th.cell_types[dim - 1][i].clone();
        let mut operands: Vec<Operand> = Vec::new();
        for i in 0..g.count(dim) {
            operands.push(Operand {
                label: g.cell(dim, i).name.clone(),
                term: Term::constant(&g.cell(dim, i).name),
                src: g.src(dim, i),
                tgt: g.tgt(dim, i),
            });
        }
        let gens = operands.len();
        // identities
        for x in 0..g.count(dim - 1) {
            let ty = below_ty(x);
            let refl = Term::refl(below(x));
            let statement = Type::id(ty, below(x), below(x));
            let result = ck.check_type(&empty, &refl, &statement);
            table.instances.push(OpInstance {
                dim,
                op: "identity",
                args: vec![g.cell(dim - 1, x).name.clone()],
                term: refl.clone(),
                statement,
                result,
            });
            operands.push(Operand {
                label: format!("refl({})", g.cell(dim - 1, x).name),
                term: refl,
                src: x,
                tgt: x,
            });
        }
        let mut push = |op: &'static str, args: Vec<String>, d: &DerivedTerm, terms: Vec<Term>| {
            let term = d.apply(&terms);
            let statement = d.statement_at(&terms);
            let result = ck.check_type(&empty, &term, &statement);
            table.instances.push(OpInstance {
                dim,
                op,
                args,
                term,
                statement,
                result,
            });
        };
        // inverses of generators
        for k in 0..gens {
            let o = operands[k].clone();
            let at = ops.at(&below_ty(o.src));
            let args = vec![below(o.src), below(o.tgt), o.term.clone()];
            let inv = at.inv.clone();
            push("inverse", vec![o.label.clone()], &inv, args.clone());
            operands.push(Operand {
                label: format!("inv({})", o.label),
                term: inv.apply(&args),
                src: o.tgt,
                tgt: o.src,
            });
        }
        // unary laws on generators
        for o in operands[..gens].iter().cloned() {
            let at = ops.at(&below_ty(o.src));
            let laws = at.laws.clone();
            let args = vec![below(o.src), below(o.tgt), o.term.clone()];
            for (name, law) in [("unit_l", &laws[1]), ("unit_r", &laws[2]), ("inv_l", &laws[3]), ("inv_r", &laws[4])] {
                push(name, vec![o.label.clone()], law, args.clone());
            }
        }
        // composable pairs and triples
        let n = operands.len();
        for i in 0..n {
            for j in 0..n {
                let (p, q) = (&operands[i], &operands[j]);
                if p.tgt != q.src || below_ty(p.src) != below_ty(q.src) {
                    continue;
                }
                let at = ops.at(&below_ty(p.src));
                let (comp, e) = (at.comp.clone(), at.e.clone());
                let args = vec![below(p.src), below(p.tgt), below(q.tgt), p.term.clone(), q.term.clone()];
                let labels = vec![p.label.clone(), q.label.clone()];
                push("composite", labels.clone(), &comp, args.clone());
                push("e", labels, &e, args);
            }
        }
        for i in 0..gens {
            for j in 0..n {
                for k in 0..n {
                    let (f, gg, h) = (&operands[i], &operands[j], &operands[k]);
                    if f.tgt != gg.src || gg.tgt != h.src {
                        continue;
                    }
                    let at = ops.at(&below_ty(f.src));
                    let assoc = at.laws[0].clone();
                    let args = vec![
                        below(f.src),
                        below(f.tgt),
                        below(gg.tgt),
                        below(h.tgt),
                        f.term.clone(),
                        gg.term.clone(),
                        h.term.clone(),
                    ];
                    push("assoc", vec![f.label.clone(), gg.label.clone(), h.label.clone()], &assoc, args);
                }
            }
        }
    }
    table
}
