//! Derived path algebra: inverses, the two composites, the filler between
//! them, the groupoid laws and transport.
//!
//! Every construction is uniform in a closed type `A`. Terms are assembled
//! with a small named builder and converted to de Bruijn form. In *named*
//! mode operations refer to earlier derivations through definitions (as in
//! `stdlib.mltt`); in *inline* mode their witnesses are substituted directly,
//! so no definitions are needed.

use std::sync::Arc;

use crate::kernel::{Checker, CheckerConfig, KernelError};
use crate::signature::{Decl, Signature};
use crate::surface::print;
use crate::syntax::{ident, Expr, Ident, Telescope, Term, Type};

/// A closed-up derivation `telescope ⊢ witness : statement`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedTerm {
    pub name: String,
    pub telescope: Telescope,
    pub statement: Type,
    pub witness: Term,
}

impl DerivedTerm {
    /// `Π telescope, statement`.
    pub fn closed_type(&self) -> Type {
        self.telescope
            .entries()
            .iter()
            .rev()
            .fold(self.statement.clone(), |acc, (n, t)| Type::pi(n, t.clone(), acc))
    }

    /// `λ telescope, witness`.
    pub fn closed_term(&self) -> Term {
        self.telescope
            .entries()
            .iter()
            .rev()
            .fold(self.witness.clone(), |acc, (n, t)| Term::lam(n, t.clone(), acc))
    }

    /// The witness at the given arguments (outermost first), without a
    /// β-redex.
    pub fn apply(&self, args: &[Term]) -> Term {
        assert_eq!(args.len(), self.telescope.len(), "{}: arity", self.name);
        self.witness.instantiate(args)
    }

    pub fn statement_at(&self, args: &[Term]) -> Type {
        assert_eq!(args.len(), self.telescope.len(), "{}: arity", self.name);
        self.statement.instantiate(args)
    }

    /// Endpoints of an identity-typed statement.
    pub fn endpoints(&self) -> Option<(&Term, &Term)> {
        match &self.statement {
            Type::Id { left, right, .. } => Some((left, right)),
            _ => None,
        }
    }

    pub fn check(&self, sig: &Signature, cfg: CheckerConfig) -> Result<(), KernelError> {
        let ck = Checker::new(sig, cfg);
        ck.check_telescope(&self.telescope)?;
        ck.check_is_type(&self.telescope, &self.statement)?;
        ck.check_type(&self.telescope, &self.witness, &self.statement)
    }

    pub fn to_decl(&self) -> Decl {
        Decl::Def {
            name: ident(&self.name),
            ty: self.closed_type(),
            body: self.closed_term(),
        }
    }
}

// -- named builder -----------------------------------------------------------

#[derive(Clone, Debug)]
struct OpRef {
    name: String,
    /// `Some` in inline mode.
    inline: Option<Term>,
}

#[derive(Clone, Debug)]
enum Nt {
    Closed(Type),
    Fam(Ident, Vec<Nm>),
    Pi(String, Box<Nt>, Box<Nt>),
    Id(Box<Nt>, Box<Nm>, Box<Nm>),
}

#[derive(Clone, Debug)]
enum Nm {
    V(String),
    Lam(String, Box<Nt>, Box<Nm>),
    App(Box<Nm>, Box<Nm>),
    Refl(Box<Nm>),
    J {
        binders: [String; 3],
        motive: Box<Nt>,
        base_binder: String,
        base: Box<Nm>,
        ends: Box<[Nm; 3]>,
    },
    Op(Arc<OpRef>, Vec<Nm>),
}

fn v(s: &str) -> Nm {
    Nm::V(s.to_owned())
}

fn ap(f: Nm, args: impl IntoIterator<Item = Nm>) -> Nm {
    args.into_iter()
        .fold(f, |f, a| Nm::App(Box::new(f), Box::new(a)))
}

fn lam(bs: &[(&str, Nt)], body: Nm) -> Nm {
    bs.iter().rev().fold(body, |acc, (n, t)| {
        Nm::Lam((*n).to_owned(), Box::new(t.clone()), Box::new(acc))
    })
}

fn pi(bs: &[(&str, Nt)], cod: Nt) -> Nt {
    bs.iter().rev().fold(cod, |acc, (n, t)| {
        Nt::Pi((*n).to_owned(), Box::new(t.clone()), Box::new(acc))
    })
}

fn arrow(a: Nt, b: Nt) -> Nt {
    Nt::Pi("_".to_owned(), Box::new(a), Box::new(b))
}

fn idt(a: Nt, l: Nm, r: Nm) -> Nt {
    Nt::Id(Box::new(a), Box::new(l), Box::new(r))
}

fn refl(a: Nm) -> Nm {
    Nm::Refl(Box::new(a))
}

fn jay(binders: [&str; 3], motive: Nt, base_binder: &str, base: Nm, l: Nm, r: Nm, p: Nm) -> Nm {
    Nm::J {
        binders: binders.map(str::to_owned),
        motive: Box::new(motive),
        base_binder: base_binder.to_owned(),
        base: Box::new(base),
        ends: Box::new([l, r, p]),
    }
}

fn lookup(scope: &[String], n: &str) -> usize {
    scope
        .iter()
        .rev()
        .position(|s| s == n)
        .unwrap_or_else(|| panic!("builder: unbound name {n}"))
}

impl Nt {
    fn build(&self, scope: &mut Vec<String>) -> Type {
        match self {
            Nt::Closed(t) => t.clone(),
            Nt::Fam(n, args) => Type::Const {
                name: n.clone(),
                args: args.iter().map(|a| a.build(scope)).collect(),
            },
            Nt::Pi(n, d, c) => {
                let d = d.build(scope);
                scope.push(n.clone());
                let c = c.build(scope);
                scope.pop();
                Type::pi(n, d, c)
            }
            Nt::Id(a, l, r) => Type::id(a.build(scope), l.build(scope), r.build(scope)),
        }
    }
}

impl Nm {
    fn build(&self, scope: &mut Vec<String>) -> Term {
        match self {
            Nm::V(n) => Term::Var(lookup(scope, n)),
            Nm::Lam(n, d, b) => {
                let d = d.build(scope);
                scope.push(n.clone());
                let b = b.build(scope);
                scope.pop();
                Term::lam(n, d, b)
            }
            Nm::App(f, a) => Term::app(f.build(scope), a.build(scope)),
            Nm::Refl(a) => Term::refl(a.build(scope)),
            Nm::J {
                binders,
                motive,
                base_binder,
                base,
                ends,
            } => {
                scope.extend(binders.iter().cloned());
                let m = motive.build(scope);
                scope.truncate(scope.len() - 3);
                scope.push(base_binder.clone());
                let d = base.build(scope);
                scope.pop();
                let [l, r, p] = ends.as_ref();
                Term::j(
                    [&binders[0], &binders[1], &binders[2]],
                    m,
                    base_binder,
                    d,
                    l.build(scope),
                    r.build(scope),
                    p.build(scope),
                )
            }
            Nm::Op(op, args) => {
                let args: Vec<Term> = args.iter().map(|a| a.build(scope)).collect();
                match &op.inline {
                    Some(w) => w.instantiate(&args),
                    None => Term::apps(Term::constant(&op.name), args),
                }
            }
        }
    }
}

fn derived(name: &str, tele: &[(&str, Nt)], statement: Nt, witness: Nm) -> DerivedTerm {
    let mut scope = Vec::new();
    let mut telescope = Telescope::new();
    for (n, t) in tele {
        telescope.push(*n, t.build(&mut scope));
        scope.push((*n).to_owned());
    }
    DerivedTerm {
        name: name.to_owned(),
        telescope,
        statement: statement.build(&mut scope),
        witness: witness.build(&mut scope),
    }
}

// -- derivations -------------------------------------------------------------

/// Derives the corpus step by step, keeping references to earlier items.
struct Deriver {
    a: Type,
    named: bool,
    inv: Option<Arc<OpRef>>,
    cl: Option<Arc<OpRef>>,
    cr: Option<Arc<OpRef>>,
    tr: Option<Arc<OpRef>>,
}

impl Deriver {
    fn new(a: Type, named: bool) -> Self {
        Deriver {
            a,
            named,
            inv: None,
            cl: None,
            cr: None,
            tr: None,
        }
    }

    fn a(&self) -> Nt {
        Nt::Closed(self.a.clone())
    }

    fn id(&self, l: Nm, r: Nm) -> Nt {
        idt(self.a(), l, r)
    }

    fn op(&self, d: &DerivedTerm) -> Arc<OpRef> {
        Arc::new(OpRef {
            name: d.name.clone(),
            inline: (!self.named).then(|| d.witness.clone()),
        })
    }

    fn inv_at(&self, args: [Nm; 3]) -> Nm {
        Nm::Op(self.inv.clone().expect("inv derived"), args.into())
    }

    fn cl_at(&self, args: [Nm; 5]) -> Nm {
        Nm::Op(self.cl.clone().expect("c_l derived"), args.into())
    }

    fn cr_at(&self, args: [Nm; 5]) -> Nm {
        Nm::Op(self.cr.clone().expect("c_r derived"), args.into())
    }

    fn tr_at(&self, args: [Nm; 4]) -> Nm {
        Nm::Op(self.tr.clone().expect("transport derived"), args.into())
    }

    fn path_tele(&self) -> Vec<(&'static str, Nt)> {
        vec![
            ("x", self.a()),
            ("y", self.a()),
            ("p", self.id(v("x"), v("y"))),
        ]
    }

    fn compose_tele(&self) -> Vec<(&'static str, Nt)> {
        vec![
            ("x", self.a()),
            ("y", self.a()),
            ("z", self.a()),
            ("p", self.id(v("x"), v("y"))),
            ("q", self.id(v("y"), v("z"))),
        ]
    }

    fn inverse(&mut self) -> DerivedTerm {
        let w = jay(
            ["u", "v", "k"],
            self.id(v("v"), v("u")),
            "u",
            refl(v("u")),
            v("x"),
            v("y"),
            v("p"),
        );
        let d = derived("inv", &self.path_tele(), self.id(v("y"), v("x")), w);
        self.inv = Some(self.op(&d));
        d
    }

    /// Eliminates `p`; the base case is the identity on `q`.
    fn compose_l(&mut self) -> DerivedTerm {
        let motive = pi(
            &[("t", self.a())],
            arrow(self.id(v("v"), v("t")), self.id(v("u"), v("t"))),
        );
        let base = lam(&[("t", self.a()), ("r", self.id(v("u"), v("t")))], v("r"));
        let w = ap(
            jay(["u", "v", "k"], motive, "u", base, v("x"), v("y"), v("p")),
            [v("z"), v("q")],
        );
        let d = derived("c_l", &self.compose_tele(), self.id(v("x"), v("z")), w);
        self.cl = Some(self.op(&d));
        d
    }

    /// Eliminates `q`; the base case is `p`.
    fn compose_r(&mut self) -> DerivedTerm {
        let motive = arrow(self.id(v("x"), v("u")), self.id(v("x"), v("v")));
        let base = lam(&[("r", self.id(v("x"), v("u")))], v("r"));
        let w = ap(
            jay(["u", "v", "k"], motive, "u", base, v("y"), v("z"), v("q")),
            [v("p")],
        );
        let d = derived("c_r", &self.compose_tele(), self.id(v("x"), v("z")), w);
        self.cr = Some(self.op(&d));
        d
    }

    /// `e(q, p) : Id (Id A x z) (c_l q p) (c_r q p)`, by J on `q` and then on `p`.
    fn filler_e(&self) -> DerivedTerm {
        let args = || [v("x"), v("y"), v("z"), v("p"), v("q")];
        let statement = idt(
            self.id(v("x"), v("z")),
            self.cl_at(args()),
            self.cr_at(args()),
        );
        // inner: s t : A, k : Id s t ⊢ Id (Id s t) (c_l s t t k (refl t)) k
        let inner_motive = idt(
            self.id(v("s"), v("t")),
            self.cl_at([v("s"), v("t"), v("t"), v("k"), refl(v("t"))]),
            v("k"),
        );
        let inner = |end: Nm| {
            jay(
                ["s", "t", "k"],
                inner_motive.clone(),
                "s",
                refl(refl(v("s"))),
                v("x"),
                end,
                v("p'"),
            )
        };
        let outer_motive = pi(
            &[("p'", self.id(v("x"), v("u")))],
            idt(
                self.id(v("x"), v("v")),
                self.cl_at([v("x"), v("u"), v("v"), v("p'"), v("m")]),
                self.cr_at([v("x"), v("u"), v("v"), v("p'"), v("m")]),
            ),
        );
        let base = lam(&[("p'", self.id(v("x"), v("u")))], inner(v("u")));
        let w = ap(
            jay(["u", "v", "m"], outer_motive, "u", base, v("y"), v("z"), v("q")),
            [v("p")],
        );
        derived("e", &self.compose_tele(), statement, w)
    }

    fn unit_l(&self) -> DerivedTerm {
        let tele = [
            ("x", self.a()),
            ("y", self.a()),
            ("f", self.id(v("x"), v("y"))),
        ];
        let lhs = |x: &str, y: &str, f: &str| self.cl_at([v(x), v(y), v(y), v(f), refl(v(y))]);
        let statement = idt(self.id(v("x"), v("y")), lhs("x", "y", "f"), v("f"));
        let motive = idt(self.id(v("u"), v("w")), lhs("u", "w", "k"), v("k"));
        let w = jay(
            ["u", "w", "k"],
            motive,
            "u",
            refl(refl(v("u"))),
            v("x"),
            v("y"),
            v("f"),
        );
        derived("unit_l", &tele, statement, w)
    }

    /// Holds definitionally: `c_l` computes on a reflexive first argument.
    fn unit_r(&self) -> DerivedTerm {
        let tele = [
            ("x", self.a()),
            ("y", self.a()),
            ("f", self.id(v("x"), v("y"))),
        ];
        let lhs = self.cl_at([v("x"), v("x"), v("y"), refl(v("x")), v("f")]);
        let statement = idt(self.id(v("x"), v("y")), lhs, v("f"));
        derived("unit_r", &tele, statement, refl(v("f")))
    }

    /// `c(h, c(g, f)) = c(c(h, g), f)` by J on `f`.
    fn assoc(&self) -> DerivedTerm {
        let tele = [
            ("x", self.a()),
            ("y", self.a()),
            ("z", self.a()),
            ("w", self.a()),
            ("f", self.id(v("x"), v("y"))),
            ("g", self.id(v("y"), v("z"))),
            ("h", self.id(v("z"), v("w"))),
        ];
        let sides = |x: &str, y: &str, z: &str, w: &str, f: &str, g: &str, h: &str| {
            let l = self.cl_at([
                v(x),
                v(z),
                v(w),
                self.cl_at([v(x), v(y), v(z), v(f), v(g)]),
                v(h),
            ]);
            let r = self.cl_at([
                v(x),
                v(y),
                v(w),
                v(f),
                self.cl_at([v(y), v(z), v(w), v(g), v(h)]),
            ]);
            (l, r)
        };
        let (l, r) = sides("x", "y", "z", "w", "f", "g", "h");
        let statement = idt(self.id(v("x"), v("w")), l, r);
        let (ml, mr) = sides("u", "u'", "z'", "w'", "k", "g'", "h'");
        let motive = pi(
            &[
                ("z'", self.a()),
                ("g'", self.id(v("u'"), v("z'"))),
                ("w'", self.a()),
                ("h'", self.id(v("z'"), v("w'"))),
            ],
            idt(self.id(v("u"), v("w'")), ml, mr),
        );
        let base = lam(
            &[
                ("z'", self.a()),
                ("g'", self.id(v("u"), v("z'"))),
                ("w'", self.a()),
                ("h'", self.id(v("z'"), v("w'"))),
            ],
            refl(self.cl_at([v("u"), v("z'"), v("w'"), v("g'"), v("h'")])),
        );
        let w = ap(
            jay(["u", "u'", "k"], motive, "u", base, v("x"), v("y"), v("f")),
            [v("z"), v("g"), v("w"), v("h")],
        );
        derived("assoc", &tele, statement, w)
    }

    /// `c(inv f, f) = refl x`.
    fn inv_l(&self) -> DerivedTerm {
        let tele = [
            ("x", self.a()),
            ("y", self.a()),
            ("f", self.id(v("x"), v("y"))),
        ];
        let lhs = |x: &str, y: &str, f: &str| {
            self.cl_at([v(x), v(y), v(x), v(f), self.inv_at([v(x), v(y), v(f)])])
        };
        let statement = idt(self.id(v("x"), v("x")), lhs("x", "y", "f"), refl(v("x")));
        let motive = idt(self.id(v("u"), v("u")), lhs("u", "w", "k"), refl(v("u")));
        let w = jay(
            ["u", "w", "k"],
            motive,
            "u",
            refl(refl(v("u"))),
            v("x"),
            v("y"),
            v("f"),
        );
        derived("inv_l", &tele, statement, w)
    }

    /// `c(f, inv f) = refl y`.
    fn inv_r(&self) -> DerivedTerm {
        let tele = [
            ("x", self.a()),
            ("y", self.a()),
            ("f", self.id(v("x"), v("y"))),
        ];
        let lhs = |x: &str, y: &str, f: &str| {
            self.cl_at([v(y), v(x), v(y), self.inv_at([v(x), v(y), v(f)]), v(f)])
        };
        let statement = idt(self.id(v("y"), v("y")), lhs("x", "y", "f"), refl(v("y")));
        let motive = idt(self.id(v("w"), v("w")), lhs("u", "w", "k"), refl(v("w")));
        let w = jay(
            ["u", "w", "k"],
            motive,
            "u",
            refl(refl(v("u"))),
            v("x"),
            v("y"),
            v("f"),
        );
        derived("inv_r", &tele, statement, w)
    }

    fn inv_involutive(&self) -> DerivedTerm {
        let lhs = |x: &str, y: &str, p: &str| {
            self.inv_at([v(y), v(x), self.inv_at([v(x), v(y), v(p)])])
        };
        let statement = idt(self.id(v("x"), v("y")), lhs("x", "y", "p"), v("p"));
        let motive = idt(self.id(v("u"), v("w")), lhs("u", "w", "k"), v("k"));
        let w = jay(
            ["u", "w", "k"],
            motive,
            "u",
            refl(refl(v("u"))),
            v("x"),
            v("y"),
            v("p"),
        );
        derived("inv_involutive", &self.path_tele(), statement, w)
    }

    fn transport(&mut self, family: &Ident) -> DerivedTerm {
        let fam = |t: Nm| Nt::Fam(family.clone(), vec![t]);
        let mut tele = self.path_tele();
        tele.push(("b", fam(v("x"))));
        let motive = arrow(fam(v("u")), fam(v("w")));
        let base = lam(&[("c", fam(v("u")))], v("c"));
        let w = ap(
            jay(["u", "w", "k"], motive, "u", base, v("x"), v("y"), v("p")),
            [v("b")],
        );
        let d = derived("transport", &tele, fam(v("y")), w);
        self.tr = Some(self.op(&d));
        d
    }

    /// `transport (c_l p q) b = transport q (transport p b)`, by J on `p`.
    fn transport_comp(&self, family: &Ident) -> DerivedTerm {
        let fam = |t: Nm| Nt::Fam(family.clone(), vec![t]);
        let mut tele = self.compose_tele();
        tele.push(("b", fam(v("x"))));
        let sides = |x: &str, y: &str, z: &str, p: &str, q: &str, b: &str| {
            let l = self.tr_at([
                v(x),
                v(z),
                self.cl_at([v(x), v(y), v(z), v(p), v(q)]),
                v(b),
            ]);
            let r = self.tr_at([
                v(y),
                v(z),
                v(q),
                self.tr_at([v(x), v(y), v(p), v(b)]),
            ]);
            (l, r)
        };
        let (l, r) = sides("x", "y", "z", "p", "q", "b");
        let statement = idt(fam(v("z")), l, r);
        let (ml, mr) = sides("u", "w", "z'", "k", "q'", "b'");
        let motive = pi(
            &[
                ("z'", self.a()),
                ("q'", self.id(v("w"), v("z'"))),
                ("b'", fam(v("u"))),
            ],
            idt(fam(v("z'")), ml, mr),
        );
        let base = lam(
            &[
                ("z'", self.a()),
                ("q'", self.id(v("u"), v("z'"))),
                ("b'", fam(v("u"))),
            ],
            refl(self.tr_at([v("u"), v("z'"), v("q'"), v("b'")])),
        );
        let w = ap(
            jay(["u", "w", "k"], motive, "u", base, v("x"), v("y"), v("p")),
            [v("z"), v("q"), v("b")],
        );
        derived("transport_comp", &tele, statement, w)
    }
}

// -- public API --------------------------------------------------------------

pub fn derive_inverse(a: &Type) -> DerivedTerm {
    Deriver::new(a.clone(), false).inverse()
}

pub fn derive_compose_l(a: &Type) -> DerivedTerm {
    Deriver::new(a.clone(), false).compose_l()
}

pub fn derive_compose_r(a: &Type) -> DerivedTerm {
    Deriver::new(a.clone(), false).compose_r()
}

pub fn derive_filler_e(a: &Type) -> DerivedTerm {
    let mut d = Deriver::new(a.clone(), false);
    d.compose_l();
    d.compose_r();
    d.filler_e()
}

/// `assoc`, `unit_l`, `unit_r`, `inv_l`, `inv_r`, with composition `c_l`.
pub fn derive_groupoid_laws(a: &Type) -> Vec<DerivedTerm> {
    let mut d = Deriver::new(a.clone(), false);
    d.inverse();
    d.compose_l();
    vec![d.assoc(), d.unit_l(), d.unit_r(), d.inv_l(), d.inv_r()]
}

/// Transport in the family `family`, which must take one argument of type `a`.
pub fn derive_transport(a: &Type, family: &str) -> DerivedTerm {
    Deriver::new(a.clone(), false).transport(&ident(family))
}

/// The full corpus, each item referring to earlier ones by name when
/// `named`, or with witnesses inlined otherwise.
pub fn corpus(a: &Type, family: Option<&str>, named: bool) -> Vec<DerivedTerm> {
    let mut d = Deriver::new(a.clone(), named);
    let mut out = vec![d.inverse(), d.compose_l(), d.compose_r()];
    out.push(d.filler_e());
    out.push(d.assoc());
    out.push(d.unit_l());
    out.push(d.unit_r());
    out.push(d.inv_l());
    out.push(d.inv_r());
    out.push(d.inv_involutive());
    if let Some(f) = family {
        let f = ident(f);
        out.push(d.transport(&f));
        out.push(d.transport_comp(&f));
    }
    out
}

/// Base type and family names used by the standard corpus.
pub const BASE: &str = "A";
pub const FAMILY: &str = "B";

/// `const A : type`, `const B : A -> type`.
pub fn base_signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_base_type(BASE);
    let mut params = Telescope::new();
    params.push("_", Type::base(BASE));
    sig.push(Decl::TypeConst {
        name: ident(FAMILY),
        params,
    });
    sig
}

/// The standard corpus over `A` and `B`, with definitions referring to each
/// other by name.
pub fn standard_corpus() -> Vec<DerivedTerm> {
    corpus(&Type::base(BASE), Some(FAMILY), true)
}

/// The base signature extended with every standard definition.
pub fn standard_signature() -> Signature {
    let mut sig = base_signature();
    for d in standard_corpus() {
        sig.push(d.to_decl());
    }
    sig
}

/// Checks each derivation in order, adding it as a definition on success.
pub fn check_corpus(
    base: &Signature,
    items: &[DerivedTerm],
    cfg: CheckerConfig,
) -> Vec<(String, Result<(), KernelError>)> {
    let mut sig = base.clone();
    let mut out = Vec::new();
    for d in items {
        let r = d.check(&sig, cfg);
        if r.is_ok() {
            sig.push(d.to_decl());
        }
        out.push((d.name.clone(), r));
    }
    out
}

/// The standard corpus as `.mltt` source.
pub fn stdlib_source() -> String {
    let mut s = String::from(
        "-- Path algebra over a base type A with a family B.\n\
         -- Composition is c_l throughout; c_r and e relate the two composites.\n\n",
    );
    for d in base_signature().decls() {
        s.push_str(&print::decl_to_string(d));
        s.push('\n');
    }
    for d in standard_corpus() {
        s.push('\n');
        s.push_str(&print::decl_to_string(&d.to_decl()));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_indices() {
        let inv = derive_inverse(&Type::base("A"));
        assert_eq!(
            inv.statement,
            Type::id(Type::base("A"), Term::Var(1), Term::Var(2))
        );
        let Term::J { left, right, path, .. } = &inv.witness else {
            panic!()
        };
        assert_eq!(**left, Term::Var(2));
        assert_eq!(**right, Term::Var(1));
        assert_eq!(**path, Term::Var(0));
    }
}
