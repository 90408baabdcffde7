//! Printer from core syntax back to surface syntax.
//!
//! Binder names are reused when they do not capture; otherwise a numeric
//! suffix is appended. Output reparses to the same core expression.

use std::collections::HashSet;

use super::resolve::Item;
use crate::signature::Decl;
use crate::syntax::{ident, Expr, Ident, Telescope, Term, Type};

/// Prints a term whose free variables are named by `names` (outermost first).
pub fn term_to_string(names: &[Ident], t: &Term) -> String {
    Printer::new(names).term(t, TermPrec::Fun)
}

/// Prints a type whose free variables are named by `names` (outermost first).
pub fn type_to_string(names: &[Ident], t: &Type) -> String {
    Printer::new(names).ty(t, TypePrec::Quant)
}

/// Prints a context as `(x : A) (y : B)`.
pub fn telescope_to_string(tel: &Telescope) -> String {
    let mut p = Printer::new(&[]);
    let mut out = Vec::new();
    for (n, ty) in tel.entries() {
        out.push(format!("({n} : {})", p.ty(ty, TypePrec::Quant)));
        p.names.push(n.clone());
    }
    out.join(" ")
}

pub fn item_to_string(item: &Item) -> String {
    let p = Printer::new(&[]);
    match item {
        Item::TypeConst { name, params } => format!("const {name} : {}", p.clone().sig(params)),
        Item::TermConst { name, ty } => format!("const {name} : {}", p.clone().ty(ty, TypePrec::Quant)),
        Item::Def { name, ty: Some(ty), body } => format!(
            "def {name} : {} := {}",
            p.clone().ty(ty, TypePrec::Quant),
            p.clone().term(body, TermPrec::Fun)
        ),
        Item::Def { name, ty: None, body } => {
            format!("def {name} := {}", p.clone().term(body, TermPrec::Fun))
        }
        Item::Check { term, ty } => format!(
            "check {} : {}",
            p.clone().term(term, TermPrec::Fun),
            p.clone().ty(ty, TypePrec::Quant)
        ),
    }
}

pub fn decl_to_string(decl: &Decl) -> String {
    item_to_string(&match decl.clone() {
        Decl::TypeConst { name, params } => Item::TypeConst { name, params },
        Decl::TermConst { name, ty } => Item::TermConst { name, ty },
        Decl::Def { name, ty, body } => Item::Def {
            name,
            ty: Some(ty),
            body,
        },
    })
}

/// One declaration per line.
pub fn module_to_string(items: &[Item]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&item_to_string(it));
        s.push('\n');
    }
    s
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TypePrec {
    Quant,
    Arrow,
    Prod,
    App,
    Atom,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TermPrec {
    Fun,
    App,
    Atom,
}

#[derive(Clone)]
struct Printer {
    names: Vec<Ident>,
}

fn paren(s: String, needed: bool) -> String {
    if needed {
        format!("({s})")
    } else {
        s
    }
}

/// Something binders can scope over.
trait Body: Expr {
    fn consts(&self, out: &mut HashSet<Ident>);
}

impl Body for Term {
    fn consts(&self, out: &mut HashSet<Ident>) {
        term_consts(self, out)
    }
}

impl Body for Type {
    fn consts(&self, out: &mut HashSet<Ident>) {
        type_consts(self, out)
    }
}

fn term_consts(t: &Term, out: &mut HashSet<Ident>) {
    match t {
        Term::Var(_) => {}
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::Lam { domain, body, .. } => {
            type_consts(domain, out);
            term_consts(body, out);
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            term_consts(a, out);
            term_consts(b, out);
        }
        Term::Refl(a) => term_consts(a, out),
        Term::SigElim {
            motive,
            branch,
            scrutinee,
            ..
        } => {
            type_consts(motive, out);
            term_consts(branch, out);
            term_consts(scrutinee, out);
        }
        Term::J {
            motive,
            base,
            left,
            right,
            path,
            ..
        } => {
            type_consts(motive, out);
            for t in [base, left, right, path] {
                term_consts(t, out);
            }
        }
    }
}

fn type_consts(t: &Type, out: &mut HashSet<Ident>) {
    match t {
        Type::Const { args, .. } => args.iter().for_each(|a| term_consts(a, out)),
        Type::Pi { domain, codomain, .. } | Type::Sigma { domain, codomain, .. } => {
            type_consts(domain, out);
            type_consts(codomain, out);
        }
        Type::Id {
            underlying,
            left,
            right,
        } => {
            type_consts(underlying, out);
            term_consts(left, out);
            term_consts(right, out);
        }
    }
}

impl Printer {
    fn new(names: &[Ident]) -> Self {
        Printer {
            names: names.to_vec(),
        }
    }

    /// Chooses a display name for a binder whose scope is `bodies`, each of
    /// which lives under `later` further binders. Returns `_` only when the
    /// hint is `_` and the variable is unused.
    fn pick<B: Body>(&self, hint: &Ident, bodies: &[(&B, usize)]) -> Ident {
        let used = bodies.iter().any(|(b, later)| b.mentions(*later));
        if &**hint == "_" && !used {
            return hint.clone();
        }
        let base: &str = if &**hint == "_" { "x" } else { hint };
        let mut consts = HashSet::new();
        for (b, _) in bodies {
            b.consts(&mut consts);
        }
        let len = self.names.len();
        let ok = |c: &str| {
            !consts.contains(c)
                && self.names.iter().enumerate().all(|(j, n)| {
                    &**n != c
                        || bodies
                            .iter()
                            .all(|(b, later)| !b.mentions(len - 1 - j + 1 + later))
                })
        };
        if ok(base) {
            return ident(base);
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|c| ok(c))
            .map(|c| ident(&c))
            .expect("fresh name")
    }

    fn var(&self, i: usize) -> String {
        let len = self.names.len();
        if i < len {
            let j = len - 1 - i;
            let n = &self.names[j];
            let shadowed = self.names[j + 1..].iter().any(|m| m == n);
            if &**n != "_" && !shadowed {
                return n.to_string();
            }
        }
        format!("#{i}")
    }

    fn with<R>(&mut self, names: &[Ident], f: impl FnOnce(&mut Self) -> R) -> R {
        let k = names.len();
        self.names.extend_from_slice(names);
        let r = f(self);
        self.names.truncate(self.names.len() - k);
        r
    }

    fn ty(&mut self, t: &Type, prec: TypePrec) -> String {
        match t {
            Type::Const { name, args } => {
                if args.is_empty() {
                    name.to_string()
                } else {
                    let mut s = name.to_string();
                    for a in args {
                        s.push(' ');
                        s.push_str(&self.term(a, TermPrec::Atom));
                    }
                    paren(s, prec > TypePrec::App)
                }
            }
            Type::Id {
                underlying,
                left,
                right,
            } => {
                let s = format!(
                    "Id {} {} {}",
                    self.ty(underlying, TypePrec::Atom),
                    self.term(left, TermPrec::Atom),
                    self.term(right, TermPrec::Atom)
                );
                paren(s, prec > TypePrec::App)
            }
            Type::Pi {
                binder,
                domain,
                codomain,
            }
            | Type::Sigma {
                binder,
                domain,
                codomain,
            } => {
                let is_pi = matches!(t, Type::Pi { .. });
                let name = self.pick(binder, &[(codomain.as_ref(), 0)]);
                if &*name == "_" {
                    let (op, lp, rp, level) = if is_pi {
                        ("->", TypePrec::Prod, TypePrec::Quant, TypePrec::Arrow)
                    } else {
                        ("*", TypePrec::App, TypePrec::Prod, TypePrec::Prod)
                    };
                    let l = self.ty(domain, lp);
                    let r = self.with(&[name], |p| p.ty(codomain, rp));
                    return paren(format!("{l} {op} {r}"), prec > level);
                }
                let s = self.quantifier(t, is_pi);
                paren(s, prec > TypePrec::Quant)
            }
        }
    }

    /// Prints a maximal chain of named Π (or Σ) binders with grouping.
    fn quantifier(&mut self, t: &Type, is_pi: bool) -> String {
        let mut groups: Vec<(Vec<Ident>, String, Type)> = Vec::new();
        let mut cur = t;
        let mut pushed = 0;
        loop {
            let (binder, domain, codomain) = match (cur, is_pi) {
                (
                    Type::Pi {
                        binder,
                        domain,
                        codomain,
                    },
                    true,
                )
                | (
                    Type::Sigma {
                        binder,
                        domain,
                        codomain,
                    },
                    false,
                ) => (binder, domain, codomain),
                _ => break,
            };
            let name = self.pick(binder, &[(codomain.as_ref(), 0)]);
            if &*name == "_" {
                break;
            }
            match groups.last_mut() {
                Some((ns, _, prev)) if **domain == prev.shifted(0, 1) => {
                    ns.push(name.clone());
                    *prev = (**domain).clone();
                }
                _ => {
                    let d = self.ty(domain, TypePrec::Quant);
                    groups.push((vec![name.clone()], d, (**domain).clone()));
                }
            }
            self.names.push(name);
            pushed += 1;
            cur = codomain;
        }
        let body = self.ty(cur, TypePrec::Quant);
        self.names.truncate(self.names.len() - pushed);
        let kw = if is_pi { "Pi" } else { "Sigma" };
        let bs: Vec<String> = groups
            .iter()
            .map(|(ns, d, _)| {
                let ns: Vec<&str> = ns.iter().map(|n| &**n).collect();
                format!("({} : {d})", ns.join(" "))
            })
            .collect();
        format!("{kw} {}, {body}", bs.join(" "))
    }

    /// Prints a family's parameter telescope followed by `type`.
    fn sig(&mut self, params: &Telescope) -> String {
        let entries = params.entries();
        // Each segment is either a run of named groups or an arrow domain.
        let mut segs: Vec<Result<Vec<(Vec<Ident>, String, Type)>, String>> = Vec::new();
        let start = self.names.len();
        for (i, (n, ty)) in entries.iter().enumerate() {
            let rest: Vec<(&Type, usize)> = entries[i + 1..]
                .iter()
                .enumerate()
                .map(|(k, (_, t))| (t, k))
                .collect();
            let name = self.pick(n, &rest);
            if &*name == "_" {
                segs.push(Err(self.ty(ty, TypePrec::Prod)));
            } else {
                let d = self.ty(ty, TypePrec::Quant);
                match segs.last_mut() {
                    Some(Ok(groups)) => match groups.last_mut() {
                        Some((ns, _, prev)) if *ty == prev.shifted(0, 1) => {
                            ns.push(name.clone());
                            *prev = ty.clone();
                        }
                        _ => groups.push((vec![name.clone()], d, ty.clone())),
                    },
                    _ => segs.push(Ok(vec![(vec![name.clone()], d, ty.clone())])),
                }
            }
            self.names.push(name);
        }
        self.names.truncate(start);
        let mut out = String::new();
        for seg in segs {
            match seg {
                Err(d) => {
                    out.push_str(&d);
                    out.push_str(" -> ");
                }
                Ok(groups) => {
                    let bs: Vec<String> = groups
                        .iter()
                        .map(|(ns, d, _)| {
                            let ns: Vec<&str> = ns.iter().map(|n| &**n).collect();
                            format!("({} : {d})", ns.join(" "))
                        })
                        .collect();
                    out.push_str(&format!("Pi {}, ", bs.join(" ")));
                }
            }
        }
        out.push_str("type");
        out
    }

    fn term(&mut self, t: &Term, prec: TermPrec) -> String {
        match t {
            Term::Var(i) => self.var(*i),
            Term::Const(c) => c.to_string(),
            Term::Lam { .. } => {
                let s = self.lambda(t);
                paren(s, prec > TermPrec::Fun)
            }
            Term::App(f, a) => {
                let head_prec = if matches!(**f, Term::Refl(_)) {
                    TermPrec::Atom
                } else {
                    TermPrec::App
                };
                let s = format!(
                    "{} {}",
                    self.term(f, head_prec),
                    self.term(a, TermPrec::Atom)
                );
                paren(s, prec > TermPrec::App)
            }
            Term::Refl(a) => {
                let s = format!("refl {}", self.term(a, TermPrec::Atom));
                paren(s, prec > TermPrec::App)
            }
            Term::Pair(a, b) => format!(
                "<{}, {}>",
                self.term(a, TermPrec::Fun),
                self.term(b, TermPrec::Fun)
            ),
            Term::SigElim {
                motive_binder,
                motive,
                branch_binders,
                branch,
                scrutinee,
            } => {
                let p = self.pick(motive_binder, &[(motive.as_ref(), 0)]);
                let m = self.with(&[p.clone()], |s| s.ty(motive, TypePrec::Quant));
                let x = self.pick(&branch_binders[0], &[(branch.as_ref(), 1)]);
                let c = self.with(&[x.clone()], |s| {
                    let y = s.pick(&branch_binders[1], &[(branch.as_ref(), 0)]);
                    let c = s.with(&[y.clone()], |s| s.term(branch, TermPrec::Fun));
                    format!("{y} => {c}")
                });
                let sc = self.term(scrutinee, TermPrec::Fun);
                let s = format!("sig_elim [{p} => {m}] ({x} {c} ; {sc})");
                paren(s, prec > TermPrec::App)
            }
            Term::J {
                motive_binders,
                motive,
                base_binder,
                base,
                left,
                right,
                path,
            } => {
                let x = self.pick(&motive_binders[0], &[(motive.as_ref(), 2)]);
                let (y, z, m) = self.with(&[x.clone()], |s| {
                    let y = s.pick(&motive_binders[1], &[(motive.as_ref(), 1)]);
                    let (z, m) = s.with(&[y.clone()], |s| {
                        let z = s.pick(&motive_binders[2], &[(motive.as_ref(), 0)]);
                        let m = s.with(&[z.clone()], |s| s.ty(motive, TypePrec::Quant));
                        (z, m)
                    });
                    (y, z, m)
                });
                let w = self.pick(base_binder, &[(base.as_ref(), 0)]);
                let d = self.with(&[w.clone()], |s| s.term(base, TermPrec::Fun));
                let l = self.term(left, TermPrec::Fun);
                let r = self.term(right, TermPrec::Fun);
                let c = self.term(path, TermPrec::Fun);
                let s = format!("J [{x} {y} {z} => {m}] ({w} => {d} ; {l}, {r}, {c})");
                paren(s, prec > TermPrec::App)
            }
        }
    }

    fn lambda(&mut self, t: &Term) -> String {
        let mut groups: Vec<(Vec<Ident>, String, Type)> = Vec::new();
        let mut cur = t;
        let mut pushed = 0;
        while let Term::Lam {
            binder,
            domain,
            body,
        } = cur
        {
            let name = self.pick(binder, &[(body.as_ref(), 0)]);
            match groups.last_mut() {
                Some((ns, _, prev)) if **domain == prev.shifted(0, 1) => {
                    ns.push(name.clone());
                    *prev = (**domain).clone();
                }
                _ => {
                    let d = self.ty(domain, TypePrec::Quant);
                    groups.push((vec![name.clone()], d, (**domain).clone()));
                }
            }
            self.names.push(name);
            pushed += 1;
            cur = body;
        }
        let body = self.term(cur, TermPrec::Fun);
        self.names.truncate(self.names.len() - pushed);
        let bs: Vec<String> = groups
            .iter()
            .map(|(ns, d, _)| {
                let ns: Vec<&str> = ns.iter().map(|n| &**n).collect();
                format!("({} : {d})", ns.join(" "))
            })
            .collect();
        format!("fun {} => {body}", bs.join(" "))
    }
}
