//! Declared constants: base types, type families, postulated terms and
//! definitions.

use std::collections::HashMap;

use crate::syntax::{Ident, Telescope, Term, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    /// `const A : type`, or a family `const B : A -> type` with a closed
    /// parameter telescope.
    TypeConst { name: Ident, params: Telescope },
    /// `const a : A`, never reduced.
    TermConst { name: Ident, ty: Type },
    /// `def f : T := t`, unfolded by normalization.
    Def { name: Ident, ty: Type, body: Term },
}

impl Decl {
    pub fn name(&self) -> &Ident {
        match self {
            Decl::TypeConst { name, .. } | Decl::TermConst { name, .. } | Decl::Def { name, .. } => {
                name
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Signature {
    decls: Vec<Decl>,
    index: HashMap<Ident, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a declaration. Returns `false` (and leaves the signature
    /// unchanged) if the name is taken.
    pub fn push(&mut self, decl: Decl) -> bool {
        if self.index.contains_key(decl.name()) {
            return false;
        }
        self.index.insert(decl.name().clone(), self.decls.len());
        self.decls.push(decl);
        true
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Type of a term constant or definition.
    pub fn term_type(&self, name: &str) -> Option<&Type> {
        match self.get(name)? {
            Decl::TermConst { ty, .. } | Decl::Def { ty, .. } => Some(ty),
            Decl::TypeConst { .. } => None,
        }
    }

    pub fn definition(&self, name: &str) -> Option<&Term> {
        match self.get(name)? {
            Decl::Def { body, .. } => Some(body),
            _ => None,
        }
    }

    pub fn type_params(&self, name: &str) -> Option<&Telescope> {
        match self.get(name)? {
            Decl::TypeConst { params, .. } => Some(params),
            _ => None,
        }
    }

    pub fn add_base_type(&mut self, name: &str) -> bool {
        self.push(Decl::TypeConst {
            name: name.into(),
            params: Telescope::new(),
        })
    }

    pub fn add_term_const(&mut self, name: &str, ty: Type) -> bool {
        self.push(Decl::TermConst {
            name: name.into(),
            ty,
        })
    }

    pub fn add_def(&mut self, name: &str, ty: Type, body: Term) -> bool {
        self.push(Decl::Def {
            name: name.into(),
            ty,
            body,
        })
    }
}
