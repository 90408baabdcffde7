//! Recursive-descent parser for `.mltt` modules.
//!
//! ```text
//! decl     := "const" ident ":" sig | "def" ident [":" type] ":=" term | "check" term ":" type
//! sig      := "type" | "Pi" binders "," sig | type2 "->" sig | type
//! type     := "Pi" binders "," type | "Sigma" binders "," type | type2 ["->" type]
//! type2    := type3 ["*" type2]
//! type3    := "Id" atype aterm aterm | ident aterm* | atype
//! atype    := ident | "(" type ")"
//! term     := "fun" binders "=>" term | "refl" aterm | aterm aterm*
//! aterm    := ident | "(" term ")" | "<" term "," term ">"
//!           | "J" "[" x y z "=>" type "]" "(" x "=>" term ";" term "," term "," term ")"
//!           | "sig_elim" "[" p "=>" type "]" "(" x y "=>" term ";" term ")"
//! binders  := ("(" ident+ ":" type ")")+
//! ```

use super::lexer::{Tok, Token};
use super::{Diagnostic, Span};

pub type Name = (String, Span);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub names: Vec<Name>,
    pub ty: SType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SType {
    /// A type constant, possibly applied to arguments.
    Named(Name, Vec<STerm>),
    Pi(Vec<Binder>, Box<SType>),
    Sigma(Vec<Binder>, Box<SType>),
    Id(Box<SType>, Box<STerm>, Box<STerm>),
    Arrow(Box<SType>, Box<SType>),
    Prod(Box<SType>, Box<SType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum STerm {
    Name(Name),
    Fun(Vec<Binder>, Box<STerm>),
    App(Box<STerm>, Box<STerm>),
    Refl(Box<STerm>),
    Pair(Box<STerm>, Box<STerm>),
    J {
        motive_binders: [Name; 3],
        motive: Box<SType>,
        base_binder: Name,
        base: Box<STerm>,
        left: Box<STerm>,
        right: Box<STerm>,
        path: Box<STerm>,
    },
    SigElim {
        motive_binder: Name,
        motive: Box<SType>,
        branch_binders: [Name; 2],
        branch: Box<STerm>,
        scrutinee: Box<STerm>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    /// `const A : type` or a family `const B : A -> type`.
    ConstantType(Vec<Binder>),
    ConstantTerm(SType),
    Definition(Option<SType>, STerm),
    CheckGoal(STerm, SType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDecl {
    pub kind: DeclKind,
    /// Absent for `check` goals.
    pub name: Option<Name>,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceModule {
    pub declarations: Vec<SDecl>,
}

/// Parses a whole module. Every syntax error is reported; parsing resumes at
/// the next `const`, `def` or `check`.
pub fn parse_module(tokens: &[Token], source_len: usize) -> (SourceModule, Vec<Diagnostic>) {
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        expected: Vec::new(),
        eof: source_len,
    };
    let mut module = SourceModule::default();
    let mut diags = Vec::new();
    while !p.at_end() {
        match p.decl() {
            Ok(d) => module.declarations.push(d),
            Err(e) => {
                diags.push(e);
                p.pos += 1;
                while !p.at_end()
                    && !matches!(p.peek(), Some(Tok::Const | Tok::Def | Tok::Check))
                {
                    p.pos += 1;
                }
            }
        }
    }
    (module, diags)
}

/// Parses a single term (used by tooling and tests).
pub fn parse_term(tokens: &[Token], source_len: usize) -> Result<STerm, Diagnostic> {
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        expected: Vec::new(),
        eof: source_len,
    };
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.unexpected());
    }
    Ok(t)
}

/// Parses a single type.
pub fn parse_type(tokens: &[Token], source_len: usize) -> Result<SType, Diagnostic> {
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        expected: Vec::new(),
        eof: source_len,
    };
    let t = p.ty()?;
    if !p.at_end() {
        return Err(p.unexpected());
    }
    Ok(t)
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    expected: Vec<String>,
    eof: usize,
}

enum Sig {
    Kind(Vec<Binder>),
    Type(SType),
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => self.eof_span(),
        }
    }

    fn eof_span(&self) -> Span {
        match self.toks.last() {
            Some(t) => Span {
                offset: t.span.offset + t.span.length,
                line: t.span.line,
                column: t.span.column + t.span.length,
                length: 0,
            },
            None => Span {
                offset: self.eof,
                line: 1,
                column: 1,
                length: 0,
            },
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        self.expected.clear();
        t
    }

    fn check(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            true
        } else {
            self.expected.push(tok.to_string());
            false
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.check(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        if self.check(tok) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected())
        }
    }

    fn unexpected(&self) -> Diagnostic {
        let mut expected = self.expected.clone();
        expected.sort();
        expected.dedup();
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_owned(),
        };
        let msg = if expected.is_empty() {
            format!("unexpected {found}")
        } else {
            format!("unexpected {found}, expected one of: {}", expected.join(", "))
        };
        Diagnostic::error(msg, self.span())
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                let span = self.bump().span;
                Ok((s, span))
            }
            _ => {
                self.expected.push("identifier".into());
                Err(self.unexpected())
            }
        }
    }

    fn is_ident(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)))
    }

    // -- declarations -------------------------------------------------------

    fn decl(&mut self) -> PResult<SDecl> {
        let start = self.span();
        let (kind, name) = if self.eat(&Tok::Const) {
            let name = self.ident()?;
            self.expect(&Tok::Colon)?;
            let kind = match self.sig()? {
                Sig::Kind(params) => DeclKind::ConstantType(params),
                Sig::Type(t) => DeclKind::ConstantTerm(t),
            };
            (kind, Some(name))
        } else if self.eat(&Tok::Def) {
            let name = self.ident()?;
            let ty = if self.eat(&Tok::Colon) {
                Some(self.ty()?)
            } else {
                None
            };
            self.expect(&Tok::ColonEq)?;
            let body = self.term()?;
            (DeclKind::Definition(ty, body), Some(name))
        } else if self.eat(&Tok::Check) {
            let t = self.term()?;
            self.expect(&Tok::Colon)?;
            let ty = self.ty()?;
            (DeclKind::CheckGoal(t, ty), None)
        } else {
            return Err(self.unexpected());
        };
        let end = self
            .toks
            .get(self.pos.saturating_sub(1))
            .map_or(start, |t| t.span);
        Ok(SDecl {
            kind,
            name,
            span: Span {
                length: end.offset + end.length - start.offset,
                ..start
            },
        })
    }

    fn sig(&mut self) -> PResult<Sig> {
        if self.eat(&Tok::Type) {
            return Ok(Sig::Kind(Vec::new()));
        }
        if self.eat(&Tok::Pi) {
            let bs = self.binders()?;
            self.expect(&Tok::Comma)?;
            return Ok(match self.sig()? {
                Sig::Kind(mut ps) => {
                    let mut all = bs;
                    all.append(&mut ps);
                    Sig::Kind(all)
                }
                Sig::Type(t) => Sig::Type(SType::Pi(bs, Box::new(t))),
            });
        }
        if self.check(&Tok::Sigma) {
            return Ok(Sig::Type(self.ty()?));
        }
        let lhs = self.type2()?;
        if self.eat(&Tok::Arrow) {
            return Ok(match self.sig()? {
                Sig::Kind(mut ps) => {
                    let span = self.span();
                    let mut all = vec![Binder {
                        names: vec![("_".to_owned(), span)],
                        ty: lhs,
                    }];
                    all.append(&mut ps);
                    Sig::Kind(all)
                }
                Sig::Type(t) => Sig::Type(SType::Arrow(Box::new(lhs), Box::new(t))),
            });
        }
        Ok(Sig::Type(lhs))
    }

    // -- types --------------------------------------------------------------

    fn ty(&mut self) -> PResult<SType> {
        if self.eat(&Tok::Pi) {
            let bs = self.binders()?;
            self.expect(&Tok::Comma)?;
            return Ok(SType::Pi(bs, Box::new(self.ty()?)));
        }
        if self.eat(&Tok::Sigma) {
            let bs = self.binders()?;
            self.expect(&Tok::Comma)?;
            return Ok(SType::Sigma(bs, Box::new(self.ty()?)));
        }
        let lhs = self.type2()?;
        if self.eat(&Tok::Arrow) {
            return Ok(SType::Arrow(Box::new(lhs), Box::new(self.ty()?)));
        }
        Ok(lhs)
    }

    fn type2(&mut self) -> PResult<SType> {
        let lhs = self.type3()?;
        if self.eat(&Tok::Star) {
            return Ok(SType::Prod(Box::new(lhs), Box::new(self.type2()?)));
        }
        Ok(lhs)
    }

    fn type3(&mut self) -> PResult<SType> {
        if self.eat(&Tok::Id) {
            let a = self.atom_type()?;
            let l = self.atom_term()?;
            let r = self.atom_term()?;
            return Ok(SType::Id(Box::new(a), Box::new(l), Box::new(r)));
        }
        if self.is_ident() {
            let name = self.ident()?;
            let mut args = Vec::new();
            while self.starts_atom_term() {
                args.push(self.atom_term()?);
            }
            return Ok(SType::Named(name, args));
        }
        self.atom_type()
    }

    fn atom_type(&mut self) -> PResult<SType> {
        if self.is_ident() {
            return Ok(SType::Named(self.ident()?, Vec::new()));
        }
        if self.check(&Tok::LParen) {
            let open = self.bump().span;
            let t = self.delimited(open, |p| p.ty())?;
            return Ok(t);
        }
        self.expected.push("type".into());
        Err(self.unexpected())
    }

    /// Runs `inner` and then expects `)`. Failures at end of input are
    /// attributed to the unmatched opening parenthesis.
    fn delimited<T>(&mut self, open: Span, inner: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let res = inner(self).and_then(|t| {
            self.expect(&Tok::RParen)?;
            Ok(t)
        });
        match res {
            Err(_) if self.at_end() => Err(Diagnostic::error("unmatched `(`".to_owned(), open)),
            r => r,
        }
    }

    fn binders(&mut self) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        loop {
            if !self.check(&Tok::LParen) {
                break;
            }
            let open = self.bump().span;
            let b = self.delimited(open, |p| {
                let mut names = vec![p.ident()?];
                while p.is_ident() {
                    names.push(p.ident()?);
                }
                p.expect(&Tok::Colon)?;
                let ty = p.ty()?;
                Ok(Binder { names, ty })
            })?;
            out.push(b);
        }
        if out.is_empty() {
            return Err(self.unexpected());
        }
        Ok(out)
    }

    // -- terms --------------------------------------------------------------

    fn term(&mut self) -> PResult<STerm> {
        if self.eat(&Tok::Fun) {
            let bs = self.binders()?;
            self.expect(&Tok::FatArrow)?;
            return Ok(STerm::Fun(bs, Box::new(self.term()?)));
        }
        if self.eat(&Tok::Refl) {
            return Ok(STerm::Refl(Box::new(self.atom_term()?)));
        }
        let mut head = self.atom_term()?;
        while self.starts_atom_term() {
            let arg = self.atom_term()?;
            head = STerm::App(Box::new(head), Box::new(arg));
        }
        Ok(head)
    }

    fn starts_atom_term(&mut self) -> bool {
        let ok = matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::LParen | Tok::Lt | Tok::J | Tok::SigElim)
        );
        if !ok {
            self.expected.push("term".into());
        }
        ok
    }

    fn atom_term(&mut self) -> PResult<STerm> {
        if self.is_ident() {
            return Ok(STerm::Name(self.ident()?));
        }
        if self.check(&Tok::LParen) {
            let open = self.bump().span;
            return self.delimited(open, |p| p.term());
        }
        if self.eat(&Tok::Lt) {
            let a = self.term()?;
            self.expect(&Tok::Comma)?;
            let b = self.term()?;
            self.expect(&Tok::Gt)?;
            return Ok(STerm::Pair(Box::new(a), Box::new(b)));
        }
        if self.eat(&Tok::J) {
            self.expect(&Tok::LBracket)?;
            let x = self.ident()?;
            let y = self.ident()?;
            let z = self.ident()?;
            self.expect(&Tok::FatArrow)?;
            let motive = self.ty()?;
            self.expect(&Tok::RBracket)?;
            let open = self.expect(&Tok::LParen)?;
            return self.delimited(open, |p| {
                let bx = p.ident()?;
                p.expect(&Tok::FatArrow)?;
                let base = p.term()?;
                p.expect(&Tok::Semi)?;
                let left = p.term()?;
                p.expect(&Tok::Comma)?;
                let right = p.term()?;
                p.expect(&Tok::Comma)?;
                let path = p.term()?;
                Ok(STerm::J {
                    motive_binders: [x, y, z],
                    motive: Box::new(motive),
                    base_binder: bx,
                    base: Box::new(base),
                    left: Box::new(left),
                    right: Box::new(right),
                    path: Box::new(path),
                })
            });
        }
        if self.eat(&Tok::SigElim) {
            self.expect(&Tok::LBracket)?;
            let pb = self.ident()?;
            self.expect(&Tok::FatArrow)?;
            let motive = self.ty()?;
            self.expect(&Tok::RBracket)?;
            let open = self.expect(&Tok::LParen)?;
            return self.delimited(open, |p| {
                let x = p.ident()?;
                let y = p.ident()?;
                p.expect(&Tok::FatArrow)?;
                let branch = p.term()?;
                p.expect(&Tok::Semi)?;
                let scrutinee = p.term()?;
                Ok(STerm::SigElim {
                    motive_binder: pb,
                    motive: Box::new(motive),
                    branch_binders: [x, y],
                    branch: Box::new(branch),
                    scrutinee: Box::new(scrutinee),
                })
            });
        }
        let _ = self.peek_at(0);
        Err(self.unexpected())
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn parse(src: &str) -> (SourceModule, Vec<Diagnostic>) {
        let toks = tokenize(src).unwrap();
        parse_module(&toks, src.len())
    }

    #[test]
    fn constant_type() {
        let (m, d) = parse("const A : type");
        assert!(d.is_empty());
        assert_eq!(m.declarations.len(), 1);
        assert!(matches!(
            &m.declarations[0].kind,
            DeclKind::ConstantType(ps) if ps.is_empty()
        ));
    }

    #[test]
    fn family_constant() {
        let (m, d) = parse("const B : A -> type\nconst P : Pi (x y : A), Id A x y -> type");
        assert!(d.is_empty(), "{d:?}");
        let DeclKind::ConstantType(ps) = &m.declarations[0].kind else {
            panic!()
        };
        assert_eq!(ps.len(), 1);
        let DeclKind::ConstantType(ps) = &m.declarations[1].kind else {
            panic!()
        };
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].names.len(), 2);
    }

    #[test]
    fn inverse_definition() {
        let src = "def inv : Pi (x y : A) (p : Id A x y), Id A y x := \
                   fun (x y : A) (p : Id A x y) => J [a b q => Id A b a] (a => refl a ; x, y, p)";
        let (m, d) = parse(src);
        assert!(d.is_empty(), "{d:?}");
        assert_eq!(m.declarations.len(), 1);
        assert!(matches!(
            &m.declarations[0].kind,
            DeclKind::Definition(Some(SType::Pi(bs, _)), STerm::Fun(..)) if bs.len() == 2
        ));
    }

    #[test]
    fn unmatched_paren() {
        let src = "def bad := (";
        let (_, d) = parse(src);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.offset, 11);
        assert!(d[0].message.contains("unmatched"));
    }

    #[test]
    fn error_lists_expected_tokens() {
        let (_, d) = parse("const A type");
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("expected one of"), "{}", d[0].message);
        assert!(d[0].message.contains("`:`"));
    }

    #[test]
    fn resynchronizes_after_error() {
        let (m, d) = parse("const A : type\ndef f : A := )\nconst a : A\ncheck a : A");
        assert_eq!(d.len(), 1);
        assert_eq!(m.declarations.len(), 3);
    }

    #[test]
    fn precedence() {
        let (m, d) = parse("const f : A * A -> A -> A");
        assert!(d.is_empty());
        let DeclKind::ConstantTerm(SType::Arrow(lhs, rhs)) = &m.declarations[0].kind else {
            panic!("{:?}", m.declarations[0].kind)
        };
        assert!(matches!(lhs.as_ref(), SType::Prod(..)));
        assert!(matches!(rhs.as_ref(), SType::Arrow(..)));
    }
}
