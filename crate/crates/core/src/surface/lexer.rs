use std::fmt;

use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    // keywords
    Pi,
    Sigma,
    Id,
    Refl,
    J,
    SigElim,
    Fun,
    Type,
    Const,
    Def,
    Check,
    // punctuation
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Semi,
    Colon,
    ColonEq,
    FatArrow,
    Arrow,
    Star,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Pi => "`Pi`",
            Tok::Sigma => "`Sigma`",
            Tok::Id => "`Id`",
            Tok::Refl => "`refl`",
            Tok::J => "`J`",
            Tok::SigElim => "`sig_elim`",
            Tok::Fun => "`fun`",
            Tok::Type => "`type`",
            Tok::Const => "`const`",
            Tok::Def => "`def`",
            Tok::Check => "`check`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Colon => "`:`",
            Tok::ColonEq => "`:=`",
            Tok::FatArrow => "`=>`",
            Tok::Arrow => "`->`",
            Tok::Star => "`*`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "Pi" => Tok::Pi,
        "Sigma" => Tok::Sigma,
        "Id" => Tok::Id,
        "refl" => Tok::Refl,
        "J" => Tok::J,
        "sig_elim" => Tok::SigElim,
        "fun" => Tok::Fun,
        "type" => Tok::Type,
        "const" => Tok::Const,
        "def" => Tok::Def,
        "check" => Tok::Check,
        _ => return None,
    })
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits source text into tokens. Comments run from `--` to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let col = text[line_start..off].chars().count() + 1;
        let span = |len: usize| Span {
            offset: off,
            line,
            column: col,
            length: len,
        };
        if c == '\n' {
            line += 1;
            line_start = off + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i].1) {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |&(o, _)| o);
            let word = &text[off..end];
            let tok = keyword(word).unwrap_or_else(|| Tok::Ident(word.to_owned()));
            out.push(Token {
                tok,
                span: span(end - off),
            });
            debug_assert!(i > start);
            continue;
        }
        let (tok, len) = match (c, next) {
            (':', Some('=')) => (Tok::ColonEq, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('*', _) => (Tok::Star, 1),
            _ => {
                return Err(Diagnostic::error(
                    format!("illegal character {c:?}"),
                    span(c.len_utf8()),
                ))
            }
        };
        out.push(Token {
            tok,
            span: span(len),
        });
        i += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    fn id(s: &str) -> Tok {
        Tok::Ident(s.into())
    }

    #[test]
    fn identity_type_tokens() {
        assert_eq!(toks("Id A a b"), vec![Tok::Id, id("A"), id("a"), id("b")]);
    }

    #[test]
    fn lambda_tokens() {
        assert_eq!(
            toks("fun (x : A) => x"),
            vec![
                Tok::Fun,
                Tok::LParen,
                id("x"),
                Tok::Colon,
                id("A"),
                Tok::RParen,
                Tok::FatArrow,
                id("x")
            ]
        );
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(toks("-- note\nr"), vec![id("r")]);
    }

    #[test]
    fn illegal_character_has_span() {
        let err = tokenize("const a\n  : A $").unwrap_err();
        assert_eq!(err.span.line, 2);
        assert_eq!(err.span.column, 7);
        assert_eq!(err.span.length, 1);
        assert!(err.message.contains("illegal character"));
    }

    #[test]
    fn multi_char_punctuation() {
        assert_eq!(
            toks(":= => -> : *"),
            vec![
                Tok::ColonEq,
                Tok::FatArrow,
                Tok::Arrow,
                Tok::Colon,
                Tok::Star
            ]
        );
    }
}
