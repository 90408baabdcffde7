//! The line-oriented groupoid catalog format.
//!
//! ```text
//! groupoid interval
//! objects 0 1
//! arrow u : 0 -> 1
//! arrow v : 1 -> 0
//! inverse u v
//! compose id_0 = v . u
//! compose id_1 = u . v
//! ```

use std::rc::Rc;

use thiserror::Error;

use crate::groupoid::{validate_groupoid, FiniteGroupoid, GroupoidError, RawGroupoid};

pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.gpd");

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GroupoidError,
    },
}

impl CatalogError {
    /// The groupoid the error is about, when known.
    pub fn groupoid(&self) -> Option<&str> {
        match self {
            CatalogError::Syntax { .. } => None,
            CatalogError::Invalid { source, .. } => Some(match source {
                GroupoidError::Duplicate { groupoid, .. }
                | GroupoidError::UnknownObject { groupoid, .. }
                | GroupoidError::UnknownArrow { groupoid, .. }
                | GroupoidError::NotComposable { groupoid, .. }
                | GroupoidError::WrongEndpoints { groupoid, .. }
                | GroupoidError::Conflict { groupoid, .. }
                | GroupoidError::MissingComposite { groupoid, .. }
                | GroupoidError::Identity { groupoid, .. }
                | GroupoidError::Associativity { groupoid, .. }
                | GroupoidError::NoInverse { groupoid, .. }
                | GroupoidError::NotInverse { groupoid, .. } => groupoid,
            }),
        }
    }
}

fn syntax(line: usize, group: Option<&str>, message: impl Into<String>) -> CatalogError {
    let message = message.into();
    CatalogError::Syntax {
        line,
        message: match group {
            Some(g) => format!("groupoid {g}: {message}"),
            None => message,
        },
    }
}

/// Parses and validates every groupoid in the text, in order.
pub fn parse_catalog(text: &str) -> Result<Vec<Rc<FiniteGroupoid>>, CatalogError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, RawGroupoid)> = None;
    let finish = |cur: Option<(usize, RawGroupoid)>,
                  out: &mut Vec<Rc<FiniteGroupoid>>|
     -> Result<(), CatalogError> {
        if let Some((line, raw)) = cur {
            let g = validate_groupoid(&raw).map_err(|source| CatalogError::Invalid { line, source })?;
            if out.iter().any(|h: &Rc<FiniteGroupoid>| h.name() == g.name()) {
                return Err(syntax(line, None, format!("duplicate groupoid {}", g.name())));
            }
            out.push(Rc::new(g));
        }
        Ok(())
    };
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split("--").next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        if words[0] == "groupoid" {
            finish(current.take(), &mut out)?;
            let [_, name] = words[..] else {
                return Err(syntax(line, None, "expected `groupoid <name>`"));
            };
            current = Some((
                line,
                RawGroupoid {
                    name: name.to_owned(),
                    ..RawGroupoid::default()
                },
            ));
            continue;
        }
        let Some((_, raw)) = current.as_mut() else {
            return Err(syntax(line, None, "expected `groupoid <name>` first"));
        };
        let g = raw.name.clone();
        let g = Some(g.as_str());
        match words[0] {
            "objects" => raw.objects.extend(words[1..].iter().map(|s| s.to_string())),
            "arrow" => {
                let [_, n, ":", s, "->", t] = words[..] else {
                    return Err(syntax(line, g, "expected `arrow <name> : <obj> -> <obj>`"));
                };
                raw.arrows.push((n.into(), s.into(), t.into()));
            }
            "inverse" => {
                let [_, f, h] = words[..] else {
                    return Err(syntax(line, g, "expected `inverse <arrow> <arrow>`"));
                };
                raw.inverses.push((f.into(), h.into()));
            }
            "compose" => {
                let [_, w, "=", v, ".", u] = words[..] else {
                    return Err(syntax(line, g, "expected `compose <w> = <v> . <u>`"));
                };
                raw.compositions.push((w.into(), v.into(), u.into()));
            }
            other => return Err(syntax(line, g, format!("unknown directive `{other}`"))),
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

/// The catalog shipped with the crate.
pub fn default_catalog() -> Vec<Rc<FiniteGroupoid>> {
    parse_catalog(DEFAULT_CATALOG).expect("the bundled catalog is valid")
}

pub fn find<'c>(catalog: &'c [Rc<FiniteGroupoid>], name: &str) -> Option<&'c Rc<FiniteGroupoid>> {
    catalog.iter().find(|g| g.name() == name)
}
